// numerics/tensor.h
//
// Copyright 2026  The TS-RNNT Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef TSRNNT_NUMERICS_TENSOR_H_
#define TSRNNT_NUMERICS_TENSOR_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "numerics/rng.h"

namespace tsrnnt {

// Dense row-major 32-bit tensor. Most of the code base works with rank-2
// tensors (matrices); scalars are shape {1}.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<int32_t> shape, float value = 0.0f);
  Tensor(std::vector<int32_t> shape, std::vector<float> data);

  static Tensor Scalar(float value) { return Tensor({1}, value); }
  static Tensor Matrix(int32_t rows, int32_t cols, float value = 0.0f) {
    return Tensor({rows, cols}, value);
  }
  // Entries drawn from N(0, stddev^2).
  static Tensor RandomNormal(std::vector<int32_t> shape, float stddev,
                             Rng *rng);
  static Tensor RandomUniform(std::vector<int32_t> shape, float lo, float hi,
                              Rng *rng);

  const std::vector<int32_t> &Shape() const { return shape_; }
  int32_t Rank() const { return static_cast<int32_t>(shape_.size()); }
  int32_t Dim(int32_t axis) const { return shape_.at(axis); }
  int64_t NumElements() const { return static_cast<int64_t>(data_.size()); }
  bool Empty() const { return shape_.empty(); }

  // Rank-2 accessors.
  int32_t NumRows() const;
  int32_t NumCols() const;

  float *Data() { return data_.data(); }
  const float *Data() const { return data_.data(); }
  std::span<float> Values() { return data_; }
  std::span<const float> Values() const { return data_; }
  const std::vector<float> &Vector() const { return data_; }

  std::span<float> Row(int32_t r) {
    int32_t c = NumCols();
    return {data_.data() + static_cast<int64_t>(r) * c,
            static_cast<size_t>(c)};
  }
  std::span<const float> Row(int32_t r) const {
    int32_t c = NumCols();
    return {data_.data() + static_cast<int64_t>(r) * c,
            static_cast<size_t>(c)};
  }

  float &operator()(int32_t r, int32_t c) {
    return data_[static_cast<int64_t>(r) * shape_[1] + c];
  }
  float operator()(int32_t r, int32_t c) const {
    return data_[static_cast<int64_t>(r) * shape_[1] + c];
  }
  float &operator[](int64_t i) { return data_[i]; }
  float operator[](int64_t i) const { return data_[i]; }

  bool RequiresGrad() const { return requires_grad_; }
  void SetRequiresGrad(bool flag) { requires_grad_ = flag; }

  bool SameShape(const Tensor &other) const { return shape_ == other.shape_; }
  bool AllFinite() const;
  // Throws ErrorCode::kNonFinite naming `what` if any entry is NaN or Inf.
  void CheckFinite(std::string_view what) const;

  void Fill(float value);
  // this += scale * other; shapes must match.
  void AddScaled(const Tensor &other, float scale = 1.0f);

  std::string ShapeString() const;

  friend bool operator==(const Tensor &a, const Tensor &b) {
    return a.shape_ == b.shape_ && a.data_ == b.data_;
  }

 private:
  std::vector<int32_t> shape_;
  std::vector<float> data_;
  bool requires_grad_ = false;
};

std::string ShapeString(const std::vector<int32_t> &shape);

// Largest absolute elementwise difference; shapes must match.
float MaxAbsDiff(const Tensor &a, const Tensor &b);

}  // namespace tsrnnt

#endif  // TSRNNT_NUMERICS_TENSOR_H_
