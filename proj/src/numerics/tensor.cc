// numerics/tensor.cc
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

#include "numerics/tensor.h"

#include <cmath>
#include <sstream>

#include "base/error.h"

namespace tsrnnt {

namespace {

int64_t CountElements(const std::vector<int32_t> &shape) {
  int64_t n = 1;
  for (int32_t d : shape) {
    if (d < 0) {
      TSRNNT_ERR_CODE(ErrorCode::kShape)
          << "negative dimension in shape " << tsrnnt::ShapeString(shape);
    }
    n *= d;
  }
  return n;
}

}  // namespace

std::string ShapeString(const std::vector<int32_t> &shape) {
  std::ostringstream os;
  os << '[';
  for (size_t i = 0; i < shape.size(); ++i) {
    if (i) os << 'x';
    os << shape[i];
  }
  os << ']';
  return os.str();
}

Tensor::Tensor(std::vector<int32_t> shape, float value)
    : shape_(std::move(shape)) {
  data_.assign(CountElements(shape_), value);
}

Tensor::Tensor(std::vector<int32_t> shape, std::vector<float> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (CountElements(shape_) != static_cast<int64_t>(data_.size())) {
    TSRNNT_ERR_CODE(ErrorCode::kShape)
        << "data length " << data_.size() << " does not match shape "
        << tsrnnt::ShapeString(shape_);
  }
}

Tensor Tensor::RandomNormal(std::vector<int32_t> shape, float stddev,
                            Rng *rng) {
  Tensor t(std::move(shape));
  for (float &v : t.data_) v = static_cast<float>(rng->Normal() * stddev);
  return t;
}

Tensor Tensor::RandomUniform(std::vector<int32_t> shape, float lo, float hi,
                             Rng *rng) {
  Tensor t(std::move(shape));
  for (float &v : t.data_) v = static_cast<float>(rng->Uniform(lo, hi));
  return t;
}

int32_t Tensor::NumRows() const {
  if (shape_.size() != 2) {
    TSRNNT_ERR_CODE(ErrorCode::kShape)
        << "expected a matrix, got shape " << tsrnnt::ShapeString(shape_);
  }
  return shape_[0];
}

int32_t Tensor::NumCols() const {
  if (shape_.size() != 2) {
    TSRNNT_ERR_CODE(ErrorCode::kShape)
        << "expected a matrix, got shape " << tsrnnt::ShapeString(shape_);
  }
  return shape_[1];
}

bool Tensor::AllFinite() const {
  for (float v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

void Tensor::CheckFinite(std::string_view what) const {
  for (size_t i = 0; i < data_.size(); ++i) {
    if (!std::isfinite(data_[i])) {
      TSRNNT_ERR_CODE(ErrorCode::kNonFinite)
          << "non-finite value " << data_[i] << " at flat index " << i
          << " in output of " << what << " (shape " << tsrnnt::ShapeString(shape_)
          << ")";
    }
  }
}

void Tensor::Fill(float value) {
  for (float &v : data_) v = value;
}

void Tensor::AddScaled(const Tensor &other, float scale) {
  if (!SameShape(other)) {
    TSRNNT_ERR_CODE(ErrorCode::kShape)
        << "AddScaled: " << tsrnnt::ShapeString(shape_) << " vs "
        << tsrnnt::ShapeString(other.shape_);
  }
  const float *src = other.data_.data();
  float *dst = data_.data();
  int64_t n = NumElements();
  for (int64_t i = 0; i < n; ++i) dst[i] += scale * src[i];
}

std::string Tensor::ShapeString() const { return tsrnnt::ShapeString(shape_); }

float MaxAbsDiff(const Tensor &a, const Tensor &b) {
  if (!a.SameShape(b)) {
    TSRNNT_ERR_CODE(ErrorCode::kShape)
        << "MaxAbsDiff: " << a.ShapeString() << " vs " << b.ShapeString();
  }
  float m = 0.0f;
  for (int64_t i = 0; i < a.NumElements(); ++i) {
    m = std::max(m, std::fabs(a[i] - b[i]));
  }
  return m;
}

}  // namespace tsrnnt
