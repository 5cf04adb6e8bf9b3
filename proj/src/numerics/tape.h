// numerics/tape.h
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

#ifndef TSRNNT_NUMERICS_TAPE_H_
#define TSRNNT_NUMERICS_TAPE_H_

#include <deque>
#include <functional>
#include <span>
#include <unordered_map>
#include <vector>

#include "numerics/tensor.h"

namespace tsrnnt {

using NodeId = int32_t;

class Tape;

// Handle to a node recorded on a Tape. Cheap to copy; valid while the tape
// lives.
class Var {
 public:
  Var() = default;
  Var(Tape *tape, NodeId id) : tape_(tape), id_(id) {}

  Tape *tape() const { return tape_; }
  NodeId id() const { return id_; }
  bool Valid() const { return tape_ != nullptr; }

  const Tensor &Value() const;
  bool RequiresGrad() const;

 private:
  Tape *tape_ = nullptr;
  NodeId id_ = -1;
};

// What a backward rule sees. in_grads[i] is null when input i does not need
// a gradient; otherwise it points at a zero-initialized (or partially
// accumulated) tensor the rule must add into.
struct BackwardContext {
  const Tensor &out_value;
  const Tensor &out_grad;
  std::span<const Tensor *const> in_values;
  std::span<Tensor *const> in_grads;
};

using BackwardFn = std::function<void(const BackwardContext &)>;

class Gradients {
 public:
  // Gradient of the loss w.r.t. node `v`; zeros when `v` is unreachable.
  Tensor Of(Var v) const;
  // Null when the node received no gradient.
  const Tensor *Find(NodeId id) const;
  // Gradient w.r.t. an external parameter registered with Tape::Param;
  // null when the parameter was not used on this tape.
  const Tensor *OfParam(const Tensor &param) const;

 private:
  friend class Tape;
  const Tape *tape_ = nullptr;
  std::vector<Tensor> grads_;
};

// Records a computation as an ordered list of nodes. Every op's inputs have
// smaller ids than the op itself, so the backward pass is a single reverse
// sweep. Not thread-safe; one tape per utterance/thread.
class Tape {
 public:
  explicit Tape(bool grad_enabled = true) : grad_enabled_(grad_enabled) {}
  Tape(const Tape &) = delete;
  Tape &operator=(const Tape &) = delete;

  bool GradEnabled() const { return grad_enabled_; }

  Var Constant(Tensor value);
  // Differentiable input owned by the tape.
  Var Leaf(Tensor value);
  // Differentiable input backed by external storage (model parameters).
  // Repeated calls with the same tensor return the same node. The tensor
  // must outlive the tape and stay unmodified while the tape is in use.
  Var Param(const Tensor &param);

  // Appends an op node. `op` must be a string literal. The output is checked
  // for NaN/Inf. The backward rule is dropped when no input requires grad.
  Var Record(const char *op, Tensor value, std::vector<Var> inputs,
             BackwardFn backward);

  const Tensor &Value(NodeId id) const;
  bool RequiresGrad(NodeId id) const { return nodes_[id].requires_grad; }
  const char *OpName(NodeId id) const { return nodes_[id].op; }
  const std::vector<NodeId> &Inputs(NodeId id) const {
    return nodes_[id].inputs;
  }
  int32_t NumNodes() const { return static_cast<int32_t>(nodes_.size()); }

  // Reverse-mode sweep from a scalar node. Gradients accumulate across
  // fan-out.
  Gradients Backward(Var loss) const;

  const std::unordered_map<const Tensor *, NodeId> &ParamNodes() const {
    return param_nodes_;
  }

 private:
  struct Node {
    const char *op = "";
    Tensor value;
    const Tensor *external = nullptr;
    std::vector<NodeId> inputs;
    BackwardFn backward;
    bool requires_grad = false;
  };

  Var Push(Node node);

  bool grad_enabled_;
  std::deque<Node> nodes_;
  std::unordered_map<const Tensor *, NodeId> param_nodes_;
};

}  // namespace tsrnnt

#endif  // TSRNNT_NUMERICS_TAPE_H_
