// numerics/tape.cc
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

#include "numerics/tape.h"

#include "base/error.h"

namespace tsrnnt {

const Tensor &Var::Value() const { return tape_->Value(id_); }

bool Var::RequiresGrad() const { return tape_->RequiresGrad(id_); }

Tensor Gradients::Of(Var v) const {
  const Tensor *g = Find(v.id());
  if (g) return *g;
  return Tensor(tape_->Value(v.id()).Shape());
}

const Tensor *Gradients::Find(NodeId id) const {
  if (id < 0 || id >= static_cast<NodeId>(grads_.size())) return nullptr;
  return grads_[id].Empty() ? nullptr : &grads_[id];
}

const Tensor *Gradients::OfParam(const Tensor &param) const {
  auto it = tape_->ParamNodes().find(&param);
  if (it == tape_->ParamNodes().end()) return nullptr;
  return Find(it->second);
}

Var Tape::Push(Node node) {
  nodes_.push_back(std::move(node));
  return Var(this, static_cast<NodeId>(nodes_.size() - 1));
}

Var Tape::Constant(Tensor value) {
  Node n;
  n.op = "constant";
  n.value = std::move(value);
  return Push(std::move(n));
}

Var Tape::Leaf(Tensor value) {
  Node n;
  n.op = "leaf";
  n.value = std::move(value);
  n.requires_grad = grad_enabled_;
  return Push(std::move(n));
}

Var Tape::Param(const Tensor &param) {
  auto it = param_nodes_.find(&param);
  if (it != param_nodes_.end()) return Var(this, it->second);
  Node n;
  n.op = "param";
  n.external = &param;
  n.requires_grad = grad_enabled_;
  Var v = Push(std::move(n));
  param_nodes_.emplace(&param, v.id());
  return v;
}

Var Tape::Record(const char *op, Tensor value, std::vector<Var> inputs,
                 BackwardFn backward) {
  value.CheckFinite(op);
  Node n;
  n.op = op;
  n.value = std::move(value);
  n.inputs.reserve(inputs.size());
  bool any_grad = false;
  for (const Var &v : inputs) {
    if (v.tape() != this) {
      TSRNNT_ERR << "op " << op << " mixes variables from different tapes";
    }
    n.inputs.push_back(v.id());
    any_grad = any_grad || nodes_[v.id()].requires_grad;
  }
  if (grad_enabled_ && any_grad) {
    n.requires_grad = true;
    n.backward = std::move(backward);
  }
  return Push(std::move(n));
}

const Tensor &Tape::Value(NodeId id) const {
  const Node &n = nodes_[id];
  return n.external ? *n.external : n.value;
}

Gradients Tape::Backward(Var loss) const {
  if (loss.tape() != this) TSRNNT_ERR << "loss belongs to another tape";
  const Tensor &loss_value = Value(loss.id());
  if (loss_value.NumElements() != 1) {
    TSRNNT_ERR_CODE(ErrorCode::kShape)
        << "backward needs a scalar loss, got shape "
        << loss_value.ShapeString();
  }
  Gradients out;
  out.tape_ = this;
  out.grads_.resize(loss.id() + 1);
  out.grads_[loss.id()] = Tensor(loss_value.Shape(), 1.0f);

  std::vector<const Tensor *> in_values;
  std::vector<Tensor *> in_grads;
  for (NodeId id = loss.id(); id >= 0; --id) {
    const Node &node = nodes_[id];
    if (!node.backward || out.grads_[id].Empty()) continue;
    in_values.clear();
    in_grads.clear();
    for (NodeId in : node.inputs) {
      in_values.push_back(&Value(in));
      if (nodes_[in].requires_grad) {
        if (out.grads_[in].Empty()) out.grads_[in] = Tensor(Value(in).Shape());
        in_grads.push_back(&out.grads_[in]);
      } else {
        in_grads.push_back(nullptr);
      }
    }
    BackwardContext ctx{Value(id), out.grads_[id], in_values, in_grads};
    node.backward(ctx);
  }
  return out;
}

}  // namespace tsrnnt
