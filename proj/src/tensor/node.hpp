// Copyright 2026 The DCCHI Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <initializer_list>
#include <memory>
#include <vector>

#include "dcchi/tensor.hpp"

namespace dcchi::detail {

using BackwardFn = std::function<void(const std::vector<double>& grad_out)>;

struct Node {
  Shape shape;
  DType dtype = DType::f64;
  std::vector<double> data;
  std::vector<double> grad;
  bool requires_grad = false;
  bool consumed = false;
  const char* op = "leaf";
  std::vector<std::shared_ptr<Node>> inputs;
  BackwardFn backward;
};

struct NodeAccess {
  static const std::shared_ptr<Node>& node(const Tensor& t) { return t.node_; }
  static Tensor wrap(std::shared_ptr<Node> n) { return Tensor(std::move(n)); }
};

inline DType promote(std::initializer_list<Tensor> inputs) {
  for (const auto& t : inputs)
    if (t.dtype() == DType::f64) return DType::f64;
  return DType::f32;
}

void round_to_dtype(std::vector<double>& values, DType dtype);

/// Builds an op result. The backward closure is kept only when recording is
/// enabled and some input requires gradients.
Tensor make_result(Shape shape, std::vector<double> data, DType dtype,
                   std::initializer_list<Tensor> inputs, const char* op,
                   BackwardFn backward);
Tensor make_result(Shape shape, std::vector<double> data, DType dtype,
                   const std::vector<Tensor>& inputs, const char* op,
                   BackwardFn backward);

/// Gradient accumulator of `t`, zero-filled on first use; nullptr when `t`
/// does not require gradients.
std::vector<double>* grad_slot(const Tensor& t);

inline const std::vector<double>& data_of(const Tensor& t) {
  return NodeAccess::node(t)->data;
}

}  // namespace dcchi::detail
