// Copyright 2026 The DCCHI Authors
// SPDX-License-Identifier: Apache-2.0

#include <unordered_map>
#include <unordered_set>

#include "dcchi/error.hpp"
#include "dcchi/tensor.hpp"
#include "node.hpp"

namespace dcchi {

namespace {
thread_local bool t_grad_enabled = true;
thread_local std::int64_t t_macs = 0;
}  // namespace

bool grad_enabled() { return t_grad_enabled; }

NoGradGuard::NoGradGuard() : previous_(t_grad_enabled) { t_grad_enabled = false; }
NoGradGuard::~NoGradGuard() { t_grad_enabled = previous_; }

MacCounter::MacCounter() : start_(t_macs) {}
MacCounter::~MacCounter() = default;
std::int64_t MacCounter::count() const { return t_macs - start_; }

namespace detail {

void add_macs(std::int64_t n) { t_macs += n; }

Tensor make_result(Shape shape, std::vector<double> data, DType dtype,
                   const std::vector<Tensor>& inputs, const char* op,
                   BackwardFn backward) {
  auto node = std::make_shared<Node>();
  node->shape = std::move(shape);
  node->dtype = dtype;
  round_to_dtype(data, dtype);
  node->data = std::move(data);
  node->op = op;
  if (t_grad_enabled) {
    bool any = false;
    for (const auto& t : inputs) {
      any = any || NodeAccess::node(t)->requires_grad;
    }
    if (any) {
      node->requires_grad = true;
      node->backward = std::move(backward);
      for (const auto& t : inputs) node->inputs.push_back(NodeAccess::node(t));
    }
  }
  return NodeAccess::wrap(std::move(node));
}

Tensor make_result(Shape shape, std::vector<double> data, DType dtype,
                   std::initializer_list<Tensor> inputs, const char* op,
                   BackwardFn backward) {
  return make_result(std::move(shape), std::move(data), dtype, std::vector<Tensor>(inputs), op,
                     std::move(backward));
}

std::vector<double>* grad_slot(const Tensor& t) {
  const auto& n = NodeAccess::node(t);
  if (!n->requires_grad) return nullptr;
  if (n->grad.empty()) n->grad.assign(n->data.size(), 0.0);
  return &n->grad;
}

}  // namespace detail

Tape Tape::capture(const Tensor& root) {
  Tape tape;
  if (!root.defined()) return tape;
  const auto& start = detail::NodeAccess::node(root);
  std::unordered_set<const detail::Node*> visited;
  // Iterative post-order DFS: a node is emitted after all of its inputs.
  std::vector<std::pair<std::shared_ptr<detail::Node>, std::size_t>> stack;
  stack.emplace_back(start, 0);
  visited.insert(start.get());
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < node->inputs.size()) {
      auto child = node->inputs[next++];
      if (child->requires_grad && visited.insert(child.get()).second)
        stack.emplace_back(std::move(child), 0);
      continue;
    }
    tape.order_.push_back(node);
    stack.pop_back();
  }
  return tape;
}

const char* Tape::op_name(std::size_t i) const { return order_.at(i)->op; }

bool Tape::is_topological() const {
  std::unordered_map<const detail::Node*, std::size_t> pos;
  for (std::size_t i = 0; i < order_.size(); ++i) pos[order_[i].get()] = i;
  for (std::size_t i = 0; i < order_.size(); ++i)
    for (const auto& in : order_[i]->inputs) {
      auto it = pos.find(in.get());
      if (it != pos.end() && it->second >= i) return false;
    }
  return true;
}

void backward(const Tensor& loss) {
  if (!loss.defined()) throw StateError("backward on an undefined tensor");
  const auto& root = detail::NodeAccess::node(loss);
  if (root->consumed) throw StateError("backward on a graph that was already consumed");
  if (!root->requires_grad) throw StateError("backward on a value with no recorded graph (detached)");
  if (root->data.size() != 1)
    throw DimensionError("backward needs a scalar loss, got shape " + shape_str(root->shape));

  Tape tape = Tape::capture(loss);
  auto* seed = detail::grad_slot(loss);
  (*seed)[0] += 1.0;

  for (auto it = tape.order_.rbegin(); it != tape.order_.rend(); ++it) {
    auto& node = *it;
    if (!node->backward) continue;  // leaf
    if (!node->grad.empty()) node->backward(node->grad);
  }
  for (auto& node : tape.order_) {
    if (!node->backward) continue;
    node->backward = nullptr;
    node->inputs.clear();
    node->grad.clear();
    node->grad.shrink_to_fit();
    node->consumed = true;
    node->requires_grad = false;
  }
}

}  // namespace dcchi
