// Copyright 2026 The DCCHI Authors
// SPDX-License-Identifier: Apache-2.0

#include "dcchi/tensor.hpp"

#include <sstream>

#include "dcchi/error.hpp"
#include "node.hpp"

namespace dcchi {

std::int64_t shape_numel(const Shape& shape) {
  std::int64_t n = 1;
  for (auto e : shape) n *= e;
  return n;
}

std::string shape_str(const Shape& shape) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) os << (i ? "x" : "") << shape[i];
  os << ']';
  return os.str();
}

const char* dtype_name(DType dtype) { return dtype == DType::f32 ? "f32" : "f64"; }

namespace {

void check_shape(const Shape& shape) {
  for (auto e : shape)
    if (e <= 0) throw DimensionError("tensor extents must be positive, got " + shape_str(shape));
}

}  // namespace

Tensor Tensor::zeros(Shape shape, DType dtype) { return full(std::move(shape), 0.0, dtype); }

Tensor Tensor::full(Shape shape, double value, DType dtype) {
  check_shape(shape);
  const auto n = static_cast<std::size_t>(shape_numel(shape));
  return from_vector(std::move(shape), std::vector<double>(n, value), dtype);
}

Tensor Tensor::from_vector(Shape shape, std::vector<double> values, DType dtype) {
  check_shape(shape);
  if (static_cast<std::int64_t>(values.size()) != shape_numel(shape))
    throw DimensionError("value count " + std::to_string(values.size()) +
                         " does not match shape " + shape_str(shape));
  auto node = std::make_shared<detail::Node>();
  node->shape = std::move(shape);
  node->dtype = dtype;
  detail::round_to_dtype(values, dtype);
  node->data = std::move(values);
  return Tensor(std::move(node));
}

Tensor Tensor::scalar(double value, DType dtype) { return from_vector({}, {value}, dtype); }

namespace {
const detail::Node& checked(const std::shared_ptr<detail::Node>& n) {
  if (!n) throw StateError("operation on an undefined tensor");
  return *n;
}
}  // namespace

const Shape& Tensor::shape() const { return checked(node_).shape; }

std::int64_t Tensor::dim(int axis) const {
  const auto& s = shape();
  const int r = static_cast<int>(s.size());
  const int a = axis < 0 ? axis + r : axis;
  if (a < 0 || a >= r)
    throw DimensionError("axis " + std::to_string(axis) + " out of range for " + shape_str(s));
  return s[static_cast<std::size_t>(a)];
}

std::int64_t Tensor::numel() const { return static_cast<std::int64_t>(checked(node_).data.size()); }
DType Tensor::dtype() const { return checked(node_).dtype; }
std::span<const double> Tensor::values() const& { return checked(node_).data; }
std::vector<double> Tensor::values() const&& { return checked(node_).data; }

double Tensor::item() const {
  if (numel() != 1) throw DimensionError("item() on tensor of shape " + shape_str(shape()));
  return node_->data[0];
}

bool Tensor::requires_grad() const { return checked(node_).requires_grad; }

bool Tensor::is_leaf() const { return !checked(node_).backward && checked(node_).inputs.empty(); }

Tensor& Tensor::requires_grad_(bool on) {
  if (!is_leaf() || node_->consumed) throw StateError("requires_grad_ is only valid on leaf tensors");
  node_->requires_grad = on;
  return *this;
}

Tensor Tensor::grad() const {
  const auto& n = checked(node_);
  if (n.grad.empty()) return {};
  return from_vector(n.shape, n.grad, DType::f64);
}

void Tensor::zero_grad() { checked(node_), node_->grad.clear(); }

Tensor Tensor::detach() const {
  const auto& n = checked(node_);
  auto copy = std::make_shared<detail::Node>();
  copy->shape = n.shape;
  copy->dtype = n.dtype;
  copy->data = n.data;
  return Tensor(std::move(copy));
}

Tensor Tensor::to(DType dtype) const {
  if (dtype == this->dtype()) return *this;
  auto src = *this;
  auto values = to_vector();
  detail::round_to_dtype(values, dtype);
  return detail::make_result(shape(), std::move(values), dtype, {src}, "cast",
                             [src](const std::vector<double>& g) {
                               if (auto* gs = detail::grad_slot(src))
                                 for (std::size_t i = 0; i < g.size(); ++i) (*gs)[i] += g[i];
                             });
}

namespace detail {

void round_to_dtype(std::vector<double>& values, DType dtype) {
  if (dtype != DType::f32) return;
  for (auto& v : values) v = static_cast<double>(static_cast<float>(v));
}

}  // namespace detail

}  // namespace dcchi
