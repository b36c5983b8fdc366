// Copyright 2026 The DCCHI Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace dcchi {

/// Storage precision. Arithmetic always runs in double; f32 tensors have
/// their values rounded to single precision whenever they are produced.
enum class DType : std::uint8_t { f32 = 1, f64 = 2 };

using Shape = std::vector<std::int64_t>;

std::int64_t shape_numel(const Shape& shape);
std::string shape_str(const Shape& shape);
const char* dtype_name(DType dtype);

namespace detail {
struct Node;
struct NodeAccess;
}

/// Dense row-major N-D value. Copies share the underlying node; values are
/// never mutated after construction. When any input of an operation
/// requires gradients, the result records the operation so that
/// `backward` can propagate through it.
class Tensor {
 public:
  Tensor() = default;

  static Tensor zeros(Shape shape, DType dtype = DType::f64);
  static Tensor full(Shape shape, double value, DType dtype = DType::f64);
  static Tensor from_vector(Shape shape, std::vector<double> values,
                            DType dtype = DType::f64);
  static Tensor scalar(double value, DType dtype = DType::f64);

  bool defined() const noexcept { return node_ != nullptr; }
  const Shape& shape() const;
  int rank() const { return static_cast<int>(shape().size()); }
  /// Extent of axis `axis`; negative values count from the back.
  std::int64_t dim(int axis) const;
  std::int64_t numel() const;
  DType dtype() const;

  std::span<const double> values() const&;
  /// Owning copy for temporaries, so range-for over `f().values()` is safe.
  std::vector<double> values() const&&;
  std::vector<double> to_vector() const { return {values().begin(), values().end()}; }
  double at(std::int64_t flat_index) const { return values()[static_cast<std::size_t>(flat_index)]; }
  double item() const;

  bool requires_grad() const;
  /// Marks a leaf as a gradient sink. Throws StateError on non-leaves.
  Tensor& requires_grad_(bool on = true);
  bool is_leaf() const;
  /// Accumulated gradient; undefined tensor when nothing has been written.
  Tensor grad() const;
  void zero_grad();
  /// Same values, no recorded history, requires_grad = false.
  Tensor detach() const;
  Tensor to(DType dtype) const;

  const void* id() const noexcept { return node_.get(); }

 private:
  explicit Tensor(std::shared_ptr<detail::Node> node) : node_(std::move(node)) {}
  std::shared_ptr<detail::Node> node_;

  friend struct detail::NodeAccess;
};

/// Disables recording on the current thread for the lifetime of the guard.
class NoGradGuard {
 public:
  NoGradGuard();
  ~NoGradGuard();
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;

 private:
  bool previous_;
};

bool grad_enabled();

/// Topologically ordered record of the operations that produced a value.
class Tape {
 public:
  /// Collects every recorded node reachable from `root`, inputs first.
  static Tape capture(const Tensor& root);

  std::size_t size() const { return order_.size(); }
  const char* op_name(std::size_t i) const;
  /// True when every node appears after all of its recorded inputs.
  bool is_topological() const;

 private:
  std::vector<std::shared_ptr<detail::Node>> order_;
  friend void backward(const Tensor& loss);
};

/// Reverse-mode pass from a scalar. Populates `grad()` on every leaf with
/// requires_grad reachable from `loss`, then releases the recorded graph.
/// A second call on the same loss, or a call on a value without recorded
/// history, throws StateError.
void backward(const Tensor& loss);

/// Thread-local multiply-accumulate counter fed by matmul and convolutions.
class MacCounter {
 public:
  MacCounter();
  ~MacCounter();
  MacCounter(const MacCounter&) = delete;
  MacCounter& operator=(const MacCounter&) = delete;
  std::int64_t count() const;

 private:
  std::int64_t start_;
};

namespace detail {
void add_macs(std::int64_t n);
}

}  // namespace dcchi
