// Copyright 2026 The DCCHI Authors
// SPDX-License-Identifier: Apache-2.0

#include "dcchi/error.hpp"
#include "dcchi/in2set.hpp"
#include "dcchi/ops.hpp"

namespace dcchi {

WindowLayout WindowLayout::make(WindowMode mode, int window, std::int64_t height, std::int64_t width) {
  if (window < 1) throw ConfigError("window side must be positive");
  if (height % window != 0 || width % window != 0)
    throw DimensionError("feature map " + std::to_string(height) + "x" + std::to_string(width) +
                         " is not divisible by window " + std::to_string(window));
  const std::int64_t m2 = static_cast<std::int64_t>(window) * window;
  const std::int64_t cells = height * width / m2;
  WindowLayout l;
  l.mode = mode;
  l.window = window;
  l.groups = mode == WindowMode::local ? cells : m2;
  l.tokens = mode == WindowMode::local ? m2 : cells;
  return l;
}

namespace {
void check_map(const Tensor& x, std::int64_t height, std::int64_t width, int window) {
  if (x.rank() != 3 || x.dim(0) != height || x.dim(1) != width)
    throw DimensionError("partition: expected [" + std::to_string(height) + ", " + std::to_string(width) +
                         ", D], got " + shape_str(x.shape()));
  if (height % window != 0 || width % window != 0)
    throw DimensionError("partition: " + shape_str(x.shape()) + " not divisible by window " + std::to_string(window));
}
}  // namespace

Tensor partition(const Tensor& x, const WindowLayout& layout, std::int64_t height, std::int64_t width) {
  check_map(x, height, width, layout.window);
  const std::int64_t M = layout.window, D = x.dim(2);
  auto cells = ops::reshape(x, {height / M, M, width / M, M, D});
  if (layout.mode == WindowMode::local)
    return ops::reshape(ops::permute(cells, {0, 2, 1, 3, 4}), {height * width / (M * M), M * M, D});
  return ops::reshape(ops::permute(cells, {1, 3, 0, 2, 4}), {M * M, height * width / (M * M), D});
}

Tensor unpartition(const Tensor& x, const WindowLayout& layout, std::int64_t height, std::int64_t width) {
  const std::int64_t M = layout.window;
  if (x.rank() != 3 || x.dim(0) * x.dim(1) != height * width || height % M != 0 || width % M != 0)
    throw DimensionError("unpartition: " + shape_str(x.shape()) + " cannot form a " + std::to_string(height) +
                         "x" + std::to_string(width) + " map with window " + std::to_string(M));
  const std::int64_t D = x.dim(2);
  if (layout.mode == WindowMode::local) {
    auto t = ops::reshape(x, {height / M, width / M, M, M, D});
    return ops::reshape(ops::permute(t, {0, 2, 1, 3, 4}), {height, width, D});
  }
  auto t = ops::reshape(x, {M, M, height / M, width / M, D});
  return ops::reshape(ops::permute(t, {2, 0, 3, 1, 4}), {height, width, D});
}

}  // namespace dcchi
