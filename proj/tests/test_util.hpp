// Copyright 2026 The DCCHI Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "dcchi/params.hpp"
#include "dcchi/tensor.hpp"

namespace dcchi::testing {

inline Tensor random_tensor(Shape shape, std::uint64_t seed, double lo = -1.0, double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(static_cast<std::size_t>(shape_numel(shape)));
  for (auto& x : v) x = u(rng);
  return Tensor::from_vector(std::move(shape), std::move(v));
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
  return a.size() == b.size() ? m : INFINITY;
}

inline double max_abs_diff(const Tensor& a, const Tensor& b) { return max_abs_diff(a.values(), b.values()); }

inline double inner(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(std::span<const double> a) { return std::sqrt(inner(a, a)); }

/// Every weight replaced by seeded uniform noise in [-scale, scale], except
/// layer-norm gains which become 1 + noise. Used to leave the identity
/// start-up regime before gradient checks.
inline ParamStore randomized(const ParamStore& w, std::uint64_t seed, double scale) {
  ParamStore out;
  std::uint64_t k = seed;
  for (const auto& [name, t] : w.tensors()) {
    auto r = random_tensor(t.shape(), ++k * 7919, -scale, scale).to_vector();
    if (name.find(".g") + 2 == name.size())
      for (auto& v : r) v += 1.0;
    out.set(name, Tensor::from_vector(t.shape(), std::move(r)));
  }
  return out;
}

}  // namespace dcchi::testing
