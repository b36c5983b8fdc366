// Copyright 2026 The DCCHI Authors
// SPDX-License-Identifier: Apache-2.0

#include "dcchi/scenes.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "dcchi/error.hpp"

namespace dcchi {

namespace {
void check_extents(std::int64_t h, std::int64_t w, std::int64_t c) {
  if (h <= 0 || w <= 0 || c <= 0)
    throw DimensionError("scene extents must be positive, got " + shape_str({h, w, c}));
}
}  // namespace

Tensor synthetic_scene(std::int64_t height, std::int64_t width, std::int64_t bands,
                       std::uint64_t seed, DType dtype) {
  check_extents(height, width, bands);
  constexpr int kBlobs = 6;
  constexpr double kBackground = 0.05;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double side = static_cast<double>(std::min(height, width));

  std::vector<double> v(static_cast<std::size_t>(height * width * bands), kBackground);
  std::vector<double> spectrum(static_cast<std::size_t>(bands));
  for (int b = 0; b < kBlobs; ++b) {
    const double cy = unit(rng) * static_cast<double>(height - 1);
    const double cx = unit(rng) * static_cast<double>(width - 1);
    const double radius = side / 8.0 + unit(rng) * (side / 3.0 - side / 8.0);
    const double amplitude = 0.3 + 0.7 * unit(rng);
    const double centre = unit(rng);
    const double spread = 0.15 + 0.35 * unit(rng);
    for (std::int64_t c = 0; c < bands; ++c) {
      const double t = bands == 1 ? 0.5 : static_cast<double>(c) / static_cast<double>(bands - 1);
      spectrum[static_cast<std::size_t>(c)] = std::exp(-0.5 * (t - centre) * (t - centre) / (spread * spread));
    }
    for (std::int64_t h = 0; h < height; ++h)
      for (std::int64_t w = 0; w < width; ++w) {
        const double dy = static_cast<double>(h) - cy, dx = static_cast<double>(w) - cx;
        const double s = amplitude * std::exp(-0.5 * (dy * dy + dx * dx) / (radius * radius));
        double* px = v.data() + (h * width + w) * bands;
        for (std::int64_t c = 0; c < bands; ++c) px[c] += s * spectrum[static_cast<std::size_t>(c)];
      }
  }
  const double peak = *std::max_element(v.begin(), v.end());
  for (auto& x : v) x /= peak;
  return Tensor::from_vector({height, width, bands}, std::move(v), dtype);
}

Tensor constant_scene(std::int64_t height, std::int64_t width, std::int64_t bands, double value) {
  check_extents(height, width, bands);
  return Tensor::full({height, width, bands}, value);
}

Tensor two_region_scene(std::int64_t height, std::int64_t width, const std::vector<double>& left,
                        const std::vector<double>& right) {
  if (left.size() != right.size() || left.empty())
    throw DimensionError("region spectra must be non-empty and of equal length");
  const auto bands = static_cast<std::int64_t>(left.size());
  check_extents(height, width, bands);
  std::vector<double> v;
  v.reserve(static_cast<std::size_t>(height * width * bands));
  for (std::int64_t h = 0; h < height; ++h)
    for (std::int64_t w = 0; w < width; ++w) {
      const auto& s = w < width / 2 ? left : right;
      v.insert(v.end(), s.begin(), s.end());
    }
  return Tensor::from_vector({height, width, bands}, std::move(v));
}

}  // namespace dcchi
