// Copyright 2026 The DCCHI Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "dcchi/tensor.hpp"

namespace dcchi {

/// Smooth seeded scene: a dim background plus six Gaussian blobs, each with
/// its own Gaussian-shaped spectral signature. Peak value is 1.
Tensor synthetic_scene(std::int64_t height, std::int64_t width, std::int64_t bands,
                       std::uint64_t seed, DType dtype = DType::f64);

Tensor constant_scene(std::int64_t height, std::int64_t width, std::int64_t bands, double value);

/// Left half uses `left` as the spectrum of every pixel, right half `right`.
Tensor two_region_scene(std::int64_t height, std::int64_t width, const std::vector<double>& left,
                        const std::vector<double>& right);

}  // namespace dcchi
