// Copyright 2026 The DCCHI Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "dcchi/tensor.hpp"

namespace dcchi {

using DifferentiableFn = std::function<Tensor(const Tensor&)>;

struct GradCheckOptions {
  double step = 1e-5;
  double tolerance = 1e-4;
  /// Lower bound of the error denominator, so coordinates whose true
  /// derivative is ~0 are judged on absolute error instead.
  double scale_floor = 1e-3;
  /// Number of input coordinates to probe; <= 0 probes all of them.
  std::int64_t max_coords = 0;
  std::uint64_t seed = 0x5eed;
};

struct GradCheckReport {
  double max_rel_error = 0.0;
  std::int64_t worst_index = -1;
  double analytic_at_worst = 0.0;
  double numeric_at_worst = 0.0;
  std::int64_t coords_checked = 0;
  double tolerance = 0.0;
  bool passed = false;

  std::string summary() const;
};

/// Compares the tape gradient of <r, fn(x)> (r a fixed seeded random
/// projection) with central differences, coordinate by coordinate. The
/// input must be f64; non-finite function values throw NumericError.
GradCheckReport grad_check(const DifferentiableFn& fn, const Tensor& input,
                           const GradCheckOptions& options = {});

}  // namespace dcchi
