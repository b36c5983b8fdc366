// Copyright 2026 The DCCHI Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <vector>

#include "dcchi/sensing.hpp"
#include "dcchi/tensor.hpp"

namespace dcchi {

struct CgConfig {
  int max_iters = 5;
  double residual_tol = 0.0;

  /// The CG-1 / CG-2 / CG-5 / CG-10 presets. Other counts throw ConfigError.
  static CgConfig preset(int iters);
};

struct CgResult {
  Tensor x;
  int iterations = 0;
  /// ||b - A x|| at the start and after every iteration.
  std::vector<double> residual_norms;
  bool converged = false;
};

using LinearOperator = std::function<Tensor(const Tensor&)>;
/// Called after each iteration with the iteration number (1-based) and iterate.
using CgObserver = std::function<void(int, const Tensor&)>;

/// Conjugate gradient for A x = b with A symmetric positive definite.
/// Every step is recorded on the tape, so gradients flow through the
/// truncated iteration exactly. Stops early once ||r|| <= residual_tol.
/// A non-positive curvature p'Ap or a non-finite iterate throws NumericError.
CgResult cg_solve(const LinearOperator& apply_a, const Tensor& b, const Tensor& x0,
                  const CgConfig& cfg, const CgObserver& observer = {});

/// ||y - Phi x||^2 + mu ||z - x||^2.
double data_objective(const Tensor& x, const MeasurementPair& y, const Tensor& z, double mu,
                      const SensingSystem& sys);

/// CG solve of (Phi'Phi + mu I) x = Phi'y + mu z, warm-started at z.
/// `mu` is a single-value tensor so that it can carry gradients.
CgResult data_step(const MeasurementPair& y, const Tensor& z, const Tensor& mu,
                   const SensingSystem& sys, const CgConfig& cfg);
CgResult data_step(const MeasurementPair& y, const Tensor& z, double mu, const SensingSystem& sys,
                   const CgConfig& cfg);

}  // namespace dcchi
