// Copyright 2026 The DCCHI Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "dcchi/error.hpp"
#include "dcchi/ops.hpp"
#include "dcchi/solver.hpp"

namespace dcchi {

double data_objective(const Tensor& x, const MeasurementPair& y, const Tensor& z, double mu,
                      const SensingSystem& sys) {
  NoGradGuard guard;
  auto stacked = y.stacked();
  auto ax = phi_apply(x, sys);
  double fit = 0.0, prox = 0.0;
  for (std::int64_t i = 0; i < ax.numel(); ++i) {
    const double e = stacked.at(i) - ax.at(i);
    fit += e * e;
  }
  for (std::int64_t i = 0; i < x.numel(); ++i) {
    const double e = z.at(i) - x.at(i);
    prox += e * e;
  }
  return fit + mu * prox;
}

CgResult data_step(const MeasurementPair& y, const Tensor& z, const Tensor& mu,
                   const SensingSystem& sys, const CgConfig& cfg) {
  if (mu.numel() != 1) throw DimensionError("data_step: mu must hold a single value");
  if (!std::isfinite(mu.item())) throw NumericError("data_step: non-finite penalty mu");
  if (!(mu.item() > 0.0)) throw InvalidArgument("data_step: mu must be positive, got " + std::to_string(mu.item()));
  validate_measurements(y, sys);
  if (z.shape() != sys.cube_shape())
    throw DimensionError("data_step: z " + shape_str(z.shape()) + " vs scene " + shape_str(sys.cube_shape()));
  Tensor rhs = ops::add(phi_adjoint(y.stacked(), sys), ops::mul_by(z, mu));
  auto apply_a = [&](const Tensor& v) { return ops::add(phi_normal(v, sys), ops::mul_by(v, mu)); };
  return cg_solve(apply_a, rhs, z, cfg);
}

CgResult data_step(const MeasurementPair& y, const Tensor& z, double mu, const SensingSystem& sys,
                   const CgConfig& cfg) {
  return data_step(y, z, Tensor::scalar(mu), sys, cfg);
}

}  // namespace dcchi
