// Copyright 2026 The DCCHI Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "dcchi/error.hpp"
#include "dcchi/ops.hpp"
#include "dcchi/solver.hpp"

namespace dcchi {

CgConfig CgConfig::preset(int iters) {
  if (iters != 1 && iters != 2 && iters != 5 && iters != 10)
    throw ConfigError("CG preset must be one of 1, 2, 5, 10; got " + std::to_string(iters));
  return CgConfig{iters, 0.0};
}

CgResult cg_solve(const LinearOperator& apply_a, const Tensor& b, const Tensor& x0,
                  const CgConfig& cfg, const CgObserver& observer) {
  if (cfg.max_iters < 1) throw ConfigError("CG max_iters must be at least 1");
  if (cfg.residual_tol < 0.0) throw ConfigError("CG residual_tol must be non-negative");
  if (b.shape() != x0.shape())
    throw DimensionError("cg_solve: b " + shape_str(b.shape()) + " vs x0 " + shape_str(x0.shape()));

  CgResult res;
  Tensor x = x0;
  Tensor r = ops::sub(b, apply_a(x));
  Tensor p = r;
  Tensor rr = ops::dot(r, r);
  res.residual_norms.push_back(std::sqrt(rr.item()));
  if (!std::isfinite(rr.item())) throw NumericError("cg_solve: non-finite initial residual");
  if (rr.item() <= cfg.residual_tol * cfg.residual_tol) {
    res.x = x;
    res.converged = true;
    return res;
  }
  for (int it = 1; it <= cfg.max_iters; ++it) {
    Tensor ap = apply_a(p);
    Tensor pap = ops::dot(p, ap);
    const double curv = pap.item();
    if (!std::isfinite(curv)) throw NumericError("cg_solve: non-finite curvature at iteration " + std::to_string(it));
    if (curv <= 0.0)
      throw NumericError("cg_solve: non-positive curvature p'Ap = " + std::to_string(curv) + " at iteration " +
                         std::to_string(it) + " (operator not positive definite)");
    Tensor alpha = ops::div(rr, pap);
    x = ops::add(x, ops::mul_by(p, alpha));
    r = ops::sub(r, ops::mul_by(ap, alpha));
    Tensor rr_next = ops::dot(r, r);
    const double rn = rr_next.item();
    if (!std::isfinite(rn)) throw NumericError("cg_solve: non-finite residual at iteration " + std::to_string(it));
    res.iterations = it;
    res.residual_norms.push_back(std::sqrt(rn));
    if (observer) observer(it, x);
    if (rn == 0.0 || std::sqrt(rn) <= cfg.residual_tol) {
      res.converged = true;
      break;
    }
    if (it == cfg.max_iters) break;
    p = ops::add(r, ops::mul_by(p, ops::div(rr_next, rr)));
    rr = rr_next;
  }
  res.x = x;
  return res;
}

}  // namespace dcchi
