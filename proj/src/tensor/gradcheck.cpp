// Copyright 2026 The DCCHI Authors
// SPDX-License-Identifier: Apache-2.0

#include "dcchi/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "dcchi/error.hpp"
#include "dcchi/ops.hpp"

namespace dcchi {

std::string GradCheckReport::summary() const {
  std::ostringstream os;
  os.precision(3);
  os << (passed ? "PASS" : "FAIL") << " max_rel_error=" << std::scientific << max_rel_error
     << " tol=" << tolerance << " coords=" << coords_checked << " worst_index=" << worst_index
     << " analytic=" << analytic_at_worst << " numeric=" << numeric_at_worst;
  return os.str();
}

namespace {

std::vector<double> evaluate(const DifferentiableFn& fn, const Tensor& x) {
  NoGradGuard guard;
  auto out = fn(x).to_vector();
  for (double v : out)
    if (!std::isfinite(v)) throw NumericError("grad_check: function produced a non-finite value");
  return out;
}

}  // namespace

GradCheckReport grad_check(const DifferentiableFn& fn, const Tensor& input,
                           const GradCheckOptions& options) {
  if (input.dtype() != DType::f64) throw InvalidArgument("grad_check requires an f64 input");
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  Tensor leaf = input.detach();
  leaf.requires_grad_();
  Tensor out = fn(leaf);
  std::vector<double> proj(static_cast<std::size_t>(out.numel()));
  for (auto& p : proj) p = unit(rng);
  for (double v : out.values())
    if (!std::isfinite(v)) throw NumericError("grad_check: function produced a non-finite value");
  if (out.requires_grad()) {
    Tensor loss = ops::dot(out, Tensor::from_vector(out.shape(), proj));
    backward(loss);
  }
  const Tensor g = leaf.grad();
  const std::vector<double> analytic =
      g.defined() ? g.to_vector() : std::vector<double>(static_cast<std::size_t>(input.numel()), 0.0);

  std::vector<std::int64_t> coords(static_cast<std::size_t>(input.numel()));
  std::iota(coords.begin(), coords.end(), 0);
  if (options.max_coords > 0 && options.max_coords < input.numel()) {
    std::shuffle(coords.begin(), coords.end(), rng);
    coords.resize(static_cast<std::size_t>(options.max_coords));
    std::sort(coords.begin(), coords.end());
  }

  GradCheckReport report;
  report.tolerance = options.tolerance;
  std::vector<double> base = input.to_vector();
  for (auto idx : coords) {
    const auto i = static_cast<std::size_t>(idx);
    const double x0 = base[i];
    auto shifted = base;
    shifted[i] = x0 + options.step;
    const double xp = shifted[i];
    const auto fp = evaluate(fn, Tensor::from_vector(input.shape(), shifted));
    shifted[i] = x0 - options.step;
    const double xm = shifted[i];
    const auto fm = evaluate(fn, Tensor::from_vector(input.shape(), shifted));
    const double span = xp - xm;
    double numeric = 0.0;
    for (std::size_t j = 0; j < proj.size(); ++j) numeric += proj[j] * ((fp[j] - fm[j]) / span);
    const double a = analytic[i];
    const double err =
        std::fabs(a - numeric) / std::max({std::fabs(a), std::fabs(numeric), options.scale_floor});
    ++report.coords_checked;
    if (report.worst_index < 0 || err > report.max_rel_error) {
      report.max_rel_error = err;
      report.worst_index = idx;
      report.analytic_at_worst = a;
      report.numeric_at_worst = numeric;
    }
  }
  report.passed = report.max_rel_error <= options.tolerance;
  return report;
}

}  // namespace dcchi
