// Copyright 2026 The DCCHI Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>

#include "dcchi/error.hpp"
#include "dcchi/ops.hpp"
#include "node.hpp"

namespace dcchi::ops {

using detail::data_of;
using detail::grad_slot;
using detail::make_result;

Tensor softmax_lastdim(const Tensor& t) {
  if (t.rank() == 0) throw DimensionError("softmax_lastdim on a scalar");
  const auto d = static_cast<std::size_t>(t.dim(-1));
  const auto& x = data_of(t);
  const std::size_t rows = x.size() / d;
  std::vector<double> y(x.size());
  for (std::size_t r = 0; r < rows; ++r) {
    const double* xr = x.data() + r * d;
    double* yr = y.data() + r * d;
    double m = xr[0];
    for (std::size_t j = 0; j < d; ++j) {
      if (std::isnan(xr[j])) throw NumericError("softmax_lastdim: NaN input");
      m = std::max(m, xr[j]);
    }
    double z = 0.0;
    for (std::size_t j = 0; j < d; ++j) z += (yr[j] = std::exp(xr[j] - m));
    for (std::size_t j = 0; j < d; ++j) yr[j] /= z;
  }
  auto saved = std::make_shared<std::vector<double>>(y);
  return make_result(t.shape(), std::move(y), t.dtype(), {t}, "softmax_lastdim",
                     [t, saved, d, rows](const std::vector<double>& g) {
                       auto* gt = grad_slot(t);
                       if (!gt) return;
                       const auto& y = *saved;
                       for (std::size_t r = 0; r < rows; ++r) {
                         double s = 0.0;
                         for (std::size_t j = 0; j < d; ++j) s += g[r * d + j] * y[r * d + j];
                         for (std::size_t j = 0; j < d; ++j)
                           (*gt)[r * d + j] += y[r * d + j] * (g[r * d + j] - s);
                       }
                     });
}

Tensor layer_norm(const Tensor& t, const Tensor& gain, const Tensor& bias) {
  if (t.rank() == 0) throw DimensionError("layer_norm on a scalar");
  const auto d = static_cast<std::size_t>(t.dim(-1));
  if (gain.numel() != static_cast<std::int64_t>(d) || bias.numel() != static_cast<std::int64_t>(d))
    throw DimensionError("layer_norm: gain/bias " + shape_str(gain.shape()) + "/" +
                         shape_str(bias.shape()) + " do not match last extent of " +
                         shape_str(t.shape()));
  const auto& x = data_of(t);
  const auto& gm = data_of(gain);
  const auto& bt = data_of(bias);
  const std::size_t rows = x.size() / d;
  auto xhat = std::make_shared<std::vector<double>>(x.size());
  auto inv_std = std::make_shared<std::vector<double>>(rows);
  std::vector<double> y(x.size());
  for (std::size_t r = 0; r < rows; ++r) {
    const double* xr = x.data() + r * d;
    double mu = 0.0;
    for (std::size_t j = 0; j < d; ++j) mu += xr[j];
    mu /= static_cast<double>(d);
    double var = 0.0;
    for (std::size_t j = 0; j < d; ++j) var += (xr[j] - mu) * (xr[j] - mu);
    var /= static_cast<double>(d);
    const double is = 1.0 / std::sqrt(var + kLayerNormEps);
    (*inv_std)[r] = is;
    for (std::size_t j = 0; j < d; ++j) {
      const double h = (xr[j] - mu) * is;
      (*xhat)[r * d + j] = h;
      y[r * d + j] = h * gm[j] + bt[j];
    }
  }
  return make_result(t.shape(), std::move(y), detail::promote({t, gain, bias}), {t, gain, bias},
                     "layer_norm",
                     [t, gain, bias, xhat, inv_std, d, rows](const std::vector<double>& g) {
                       const auto& gm = data_of(gain);
                       const auto& h = *xhat;
                       if (auto* gg = grad_slot(gain))
                         for (std::size_t i = 0; i < g.size(); ++i) (*gg)[i % d] += g[i] * h[i];
                       if (auto* gb = grad_slot(bias))
                         for (std::size_t i = 0; i < g.size(); ++i) (*gb)[i % d] += g[i];
                       auto* gt = grad_slot(t);
                       if (!gt) return;
                       const double inv_d = 1.0 / static_cast<double>(d);
                       for (std::size_t r = 0; r < rows; ++r) {
                         double m1 = 0.0, m2 = 0.0;
                         for (std::size_t j = 0; j < d; ++j) {
                           const double gh = g[r * d + j] * gm[j];
                           m1 += gh;
                           m2 += gh * h[r * d + j];
                         }
                         m1 *= inv_d;
                         m2 *= inv_d;
                         for (std::size_t j = 0; j < d; ++j) {
                           const double gh = g[r * d + j] * gm[j];
                           (*gt)[r * d + j] += (*inv_std)[r] * (gh - m1 - h[r * d + j] * m2);
                         }
                       }
                     });
}

Tensor cosine_lastdim(const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape() || a.rank() == 0)
    throw DimensionError("cosine_lastdim: shapes " + shape_str(a.shape()) + " and " +
                         shape_str(b.shape()) + " differ");
  const auto d = static_cast<std::size_t>(a.dim(-1));
  const auto& x = data_of(a);
  const auto& y = data_of(b);
  const std::size_t rows = x.size() / d;
  auto na = std::make_shared<std::vector<double>>(rows);
  auto nb = std::make_shared<std::vector<double>>(rows);
  auto cs = std::make_shared<std::vector<double>>(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    double xy = 0.0, xx = 0.0, yy = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      xy += x[r * d + j] * y[r * d + j];
      xx += x[r * d + j] * x[r * d + j];
      yy += y[r * d + j] * y[r * d + j];
    }
    (*na)[r] = std::max(std::sqrt(xx), kCosineEps);
    (*nb)[r] = std::max(std::sqrt(yy), kCosineEps);
    (*cs)[r] = std::clamp(xy / ((*na)[r] * (*nb)[r]), -1.0, 1.0);
  }
  Shape shape = a.shape();
  shape.back() = 1;
  return make_result(std::move(shape), *cs, detail::promote({a, b}), {a, b}, "cosine_lastdim",
                     [a, b, na, nb, cs, d, rows](const std::vector<double>& g) {
                       const auto& x = data_of(a);
                       const auto& y = data_of(b);
                       auto* ga = grad_slot(a);
                       auto* gb = grad_slot(b);
                       for (std::size_t r = 0; r < rows; ++r) {
                         const double A = (*na)[r], B = (*nb)[r], c = (*cs)[r];
                         const bool ca = A > kCosineEps, cb = B > kCosineEps;
                         for (std::size_t j = 0; j < d; ++j) {
                           const std::size_t i = r * d + j;
                           if (ga) (*ga)[i] += g[r] * (y[i] / (A * B) - (ca ? c * x[i] / (A * A) : 0.0));
                           if (gb) (*gb)[i] += g[r] * (x[i] / (A * B) - (cb ? c * y[i] / (B * B) : 0.0));
                         }
                       }
                     });
}

}  // namespace dcchi::ops
