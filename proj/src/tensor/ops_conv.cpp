// Copyright 2026 The DCCHI Authors
// SPDX-License-Identifier: Apache-2.0

#include "dcchi/error.hpp"
#include "dcchi/ops.hpp"
#include "dcchi/parallel.hpp"
#include "node.hpp"

namespace dcchi::ops {

using detail::data_of;
using detail::grad_slot;
using detail::make_result;

namespace {

struct ConvGeometry {
  std::int64_t H, W, Cin, k, Cout, stride, pad, Ho, Wo;
};

void check_kernel(const Tensor& t, const Tensor& kernel, const Tensor& bias, const char* op) {
  const auto& ks = kernel.shape();
  if (t.rank() != 3 || ks.size() != 4 || ks[0] != ks[1] || ks[2] != t.dim(2))
    throw DimensionError(std::string(op) + ": input " + shape_str(t.shape()) +
                         " incompatible with kernel " + shape_str(ks));
  if (bias.defined() && bias.numel() != ks[3])
    throw DimensionError(std::string(op) + ": bias " + shape_str(bias.shape()) +
                         " does not match " + std::to_string(ks[3]) + " output channels");
}

}  // namespace

Tensor conv2d(const Tensor& t, const Tensor& kernel, const Tensor& bias, int stride, int padding) {
  check_kernel(t, kernel, bias, "conv2d");
  const auto& ks = kernel.shape();
  if (ks[0] % 2 == 0) throw DimensionError("conv2d: kernel size must be odd, got " + shape_str(ks));
  if (stride != 1 && stride != 2) throw DimensionError("conv2d: stride must be 1 or 2");
  ConvGeometry g{t.dim(0), t.dim(1), t.dim(2), ks[0], ks[3], stride,
                 padding < 0 ? (ks[0] - 1) / 2 : padding, 0, 0};
  const std::int64_t hn = g.H + 2 * g.pad - g.k, wn = g.W + 2 * g.pad - g.k;
  if (hn < 0 || wn < 0)
    throw DimensionError("conv2d: kernel " + shape_str(ks) + " with padding " +
                         std::to_string(g.pad) + " produces no output for " + shape_str(t.shape()));
  g.Ho = hn / stride + 1;
  g.Wo = wn / stride + 1;

  const double* X = data_of(t).data();
  const double* K = data_of(kernel).data();
  std::vector<double> out(static_cast<std::size_t>(g.Ho * g.Wo * g.Cout), 0.0);
  if (bias.defined()) {
    const auto& b = data_of(bias);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = b[i % static_cast<std::size_t>(g.Cout)];
  }
  double* Y = out.data();
  parallel_for(g.Ho, std::max<std::int64_t>(1, 65536 / std::max<std::int64_t>(1, g.Wo * g.k * g.k * g.Cin * g.Cout)),
               [&](std::int64_t r0, std::int64_t r1) {
    for (std::int64_t oy = r0; oy < r1; ++oy)
      for (std::int64_t ox = 0; ox < g.Wo; ++ox) {
        double* y = Y + (oy * g.Wo + ox) * g.Cout;
        for (std::int64_t ky = 0; ky < g.k; ++ky) {
          const std::int64_t iy = oy * g.stride + ky - g.pad;
          if (iy < 0 || iy >= g.H) continue;
          for (std::int64_t kx = 0; kx < g.k; ++kx) {
            const std::int64_t ix = ox * g.stride + kx - g.pad;
            if (ix < 0 || ix >= g.W) continue;
            const double* x = X + (iy * g.W + ix) * g.Cin;
            const double* kb = K + (ky * g.k + kx) * g.Cin * g.Cout;
            for (std::int64_t ci = 0; ci < g.Cin; ++ci) {
              const double xv = x[ci];
              const double* kr = kb + ci * g.Cout;
              for (std::int64_t co = 0; co < g.Cout; ++co) y[co] += xv * kr[co];
            }
          }
        }
      }
  });
  detail::add_macs(g.Ho * g.Wo * g.k * g.k * g.Cin * g.Cout);

  std::vector<Tensor> inputs{t, kernel};
  if (bias.defined()) inputs.push_back(bias);
  return make_result(
      {g.Ho, g.Wo, g.Cout}, std::move(out), detail::promote({t, kernel}), inputs, "conv2d",
      [t, kernel, bias, g](const std::vector<double>& grad) {
        const double* X = data_of(t).data();
        const double* K = data_of(kernel).data();
        auto* gx = grad_slot(t);
        auto* gk = grad_slot(kernel);
        if (bias.defined())
          if (auto* gb = grad_slot(bias))
            for (std::size_t i = 0; i < grad.size(); ++i) (*gb)[i % static_cast<std::size_t>(g.Cout)] += grad[i];
        if (!gx && !gk) return;
        for (std::int64_t oy = 0; oy < g.Ho; ++oy)
          for (std::int64_t ox = 0; ox < g.Wo; ++ox) {
            const double* gy = grad.data() + (oy * g.Wo + ox) * g.Cout;
            for (std::int64_t ky = 0; ky < g.k; ++ky) {
              const std::int64_t iy = oy * g.stride + ky - g.pad;
              if (iy < 0 || iy >= g.H) continue;
              for (std::int64_t kx = 0; kx < g.k; ++kx) {
                const std::int64_t ix = ox * g.stride + kx - g.pad;
                if (ix < 0 || ix >= g.W) continue;
                const std::int64_t xoff = (iy * g.W + ix) * g.Cin;
                const std::int64_t koff = (ky * g.k + kx) * g.Cin * g.Cout;
                for (std::int64_t ci = 0; ci < g.Cin; ++ci) {
                  const double* kr = K + koff + ci * g.Cout;
                  if (gx) {
                    double acc = 0.0;
                    for (std::int64_t co = 0; co < g.Cout; ++co) acc += gy[co] * kr[co];
                    (*gx)[static_cast<std::size_t>(xoff + ci)] += acc;
                  }
                  if (gk) {
                    const double xv = X[xoff + ci];
                    double* gkr = gk->data() + koff + ci * g.Cout;
                    for (std::int64_t co = 0; co < g.Cout; ++co) gkr[co] += xv * gy[co];
                  }
                }
              }
            }
          }
      });
}

Tensor conv_transpose2d(const Tensor& t, const Tensor& kernel, const Tensor& bias, int stride) {
  check_kernel(t, kernel, bias, "conv_transpose2d");
  if (stride < 1) throw DimensionError("conv_transpose2d: stride must be positive");
  const auto& ks = kernel.shape();
  ConvGeometry g{t.dim(0), t.dim(1), t.dim(2), ks[0], ks[3], stride, 0, 0, 0};
  g.Ho = (g.H - 1) * stride + g.k;
  g.Wo = (g.W - 1) * stride + g.k;

  const double* X = data_of(t).data();
  const double* K = data_of(kernel).data();
  std::vector<double> out(static_cast<std::size_t>(g.Ho * g.Wo * g.Cout), 0.0);
  if (bias.defined()) {
    const auto& b = data_of(bias);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = b[i % static_cast<std::size_t>(g.Cout)];
  }
  for (std::int64_t y = 0; y < g.H; ++y)
    for (std::int64_t x = 0; x < g.W; ++x) {
      const double* xin = X + (y * g.W + x) * g.Cin;
      for (std::int64_t ky = 0; ky < g.k; ++ky)
        for (std::int64_t kx = 0; kx < g.k; ++kx) {
          double* o = out.data() + ((y * stride + ky) * g.Wo + (x * stride + kx)) * g.Cout;
          const double* kb = K + (ky * g.k + kx) * g.Cin * g.Cout;
          for (std::int64_t ci = 0; ci < g.Cin; ++ci) {
            const double xv = xin[ci];
            const double* kr = kb + ci * g.Cout;
            for (std::int64_t co = 0; co < g.Cout; ++co) o[co] += xv * kr[co];
          }
        }
    }
  detail::add_macs(g.H * g.W * g.k * g.k * g.Cin * g.Cout);

  std::vector<Tensor> inputs{t, kernel};
  if (bias.defined()) inputs.push_back(bias);
  return make_result(
      {g.Ho, g.Wo, g.Cout}, std::move(out), detail::promote({t, kernel}), inputs,
      "conv_transpose2d", [t, kernel, bias, g](const std::vector<double>& grad) {
        const double* X = data_of(t).data();
        const double* K = data_of(kernel).data();
        auto* gx = grad_slot(t);
        auto* gk = grad_slot(kernel);
        if (bias.defined())
          if (auto* gb = grad_slot(bias))
            for (std::size_t i = 0; i < grad.size(); ++i) (*gb)[i % static_cast<std::size_t>(g.Cout)] += grad[i];
        if (!gx && !gk) return;
        for (std::int64_t y = 0; y < g.H; ++y)
          for (std::int64_t x = 0; x < g.W; ++x) {
            const std::int64_t xoff = (y * g.W + x) * g.Cin;
            for (std::int64_t ky = 0; ky < g.k; ++ky)
              for (std::int64_t kx = 0; kx < g.k; ++kx) {
                const double* go =
                    grad.data() + ((y * g.stride + ky) * g.Wo + (x * g.stride + kx)) * g.Cout;
                const std::int64_t koff = (ky * g.k + kx) * g.Cin * g.Cout;
                for (std::int64_t ci = 0; ci < g.Cin; ++ci) {
                  if (gx) {
                    const double* kr = K + koff + ci * g.Cout;
                    double acc = 0.0;
                    for (std::int64_t co = 0; co < g.Cout; ++co) acc += go[co] * kr[co];
                    (*gx)[static_cast<std::size_t>(xoff + ci)] += acc;
                  }
                  if (gk) {
                    const double xv = X[xoff + ci];
                    double* gkr = gk->data() + koff + ci * g.Cout;
                    for (std::int64_t co = 0; co < g.Cout; ++co) gkr[co] += xv * go[co];
                  }
                }
              }
          }
      });
}

}  // namespace dcchi::ops
