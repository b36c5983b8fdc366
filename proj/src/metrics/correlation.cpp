// Copyright 2026 The DCCHI Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>

#include "dcchi/error.hpp"
#include "dcchi/metrics.hpp"

namespace dcchi {

const char* kernel_name(SimilarityKernel k) { return k == SimilarityKernel::gaussian ? "gaussian" : "cosine"; }

SimilarityKernel parse_kernel(const std::string& s) {
  if (s == "gaussian") return SimilarityKernel::gaussian;
  if (s == "cosine") return SimilarityKernel::cosine;
  throw ConfigError("unknown similarity kernel '" + s + "' (expected gaussian or cosine)");
}

Tensor spectral_descriptors(const Tensor& cube) {
  if (cube.rank() != 3) throw DimensionError("spectral_descriptors expects [H, W, C], got " + shape_str(cube.shape()));
  return cube.detach();
}

Tensor patch_descriptors(const Tensor& image, int patch) {
  if (image.rank() != 2) throw DimensionError("patch_descriptors expects [H, W], got " + shape_str(image.shape()));
  if (patch < 1 || patch % 2 == 0) throw ConfigError("PAN patch size must be odd and positive");
  const auto H = image.dim(0), W = image.dim(1);
  const int r = patch / 2;
  const auto v = image.values();
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(H * W * patch * patch));
  for (std::int64_t h = 0; h < H; ++h)
    for (std::int64_t w = 0; w < W; ++w)
      for (int dy = -r; dy <= r; ++dy)
        for (int dx = -r; dx <= r; ++dx) {
          const auto y = std::clamp<std::int64_t>(h + dy, 0, H - 1), x = std::clamp<std::int64_t>(w + dx, 0, W - 1);
          out.push_back(v[static_cast<std::size_t>(y * W + x)]);
        }
  return Tensor::from_vector({H, W, static_cast<std::int64_t>(patch) * patch}, std::move(out));
}

Tensor correlation_map(const Tensor& desc, const CorrelationOptions& o) {
  if (desc.rank() != 3) throw DimensionError("correlation_map expects [H, W, P] descriptors");
  const auto H = desc.dim(0), W = desc.dim(1), P = desc.dim(2);
  const std::int64_t M = o.window;
  if (M < 1 || H % M != 0 || W % M != 0)
    throw DimensionError("correlation_map: " + shape_str(desc.shape()) + " not divisible by window " + std::to_string(M));
  if (o.kernel == SimilarityKernel::gaussian && !(o.bandwidth > 0.0)) throw ConfigError("bandwidth must be positive");
  const auto N = M * M, B = (H / M) * (W / M);
  const auto v = desc.values();
  std::vector<double> out(static_cast<std::size_t>(B * N * N));
  std::vector<const double*> tok(static_cast<std::size_t>(N));
  std::vector<double> norms(static_cast<std::size_t>(N));
  for (std::int64_t by = 0; by < H / M; ++by)
    for (std::int64_t bx = 0; bx < W / M; ++bx) {
      const auto b = by * (W / M) + bx;
      for (std::int64_t i = 0; i < N; ++i) {
        tok[static_cast<std::size_t>(i)] = v.data() + ((by * M + i / M) * W + bx * M + i % M) * P;
        double s = 0.0;
        for (std::int64_t p = 0; p < P; ++p) s += tok[static_cast<std::size_t>(i)][p] * tok[static_cast<std::size_t>(i)][p];
        norms[static_cast<std::size_t>(i)] = std::max(std::sqrt(s), 1e-8);
      }
      double* m = out.data() + b * N * N;
      for (std::int64_t i = 0; i < N; ++i) {
        m[i * N + i] = 1.0;
        for (std::int64_t j = i + 1; j < N; ++j) {
          const double* a = tok[static_cast<std::size_t>(i)];
          const double* c = tok[static_cast<std::size_t>(j)];
          double s;
          if (o.kernel == SimilarityKernel::cosine) {
            double d = 0.0;
            for (std::int64_t p = 0; p < P; ++p) d += a[p] * c[p];
            s = std::clamp(d / (norms[static_cast<std::size_t>(i)] * norms[static_cast<std::size_t>(j)]), -1.0, 1.0);
          } else {
            double d = 0.0;
            for (std::int64_t p = 0; p < P; ++p) d += (a[p] - c[p]) * (a[p] - c[p]);
            s = std::exp(-(d / static_cast<double>(P)) / (2.0 * o.bandwidth * o.bandwidth));
          }
          m[i * N + j] = m[j * N + i] = s;
        }
      }
    }
  return Tensor::from_vector({B, N, N}, std::move(out));
}

CorrProxyReport proxy_compare(const Tensor& hsi, const Tensor& pan, const CorrelationOptions& o) {
  if (hsi.rank() != 3 || pan.rank() != 2 || hsi.dim(0) != pan.dim(0) || hsi.dim(1) != pan.dim(1))
    throw DimensionError("proxy_compare: cube " + shape_str(hsi.shape()) + " and PAN " + shape_str(pan.shape()) +
                         " are not co-registered");
  const auto a = correlation_map(spectral_descriptors(hsi), o);
  const auto b = correlation_map(patch_descriptors(pan, o.pan_patch), o);
  const auto av = a.values(), bv = b.values();
  const double n = static_cast<double>(av.size());
  double ma = 0.0, mb = 0.0, se = 0.0;
  for (std::size_t i = 0; i < av.size(); ++i) {
    ma += av[i];
    mb += bv[i];
    se += (av[i] - bv[i]) * (av[i] - bv[i]);
  }
  ma /= n;
  mb /= n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < av.size(); ++i) {
    sab += (av[i] - ma) * (bv[i] - mb);
    saa += (av[i] - ma) * (av[i] - ma);
    sbb += (bv[i] - mb) * (bv[i] - mb);
  }
  CorrProxyReport r;
  r.rmse = std::sqrt(se / n);
  // Two constant stacks carry no spread to correlate; identical ones count as perfect.
  if (saa == 0.0 || sbb == 0.0) r.correlation = se == 0.0 ? 1.0 : 0.0;
  else r.correlation = sab / std::sqrt(saa * sbb);
  r.psnr_db = se == 0.0 ? INFINITY : 10.0 * std::log10(1.0 / (se / n));
  return r;
}

}  // namespace dcchi
