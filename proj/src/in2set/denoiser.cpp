// Copyright 2026 The DCCHI Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "dcchi/error.hpp"
#include "dcchi/in2set.hpp"
#include "dcchi/ops.hpp"

namespace dcchi {

namespace {

Tensor conv(const Tensor& x, const ParamStore& w, const std::string& name, int stride = 1) {
  return ops::conv2d(x, w.get(name + ".w"), w.get(name + ".b"), stride);
}

Tensor guide_at(const GuidedPyramid& g, const ArchConfig& arch, int level) {
  if (!arch.uses_guide()) return {};
  if (g.size() != ArchConfig::kLevels) throw StateError("denoise: PAN pyramid has " + std::to_string(g.size()) + " levels");
  return g[static_cast<std::size_t>(level)];
}

}  // namespace

Tensor denoise(const Tensor& x, const Tensor& sigma, const GuidedPyramid& pyramid, const ParamStore& w,
               const std::string& p, const ArchConfig& arch) {
  if (x.shape() != Shape{arch.height, arch.width, arch.bands})
    throw DimensionError("denoise: input " + shape_str(x.shape()) + " expected " +
                         shape_str({arch.height, arch.width, arch.bands}));
  if (arch.denoiser == DenoiserKind::identity) return x;
  if (sigma.numel() != 1) throw DimensionError("denoise: sigma must hold a single value");
  const auto& blocks = unet_blocks();
  auto block = [&](std::size_t i, const Tensor& t) {
    const auto& [name, spec] = blocks[i];
    return in2ab(t, guide_at(pyramid, arch, spec.level), w, p + name + ".", arch, spec);
  };

  auto level = ops::mul_by(Tensor::full({arch.height, arch.width, 1}, 1.0), sigma);
  auto e0 = block(0, conv(ops::concat_lastdim({x, level}), w, p + "in"));
  auto e1 = block(1, conv(e0, w, p + "down0", 2));
  auto m = block(2, conv(e1, w, p + "down1", 2));
  auto u1 = ops::conv_transpose2d(m, w.get(p + "up1.w"), w.get(p + "up1.b"), 2);
  auto d1 = block(3, conv(ops::concat_lastdim({u1, e1}), w, p + "fuse1"));
  auto u0 = ops::conv_transpose2d(d1, w.get(p + "up0.w"), w.get(p + "up0.b"), 2);
  auto d0 = block(4, conv(ops::concat_lastdim({u0, e0}), w, p + "fuse0"));
  return ops::add(x, conv(d0, w, p + "out"));
}

void init_denoiser(ParamStore& w, const std::string& p, const ArchConfig& arch, std::mt19937_64& rng) {
  if (arch.denoiser == DenoiserKind::identity) return;
  auto conv_w = [&](const std::string& name, std::int64_t k, std::int64_t cin, std::int64_t cout) {
    w.set(name + ".w", trunc_normal({k, k, cin, cout}, 1.0 / std::sqrt(static_cast<double>(k * k * cin)), rng));
    w.set(name + ".b", Tensor::zeros({cout}));
  };
  const auto C = arch.bands, D0 = arch.level_width(0), D1 = arch.level_width(1), D2 = arch.level_width(2);
  conv_w(p + "in", 3, C + 1, D0);
  conv_w(p + "down0", 3, D0, D1);
  conv_w(p + "down1", 3, D1, D2);
  conv_w(p + "up1", 2, D2, D1);
  conv_w(p + "fuse1", 1, 2 * D1, D1);
  conv_w(p + "up0", 2, D1, D0);
  conv_w(p + "fuse0", 1, 2 * D0, D0);
  w.set(p + "out.w", Tensor::zeros({3, 3, D0, C}));
  w.set(p + "out.b", Tensor::zeros({C}));
  for (const auto& [name, spec] : unet_blocks()) init_in2ab(w, p + name + ".", arch, spec, rng);
}

}  // namespace dcchi
