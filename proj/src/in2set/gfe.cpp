// Copyright 2026 The DCCHI Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "dcchi/error.hpp"
#include "dcchi/in2set.hpp"
#include "dcchi/ops.hpp"

namespace dcchi {

namespace {
std::string level_name(int l) { return "gfe.l" + std::to_string(l) + "."; }
std::int64_t level_input(const ArchConfig& arch, int l) { return l == 0 ? 1 : arch.guide_width(l - 1); }
}  // namespace

GuidedPyramid gfe(const Tensor& pan, const ParamStore& w, const ArchConfig& arch) {
  if (pan.rank() != 2 || pan.dim(0) != arch.height || pan.dim(1) != arch.width)
    throw DimensionError("gfe: PAN image " + shape_str(pan.shape()) + " expected " +
                         shape_str({arch.height, arch.width}));
  const std::int64_t unit = 4LL * arch.window;
  if (arch.height % unit != 0 || arch.width % unit != 0)
    throw DimensionError("gfe: PAN size must be divisible by 4 * window = " + std::to_string(unit));
  GuidedPyramid out;
  Tensor t = ops::reshape(pan, {arch.height, arch.width, 1});
  for (int l = 0; l < ArchConfig::kLevels; ++l) {
    const auto p = level_name(l);
    t = ops::gelu(ops::conv2d(t, w.get(p + "w"), w.get(p + "b"), l == 0 ? 1 : 2));
    out.push_back(t);
  }
  return out;
}

void init_gfe(ParamStore& w, const ArchConfig& arch, std::mt19937_64& rng) {
  for (int l = 0; l < ArchConfig::kLevels; ++l) {
    const auto cin = level_input(arch, l), cout = arch.guide_width(l);
    w.set(level_name(l) + "w", trunc_normal({3, 3, cin, cout}, 1.0 / std::sqrt(9.0 * static_cast<double>(cin)), rng));
    w.set(level_name(l) + "b", Tensor::zeros({cout}));
  }
}

FlopBreakdown gfe_flops(const ArchConfig& arch) {
  FlopBreakdown f;
  for (int l = 0; l < ArchConfig::kLevels; ++l)
    f.conv += arch.level_height(l) * arch.level_cols(l) * 9 * level_input(arch, l) * arch.guide_width(l);
  return f;
}

}  // namespace dcchi
