// Copyright 2026 The DCCHI Authors
// SPDX-License-Identifier: Apache-2.0

#include "dcchi/in2set.hpp"

namespace dcchi {

namespace {
FlopBreakdown& operator+=(FlopBreakdown& a, const FlopBreakdown& b) {
  a.conv += b.conv;
  a.projection += b.projection;
  a.attention_channel += b.attention_channel;
  a.attention_spatial += b.attention_spatial;
  a.fc += b.fc;
  a.cg += b.cg;
  return a;
}
}  // namespace

FlopBreakdown in2ab_flops(const ArchConfig& arch, const BlockSpec& spec) {
  const auto T = arch.level_height(spec.level) * arch.level_cols(spec.level);
  const auto D = arch.level_width(spec.level), Ch = arch.guide_width(spec.level);
  const auto dh = Ch / arch.heads(spec.level);
  const auto N = WindowLayout::make(spec.mode, arch.window, arch.level_height(spec.level),
                                    arch.level_cols(spec.level)).tokens;
  FlopBreakdown f;
  f.projection = 2 * T * D * Ch + T * D * D + 2 * T * D * D * arch.ffn_mult;  // V1, V2, V3, FFN
  if (arch.uses_guide()) f.projection += T * Ch * Ch;                       // Q2
  if (arch.mha_c) {
    f.projection += 2 * T * D * Ch;  // Q1, K1
    f.attention_channel = 2 * T * Ch * dh;
  }
  if (arch.mha_s) {
    f.projection += T * Ch * Ch;  // K2
    f.attention_spatial = 2 * T * N * Ch;
  }
  if (arch.crw) f.projection += T * D * Ch;  // K3
  return f;
}

FlopBreakdown denoiser_flops(const ArchConfig& arch) {
  FlopBreakdown f;
  if (arch.denoiser == DenoiserKind::identity) return f;
  const auto C = arch.bands, D0 = arch.level_width(0), D1 = arch.level_width(1), D2 = arch.level_width(2);
  const auto T0 = arch.level_height(0) * arch.level_cols(0), T1 = arch.level_height(1) * arch.level_cols(1),
             T2 = arch.level_height(2) * arch.level_cols(2);
  f.conv = T0 * 9 * (C + 1) * D0 + T1 * 9 * D0 * D1 + T2 * 9 * D1 * D2 + T2 * 4 * D2 * D1 + T1 * 2 * D1 * D1 +
           T1 * 4 * D1 * D0 + T0 * 2 * D0 * D0 + T0 * 9 * D0 * C;
  for (const auto& [name, spec] : unet_blocks()) f += in2ab_flops(arch, spec);
  return f;
}

FlopBreakdown flop_count(const ArchConfig& arch, int cg_iters) {
  const auto N = arch.height * arch.width * arch.bands;
  FlopBreakdown f;
  // InitialNet: one 3x3 conv over the cube and the two-layer stage head.
  f.conv = arch.height * arch.width * 9 * arch.bands * arch.bands;
  f.fc = arch.init_hidden + arch.init_hidden * 2 * arch.stages;
  if (arch.uses_guide() && arch.denoiser == DenoiserKind::in2set) f += gfe_flops(arch);
  for (int k = 0; k < arch.stages; ++k) {
    // Phi'y and mu z, one operator application per iteration plus the
    // initial residual (each 5N: four branch kernels and the mu term), and
    // two inner products with three vector updates per iteration.
    f.cg += 3 * N + (cg_iters + 1) * 5 * N + cg_iters * 5 * N;
    f += denoiser_flops(arch);
  }
  return f;
}

}  // namespace dcchi
