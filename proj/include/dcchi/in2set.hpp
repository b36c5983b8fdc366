// Copyright 2026 The DCCHI Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "dcchi/params.hpp"
#include "dcchi/tensor.hpp"

namespace dcchi {

enum class DenoiserKind { in2set, identity };

/// Everything that fixes the shape of the learned model.
struct ArchConfig {
  std::int64_t height = 32;
  std::int64_t width = 32;
  std::int64_t bands = 8;
  int window = 8;  // M
  int stages = 2;  // K
  bool crw = true;
  bool mha_c = true;
  bool mha_s = true;
  DenoiserKind denoiser = DenoiserKind::in2set;
  int ffn_mult = 4;
  int init_hidden = 16;

  static constexpr int kLevels = 3;
  /// Feature width D at level l: C, 2C, 4C.
  std::int64_t level_width(int level) const { return bands << level; }
  /// PAN feature width at level l: half of level_width.
  std::int64_t guide_width(int level) const { return level_width(level) / 2; }
  int heads(int level) const { return 1 << level; }
  std::int64_t level_height(int level) const { return height >> level; }
  std::int64_t level_cols(int level) const { return width >> level; }
  /// GFE is built only when something consumes PAN features.
  bool uses_guide() const { return crw || mha_s; }

  /// Throws ConfigError / DimensionError when the combination cannot run.
  void validate() const;
};

const char* denoiser_name(DenoiserKind k);
DenoiserKind parse_denoiser(const std::string& s);

// ---------------------------------------------------------------------------
// Window partitioning.

enum class WindowMode { local, grid };

struct WindowLayout {
  WindowMode mode = WindowMode::local;
  int window = 8;
  std::int64_t groups = 0;  // B
  std::int64_t tokens = 0;  // N

  static WindowLayout make(WindowMode mode, int window, std::int64_t height, std::int64_t width);
};

/// [H, W, D] -> [B, N, D]. local: each group is one M x M window. grid: each
/// group collects the tokens sharing an offset inside their M x M cell.
Tensor partition(const Tensor& x, const WindowLayout& layout, std::int64_t height, std::int64_t width);
Tensor unpartition(const Tensor& x, const WindowLayout& layout, std::int64_t height, std::int64_t width);

// ---------------------------------------------------------------------------
// Attention primitives on [B, N, *] token groups.

/// Softmax(Q K^T / sqrt(N) + P1) over channels, per head: [B, h, Ch/h, Ch/h].
Tensor channel_attention_weights(const Tensor& q1, const Tensor& k1, const Tensor& p1, int heads);
/// Multi-head self-attention across channels; returns [B, N, Ch].
Tensor mha_c(const Tensor& q1, const Tensor& k1, const Tensor& v1, const Tensor& p1, int heads);

/// Softmax(Q K^T / sqrt(Ch/h) + P2) over tokens, per head: [B, h, N, N].
Tensor spatial_attention_weights(const Tensor& q2, const Tensor& k2, const Tensor& p2, int heads);
/// Multi-head cross-attention across tokens, queries and keys from the PAN
/// guide, values from the HSI features; returns [B, N, Ch].
Tensor mha_s(const Tensor& q2, const Tensor& k2, const Tensor& v2, const Tensor& p2, int heads);

/// cos(Q2, K3) per token, scaling V3: [B, N, D].
Tensor crw(const Tensor& q2, const Tensor& k3, const Tensor& v3);

// ---------------------------------------------------------------------------
// Blocks. Weights are looked up in a ParamStore under a name prefix.

struct BlockSpec {
  int level = 0;
  WindowMode mode = WindowMode::local;
};

/// The five In2AB blocks of one denoiser in execution order.
const std::vector<std::pair<std::string, BlockSpec>>& unet_blocks();

/// Intra-similarity output concat(X1, X2) for a normalized, partitioned input.
Tensor intra_attention(const Tensor& xn, const Tensor& g, const ParamStore& w, const std::string& prefix,
                       const ArchConfig& arch, int level);
/// 1x1 expand, gelu, 1x1 project on [..., D].
Tensor ffn(const Tensor& x, const ParamStore& w, const std::string& prefix);
/// X' = X + CRW(intra(LN1 X), G);  X'' = X' + FFN(LN2 X').
/// `g` is the PAN feature map for this level and may be undefined when the
/// architecture does not use guidance.
Tensor in2ab(const Tensor& x, const Tensor& g, const ParamStore& w, const std::string& prefix,
             const ArchConfig& arch, const BlockSpec& spec);

using GuidedPyramid = std::vector<Tensor>;

/// PAN image [H, W] -> three feature levels (full, half, quarter resolution).
GuidedPyramid gfe(const Tensor& pan, const ParamStore& w, const ArchConfig& arch);

/// U-shaped In2SET denoiser with residual output: x + net(x, sigma, G).
Tensor denoise(const Tensor& x, const Tensor& sigma, const GuidedPyramid& pyramid, const ParamStore& w,
               const std::string& prefix, const ArchConfig& arch);

// ---------------------------------------------------------------------------
// Weight creation.

void init_in2ab(ParamStore& w, const std::string& prefix, const ArchConfig& arch, const BlockSpec& spec,
                std::mt19937_64& rng);
void init_gfe(ParamStore& w, const ArchConfig& arch, std::mt19937_64& rng);
void init_denoiser(ParamStore& w, const std::string& prefix, const ArchConfig& arch, std::mt19937_64& rng);

// ---------------------------------------------------------------------------
// Cost model.

/// Multiply-accumulate counts for one forward pass, split by kind.
struct FlopBreakdown {
  std::int64_t conv = 0;        // convolutions (GFE, U-net, InitialNet)
  std::int64_t projection = 0;  // token-wise linear maps incl. FFN
  std::int64_t attention_channel = 0;
  std::int64_t attention_spatial = 0;
  std::int64_t fc = 0;  // InitialNet stage-parameter head
  std::int64_t cg = 0;  // operator applications inside the data steps

  std::int64_t network() const { return conv + projection + attention_channel + attention_spatial + fc; }
  std::int64_t total() const { return network() + cg; }
  /// One multiply-accumulate counted as two floating point operations.
  std::int64_t flops() const { return 2 * total(); }
};

FlopBreakdown in2ab_flops(const ArchConfig& arch, const BlockSpec& spec);
FlopBreakdown gfe_flops(const ArchConfig& arch);
FlopBreakdown denoiser_flops(const ArchConfig& arch);
/// Whole reconstruction: InitialNet + GFE + K x (CG data step + denoiser).
FlopBreakdown flop_count(const ArchConfig& arch, int cg_iters);

}  // namespace dcchi
