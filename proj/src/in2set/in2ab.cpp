// Copyright 2026 The DCCHI Authors
// SPDX-License-Identifier: Apache-2.0

#include "dcchi/error.hpp"
#include "dcchi/in2set.hpp"
#include "dcchi/ops.hpp"

namespace dcchi {

const char* denoiser_name(DenoiserKind k) { return k == DenoiserKind::in2set ? "in2set" : "identity"; }

DenoiserKind parse_denoiser(const std::string& s) {
  if (s == "in2set") return DenoiserKind::in2set;
  if (s == "identity") return DenoiserKind::identity;
  throw ConfigError("unknown denoiser '" + s + "' (expected in2set or identity)");
}

void ArchConfig::validate() const {
  if (height <= 0 || width <= 0) throw ConfigError("arch height/width must be positive");
  if (bands < 2 || bands % 2 != 0) throw ConfigError("arch bands must be even and >= 2, got " + std::to_string(bands));
  if (stages < 1) throw ConfigError("stage count must be at least 1");
  if (window < 1) throw ConfigError("window side must be positive");
  if (ffn_mult < 1 || init_hidden < 1) throw ConfigError("ffn_mult and init_hidden must be positive");
  const std::int64_t unit = 4LL * window;
  if (denoiser == DenoiserKind::in2set && (height % unit != 0 || width % unit != 0))
    throw DimensionError("spatial size " + std::to_string(height) + "x" + std::to_string(width) +
                         " must be divisible by 4 * window = " + std::to_string(unit));
}

const std::vector<std::pair<std::string, BlockSpec>>& unet_blocks() {
  static const std::vector<std::pair<std::string, BlockSpec>> blocks = {
      {"enc0", {0, WindowMode::local}}, {"enc1", {1, WindowMode::grid}}, {"mid", {2, WindowMode::grid}},
      {"dec1", {1, WindowMode::grid}},  {"dec0", {0, WindowMode::local}},
  };
  return blocks;
}

namespace {

struct IntraOut {
  Tensor y;   // [B, N, D]
  Tensor q2;  // [B, N, Ch] or undefined
};

IntraOut intra_parts(const Tensor& xn, const Tensor& g, const ParamStore& w, const std::string& p,
                     const ArchConfig& arch, int level) {
  const int heads = arch.heads(level);
  IntraOut out;
  if (arch.uses_guide()) {
    if (!g.defined()) throw StateError(p + ": guided block called without PAN features");
    out.q2 = ops::matmul(g, w.get(p + "wq2"));
  }
  Tensor v1 = ops::matmul(xn, w.get(p + "wv1"));
  Tensor x1 = v1;
  if (arch.mha_c)
    x1 = mha_c(ops::matmul(xn, w.get(p + "wq1")), ops::matmul(xn, w.get(p + "wk1")), v1, w.get(p + "p1"), heads);
  Tensor v2 = ops::matmul(xn, w.get(p + "wv2"));
  Tensor x2 = v2;
  if (arch.mha_s) x2 = mha_s(out.q2, ops::matmul(g, w.get(p + "wk2")), v2, w.get(p + "p2"), heads);
  out.y = ops::concat_lastdim({x1, x2});
  return out;
}

}  // namespace

Tensor intra_attention(const Tensor& xn, const Tensor& g, const ParamStore& w, const std::string& prefix,
                       const ArchConfig& arch, int level) {
  return intra_parts(xn, g, w, prefix, arch, level).y;
}

Tensor ffn(const Tensor& x, const ParamStore& w, const std::string& p) {
  auto h = ops::gelu(ops::add_bias(ops::matmul(x, w.get(p + "ffn.w1")), w.get(p + "ffn.b1")));
  return ops::add_bias(ops::matmul(h, w.get(p + "ffn.w2")), w.get(p + "ffn.b2"));
}

Tensor in2ab(const Tensor& x, const Tensor& g, const ParamStore& w, const std::string& p, const ArchConfig& arch,
             const BlockSpec& spec) {
  const auto H = arch.level_height(spec.level), W = arch.level_cols(spec.level);
  const auto D = arch.level_width(spec.level);
  if (x.shape() != Shape{H, W, D})
    throw DimensionError(p + ": input " + shape_str(x.shape()) + " expected " + shape_str({H, W, D}));
  const auto layout = WindowLayout::make(spec.mode, arch.window, H, W);

  auto xn = partition(ops::layer_norm(x, w.get(p + "ln1.g"), w.get(p + "ln1.b")), layout, H, W);
  Tensor gt;
  if (arch.uses_guide()) {
    if (!g.defined() || g.shape() != Shape{H, W, arch.guide_width(spec.level)})
      throw DimensionError(p + ": PAN features " + (g.defined() ? shape_str(g.shape()) : std::string("missing")) +
                           " expected " + shape_str({H, W, arch.guide_width(spec.level)}));
    gt = partition(g, layout, H, W);
  }
  auto intra = intra_parts(xn, gt, w, p, arch, spec.level);
  Tensor v3 = ops::matmul(intra.y, w.get(p + "wv3"));
  Tensor inter = arch.crw ? crw(intra.q2, ops::matmul(intra.y, w.get(p + "wk3")), v3) : v3;
  auto x1 = ops::add(x, unpartition(inter, layout, H, W));
  return ops::add(x1, ffn(ops::layer_norm(x1, w.get(p + "ln2.g"), w.get(p + "ln2.b")), w, p));
}

void init_in2ab(ParamStore& w, const std::string& p, const ArchConfig& arch, const BlockSpec& spec,
                std::mt19937_64& rng) {
  constexpr double kStd = 0.02;
  const auto D = arch.level_width(spec.level), Ch = arch.guide_width(spec.level);
  const int heads = arch.heads(spec.level);
  const auto dh = Ch / heads;
  const auto layout =
      WindowLayout::make(spec.mode, arch.window, arch.level_height(spec.level), arch.level_cols(spec.level));
  w.set(p + "ln1.g", Tensor::full({D}, 1.0));
  w.set(p + "ln1.b", Tensor::zeros({D}));
  w.set(p + "wv1", trunc_normal({D, Ch}, kStd, rng));
  w.set(p + "wv2", trunc_normal({D, Ch}, kStd, rng));
  if (arch.mha_c) {
    w.set(p + "wq1", trunc_normal({D, Ch}, kStd, rng));
    w.set(p + "wk1", trunc_normal({D, Ch}, kStd, rng));
    w.set(p + "p1", trunc_normal({heads, dh, dh}, kStd, rng));
  }
  if (arch.uses_guide()) w.set(p + "wq2", trunc_normal({Ch, Ch}, kStd, rng));
  if (arch.mha_s) {
    w.set(p + "wk2", trunc_normal({Ch, Ch}, kStd, rng));
    w.set(p + "p2", trunc_normal({heads, layout.tokens, layout.tokens}, kStd, rng));
  }
  if (arch.crw) w.set(p + "wk3", trunc_normal({D, Ch}, kStd, rng));
  w.set(p + "wv3", trunc_normal({D, D}, kStd, rng));
  w.set(p + "ln2.g", Tensor::full({D}, 1.0));
  w.set(p + "ln2.b", Tensor::zeros({D}));
  const auto hidden = D * arch.ffn_mult;
  w.set(p + "ffn.w1", trunc_normal({D, hidden}, kStd, rng));
  w.set(p + "ffn.b1", Tensor::zeros({hidden}));
  w.set(p + "ffn.w2", trunc_normal({hidden, D}, kStd, rng));
  w.set(p + "ffn.b2", Tensor::zeros({D}));
}

}  // namespace dcchi
