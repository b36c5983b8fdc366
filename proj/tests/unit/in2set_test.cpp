// Copyright 2026 The DCCHI Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include <gtest/gtest.h>

#include "dcchi/error.hpp"
#include "dcchi/gradcheck.hpp"
#include "dcchi/in2set.hpp"
#include "dcchi/ops.hpp"
#include "dcchi/pipeline.hpp"
#include "dcchi/scenes.hpp"
#include "test_util.hpp"

namespace dcchi {
namespace {

using testing::max_abs_diff;
using testing::random_tensor;
using testing::randomized;

ArchConfig arch_of(std::int64_t hw, std::int64_t c, int window) {
  ArchConfig a;
  a.height = a.width = hw;
  a.bands = c;
  a.window = window;
  a.stages = 1;
  return a;
}

ParamStore block_weights(const ArchConfig& arch, const BlockSpec& spec, std::uint64_t seed, double scale) {
  ParamStore w;
  std::mt19937_64 rng(seed);
  init_in2ab(w, "b.", arch, spec, rng);
  return scale > 0.0 ? randomized(w, seed, scale) : w;
}

// ---------------------------------------------------------------------------

TEST(Partition, RoundTripBothModes) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const int M = 1 + static_cast<int>(seed % 4);
    const std::int64_t H = M * (1 + seed % 3), W = M * (1 + (seed / 3) % 3), D = 1 + seed % 5;
    auto x = random_tensor({H, W, D}, seed);
    for (auto mode : {WindowMode::local, WindowMode::grid}) {
      auto l = WindowLayout::make(mode, M, H, W);
      auto p = partition(x, l, H, W);
      EXPECT_EQ(p.shape(), (Shape{l.groups, l.tokens, D}));
      EXPECT_EQ(unpartition(p, l, H, W).to_vector(), x.to_vector());
    }
  }
}

TEST(Partition, LayoutArithmetic) {
  auto local = WindowLayout::make(WindowMode::local, 8, 8, 8);
  EXPECT_EQ(local.groups, 1);
  EXPECT_EQ(local.tokens, 64);
  auto grid = WindowLayout::make(WindowMode::grid, 8, 16, 16);
  EXPECT_EQ(grid.groups, 64);
  EXPECT_EQ(grid.tokens, 4);
  EXPECT_THROW(WindowLayout::make(WindowMode::local, 3, 8, 9), DimensionError);
}

TEST(Partition, GroupMembership) {
  // Encode each position as its value: 100 * h + w.
  const std::int64_t H = 4, W = 4;
  std::vector<double> v;
  for (std::int64_t h = 0; h < H; ++h)
    for (std::int64_t w = 0; w < W; ++w) v.push_back(100.0 * h + w);
  auto x = Tensor::from_vector({H, W, 1}, v);
  auto local = partition(x, WindowLayout::make(WindowMode::local, 2, H, W), H, W);
  // Second window is rows 0-1, columns 2-3.
  EXPECT_EQ(std::vector<double>(local.values().begin() + 4, local.values().begin() + 8),
            (std::vector<double>{2, 3, 102, 103}));
  auto grid = partition(x, WindowLayout::make(WindowMode::grid, 2, H, W), H, W);
  // Group (0, 1): odd columns of even rows.
  EXPECT_EQ(std::vector<double>(grid.values().begin() + 4, grid.values().begin() + 8),
            (std::vector<double>{1, 3, 201, 203}));
}

// ---------------------------------------------------------------------------

// Direct evaluation of channel attention for one group and head.
std::vector<double> dense_mha_c(const Tensor& q, const Tensor& k, const Tensor& v, const Tensor& p, int heads) {
  const auto B = q.dim(0), N = q.dim(1), C = q.dim(2), dh = C / heads;
  std::vector<double> out(static_cast<std::size_t>(B * N * C), 0.0);
  auto at = [&](const Tensor& t, std::int64_t b, std::int64_t n, std::int64_t c) { return t.at((b * N + n) * C + c); };
  for (std::int64_t b = 0; b < B; ++b)
    for (int h = 0; h < heads; ++h)
      for (std::int64_t i = 0; i < dh; ++i) {
        std::vector<double> s(static_cast<std::size_t>(dh));
        double mx = -INFINITY, z = 0.0;
        for (std::int64_t j = 0; j < dh; ++j) {
          double acc = 0.0;
          for (std::int64_t n = 0; n < N; ++n) acc += at(q, b, n, h * dh + i) * at(k, b, n, h * dh + j);
          s[j] = acc / std::sqrt(static_cast<double>(N)) + p.at((h * dh + i) * dh + j);
          mx = std::max(mx, s[j]);
        }
        for (auto& e : s) z += (e = std::exp(e - mx));
        for (std::int64_t n = 0; n < N; ++n) {
          double acc = 0.0;
          for (std::int64_t j = 0; j < dh; ++j) acc += s[j] / z * at(v, b, n, h * dh + j);
          out[static_cast<std::size_t>((b * N + n) * C + h * dh + i)] = acc;
        }
      }
  return out;
}

std::vector<double> dense_mha_s(const Tensor& q, const Tensor& k, const Tensor& v, const Tensor& p, int heads) {
  const auto B = q.dim(0), N = q.dim(1), C = q.dim(2), dh = C / heads;
  std::vector<double> out(static_cast<std::size_t>(B * N * C), 0.0);
  auto at = [&](const Tensor& t, std::int64_t b, std::int64_t n, std::int64_t c) { return t.at((b * N + n) * C + c); };
  for (std::int64_t b = 0; b < B; ++b)
    for (int h = 0; h < heads; ++h)
      for (std::int64_t i = 0; i < N; ++i) {
        std::vector<double> s(static_cast<std::size_t>(N));
        double mx = -INFINITY, z = 0.0;
        for (std::int64_t j = 0; j < N; ++j) {
          double acc = 0.0;
          for (std::int64_t c = 0; c < dh; ++c) acc += at(q, b, i, h * dh + c) * at(k, b, j, h * dh + c);
          s[j] = acc / std::sqrt(static_cast<double>(dh)) + p.at((h * N + i) * N + j);
          mx = std::max(mx, s[j]);
        }
        for (auto& e : s) z += (e = std::exp(e - mx));
        for (std::int64_t c = 0; c < dh; ++c) {
          double acc = 0.0;
          for (std::int64_t j = 0; j < N; ++j) acc += s[j] / z * at(v, b, j, h * dh + c);
          out[static_cast<std::size_t>((b * N + i) * C + h * dh + c)] = acc;
        }
      }
  return out;
}

TEST(MhaC, ZeroValuesGiveZero) {
  auto q = random_tensor({2, 5, 4}, 1), k = random_tensor({2, 5, 4}, 2);
  auto out = mha_c(q, k, Tensor::zeros({2, 5, 4}), random_tensor({2, 2, 2}, 3), 2);
  for (double v : out.values()) EXPECT_EQ(v, 0.0);
}

TEST(MhaC, MatchesDenseAttention) {
  for (auto [N, C, h] : std::vector<std::tuple<int, int, int>>{{1, 4, 1}, {5, 4, 2}, {9, 6, 3}}) {
    auto q = random_tensor({3, N, C}, 4), k = random_tensor({3, N, C}, 5), v = random_tensor({3, N, C}, 6);
    auto p = random_tensor({h, C / h, C / h}, 7);
    EXPECT_LE(max_abs_diff(mha_c(q, k, v, p, h).values(), dense_mha_c(q, k, v, p, h)), 1e-12);
  }
}

TEST(MhaC, AttentionRowsSumToOne) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto a = channel_attention_weights(random_tensor({2, 6, 8}, seed, -3, 3), random_tensor({2, 6, 8}, seed + 50, -3, 3),
                                       random_tensor({4, 2, 2}, seed + 99), 4);
    ASSERT_EQ(a.shape(), (Shape{2, 4, 2, 2}));
    for (std::int64_t r = 0; r < a.numel() / 2; ++r) EXPECT_NEAR(a.at(2 * r) + a.at(2 * r + 1), 1.0, 1e-6);
  }
}

TEST(MhaC, HeadDivisibility) {
  auto q = random_tensor({1, 4, 6}, 1);
  EXPECT_THROW(mha_c(q, q, q, Tensor::zeros({4, 1, 1}), 4), DimensionError);
}

TEST(MhaS, ConstantGuideAveragesValues) {
  auto g = Tensor::full({2, 4, 2}, 0.3);
  auto v = random_tensor({2, 4, 2}, 8);
  auto out = mha_s(g, g, v, Tensor::zeros({1, 4, 4}), 1);
  for (std::int64_t b = 0; b < 2; ++b)
    for (std::int64_t c = 0; c < 2; ++c) {
      double mean = 0.0;
      for (std::int64_t n = 0; n < 4; ++n) mean += v.at((b * 4 + n) * 2 + c) / 4.0;
      for (std::int64_t n = 0; n < 4; ++n) EXPECT_NEAR(out.at((b * 4 + n) * 2 + c), mean, 1e-15);
    }
}

TEST(MhaS, ZeroValuesAndDenseOracle) {
  auto q = random_tensor({1, 4, 2}, 9), k = random_tensor({1, 4, 2}, 10), v = random_tensor({1, 4, 2}, 11);
  auto p = random_tensor({1, 4, 4}, 12);
  for (double x : mha_s(q, k, Tensor::zeros({1, 4, 2}), p, 1).values()) EXPECT_EQ(x, 0.0);
  EXPECT_LE(max_abs_diff(mha_s(q, k, v, p, 1).values(), dense_mha_s(q, k, v, p, 1)), 1e-12);
  auto q2 = random_tensor({3, 6, 4}, 13), k2 = random_tensor({3, 6, 4}, 14), v2 = random_tensor({3, 6, 4}, 15);
  auto p2 = random_tensor({2, 6, 6}, 16);
  EXPECT_LE(max_abs_diff(mha_s(q2, k2, v2, p2, 2).values(), dense_mha_s(q2, k2, v2, p2, 2)), 1e-12);
  auto a = spatial_attention_weights(q2, k2, p2, 2);
  for (std::int64_t r = 0; r < a.numel() / 6; ++r) {
    double s = 0.0;
    for (int j = 0; j < 6; ++j) s += a.at(r * 6 + j);
    EXPECT_NEAR(s, 1.0, 1e-6);
  }
}

TEST(Crw, CosineExtremesAndBound) {
  auto q = random_tensor({2, 5, 3}, 1), v = random_tensor({2, 5, 6}, 2);
  EXPECT_LE(max_abs_diff(crw(q, ops::scale(q, 2.5), v), v), 1e-12);
  EXPECT_LE(max_abs_diff(crw(q, ops::scale(q, -1.0), v), ops::scale(v, -1.0)), 1e-12);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto v3 = random_tensor({2, 5, 6}, seed + 10);
    auto out = crw(random_tensor({2, 5, 3}, seed + 20), random_tensor({2, 5, 3}, seed + 30), v3);
    for (std::int64_t i = 0; i < out.numel(); ++i) EXPECT_LE(std::fabs(out.at(i)), std::fabs(v3.at(i)));
  }
}

// ---------------------------------------------------------------------------

TEST(IntraAttention, ConcatenatesBranches) {
  auto arch = arch_of(8, 4, 4);
  const BlockSpec spec{0, WindowMode::local};
  auto w = block_weights(arch, spec, 1, 0.5);
  auto xn = random_tensor({4, 16, 4}, 2), g = random_tensor({4, 16, 2}, 3);
  auto y = intra_attention(xn, g, w, "b.", arch, 0);
  EXPECT_EQ(y.shape(), (Shape{4, 16, 4}));

  auto x1 = mha_c(ops::matmul(xn, w.get("b.wq1")), ops::matmul(xn, w.get("b.wk1")), ops::matmul(xn, w.get("b.wv1")),
                  w.get("b.p1"), 1);
  auto silenced = w;
  silenced.set("b.wv2", Tensor::zeros({4, 2}));
  auto ys = intra_attention(xn, g, silenced, "b.", arch, 0);
  for (std::int64_t t = 0; t < 64; ++t)
    for (int c = 0; c < 2; ++c) {
      EXPECT_EQ(ys.at(t * 4 + c), x1.at(t * 2 + c));
      EXPECT_EQ(ys.at(t * 4 + 2 + c), 0.0);
    }
  auto r = grad_check([&](const Tensor& t) { return intra_attention(t, g, w, "b.", arch, 0); }, xn);
  EXPECT_TRUE(r.passed) << r.summary();
}

TEST(Ffn, ZeroWeightsAndGradient) {
  auto arch = arch_of(8, 4, 4);
  auto w = block_weights(arch, {0, WindowMode::local}, 2, 0.5);
  auto zero = w;
  for (auto n : {"b.ffn.w1", "b.ffn.b1", "b.ffn.w2", "b.ffn.b2"}) zero.set(n, Tensor::zeros(w.get(n).shape()));
  auto x = random_tensor({8, 8, 4}, 3);
  for (double v : ffn(x, zero, "b.").values()) EXPECT_EQ(v, 0.0);
  auto r = grad_check([&](const Tensor& t) { return ffn(t, w, "b."); }, x);
  EXPECT_TRUE(r.passed) << r.summary();
}

ArchConfig with_toggles(ArchConfig a, bool crw_on, bool mhac, bool mhas) {
  a.crw = crw_on;
  a.mha_c = mhac;
  a.mha_s = mhas;
  return a;
}

TEST(In2ab, ZeroOutputProjectionsGiveExactIdentity) {
  auto base = arch_of(16, 4, 2);
  for (int mask = 0; mask < 8; ++mask) {
    auto arch = with_toggles(base, mask & 1, mask & 2, mask & 4);
    for (const auto& [name, spec] : unet_blocks()) {
      auto w = block_weights(arch, spec, 3 + static_cast<std::uint64_t>(mask), 0.5);
      for (auto n : {"b.wv3", "b.ffn.w2", "b.ffn.b2"}) w.set(n, Tensor::zeros(w.get(n).shape()));
      const auto H = arch.level_height(spec.level), D = arch.level_width(spec.level);
      auto x = random_tensor({H, H, D}, 4);
      Tensor g = arch.uses_guide() ? random_tensor({H, H, arch.guide_width(spec.level)}, 5) : Tensor();
      auto y = in2ab(x, g, w, "b.", arch, spec);
      ASSERT_EQ(y.shape(), x.shape()) << name;
      EXPECT_EQ(max_abs_diff(y, x), 0.0) << name << " toggles " << mask;
    }
  }
}

TEST(In2ab, ShapePreservingWithRandomWeights) {
  auto arch = arch_of(32, 4, 4);
  for (const auto& [name, spec] : unet_blocks()) {
    auto w = block_weights(arch, spec, 6, 0.3);
    const auto H = arch.level_height(spec.level), D = arch.level_width(spec.level);
    auto y = in2ab(random_tensor({H, H, D}, 7), random_tensor({H, H, arch.guide_width(spec.level)}, 8), w, "b.", arch,
                   spec);
    EXPECT_EQ(y.shape(), (Shape{H, H, D})) << name;
  }
}

TEST(In2ab, WholeBlockGradient) {
  auto arch = arch_of(8, 4, 4);
  for (auto mode : {WindowMode::local, WindowMode::grid}) {
    const BlockSpec spec{0, mode};
    auto w = block_weights(arch, spec, 9, 0.5);
    auto x = random_tensor({8, 8, 4}, 10), g = random_tensor({8, 8, 2}, 11);
    auto rx = grad_check([&](const Tensor& t) { return in2ab(t, g, w, "b.", arch, spec); }, x);
    EXPECT_TRUE(rx.passed) << rx.summary();
    auto rg = grad_check([&](const Tensor& t) { return in2ab(x, t, w, "b.", arch, spec); }, g);
    EXPECT_TRUE(rg.passed) << rg.summary();
  }
}

TEST(In2ab, RejectsMismatchedInputs) {
  auto arch = arch_of(8, 4, 4);
  const BlockSpec spec{0, WindowMode::local};
  auto w = block_weights(arch, spec, 1, 0.0);
  EXPECT_THROW(in2ab(random_tensor({8, 8, 6}, 1), random_tensor({8, 8, 2}, 2), w, "b.", arch, spec), DimensionError);
  EXPECT_THROW(in2ab(random_tensor({8, 8, 4}, 1), random_tensor({8, 8, 3}, 2), w, "b.", arch, spec), DimensionError);
  EXPECT_THROW(in2ab(random_tensor({8, 8, 4}, 1), random_tensor({8, 8, 2}, 2), w, "c.", arch, spec), StateError);
}

// ---------------------------------------------------------------------------

ParamStore gfe_weights(const ArchConfig& arch, std::uint64_t seed) {
  ParamStore w;
  std::mt19937_64 rng(seed);
  init_gfe(w, arch, rng);
  return w;
}

TEST(Gfe, LevelShapes) {
  auto arch = arch_of(64, 28, 8);
  auto g = gfe(random_tensor({64, 64}, 1, 0, 1), gfe_weights(arch, 1), arch);
  ASSERT_EQ(g.size(), 3u);
  EXPECT_EQ(g[0].shape(), (Shape{64, 64, 14}));
  EXPECT_EQ(g[1].shape(), (Shape{32, 32, 28}));
  EXPECT_EQ(g[2].shape(), (Shape{16, 16, 56}));
}

TEST(Gfe, ConstantInputGivesConstantInterior) {
  auto arch = arch_of(32, 4, 2);
  auto g = gfe(Tensor::full({32, 32}, 0.6), randomized(gfe_weights(arch, 2), 3, 0.5), arch);
  for (int l = 0; l < 3; ++l) {
    const auto& t = g[static_cast<std::size_t>(l)];
    const auto H = t.dim(0), C = t.dim(2);
    for (std::int64_t c = 0; c < C; ++c) {
      const double ref = t.at((2 * H + 2) * C + c);
      for (std::int64_t h = 2; h < H - 2; ++h)
        for (std::int64_t w = 2; w < H - 2; ++w) EXPECT_NEAR(t.at((h * H + w) * C + c), ref, 1e-14) << "level " << l;
    }
  }
}

TEST(Gfe, GradientAndDivisibility) {
  auto arch = arch_of(8, 4, 2);
  auto w = randomized(gfe_weights(arch, 4), 5, 0.5);
  auto r = grad_check([&](const Tensor& p) { return gfe(p, w, arch)[2]; },
                      random_tensor({8, 8}, 6, 0, 1));
  EXPECT_TRUE(r.passed) << r.summary();
  auto r0 = grad_check([&](const Tensor& p) { return gfe(p, w, arch)[0]; }, random_tensor({8, 8}, 7, 0, 1));
  EXPECT_TRUE(r0.passed) << r0.summary();
  auto bad = arch_of(12, 4, 2);
  EXPECT_THROW(gfe(Tensor::zeros({12, 12}), gfe_weights(arch, 1), bad), DimensionError);
}

// ---------------------------------------------------------------------------

struct DenoiserFixture {
  ArchConfig arch;
  ParamStore w;
  GuidedPyramid g;

  DenoiserFixture(std::int64_t hw, std::int64_t c, int window, double scale) : arch(arch_of(hw, c, window)) {
    std::mt19937_64 rng(1);
    init_gfe(w, arch, rng);
    init_denoiser(w, "s.", arch, rng);
    if (scale > 0.0) w = randomized(w, 2, scale);
    g = gfe(random_tensor({hw, hw}, 3, 0, 1), w, arch);
  }
};

TEST(Denoise, FreshWeightsAreResidualIdentity) {
  DenoiserFixture f(32, 8, 4, 0.0);
  auto x = random_tensor({32, 32, 8}, 4, 0, 1);
  auto y = denoise(x, Tensor::scalar(0.05), f.g, f.w, "s.", f.arch);
  EXPECT_EQ(y.shape(), x.shape());
  EXPECT_EQ(max_abs_diff(y, x), 0.0);
}

TEST(Denoise, ShapePreservedWithRandomWeights) {
  DenoiserFixture f(32, 8, 4, 0.2);
  auto x = random_tensor({32, 32, 8}, 5, 0, 1);
  auto y = denoise(x, Tensor::scalar(0.05), f.g, f.w, "s.", f.arch);
  EXPECT_EQ(y.shape(), x.shape());
  EXPECT_GT(max_abs_diff(y, x), 0.0);
}

TEST(Denoise, FullGradientCheck) {
  DenoiserFixture f(16, 4, 4, 0.3);
  GradCheckOptions opt;
  opt.tolerance = 1e-3;
  auto x = random_tensor({16, 16, 4}, 6, 0, 1);
  auto rx = grad_check([&](const Tensor& t) { return denoise(t, Tensor::scalar(0.1), f.g, f.w, "s.", f.arch); }, x, opt);
  EXPECT_TRUE(rx.passed) << rx.summary();
  EXPECT_EQ(rx.coords_checked, 1024);
  auto rs = grad_check([&](const Tensor& s) { return denoise(x, s, f.g, f.w, "s.", f.arch); }, Tensor::scalar(0.1), opt);
  EXPECT_TRUE(rs.passed) << rs.summary();
}

TEST(Denoise, Errors) {
  DenoiserFixture f(16, 4, 4, 0.0);
  EXPECT_THROW(denoise(Tensor::zeros({16, 16, 6}), Tensor::scalar(0.1), f.g, f.w, "s.", f.arch), DimensionError);
  EXPECT_THROW(denoise(Tensor::zeros({16, 16, 4}), Tensor::scalar(0.1), f.g, f.w, "t.", f.arch), StateError);
  auto bad = arch_of(24, 4, 4);
  EXPECT_THROW(bad.validate(), DimensionError);
  auto odd = arch_of(16, 3, 4);
  EXPECT_THROW(odd.validate(), ConfigError);
}

// ---------------------------------------------------------------------------

const std::vector<std::tuple<const char*, bool, bool, bool>> kBreakdown = {
    {"baseline", false, false, false}, {"+CRW", true, false, false}, {"+MHA-C", true, true, false},
    {"+MHA-S", true, true, true}};

TEST(Ablation, VariantsRunAndCostsIncrease) {
  auto sys = SensingSystem::simulation_preset(16, 16, 4, 1);
  auto y = simulate(synthetic_scene(16, 16, 4, 2), sys, {});
  std::int64_t prev = -1;
  for (const auto& [name, c, mc, ms] : kBreakdown) {
    auto arch = with_toggles(arch_of(16, 4, 4), c, mc, ms);
    auto model = Model::create(arch, 3);
    EXPECT_EQ(model.weights.contains("gfe.l0.w"), arch.uses_guide()) << name;
    EXPECT_EQ(model.weights.contains("stage0.enc0.wk3"), c) << name;
    EXPECT_EQ(model.weights.contains("stage0.enc0.p1"), mc) << name;
    EXPECT_EQ(model.weights.contains("stage0.enc0.p2"), ms) << name;
    auto w = randomized(model.weights, 4, 0.2);
    EXPECT_EQ(run_pipeline(y, sys, w, arch, {}).shape(), (Shape{16, 16, 4}));
    const auto f = flop_count(arch, 5).total();
    EXPECT_GT(f, prev) << name;
    prev = f;
  }
}

TEST(Flops, AnalyticCountMatchesInstrumentedCount) {
  for (const auto& [name, c, mc, ms] : kBreakdown) {
    auto arch = with_toggles(arch_of(16, 4, 4), c, mc, ms);
    arch.stages = 2;
    auto sys = SensingSystem::simulation_preset(16, 16, 4, 1);
    auto y = simulate(synthetic_scene(16, 16, 4, 2), sys, {});
    auto model = Model::create(arch, 3);
    MacCounter counter;
    run_pipeline(y, sys, model.weights, arch, {});
    EXPECT_EQ(counter.count(), flop_count(arch, 5).network()) << name;
  }
}

TEST(Flops, ComplexityAlgebra) {
  auto small = arch_of(32, 8, 4), big = small;
  big.width = 64;
  const BlockSpec grid{1, WindowMode::grid}, local{0, WindowMode::local};
  EXPECT_EQ(2 * denoiser_flops(small).conv, denoiser_flops(big).conv);
  EXPECT_EQ(4 * in2ab_flops(small, grid).attention_spatial, in2ab_flops(big, grid).attention_spatial);
  EXPECT_EQ(2 * in2ab_flops(small, local).attention_spatial, in2ab_flops(big, local).attention_spatial);

  std::vector<std::int64_t> by_stage;
  for (int k : {2, 3, 5, 9}) {
    auto a = arch_of(256, 28, 8);
    a.stages = k;
    by_stage.push_back(flop_count(a, 5).total());
  }
  for (std::size_t i = 1; i < by_stage.size(); ++i) EXPECT_LT(by_stage[i - 1], by_stage[i]);
  auto a = arch_of(32, 8, 4);
  EXPECT_LT(flop_count(a, 1).total(), flop_count(a, 10).total());
  EXPECT_EQ(flop_count(a, 1).network(), flop_count(a, 10).network());
}

}  // namespace
}  // namespace dcchi
