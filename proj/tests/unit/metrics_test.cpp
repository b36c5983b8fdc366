// Copyright 2026 The DCCHI Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "dcchi/error.hpp"
#include "dcchi/metrics.hpp"
#include "dcchi/scenes.hpp"
#include "dcchi/sensing.hpp"
#include "test_util.hpp"

namespace dcchi {
namespace {

using testing::random_tensor;

Tensor plus_noise(const Tensor& t, double sigma, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, sigma);
  auto v = t.to_vector();
  for (auto& x : v) x += n(rng);
  return Tensor::from_vector(t.shape(), std::move(v));
}

TEST(Psnr, ClosedForms) {
  auto ref = random_tensor({8, 8, 3}, 1, 0, 1);
  auto off = Tensor::from_vector(ref.shape(), [&] {
    auto v = ref.to_vector();
    for (auto& x : v) x += 0.1;
    return v;
  }());
  EXPECT_NEAR(psnr(off, ref), 20.0, 1e-9);
  EXPECT_TRUE(std::isinf(psnr(ref, ref)));
  EXPECT_GT(psnr(ref, ref), 0.0);
}

TEST(Psnr, MatchesTwoPassMse) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto a = random_tensor({7, 9, 4}, seed, 0, 1), b = random_tensor({7, 9, 4}, seed + 10, 0, 1);
    std::vector<double> d;
    for (std::int64_t i = 0; i < a.numel(); ++i) d.push_back(a.at(i) - b.at(i));
    double mse = 0.0;
    for (double e : d) mse += e * e;
    mse /= static_cast<double>(d.size());
    EXPECT_NEAR(psnr(a, b), -10.0 * std::log10(mse), 1e-9);
  }
}

TEST(Psnr, DecreasesWithNoise) {
  auto ref = synthetic_scene(32, 32, 4, 1);
  double prev = INFINITY;
  for (double s : {0.01, 0.02, 0.05}) {
    const double p = psnr(plus_noise(ref, s, 3), ref);
    EXPECT_LT(p, prev);
    prev = p;
  }
  EXPECT_THROW(psnr(ref, Tensor::zeros({32, 32, 3})), DimensionError);
}

Tensor wave(std::int64_t H, std::int64_t W, bool second) {
  std::vector<double> v;
  for (std::int64_t h = 0; h < H; ++h)
    for (std::int64_t w = 0; w < W; ++w) {
      const double hd = static_cast<double>(h), wd = static_cast<double>(w);
      v.push_back(second ? 0.5 + 0.35 * std::sin(0.31 * hd + 0.18 * wd + 0.4) + 0.05 * std::cos(0.9 * wd)
                         : 0.5 + 0.4 * std::sin(0.3 * hd + 0.2 * wd));
    }
  return Tensor::from_vector({H, W}, std::move(v));
}

TEST(Ssim, ReferenceValues) {
  // Frozen from scikit-image 0.25 structural_similarity with Gaussian
  // weights (sigma 1.5), population covariance and data_range 1.
  EXPECT_NEAR(ssim_image(wave(16, 16, false), wave(16, 16, true)), 0.8480747433478852, 1e-10);
  EXPECT_NEAR(ssim_image(wave(24, 20, false), wave(24, 20, true)), 0.838193887243838, 1e-10);
  auto x = wave(16, 16, false);
  auto flipped = Tensor::from_vector({16, 16}, [&] {
    auto v = x.to_vector();
    for (auto& e : v) e = 1.0 - e;
    return v;
  }());
  EXPECT_NEAR(ssim_image(x, flipped), -0.6626275891702638, 1e-10);
}

TEST(Ssim, IdentityConstantAndAnticorrelated) {
  auto x = synthetic_scene(16, 16, 4, 2);
  EXPECT_NEAR(ssim(x, x), 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(ssim(Tensor::full({12, 12, 2}, 0.3), Tensor::full({12, 12, 2}, 0.3)), 1.0);
  auto anti = Tensor::from_vector(x.shape(), [&] {
    auto v = x.to_vector();
    for (auto& e : v) e = 0.8 - e;
    return v;
  }());
  EXPECT_LT(ssim(x, anti), 0.1);
}

TEST(Ssim, SymmetricAndBoundedOnRandomPairs) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto a = random_tensor({14, 13, 3}, seed, 0, 1), b = plus_noise(a, 0.1, seed + 1);
    const double ab = ssim(a, b), ba = ssim(b, a);
    EXPECT_NEAR(ab, ba, 1e-12);
    EXPECT_LE(ab, 1.0);
    EXPECT_GE(ab, -1.0);
  }
}

TEST(Ssim, SmallImagesShrinkTheWindow) {
  auto a = random_tensor({8, 8, 2}, 1, 0, 1);
  EXPECT_NEAR(ssim(a, a), 1.0, 1e-12);
  EXPECT_LT(ssim(a, plus_noise(a, 0.2, 2)), 1.0);
}

TEST(Quality, ReportPerBand) {
  auto ref = synthetic_scene(16, 16, 3, 4);
  auto x = plus_noise(ref, 0.02, 5);
  auto q = quality(x, ref);
  ASSERT_EQ(q.band_ssim.size(), 3u);
  EXPECT_DOUBLE_EQ(q.psnr_db, psnr(x, ref));
  EXPECT_NEAR(q.ssim, (q.band_ssim[0] + q.band_ssim[1] + q.band_ssim[2]) / 3.0, 1e-15);
  EXPECT_NE(q.to_text().find("psnr_db="), std::string::npos);
}

// ---------------------------------------------------------------------------

TEST(CorrelationMap, ConstantSceneIsAllOnes) {
  for (auto k : {SimilarityKernel::gaussian, SimilarityKernel::cosine}) {
    CorrelationOptions o;
    o.kernel = k;
    o.window = 4;
    auto m = correlation_map(spectral_descriptors(constant_scene(8, 8, 3, 0.4)), o);
    EXPECT_EQ(m.shape(), (Shape{4, 16, 16}));
    for (double v : m.values()) EXPECT_NEAR(v, 1.0, 1e-15);
  }
}

TEST(CorrelationMap, TwoRegionBlockStructure) {
  auto scene = two_region_scene(4, 4, {0.9, 0.1, 0.2}, {0.1, 0.5, 0.9});
  for (auto k : {SimilarityKernel::gaussian, SimilarityKernel::cosine}) {
    CorrelationOptions o;
    o.kernel = k;
    o.window = 4;
    auto m = correlation_map(spectral_descriptors(scene), o);
    // Token t = 4 * row + col; columns 0-1 are the left region.
    auto at = [&](int i, int j) { return m.at(i * 16 + j); };
    EXPECT_LT(at(0, 2), at(0, 1));
    EXPECT_LT(at(5, 7), at(5, 4));
    EXPECT_DOUBLE_EQ(at(0, 12), 1.0);
  }
}

TEST(CorrelationMap, SymmetricUnitDiagonalBounded) {
  for (std::uint64_t seed = 0; seed < 10; ++seed)
    for (auto k : {SimilarityKernel::gaussian, SimilarityKernel::cosine}) {
      CorrelationOptions o;
      o.kernel = k;
      o.window = 4;
      auto m = correlation_map(spectral_descriptors(random_tensor({8, 12, 5}, seed, -1, 1)), o);
      const auto N = 16;
      for (std::int64_t b = 0; b < m.dim(0); ++b)
        for (int i = 0; i < N; ++i) {
          EXPECT_EQ(m.at((b * N + i) * N + i), 1.0);
          for (int j = 0; j < N; ++j) {
            EXPECT_EQ(m.at((b * N + i) * N + j), m.at((b * N + j) * N + i));
            EXPECT_LE(std::fabs(m.at((b * N + i) * N + j)), 1.0);
          }
        }
    }
}

TEST(CorrelationMap, Errors) {
  CorrelationOptions o;
  EXPECT_THROW(correlation_map(spectral_descriptors(Tensor::zeros({12, 12, 2})), o), DimensionError);
  EXPECT_THROW(patch_descriptors(Tensor::zeros({8, 8}), 2), ConfigError);
  EXPECT_THROW(parse_kernel("laplace"), ConfigError);
}

TEST(PatchDescriptors, EdgeReplication) {
  auto img = Tensor::from_vector({2, 2}, {1, 2, 3, 4});
  auto d = patch_descriptors(img, 3);
  ASSERT_EQ(d.shape(), (Shape{2, 2, 9}));
  EXPECT_EQ(std::vector<double>(d.values().begin(), d.values().begin() + 9),
            (std::vector<double>{1, 1, 2, 1, 1, 2, 3, 3, 4}));
}

TEST(ProxyCompare, FlatSpectraAgreeClosely) {
  auto base = synthetic_scene(32, 32, 1, 7);
  std::vector<double> v;
  for (double e : base.values())
    for (int c = 0; c < 6; ++c) v.push_back(e);
  auto cube = Tensor::from_vector({32, 32, 6}, std::move(v));
  auto sys = SensingSystem::simulation_preset(32, 32, 6, 1);
  auto r = proxy_compare(cube, pan_forward(cube, sys));
  EXPECT_GE(r.correlation, 0.99);
  EXPECT_TRUE(std::isfinite(r.rmse));
}

TEST(ProxyCompare, SmoothSceneSuite) {
  double mean = 0.0;
  for (std::uint64_t s = 0; s < 10; ++s) {
    auto cube = synthetic_scene(64, 64, 8, 1000 + s);
    auto sys = SensingSystem::simulation_preset(64, 64, 8, 1);
    auto r = proxy_compare(cube, pan_forward(cube, sys));
    EXPECT_LE(r.correlation, 1.0);
    mean += r.correlation / 10.0;
  }
  EXPECT_GE(mean, 0.9);
}

TEST(ProxyCompare, IdenticalStacksAreExact) {
  auto cube = constant_scene(8, 8, 2, 0.5);
  auto r = proxy_compare(cube, Tensor::full({8, 8}, 0.5));
  EXPECT_EQ(r.rmse, 0.0);
  EXPECT_EQ(r.correlation, 1.0);
  EXPECT_TRUE(std::isinf(r.psnr_db));
}

}  // namespace
}  // namespace dcchi
