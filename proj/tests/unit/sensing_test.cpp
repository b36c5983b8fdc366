// Copyright 2026 The DCCHI Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numeric>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "dcchi/error.hpp"
#include "dcchi/gradcheck.hpp"
#include "dcchi/ops.hpp"
#include "dcchi/scenes.hpp"
#include "dcchi/sensing.hpp"
#include "test_util.hpp"

namespace dcchi {
namespace {

using testing::inner;
using testing::max_abs_diff;
using testing::norm2;
using testing::random_tensor;

SensingSystem make_system(std::int64_t h, std::int64_t w, std::int64_t c, int d, Dispersion dir,
                          std::uint64_t seed) {
  return SensingSystem(c, d, dir, CodedMask::bernoulli(h, w, seed),
                       std::vector<double>(static_cast<std::size_t>(c), 1.0 / static_cast<double>(c)));
}

std::vector<double> random_response(std::int64_t c, std::uint64_t seed) {
  auto v = random_tensor({c}, seed, 0.1, 1.0).to_vector();
  const double s = std::accumulate(v.begin(), v.end(), 0.0);
  for (auto& x : v) x /= s;
  return v;
}

// Dense Phi assembled one measurement row at a time straight from the
// definitions: a sensor pixel sees every (h, w, c) whose shifted position
// lands on it, weighted by the mask; a PAN pixel sees its own spectrum.
Eigen::MatrixXd dense_phi(const SensingSystem& sys) {
  const auto H = sys.height(), W = sys.width(), C = sys.bands();
  const int d = sys.step();
  const auto cs = sys.cassi_shape();
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(sys.measurement_length(), sys.scene_length());
  for (std::int64_t i = 0; i < cs[0]; ++i)
    for (std::int64_t j = 0; j < cs[1]; ++j) {
      const auto row = i * cs[1] + j;
      for (std::int64_t c = 0; c < C; ++c) {
        std::int64_t h = i, w = j;
        if (sys.direction() == Dispersion::right) w = j - c * d;
        else h = i - (C - 1 - c) * d;
        if (h < 0 || h >= H || w < 0 || w >= W) continue;
        A(row, (h * W + w) * C + c) = sys.mask().transmission[static_cast<std::size_t>(h * W + w)];
      }
    }
  for (std::int64_t p = 0; p < H * W; ++p)
    for (std::int64_t c = 0; c < C; ++c)
      A(sys.cassi_length() + p, p * C + c) = sys.pan_response()[static_cast<std::size_t>(c)];
  return A;
}

double adjoint_defect(std::span<const double> ax, std::span<const double> y, std::span<const double> x,
                      std::span<const double> aty) {
  return std::fabs(inner(ax, y) - inner(x, aty)) / (norm2(ax) * norm2(y));
}

TEST(ShiftCube, ZeroStepIsIdentity) {
  auto x = random_tensor({3, 4, 5}, 1);
  auto s = shift_cube(x, 0, Dispersion::right);
  EXPECT_EQ(s.shape(), x.shape());
  EXPECT_EQ(max_abs_diff(s, x), 0.0);
}

TEST(ShiftCube, TwoBandExample) {
  // bands [a,b] and [p,q] with a=1,b=2,p=3,q=4, stored (h,w,c) row-major
  auto x = Tensor::from_vector({1, 2, 2}, {1, 3, 2, 4});
  auto s = shift_cube(x, 1, Dispersion::right);
  ASSERT_EQ(s.shape(), (Shape{1, 3, 2}));
  std::vector<double> band0, band1;
  for (int w = 0; w < 3; ++w) {
    band0.push_back(s.at(w * 2));
    band1.push_back(s.at(w * 2 + 1));
  }
  EXPECT_EQ(band0, (std::vector<double>{1, 2, 0}));
  EXPECT_EQ(band1, (std::vector<double>{0, 3, 4}));
}

TEST(ShiftCube, AdjointIdentity) {
  for (auto dir : {Dispersion::right, Dispersion::up}) {
    auto x = random_tensor({5, 6, 3}, 2);
    auto fx = shift_cube(x, 2, dir);
    auto y = random_tensor(fx.shape(), 3);
    auto aty = shift_cube_adjoint(y, 5, 6, 2, dir);
    EXPECT_LE(std::fabs(inner(fx.values(), y.values()) - inner(x.values(), aty.values())), 1e-12);
  }
}

TEST(ShiftCube, UpDirectionMovesLaterBandsUp) {
  auto x = Tensor::from_vector({1, 1, 3}, {1, 2, 3});
  auto s = shift_cube(x, 1, Dispersion::up);
  ASSERT_EQ(s.shape(), (Shape{3, 1, 3}));
  EXPECT_EQ(s.at(2 * 3 + 0), 1.0);  // band 0 at the bottom row
  EXPECT_EQ(s.at(1 * 3 + 1), 2.0);
  EXPECT_EQ(s.at(0 * 3 + 2), 3.0);  // last band on top
}

TEST(CassiForward, OnesMaskSingleBandReturnsBand) {
  SensingSystem sys(1, 3, Dispersion::right, CodedMask::from_values(4, 5, std::vector<double>(20, 1.0)), {1.0});
  auto x = random_tensor({4, 5, 1}, 4);
  auto y = cassi_forward(x, sys);
  ASSERT_EQ(y.shape(), (Shape{4, 5}));
  EXPECT_EQ(max_abs_diff(y.values(), x.values()), 0.0);
}

TEST(CassiForward, ZeroMaskGivesZero) {
  SensingSystem sys(3, 2, Dispersion::right, CodedMask::from_values(4, 4, std::vector<double>(16, 0.0)),
                    {0.2, 0.3, 0.5});
  auto y = cassi_forward(random_tensor({4, 4, 3}, 5), sys);
  for (double v : y.values()) EXPECT_EQ(v, 0.0);
}

TEST(CassiForward, MatchesDenseOracleExactly) {
  for (auto dir : {Dispersion::right, Dispersion::up}) {
    auto sys = make_system(8, 8, 4, 2, dir, 11);
    auto A = dense_phi(sys);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      auto x = random_tensor({8, 8, 4}, 100 + seed);
      auto xv = x.to_vector();
      Eigen::VectorXd ref = A * Eigen::Map<const Eigen::VectorXd>(xv.data(), static_cast<Eigen::Index>(xv.size()));
      auto y = phi_apply(x, sys);
      ASSERT_EQ(y.numel(), ref.size());
      double worst = 0.0;
      for (Eigen::Index i = 0; i < ref.size(); ++i) worst = std::max(worst, std::fabs(ref[i] - y.at(i)));
      EXPECT_LE(worst, 1e-12);
    }
  }
}

TEST(CassiForward, DenseOracleBitwiseAtSmallSizes) {
  // Row-by-row products accumulate in the same order as the scatter kernel.
  for (std::int64_t hw : {2, 4, 8}) {
    auto sys = SensingSystem(3, 1, Dispersion::right, CodedMask::bernoulli(hw, hw, 7), random_response(3, 9));
    auto A = dense_phi(sys);
    auto x = random_tensor({hw, hw, 3}, 8);
    auto y = phi_apply(x, sys);
    for (Eigen::Index r = 0; r < A.rows(); ++r) {
      double acc = 0.0;
      for (Eigen::Index c = 0; c < A.cols(); ++c)
        if (A(r, c) != 0.0) acc += A(r, c) * x.at(c);
      EXPECT_EQ(acc, y.at(r)) << "row " << r;
    }
  }
}

TEST(CassiAdjoint, ZeroAndBroadcastCases) {
  auto sys = make_system(4, 4, 3, 2, Dispersion::right, 3);
  auto z = cassi_adjoint(Tensor::zeros(sys.cassi_shape()), sys);
  for (double v : z.values()) EXPECT_EQ(v, 0.0);

  SensingSystem one(1, 0, Dispersion::right, CodedMask::from_values(3, 3, std::vector<double>(9, 1.0)), {1.0});
  auto y = random_tensor({3, 3}, 6);
  EXPECT_EQ(max_abs_diff(cassi_adjoint(y, one).values(), y.values()), 0.0);
}

TEST(PanForward, UniformAndOneHotResponses) {
  auto sys = make_system(4, 4, 5, 2, Dispersion::right, 1);
  auto p = pan_forward(Tensor::full({4, 4, 5}, 0.37), sys);
  for (double v : p.values()) EXPECT_NEAR(v, 0.37, 1e-15);

  SensingSystem hot(3, 2, Dispersion::right, CodedMask::bernoulli(4, 4, 1), {0.0, 1.0, 0.0});
  auto x = random_tensor({4, 4, 3}, 2);
  auto band = pan_forward(x, hot);
  for (std::int64_t i = 0; i < 16; ++i) EXPECT_EQ(band.at(i), x.at(i * 3 + 1));
  // Round trip through the adjoint puts the image back on band 1 only.
  auto back = pan_adjoint(band, hot);
  for (std::int64_t i = 0; i < 16; ++i) {
    EXPECT_EQ(back.at(i * 3 + 0), 0.0);
    EXPECT_EQ(back.at(i * 3 + 1), band.at(i));
    EXPECT_EQ(back.at(i * 3 + 2), 0.0);
  }
  for (double v : pan_adjoint(Tensor::zeros({4, 4}), hot).values()) EXPECT_EQ(v, 0.0);
}

TEST(Phi, MeasurementLengths) {
  auto sys = make_system(32, 32, 4, 2, Dispersion::right, 0);
  EXPECT_EQ(sys.measurement_length(), 2240);
  EXPECT_EQ(sys.scene_length(), 4096);
  EXPECT_EQ(sys.cassi_shape(), (Shape{32, 38}));
  auto up = SensingSystem::real_preset(32, 32, 4, 0);
  EXPECT_EQ(up.cassi_shape(), (Shape{35, 32}));
  EXPECT_EQ(up.measurement_length(), 35 * 32 + 1024);
}

TEST(Phi, ZeroInZeroOut) {
  auto sys = make_system(6, 6, 3, 2, Dispersion::right, 0);
  for (double v : phi_apply(Tensor::zeros({6, 6, 3}), sys).values()) EXPECT_EQ(v, 0.0);
}

TEST(Phi, AdjointPropertyRandomized) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto dir = seed % 2 ? Dispersion::up : Dispersion::right;
    SensingSystem sys(3 + seed % 4, 1 + seed % 3, dir, CodedMask::bernoulli(4 + seed % 5, 3 + seed % 6, seed),
                      random_response(3 + seed % 4, seed + 50));
    auto x = random_tensor(sys.cube_shape(), 2 * seed);
    auto yc = random_tensor(sys.cassi_shape(), 2 * seed + 1);
    auto yp = random_tensor(sys.pan_shape(), 3 * seed + 7);
    auto y = random_tensor({sys.measurement_length()}, 5 * seed + 3);
    EXPECT_LE(adjoint_defect(cassi_forward(x, sys).values(), yc.values(), x.values(),
                             cassi_adjoint(yc, sys).values()), 1e-12);
    EXPECT_LE(adjoint_defect(pan_forward(x, sys).values(), yp.values(), x.values(),
                             pan_adjoint(yp, sys).values()), 1e-12);
    EXPECT_LE(adjoint_defect(phi_apply(x, sys).values(), y.values(), x.values(),
                             phi_adjoint(y, sys).values()), 1e-12);
  }
}

TEST(Phi, Linearity) {
  auto sys = make_system(6, 5, 4, 2, Dispersion::right, 4);
  auto x = random_tensor({6, 5, 4}, 1), z = random_tensor({6, 5, 4}, 2);
  const double a = 0.7, b = -1.3;
  auto lhs = phi_apply(ops::add(ops::scale(x, a), ops::scale(z, b)), sys);
  auto rhs = ops::add(ops::scale(phi_apply(x, sys), a), ops::scale(phi_apply(z, sys), b));
  EXPECT_LE(max_abs_diff(lhs, rhs), 1e-12);
}

TEST(Phi, NormalPlusShiftIsSpd) {
  auto sys = make_system(4, 4, 3, 2, Dispersion::right, 2);
  auto A = dense_phi(sys);
  for (double mu : {1e-6, 1e-2, 1.0}) {
    Eigen::MatrixXd M = A.transpose() * A + mu * Eigen::MatrixXd::Identity(A.cols(), A.cols());
    EXPECT_LE((M - M.transpose()).cwiseAbs().maxCoeff(), 0.0);
    Eigen::LLT<Eigen::MatrixXd> llt(M);
    EXPECT_EQ(llt.info(), Eigen::Success) << "mu=" << mu;
  }
  // Matrix-free normal operator agrees with the dense one.
  auto x = random_tensor({4, 4, 3}, 9);
  auto xv = x.to_vector();
  Eigen::VectorXd ref = A.transpose() * (A * Eigen::Map<const Eigen::VectorXd>(xv.data(), 48));
  auto n = phi_normal(x, sys);
  for (int i = 0; i < 48; ++i) EXPECT_NEAR(n.at(i), ref[i], 1e-12);
}

TEST(Phi, OperatorsDifferentiate) {
  auto sys = make_system(4, 4, 2, 1, Dispersion::up, 5);
  auto x = random_tensor({4, 4, 2}, 3);
  auto r = grad_check([&](const Tensor& t) { return phi_normal(phi_adjoint(phi_apply(t, sys), sys), sys); }, x);
  EXPECT_TRUE(r.passed) << r.summary();
}

TEST(Phi, LengthMismatchThrows) {
  auto sys = make_system(4, 4, 2, 1, Dispersion::right, 5);
  EXPECT_THROW(phi_apply(Tensor::zeros({4, 4, 3}), sys), DimensionError);
  EXPECT_THROW(phi_adjoint(Tensor::zeros({10}), sys), DimensionError);
  EXPECT_THROW(cassi_adjoint(Tensor::zeros({4, 4}), sys), DimensionError);
}

TEST(SensingSystem, RejectsBadConfiguration) {
  auto mask = CodedMask::bernoulli(4, 4, 0);
  EXPECT_THROW(SensingSystem(2, 1, Dispersion::right, mask, {0.5, 0.6}), InvalidArgument);
  EXPECT_THROW(SensingSystem(2, 1, Dispersion::right, mask, {-0.5, 1.5}), InvalidArgument);
  EXPECT_THROW(SensingSystem(2, 1, Dispersion::right, mask, {1.0}), DimensionError);
  EXPECT_THROW(SensingSystem(2, -1, Dispersion::right, mask, {0.5, 0.5}), InvalidArgument);
  EXPECT_THROW(CodedMask::from_values(2, 2, {0, 1, 2, 0}), InvalidArgument);
}

TEST(CodedMask, BernoulliIsSeededAndBinary) {
  auto a = CodedMask::bernoulli(16, 16, 42), b = CodedMask::bernoulli(16, 16, 42);
  auto c = CodedMask::bernoulli(16, 16, 43);
  EXPECT_EQ(a.transmission, b.transmission);
  EXPECT_NE(a.transmission, c.transmission);
  double open = 0.0;
  for (double v : a.transmission) {
    EXPECT_TRUE(v == 0.0 || v == 1.0);
    open += v;
  }
  EXPECT_GT(open, 64.0);
  EXPECT_LT(open, 192.0);
}

TEST(Simulate, ZeroNoiseEqualsForward) {
  auto sys = SensingSystem::simulation_preset(8, 8, 4, 1);
  auto x = synthetic_scene(8, 8, 4, 3);
  auto m = simulate(x, sys, {0.0, 0.0, 9});
  EXPECT_EQ(max_abs_diff(m.cassi, cassi_forward(x, sys)), 0.0);
  EXPECT_EQ(max_abs_diff(m.pan, pan_forward(x, sys)), 0.0);
  EXPECT_EQ(max_abs_diff(m.stacked(), phi_apply(x, sys)), 0.0);
}

TEST(Simulate, SeededAndReproducible) {
  auto sys = SensingSystem::simulation_preset(8, 8, 4, 1);
  auto x = synthetic_scene(8, 8, 4, 3);
  auto a = simulate(x, sys, {0.01, 0.02, 5}), b = simulate(x, sys, {0.01, 0.02, 5});
  auto c = simulate(x, sys, {0.01, 0.02, 6});
  EXPECT_EQ(a.cassi.to_vector(), b.cassi.to_vector());
  EXPECT_EQ(a.pan.to_vector(), b.pan.to_vector());
  EXPECT_NE(a.cassi.to_vector(), c.cassi.to_vector());
}

TEST(Simulate, EmpiricalNoiseLevel) {
  // 256 x 384 CASSI pixels and 256 x 384 PAN pixels: ~1e5 samples each.
  SensingSystem sys(1, 0, Dispersion::right, CodedMask::from_values(256, 384, std::vector<double>(256 * 384, 1.0)),
                    {1.0});
  auto x = Tensor::zeros({256, 384, 1});
  auto m = simulate(x, sys, {0.05, 0.02, 77});
  auto sample_std = [](std::span<const double> v) {
    double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    double ss = 0.0;
    for (double e : v) ss += (e - mean) * (e - mean);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
  };
  EXPECT_NEAR(sample_std(m.cassi.values()) / 0.05, 1.0, 0.02);
  EXPECT_NEAR(sample_std(m.pan.values()) / 0.02, 1.0, 0.02);
}

TEST(Simulate, Errors) {
  auto sys = SensingSystem::simulation_preset(8, 8, 4, 1);
  EXPECT_THROW(simulate(Tensor::zeros({8, 8, 4}), sys, {-0.1, 0.0, 0}), InvalidArgument);
  EXPECT_THROW(simulate(Tensor::zeros({8, 8, 3}), sys, {0.0, 0.0, 0}), DimensionError);
  MeasurementPair bad{Tensor::zeros({8, 8}), Tensor::zeros({8, 8})};
  EXPECT_THROW(validate_measurements(bad, sys), DimensionError);
}

TEST(Scenes, SyntheticSceneProperties) {
  auto a = synthetic_scene(16, 16, 8, 1), b = synthetic_scene(16, 16, 8, 1);
  EXPECT_EQ(a.to_vector(), b.to_vector());
  double peak = 0.0, low = 1.0;
  for (double v : a.values()) {
    peak = std::max(peak, v);
    low = std::min(low, v);
  }
  EXPECT_DOUBLE_EQ(peak, 1.0);
  EXPECT_GT(low, 0.0);
  EXPECT_NE(a.to_vector(), synthetic_scene(16, 16, 8, 2).to_vector());
}

}  // namespace
}  // namespace dcchi
