// Copyright 2026 The DCCHI Authors
// SPDX-License-Identifier: Apache-2.0

#include "dcchi/sensing.hpp"

#include <cmath>
#include <random>

#include "dcchi/error.hpp"
#include "dcchi/ops.hpp"

namespace dcchi {

const char* dispersion_name(Dispersion d) { return d == Dispersion::right ? "right" : "up"; }

CodedMask CodedMask::bernoulli(std::int64_t height, std::int64_t width, std::uint64_t seed) {
  if (height <= 0 || width <= 0) throw DimensionError("mask extents must be positive");
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5);
  CodedMask m;
  m.height = height;
  m.width = width;
  m.seed = seed;
  m.transmission.resize(static_cast<std::size_t>(height * width));
  for (auto& v : m.transmission) v = coin(rng) ? 1.0 : 0.0;
  return m;
}

CodedMask CodedMask::from_values(std::int64_t height, std::int64_t width, std::vector<double> values) {
  if (height <= 0 || width <= 0) throw DimensionError("mask extents must be positive");
  if (static_cast<std::int64_t>(values.size()) != height * width)
    throw DimensionError("mask has " + std::to_string(values.size()) + " values, expected " +
                         std::to_string(height * width));
  for (double v : values)
    if (!(v >= 0.0 && v <= 1.0)) throw InvalidArgument("mask transmission must lie in [0, 1]");
  CodedMask m;
  m.height = height;
  m.width = width;
  m.transmission = std::move(values);
  return m;
}

SensingSystem::SensingSystem(std::int64_t bands, int step, Dispersion direction, CodedMask mask,
                             std::vector<double> pan_response)
    : bands_(bands), step_(step), direction_(direction), mask_(std::move(mask)),
      response_(std::move(pan_response)) {
  if (bands_ <= 0) throw DimensionError("band count must be positive");
  if (step_ < 0) throw InvalidArgument("dispersion step must be non-negative");
  if (mask_.height <= 0 || mask_.width <= 0 ||
      static_cast<std::int64_t>(mask_.transmission.size()) != mask_.height * mask_.width)
    throw DimensionError("coded mask is inconsistent with its extents");
  for (double v : mask_.transmission)
    if (!(v >= 0.0 && v <= 1.0)) throw InvalidArgument("mask transmission must lie in [0, 1]");
  if (static_cast<std::int64_t>(response_.size()) != bands_)
    throw DimensionError("pan response has " + std::to_string(response_.size()) +
                         " weights for " + std::to_string(bands_) + " bands");
  double total = 0.0;
  for (double w : response_) {
    if (!(w >= 0.0)) throw InvalidArgument("pan response weights must be non-negative");
    total += w;
  }
  // An all-zero response blanks the PAN branch; anything else must integrate to 1.
  if (total != 0.0 && std::fabs(total - 1.0) > 1e-9)
    throw InvalidArgument("pan response weights must sum to 1 (or all be zero)");
}

SensingSystem SensingSystem::simulation_preset(std::int64_t height, std::int64_t width,
                                               std::int64_t bands, std::uint64_t mask_seed) {
  return SensingSystem(bands, 2, Dispersion::right, CodedMask::bernoulli(height, width, mask_seed),
                       std::vector<double>(static_cast<std::size_t>(bands), 1.0 / static_cast<double>(bands)));
}

SensingSystem SensingSystem::real_preset(std::int64_t height, std::int64_t width,
                                         std::int64_t bands, std::uint64_t mask_seed) {
  return SensingSystem(bands, 1, Dispersion::up, CodedMask::bernoulli(height, width, mask_seed),
                       std::vector<double>(static_cast<std::size_t>(bands), 1.0 / static_cast<double>(bands)));
}

Shape SensingSystem::cassi_shape() const {
  const std::int64_t spread = static_cast<std::int64_t>(step_) * (bands_ - 1);
  if (direction_ == Dispersion::right) return {height(), width() + spread};
  return {height() + spread, width()};
}

std::int64_t SensingSystem::canvas_index(std::int64_t h, std::int64_t w, std::int64_t c) const {
  if (direction_ == Dispersion::right) {
    const std::int64_t cols = width() + static_cast<std::int64_t>(step_) * (bands_ - 1);
    return h * cols + w + c * step_;
  }
  return (h + (bands_ - 1 - c) * step_) * width() + w;
}

namespace {
void check_len(std::size_t got, std::int64_t want, const char* what) {
  if (static_cast<std::int64_t>(got) != want)
    throw DimensionError(std::string(what) + ": length " + std::to_string(got) + " != expected " +
                         std::to_string(want));
}
}  // namespace

// Contributions are scattered in scene order (h, w, c) so that each sensor
// pixel accumulates in the same order as a dense row-by-row product.
void SensingSystem::cassi_forward(std::span<const double> x, std::span<double> y) const {
  check_len(x.size(), scene_length(), "cassi_forward input");
  check_len(y.size(), cassi_length(), "cassi_forward output");
  std::fill(y.begin(), y.end(), 0.0);
  const auto& m = mask_.transmission;
  for (std::int64_t h = 0; h < height(); ++h)
    for (std::int64_t w = 0; w < width(); ++w) {
      const double mv = m[static_cast<std::size_t>(h * width() + w)];
      const double* px = x.data() + (h * width() + w) * bands_;
      for (std::int64_t c = 0; c < bands_; ++c) y[static_cast<std::size_t>(canvas_index(h, w, c))] += mv * px[c];
    }
}

void SensingSystem::cassi_adjoint(std::span<const double> y, std::span<double> x) const {
  check_len(y.size(), cassi_length(), "cassi_adjoint input");
  check_len(x.size(), scene_length(), "cassi_adjoint output");
  const auto& m = mask_.transmission;
  for (std::int64_t h = 0; h < height(); ++h)
    for (std::int64_t w = 0; w < width(); ++w) {
      const double mv = m[static_cast<std::size_t>(h * width() + w)];
      double* px = x.data() + (h * width() + w) * bands_;
      for (std::int64_t c = 0; c < bands_; ++c) px[c] = mv * y[static_cast<std::size_t>(canvas_index(h, w, c))];
    }
}

void SensingSystem::pan_forward(std::span<const double> x, std::span<double> y) const {
  check_len(x.size(), scene_length(), "pan_forward input");
  check_len(y.size(), pan_length(), "pan_forward output");
  for (std::int64_t p = 0; p < pan_length(); ++p) {
    const double* px = x.data() + p * bands_;
    double acc = 0.0;
    for (std::int64_t c = 0; c < bands_; ++c) acc += response_[static_cast<std::size_t>(c)] * px[c];
    y[static_cast<std::size_t>(p)] = acc;
  }
}

void SensingSystem::pan_adjoint(std::span<const double> y, std::span<double> x) const {
  check_len(y.size(), pan_length(), "pan_adjoint input");
  check_len(x.size(), scene_length(), "pan_adjoint output");
  for (std::int64_t p = 0; p < pan_length(); ++p) {
    double* px = x.data() + p * bands_;
    for (std::int64_t c = 0; c < bands_; ++c) px[c] = response_[static_cast<std::size_t>(c)] * y[static_cast<std::size_t>(p)];
  }
}

void SensingSystem::phi_apply(std::span<const double> x, std::span<double> y) const {
  check_len(y.size(), measurement_length(), "phi_apply output");
  cassi_forward(x, y.subspan(0, static_cast<std::size_t>(cassi_length())));
  pan_forward(x, y.subspan(static_cast<std::size_t>(cassi_length())));
}

void SensingSystem::phi_adjoint(std::span<const double> y, std::span<double> x) const {
  check_len(y.size(), measurement_length(), "phi_adjoint input");
  check_len(x.size(), scene_length(), "phi_adjoint output");
  cassi_adjoint(y.subspan(0, static_cast<std::size_t>(cassi_length())), x);
  std::vector<double> pan_part(x.size());
  pan_adjoint(y.subspan(static_cast<std::size_t>(cassi_length())), pan_part);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += pan_part[i];
}

void SensingSystem::normal_apply(std::span<const double> x, std::span<double> out) const {
  std::vector<double> y(static_cast<std::size_t>(measurement_length()));
  phi_apply(x, y);
  phi_adjoint(y, out);
}

Tensor shift_cube(const Tensor& x, int step, Dispersion direction) {
  if (x.rank() != 3) throw DimensionError("shift_cube expects [H, W, C], got " + shape_str(x.shape()));
  if (step < 0) throw InvalidArgument("dispersion step must be non-negative");
  const std::int64_t H = x.dim(0), W = x.dim(1), C = x.dim(2);
  const std::int64_t spread = step * (C - 1);
  const Shape out = direction == Dispersion::right ? Shape{H, W + spread, C} : Shape{H + spread, W, C};
  auto index = [=](std::int64_t h, std::int64_t w, std::int64_t c) {
    if (direction == Dispersion::right) return (h * (W + spread) + w + c * step) * C + c;
    return ((h + (C - 1 - c) * step) * W + w) * C + c;
  };
  auto fwd = [=](std::span<const double> v) {
    std::vector<double> o(static_cast<std::size_t>(shape_numel(out)), 0.0);
    for (std::int64_t h = 0; h < H; ++h)
      for (std::int64_t w = 0; w < W; ++w)
        for (std::int64_t c = 0; c < C; ++c)
          o[static_cast<std::size_t>(index(h, w, c))] = v[static_cast<std::size_t>((h * W + w) * C + c)];
    return o;
  };
  auto adj = [=](std::span<const double> g) {
    std::vector<double> o(static_cast<std::size_t>(H * W * C));
    for (std::int64_t h = 0; h < H; ++h)
      for (std::int64_t w = 0; w < W; ++w)
        for (std::int64_t c = 0; c < C; ++c)
          o[static_cast<std::size_t>((h * W + w) * C + c)] = g[static_cast<std::size_t>(index(h, w, c))];
    return o;
  };
  return ops::linear_map(x, out, fwd, adj, "shift_cube");
}

Tensor shift_cube_adjoint(const Tensor& canvas, std::int64_t height, std::int64_t width, int step,
                          Dispersion direction) {
  if (canvas.rank() != 3) throw DimensionError("shift_cube_adjoint expects a 3-D canvas");
  const std::int64_t C = canvas.dim(2);
  if (height <= 0 || width <= 0 || step < 0) throw InvalidArgument("invalid shift geometry");
  const std::int64_t extra = step * (C - 1);
  const Shape expect = direction == Dispersion::right ? Shape{height, width + extra, C}
                                                      : Shape{height + extra, width, C};
  if (expect != canvas.shape())
    throw DimensionError("canvas " + shape_str(canvas.shape()) + " does not match " +
                         shape_str(expect));
  const std::int64_t spread = step * (C - 1);
  auto index = [=](std::int64_t h, std::int64_t w, std::int64_t c) {
    if (direction == Dispersion::right) return (h * (width + spread) + w + c * step) * C + c;
    return ((h + (C - 1 - c) * step) * width + w) * C + c;
  };
  const Shape cube{height, width, C};
  const Shape cshape = canvas.shape();
  auto gather = [=](std::span<const double> g) {
    std::vector<double> o(static_cast<std::size_t>(shape_numel(cube)));
    for (std::int64_t h = 0; h < height; ++h)
      for (std::int64_t w = 0; w < width; ++w)
        for (std::int64_t c = 0; c < C; ++c)
          o[static_cast<std::size_t>((h * width + w) * C + c)] = g[static_cast<std::size_t>(index(h, w, c))];
    return o;
  };
  auto scatter = [=](std::span<const double> v) {
    std::vector<double> o(static_cast<std::size_t>(shape_numel(cshape)), 0.0);
    for (std::int64_t h = 0; h < height; ++h)
      for (std::int64_t w = 0; w < width; ++w)
        for (std::int64_t c = 0; c < C; ++c)
          o[static_cast<std::size_t>(index(h, w, c))] = v[static_cast<std::size_t>((h * width + w) * C + c)];
    return o;
  };
  return ops::linear_map(canvas, cube, gather, scatter, "shift_cube_adjoint");
}

namespace {

void expect_numel(const Tensor& t, std::int64_t n, const char* what) {
  if (t.numel() != n)
    throw DimensionError(std::string(what) + ": input " + shape_str(t.shape()) + " has " +
                         std::to_string(t.numel()) + " values, expected " + std::to_string(n));
}

using Kernel = void (SensingSystem::*)(std::span<const double>, std::span<double>) const;

Tensor wrap(const Tensor& x, const SensingSystem& sys, std::int64_t in_len, Shape out_shape,
            Kernel fwd, Kernel adj, std::int64_t adj_out_len, const char* name) {
  expect_numel(x, in_len, name);
  const auto out_len = shape_numel(out_shape);
  // The operator is captured by value so recorded graphs outlive the caller's system.
  auto owned = std::make_shared<const SensingSystem>(sys);
  auto f = [owned, fwd, out_len](std::span<const double> v) {
    std::vector<double> o(static_cast<std::size_t>(out_len));
    ((*owned).*fwd)(v, o);
    return o;
  };
  auto a = [owned, adj, adj_out_len](std::span<const double> g) {
    std::vector<double> o(static_cast<std::size_t>(adj_out_len));
    ((*owned).*adj)(g, o);
    return o;
  };
  return ops::linear_map(x, out_shape, f, a, name);
}

}  // namespace

Tensor cassi_forward(const Tensor& x, const SensingSystem& sys) {
  return wrap(x, sys, sys.scene_length(), sys.cassi_shape(), &SensingSystem::cassi_forward,
              &SensingSystem::cassi_adjoint, sys.scene_length(), "cassi_forward");
}

Tensor cassi_adjoint(const Tensor& y, const SensingSystem& sys) {
  return wrap(y, sys, sys.cassi_length(), sys.cube_shape(), &SensingSystem::cassi_adjoint,
              &SensingSystem::cassi_forward, sys.cassi_length(), "cassi_adjoint");
}

Tensor pan_forward(const Tensor& x, const SensingSystem& sys) {
  return wrap(x, sys, sys.scene_length(), sys.pan_shape(), &SensingSystem::pan_forward,
              &SensingSystem::pan_adjoint, sys.scene_length(), "pan_forward");
}

Tensor pan_adjoint(const Tensor& y, const SensingSystem& sys) {
  return wrap(y, sys, sys.pan_length(), sys.cube_shape(), &SensingSystem::pan_adjoint,
              &SensingSystem::pan_forward, sys.pan_length(), "pan_adjoint");
}

Tensor phi_apply(const Tensor& x, const SensingSystem& sys) {
  return wrap(x, sys, sys.scene_length(), {sys.measurement_length()}, &SensingSystem::phi_apply,
              &SensingSystem::phi_adjoint, sys.scene_length(), "phi_apply");
}

Tensor phi_adjoint(const Tensor& y, const SensingSystem& sys) {
  return wrap(y, sys, sys.measurement_length(), sys.cube_shape(), &SensingSystem::phi_adjoint,
              &SensingSystem::phi_apply, sys.measurement_length(), "phi_adjoint");
}

Tensor phi_normal(const Tensor& x, const SensingSystem& sys) {
  return wrap(x, sys, sys.scene_length(), sys.cube_shape(), &SensingSystem::normal_apply,
              &SensingSystem::normal_apply, sys.scene_length(), "phi_normal");
}

Tensor MeasurementPair::stacked() const {
  auto v = cassi.to_vector();
  auto p = pan.values();
  v.insert(v.end(), p.begin(), p.end());
  const auto n = static_cast<std::int64_t>(v.size());
  return Tensor::from_vector({n}, std::move(v));
}

void validate_measurements(const MeasurementPair& y, const SensingSystem& sys) {
  if (!y.cassi.defined() || !y.pan.defined()) throw InvalidArgument("measurement pair is incomplete");
  if (y.cassi.shape() != sys.cassi_shape())
    throw DimensionError("CASSI image " + shape_str(y.cassi.shape()) + " does not match sensing geometry " +
                         shape_str(sys.cassi_shape()));
  if (y.pan.shape() != sys.pan_shape())
    throw DimensionError("PAN image " + shape_str(y.pan.shape()) + " does not match sensing geometry " +
                         shape_str(sys.pan_shape()));
}

MeasurementPair simulate(const Tensor& x, const SensingSystem& sys, const NoiseModel& noise) {
  if (noise.sigma_c < 0.0 || noise.sigma_p < 0.0) throw InvalidArgument("noise sigma must be non-negative");
  if (x.shape() != sys.cube_shape())
    throw DimensionError("scene " + shape_str(x.shape()) + " does not match sensing geometry " +
                         shape_str(sys.cube_shape()));
  std::vector<double> yc(static_cast<std::size_t>(sys.cassi_length()));
  std::vector<double> yp(static_cast<std::size_t>(sys.pan_length()));
  sys.cassi_forward(x.values(), yc);
  sys.pan_forward(x.values(), yp);
  std::mt19937_64 rng(noise.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  if (noise.sigma_c > 0.0)
    for (auto& v : yc) v += noise.sigma_c * gauss(rng);
  if (noise.sigma_p > 0.0)
    for (auto& v : yp) v += noise.sigma_p * gauss(rng);
  MeasurementPair out;
  out.cassi = Tensor::from_vector(sys.cassi_shape(), std::move(yc), x.dtype());
  out.pan = Tensor::from_vector(sys.pan_shape(), std::move(yp), x.dtype());
  out.noise_sigma_c = noise.sigma_c;
  out.noise_sigma_p = noise.sigma_p;
  return out;
}

}  // namespace dcchi
