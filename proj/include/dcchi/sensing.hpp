// Copyright 2026 The DCCHI Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dcchi/tensor.hpp"

namespace dcchi {

/// Which way the prism displaces successive bands on the CASSI sensor.
/// `right`: band c lands c*d columns to the right. `up`: band c lands
/// (C-1-c)*d rows below the top, i.e. later bands move upward.
enum class Dispersion { right, up };

const char* dispersion_name(Dispersion d);

struct CodedMask {
  std::int64_t height = 0;
  std::int64_t width = 0;
  std::vector<double> transmission;  // row-major, values in [0, 1]
  std::optional<std::uint64_t> seed;

  /// Binary Bernoulli(0.5) pattern regenerated deterministically from `seed`.
  static CodedMask bernoulli(std::int64_t height, std::int64_t width, std::uint64_t seed);
  static CodedMask from_values(std::int64_t height, std::int64_t width, std::vector<double> values);
};

/// Dual-camera sensing geometry: a CASSI branch (coded mask + dispersion)
/// and a panchromatic branch (per-band response weights summing to 1; an
/// all-zero response switches the PAN branch off).
///
/// Vectorization is row-major everywhere: the scene x is indexed
/// (h * W + w) * C + c, the CASSI image row-major over its canvas, and the
/// stacked measurement is [y_cassi; y_pan].
class SensingSystem {
 public:
  SensingSystem(std::int64_t bands, int step, Dispersion direction, CodedMask mask,
                std::vector<double> pan_response);

  /// d = 2, dispersion to the right, Bernoulli mask, uniform response.
  static SensingSystem simulation_preset(std::int64_t height, std::int64_t width,
                                         std::int64_t bands, std::uint64_t mask_seed);
  /// d = 1, dispersion upward, Bernoulli mask, uniform response.
  static SensingSystem real_preset(std::int64_t height, std::int64_t width, std::int64_t bands,
                                   std::uint64_t mask_seed);

  std::int64_t height() const { return mask_.height; }
  std::int64_t width() const { return mask_.width; }
  std::int64_t bands() const { return bands_; }
  int step() const { return step_; }
  Dispersion direction() const { return direction_; }
  const CodedMask& mask() const { return mask_; }
  const std::vector<double>& pan_response() const { return response_; }

  Shape cube_shape() const { return {height(), width(), bands()}; }
  Shape cassi_shape() const;
  Shape pan_shape() const { return {height(), width()}; }
  std::int64_t cassi_length() const { return shape_numel(cassi_shape()); }
  std::int64_t pan_length() const { return height() * width(); }
  /// M = |y_cassi| + |y_pan|; equals H(W + d(C-1)) + HW for right dispersion.
  std::int64_t measurement_length() const { return cassi_length() + pan_length(); }
  /// N = HWC.
  std::int64_t scene_length() const { return height() * width() * bands(); }

  // Matrix-free kernels on flat buffers. Outputs are overwritten.
  void cassi_forward(std::span<const double> x, std::span<double> y) const;
  void cassi_adjoint(std::span<const double> y, std::span<double> x) const;
  void pan_forward(std::span<const double> x, std::span<double> y) const;
  void pan_adjoint(std::span<const double> y, std::span<double> x) const;
  void phi_apply(std::span<const double> x, std::span<double> y) const;
  void phi_adjoint(std::span<const double> y, std::span<double> x) const;
  /// x -> Phi^T Phi x.
  void normal_apply(std::span<const double> x, std::span<double> out) const;

 private:
  std::int64_t canvas_index(std::int64_t h, std::int64_t w, std::int64_t c) const;

  std::int64_t bands_;
  int step_;
  Dispersion direction_;
  CodedMask mask_;
  std::vector<double> response_;
};

/// Band c translated by c*d along the dispersion axis into a zero canvas:
/// [H, W + d(C-1), C] for `right`, [H + d(C-1), W, C] for `up`.
Tensor shift_cube(const Tensor& x, int step, Dispersion direction);
Tensor shift_cube_adjoint(const Tensor& canvas, std::int64_t height, std::int64_t width, int step,
                          Dispersion direction);

// Differentiable operator wrappers. Inputs may be cube-shaped or flat with
// the right number of values; a mismatch throws DimensionError.
Tensor cassi_forward(const Tensor& x, const SensingSystem& sys);  // -> cassi_shape()
Tensor cassi_adjoint(const Tensor& y, const SensingSystem& sys);  // -> cube_shape()
Tensor pan_forward(const Tensor& x, const SensingSystem& sys);    // -> [H, W]
Tensor pan_adjoint(const Tensor& y, const SensingSystem& sys);    // -> cube_shape()
Tensor phi_apply(const Tensor& x, const SensingSystem& sys);      // -> [M]
Tensor phi_adjoint(const Tensor& y, const SensingSystem& sys);    // -> cube_shape()
Tensor phi_normal(const Tensor& x, const SensingSystem& sys);     // -> cube_shape()

struct NoiseModel {
  double sigma_c = 0.0;
  double sigma_p = 0.0;
  std::uint64_t seed = 0;
};

struct MeasurementPair {
  Tensor cassi;  // cassi_shape()
  Tensor pan;    // [H, W]
  double noise_sigma_c = 0.0;
  double noise_sigma_p = 0.0;

  /// [y_cassi; y_pan] as a flat [M] tensor.
  Tensor stacked() const;
};

/// Noise-free branches plus seeded additive Gaussian noise. Negative sigma
/// throws InvalidArgument.
MeasurementPair simulate(const Tensor& x, const SensingSystem& sys, const NoiseModel& noise);

/// Checks that a measurement pair matches the geometry of `sys`.
void validate_measurements(const MeasurementPair& y, const SensingSystem& sys);

}  // namespace dcchi
