// Copyright 2026 The DCCHI Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "dcchi/in2set.hpp"
#include "dcchi/params.hpp"
#include "dcchi/sensing.hpp"
#include "dcchi/solver.hpp"

namespace dcchi {

/// Per-stage penalty mu_k and denoiser level sigma_k (single-value tensors,
/// so that they carry gradients back to the InitialNet).
struct StageParams {
  std::vector<Tensor> mu;
  std::vector<Tensor> sigma;

  std::vector<double> mu_values() const;
  std::vector<double> sigma_values() const;
};

/// Band-wise unshifted CASSI image: every sensor pixel is divided by the
/// number of open mask positions that land on it, then band c reads the
/// canvas at its own shift. This is the un-learned input of the InitialNet.
Tensor adjoint_init(const MeasurementPair& y, const SensingSystem& sys);

struct InitialOutput {
  Tensor x0;
  StageParams params;
};

/// x0 = conv3x3(adjoint_init(y)); (mu, sigma) = softplus(FC2(gelu(FC1(mean y_c)))).
InitialOutput initial_net(const MeasurementPair& y, const SensingSystem& sys, const ParamStore& w,
                          const ArchConfig& arch);
void init_initial_net(ParamStore& w, const ArchConfig& arch, std::mt19937_64& rng);

/// Initial mu and sigma produced by a fresh InitialNet.
inline constexpr double kInitialMu = 0.1;
inline constexpr double kInitialSigma = 0.05;

struct Model {
  ArchConfig arch;
  ParamStore weights;

  /// Fresh weights: InitialNet, shared GFE and one denoiser per stage.
  static Model create(const ArchConfig& arch, std::uint64_t seed);
};

std::string stage_prefix(int k);

struct PipelineOptions {
  CgConfig cg;
  /// Replace the InitialNet's stage parameters (used by oracle checks).
  std::optional<std::vector<double>> fixed_mu;
  std::optional<std::vector<double>> fixed_sigma;
};

struct PipelineTrace {
  Tensor x0;
  std::vector<Tensor> x;  // data-step outputs
  std::vector<Tensor> z;  // denoiser outputs
  std::vector<double> mu;
  std::vector<double> sigma;
  std::vector<int> cg_iterations;
};

/// K stages of x = data_step(z), z = denoise(x) starting from z = x0.
/// The PAN pyramid is computed once and shared by all stages.
Tensor run_pipeline(const MeasurementPair& y, const SensingSystem& sys, const ParamStore& w, const ArchConfig& arch,
                    const PipelineOptions& options, PipelineTrace* trace = nullptr);

struct TrainConfig {
  int steps = 200;
  double lr = 2e-3;
  double eta_min = 0.0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  int batch_size = 1;  // cubes per step, each with its own noise draw
  double noise_sigma_c = 0.0;
  double noise_sigma_p = 0.0;
  std::uint64_t seed = 0;
  CgConfig cg;
  std::function<void(int, double)> on_step;  // (step, loss)
};

struct TrainResult {
  ParamStore weights;
  std::vector<double> losses;
};

/// Cosine-annealed learning rate for step t of `steps`.
double cosine_lr(const TrainConfig& cfg, int t);

/// Minimizes mean |run_pipeline(simulate(cube)) - cube| with Adam, cycling
/// through the dataset batch_size cubes per step. A non-finite loss throws
/// NumericError naming the step.
TrainResult train(const std::vector<Tensor>& dataset, const SensingSystem& sys, const ArchConfig& arch,
                  const ParamStore& initial, const TrainConfig& cfg);

/// Mean absolute error, the training loss.
Tensor l1_loss(const Tensor& prediction, const Tensor& target);

}  // namespace dcchi
