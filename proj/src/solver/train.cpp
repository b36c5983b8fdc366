// Copyright 2026 The DCCHI Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>

#include "dcchi/error.hpp"
#include "dcchi/ops.hpp"
#include "dcchi/pipeline.hpp"

namespace dcchi {

Tensor l1_loss(const Tensor& prediction, const Tensor& target) {
  return ops::mean(ops::abs(ops::sub(prediction, target)));
}

double cosine_lr(const TrainConfig& cfg, int t) {
  if (cfg.steps <= 1) return cfg.lr;
  const double phase = static_cast<double>(t) / static_cast<double>(cfg.steps);
  return cfg.eta_min + 0.5 * (cfg.lr - cfg.eta_min) * (1.0 + std::cos(std::numbers::pi * phase));
}

TrainResult train(const std::vector<Tensor>& dataset, const SensingSystem& sys, const ArchConfig& arch,
                  const ParamStore& initial, const TrainConfig& cfg) {
  if (dataset.empty()) throw InvalidArgument("train: empty dataset");
  if (cfg.steps < 0) throw ConfigError("train: steps must be non-negative");
  if (cfg.lr < 0.0) throw ConfigError("train: learning rate must be non-negative");
  if (cfg.batch_size < 1) throw ConfigError("train: batch size must be at least 1");
  for (const auto& cube : dataset)
    if (cube.shape() != sys.cube_shape())
      throw DimensionError("train: cube " + shape_str(cube.shape()) + " does not match sensing geometry " +
                           shape_str(sys.cube_shape()));

  TrainResult result;
  result.weights = initial.detached();
  std::map<std::string, std::vector<double>> m1, m2;
  for (const auto& [name, t] : result.weights.tensors()) {
    m1[name].assign(static_cast<std::size_t>(t.numel()), 0.0);
    m2[name].assign(static_cast<std::size_t>(t.numel()), 0.0);
  }

  for (int step = 0; step < cfg.steps; ++step) {
    // Minibatch: cubes step*B .. step*B + B - 1 (mod n), loss averaged.
    auto live = result.weights.as_trainable();
    const int batch = cfg.batch_size;
    Tensor loss;
    for (int j = 0; j < batch; ++j) {
      const auto index = static_cast<std::uint64_t>(step) * static_cast<std::uint64_t>(batch) + static_cast<std::uint64_t>(j);
      const auto& cube = dataset[index % dataset.size()];
      const NoiseModel noise{cfg.noise_sigma_c, cfg.noise_sigma_p, cfg.seed * 1000003ULL + index};
      auto term = l1_loss(run_pipeline(simulate(cube, sys, noise), sys, live, arch, PipelineOptions{cfg.cg, {}, {}}), cube);
      loss = j == 0 ? term : ops::add(loss, term);
    }
    if (batch > 1) loss = ops::scale(loss, 1.0 / batch);
    const double lv = loss.item();
    if (!std::isfinite(lv)) throw NumericError("training loss became non-finite at step " + std::to_string(step));
    backward(loss);
    result.losses.push_back(lv);
    if (cfg.on_step) cfg.on_step(step, lv);

    const double lr = cosine_lr(cfg, step);
    const double c1 = 1.0 - std::pow(cfg.beta1, step + 1), c2 = 1.0 - std::pow(cfg.beta2, step + 1);
    ParamStore next;
    for (const auto& [name, t] : live.tensors()) {
      auto g = t.grad();
      auto v = t.to_vector();
      if (g.defined()) {
        auto& a = m1[name];
        auto& b = m2[name];
        const auto gv = g.values();
        for (std::size_t i = 0; i < v.size(); ++i) {
          a[i] = cfg.beta1 * a[i] + (1.0 - cfg.beta1) * gv[i];
          b[i] = cfg.beta2 * b[i] + (1.0 - cfg.beta2) * gv[i] * gv[i];
          v[i] -= lr * (a[i] / c1) / (std::sqrt(b[i] / c2) + cfg.eps);
        }
      }
      next.set(name, Tensor::from_vector(t.shape(), std::move(v), t.dtype()));
    }
    result.weights = std::move(next);
  }
  return result;
}

}  // namespace dcchi
