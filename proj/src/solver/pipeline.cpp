// Copyright 2026 The DCCHI Authors
// SPDX-License-Identifier: Apache-2.0

#include "dcchi/error.hpp"
#include "dcchi/ops.hpp"
#include "dcchi/pipeline.hpp"

namespace dcchi {

std::string stage_prefix(int k) { return "stage" + std::to_string(k) + "."; }

Model Model::create(const ArchConfig& arch, std::uint64_t seed) {
  arch.validate();
  Model m;
  m.arch = arch;
  std::mt19937_64 rng(seed);
  init_initial_net(m.weights, arch, rng);
  if (arch.denoiser == DenoiserKind::in2set) {
    if (arch.uses_guide()) init_gfe(m.weights, arch, rng);
    for (int k = 0; k < arch.stages; ++k) init_denoiser(m.weights, stage_prefix(k), arch, rng);
  }
  return m;
}

Tensor run_pipeline(const MeasurementPair& y, const SensingSystem& sys, const ParamStore& w, const ArchConfig& arch,
                    const PipelineOptions& options, PipelineTrace* trace) {
  arch.validate();
  validate_measurements(y, sys);
  auto init = initial_net(y, sys, w, arch);
  auto check_override = [&](const std::optional<std::vector<double>>& v, const char* what) {
    if (v && static_cast<int>(v->size()) != arch.stages)
      throw ConfigError(std::string(what) + " override has " + std::to_string(v->size()) + " entries for " +
                        std::to_string(arch.stages) + " stages");
  };
  check_override(options.fixed_mu, "mu");
  check_override(options.fixed_sigma, "sigma");

  GuidedPyramid pyramid;
  if (arch.denoiser == DenoiserKind::in2set && arch.uses_guide()) pyramid = gfe(y.pan, w, arch);

  if (trace) *trace = PipelineTrace{init.x0, {}, {}, {}, {}, {}};
  Tensor z = init.x0;
  for (int k = 0; k < arch.stages; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    Tensor mu = options.fixed_mu ? Tensor::scalar((*options.fixed_mu)[ku]) : init.params.mu[ku];
    Tensor sigma = options.fixed_sigma ? Tensor::scalar((*options.fixed_sigma)[ku]) : init.params.sigma[ku];
    auto step = data_step(y, z, mu, sys, options.cg);
    z = denoise(step.x, sigma, pyramid, w, stage_prefix(k), arch);
    if (trace) {
      trace->x.push_back(step.x);
      trace->z.push_back(z);
      trace->mu.push_back(mu.item());
      trace->sigma.push_back(sigma.item());
      trace->cg_iterations.push_back(step.iterations);
    }
  }
  return z;
}

}  // namespace dcchi
