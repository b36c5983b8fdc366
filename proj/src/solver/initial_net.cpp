// Copyright 2026 The DCCHI Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "dcchi/error.hpp"
#include "dcchi/ops.hpp"
#include "dcchi/pipeline.hpp"

namespace dcchi {

namespace {
double inverse_softplus(double y) { return std::log(std::expm1(y)); }

std::vector<double> values_of(const std::vector<Tensor>& ts) {
  std::vector<double> v;
  for (const auto& t : ts) v.push_back(t.item());
  return v;
}
}  // namespace

std::vector<double> StageParams::mu_values() const { return values_of(mu); }
std::vector<double> StageParams::sigma_values() const { return values_of(sigma); }

Tensor adjoint_init(const MeasurementPair& y, const SensingSystem& sys) {
  validate_measurements(y, sys);
  const auto& cassi = y.cassi.values();
  std::vector<double> ones(static_cast<std::size_t>(sys.scene_length()), 1.0);
  std::vector<double> counts(static_cast<std::size_t>(sys.cassi_length()));
  sys.cassi_forward(ones, counts);
  std::vector<double> normalized(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) normalized[i] = counts[i] > 0.0 ? cassi[i] / counts[i] : 0.0;

  SensingSystem open(sys.bands(), sys.step(), sys.direction(),
                     CodedMask::from_values(sys.height(), sys.width(),
                                            std::vector<double>(static_cast<std::size_t>(sys.pan_length()), 1.0)),
                     sys.pan_response());
  std::vector<double> x(static_cast<std::size_t>(sys.scene_length()));
  open.cassi_adjoint(normalized, x);
  return Tensor::from_vector(sys.cube_shape(), std::move(x));
}

InitialOutput initial_net(const MeasurementPair& y, const SensingSystem& sys, const ParamStore& w,
                          const ArchConfig& arch) {
  if (sys.cube_shape() != Shape{arch.height, arch.width, arch.bands})
    throw ConfigError("sensing geometry " + shape_str(sys.cube_shape()) + " does not match architecture " +
                      shape_str({arch.height, arch.width, arch.bands}));
  InitialOutput out;
  out.x0 = ops::conv2d(adjoint_init(y, sys), w.get("init.conv.w"), w.get("init.conv.b"));

  const double mean_c = ops::mean(y.cassi).item();
  auto h = ops::gelu(ops::add_bias(ops::matmul(Tensor::full({1, 1}, mean_c), w.get("init.fc1.w")), w.get("init.fc1.b")));
  auto s = ops::softplus(ops::add_bias(ops::matmul(h, w.get("init.fc2.w")), w.get("init.fc2.b")));
  for (int k = 0; k < arch.stages; ++k) {
    out.params.mu.push_back(ops::slice_lastdim(s, k, 1));
    out.params.sigma.push_back(ops::slice_lastdim(s, arch.stages + k, 1));
  }
  return out;
}

void init_initial_net(ParamStore& w, const ArchConfig& arch, std::mt19937_64& rng) {
  const auto C = arch.bands;
  std::vector<double> k(static_cast<std::size_t>(9 * C * C), 0.0);
  for (std::int64_t c = 0; c < C; ++c) k[static_cast<std::size_t>((4 * C + c) * C + c)] = 1.0;  // centre tap
  w.set("init.conv.w", Tensor::from_vector({3, 3, C, C}, std::move(k)));
  w.set("init.conv.b", Tensor::zeros({C}));
  const std::int64_t hid = arch.init_hidden, K = arch.stages;
  w.set("init.fc1.w", trunc_normal({1, hid}, 0.02, rng));
  w.set("init.fc1.b", Tensor::zeros({hid}));
  w.set("init.fc2.w", trunc_normal({hid, 2 * K}, 0.02, rng));
  std::vector<double> b(static_cast<std::size_t>(2 * K));
  for (std::int64_t i = 0; i < K; ++i) {
    b[static_cast<std::size_t>(i)] = inverse_softplus(kInitialMu);
    b[static_cast<std::size_t>(K + i)] = inverse_softplus(kInitialSigma);
  }
  w.set("init.fc2.b", Tensor::from_vector({2 * K}, std::move(b)));
}

}  // namespace dcchi
