// Copyright 2026 The DCCHI Authors
// SPDX-License-Identifier: Apache-2.0

#include <random>

#include "dcchi/app.hpp"
#include "dcchi/ops.hpp"
#include "dcchi/pipeline.hpp"
#include "dcchi/scenes.hpp"

namespace dcchi {

namespace {

Tensor uniform(Shape shape, std::uint64_t seed, double lo = -1.0, double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(static_cast<std::size_t>(shape_numel(shape)));
  for (auto& x : v) x = u(rng);
  return Tensor::from_vector(std::move(shape), std::move(v));
}

// Leaves the zero-output start-up regime so every path carries gradient.
ParamStore perturbed(const ParamStore& w, std::uint64_t seed, double scale) {
  ParamStore out;
  for (const auto& [name, t] : w.tensors()) {
    auto r = uniform(t.shape(), ++seed * 7919, -scale, scale).to_vector();
    if (name.size() > 2 && name.compare(name.size() - 2, 2, ".g") == 0)
      for (auto& v : r) v += 1.0;
    out.set(name, Tensor::from_vector(t.shape(), std::move(r)));
  }
  return out;
}

struct Case {
  const char* name;
  Shape shape;
  DifferentiableFn fn;
};

std::vector<double> dense_apply(const Tensor& m, std::int64_t rows, std::int64_t cols, std::span<const double> v,
                                bool adjoint) {
  std::vector<double> o(static_cast<std::size_t>(adjoint ? cols : rows), 0.0);
  for (std::int64_t i = 0; i < rows; ++i)
    for (std::int64_t j = 0; j < cols; ++j) {
      const double a = m.at(i * cols + j);
      if (adjoint) o[j] += a * v[i];
      else o[i] += a * v[j];
    }
  return o;
}

}  // namespace

std::vector<GradSuiteResult> primitive_gradient_suite(double tolerance) {
  const auto b34 = uniform({1, 4}, 1), w34 = uniform({3, 4}, 2), p34 = uniform({3, 4}, 3, 0.5, 2.0);
  const auto w233 = uniform({3, 2}, 4), a23 = uniform({2, 2, 3}, 5);
  const auto g5 = uniform({5}, 6), bb5 = uniform({5}, 7), w35 = uniform({3, 5}, 8);
  const auto k33 = uniform({3, 3, 2, 3}, 9), kb = uniform({3}, 10), img = uniform({5, 4, 2}, 11);
  const auto kt = uniform({2, 2, 2, 3}, 12), sc = uniform({2, 3}, 13), perm = uniform({4, 2, 3}, 14);
  const auto dense = uniform({3, 5}, 15);

  std::vector<Case> cases = {
      {"add/sub", {3, 4}, [=](const Tensor& x) { return ops::sub(ops::add(x, b34), ops::mul(x, w34)); }},
      {"mul/div", {3, 4},
       [=](const Tensor& x) { return ops::add(ops::div(x, p34), ops::div(p34, ops::add_scalar(ops::square(x), 1.0))); }},
      {"add_bias", {3, 5}, [=](const Tensor& x) { return ops::add_bias(ops::square(x), g5); }},
      {"scale/add_scalar", {5}, [](const Tensor& x) { return ops::add_scalar(ops::scale(x, -1.7), 0.3); }},
      {"mul_by", {}, [=](const Tensor& x) { return ops::mul_by(w34, ops::square(x)); }},
      {"mul_lastdim", {3, 4}, [=](const Tensor& x) { return ops::mul_lastdim(x, ops::slice_lastdim(ops::square(x), 1, 1)); }},
      {"gelu", {6}, [](const Tensor& x) { return ops::gelu(ops::scale(x, 3.0)); }},
      {"softplus", {6}, [](const Tensor& x) { return ops::softplus(ops::scale(x, 4.0)); }},
      {"abs", {6}, [](const Tensor& x) { return ops::abs(ops::add_scalar(ops::scale(x, 0.1), 0.5)); }},
      {"sum/mean/dot", {3, 4},
       [=](const Tensor& x) { return ops::add(ops::mul(ops::sum(x), ops::mean(ops::square(x))), ops::dot(x, w34)); }},
      {"matmul", {2, 2, 3}, [=](const Tensor& x) { return ops::matmul(ops::square(x), w233); }},
      {"matmul_rhs", {3, 2}, [=](const Tensor& x) { return ops::matmul(a23, x); }},
      {"permute/reshape/transpose", {2, 3, 4},
       [=](const Tensor& x) { return ops::transpose(ops::reshape(ops::mul(ops::permute(x, {2, 0, 1}), perm), {4, 6})); }},
      {"concat/slice", {3, 5},
       [](const Tensor& x) { return ops::concat_lastdim({ops::square(ops::slice_lastdim(x, 1, 4)), x}); }},
      {"softmax", {3, 5}, [=](const Tensor& x) { return ops::mul(ops::softmax_lastdim(ops::scale(x, 2.0)), w35); }},
      {"layer_norm", {3, 5}, [=](const Tensor& x) { return ops::mul(ops::layer_norm(x, g5, bb5), w35); }},
      {"layer_norm_params", {5}, [=](const Tensor& p) { return ops::layer_norm(w35, p, ops::scale(p, 0.5)); }},
      {"cosine", {2, 3},
       [=](const Tensor& x) { return ops::add(ops::cosine_lastdim(x, sc), ops::cosine_lastdim(sc, ops::square(x))); }},
      {"conv2d", {5, 4, 2}, [=](const Tensor& x) { return ops::conv2d(x, k33, kb, 1); }},
      {"conv2d_stride2", {5, 4, 2}, [=](const Tensor& x) { return ops::conv2d(x, k33, kb, 2); }},
      {"conv2d_kernel", {3, 3, 2, 3}, [=](const Tensor& k) { return ops::conv2d(img, k, kb, 1); }},
      {"conv_transpose2d", {2, 3, 2}, [=](const Tensor& x) { return ops::conv_transpose2d(ops::square(x), kt, kb, 2); }},
      {"conv_transpose2d_kernel", {2, 2, 2, 3},
       [=](const Tensor& k) { return ops::conv_transpose2d(uniform({2, 3, 2}, 16), ops::square(k), {}, 2); }},
      {"linear_map", {5},
       [=](const Tensor& x) {
         return ops::linear_map(
             ops::square(x), {3}, [=](std::span<const double> v) { return dense_apply(dense, 3, 5, v, false); },
             [=](std::span<const double> v) { return dense_apply(dense, 3, 5, v, true); });
       }},
  };

  GradCheckOptions opt;
  opt.tolerance = tolerance;
  std::vector<GradSuiteResult> out;
  std::uint64_t seed = 100;
  for (const auto& c : cases) out.push_back({c.name, grad_check(c.fn, uniform(c.shape, ++seed), opt)});
  return out;
}

std::vector<GradSuiteResult> network_gradient_suite(double tolerance, std::int64_t max_coords) {
  ArchConfig arch;
  arch.height = arch.width = 16;
  arch.bands = 4;
  arch.window = 4;
  arch.stages = 1;
  auto sys = SensingSystem::simulation_preset(16, 16, 4, 1);
  auto truth = synthetic_scene(16, 16, 4, 3);
  auto y = simulate(truth, sys, {0.01, 0.01, 4});
  auto w = perturbed(Model::create(arch, 1).weights, 6, 0.2);

  GradCheckOptions opt;
  opt.tolerance = tolerance;
  opt.max_coords = max_coords;
  std::vector<GradSuiteResult> out;

  auto pyramid = gfe(uniform({16, 16}, 5, 0.0, 1.0), w, arch);
  auto x = uniform({16, 16, 4}, 6, 0.0, 1.0);
  out.push_back({"denoiser.input", grad_check([&](const Tensor& t) {
                   return denoise(t, Tensor::scalar(0.1), pyramid, w, stage_prefix(0), arch);
                 }, x, opt)});
  out.push_back({"denoiser.sigma", grad_check([&](const Tensor& s) {
                   return denoise(x, s, pyramid, w, stage_prefix(0), arch);
                 }, Tensor::scalar(0.1), opt)});

  GradCheckOptions few = opt;
  few.max_coords = 4;
  for (const char* name : {"init.fc2.b", "init.conv.w", "gfe.l1.w", "stage0.in.w", "stage0.enc0.wq1", "stage0.mid.p2",
                           "stage0.dec0.wk3", "stage0.out.w"}) {
    out.push_back({std::string("pipeline.") + name, grad_check([&](const Tensor& t) {
                     auto v = w;
                     v.set(name, t);
                     return run_pipeline(y, sys, v, arch, {CgConfig::preset(2), {}, {}});
                   }, w.get(name), few)});
  }
  return out;
}

}  // namespace dcchi
