// Copyright 2026 The DCCHI Authors
// SPDX-License-Identifier: Apache-2.0

#include "dcchi/params.hpp"

#include "dcchi/error.hpp"

namespace dcchi {

const Tensor& ParamStore::get(const std::string& name) const {
  auto it = tensors_.find(name);
  if (it == tensors_.end()) throw StateError("missing weight tensor '" + name + "'");
  return it->second;
}

void ParamStore::set(const std::string& name, Tensor value) {
  if (!value.defined()) throw InvalidArgument("cannot store undefined tensor '" + name + "'");
  tensors_[name] = std::move(value);
}

std::vector<std::string> ParamStore::names() const {
  std::vector<std::string> out;
  out.reserve(tensors_.size());
  for (const auto& [k, v] : tensors_) out.push_back(k);
  return out;
}

std::int64_t ParamStore::numel() const {
  std::int64_t n = 0;
  for (const auto& [k, v] : tensors_) n += v.numel();
  return n;
}

ParamStore ParamStore::as_trainable() const {
  ParamStore out;
  for (const auto& [k, v] : tensors_) {
    auto leaf = v.detach();
    leaf.requires_grad_();
    out.tensors_.emplace(k, std::move(leaf));
  }
  return out;
}

ParamStore ParamStore::detached() const {
  ParamStore out;
  for (const auto& [k, v] : tensors_) out.tensors_.emplace(k, v.detach());
  return out;
}

Tensor trunc_normal(Shape shape, double std, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> v(static_cast<std::size_t>(shape_numel(shape)));
  for (auto& x : v) {
    double s;
    do s = n(rng);
    while (s < -2.0 || s > 2.0);
    x = s * std;
  }
  return Tensor::from_vector(std::move(shape), std::move(v));
}

}  // namespace dcchi
