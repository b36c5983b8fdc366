// Copyright 2026 The DCCHI Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "dcchi/tensor.hpp"

namespace dcchi {

/// Named weight tensors, iterated in name order. Missing names throw
/// StateError so that config/weight drift is caught at first use.
class ParamStore {
 public:
  const Tensor& get(const std::string& name) const;
  bool contains(const std::string& name) const { return tensors_.count(name) != 0; }
  /// Inserts or replaces.
  void set(const std::string& name, Tensor value);
  std::vector<std::string> names() const;
  std::size_t size() const { return tensors_.size(); }
  /// Total number of scalar weights.
  std::int64_t numel() const;

  const std::map<std::string, Tensor>& tensors() const { return tensors_; }
  /// Fresh leaves with requires_grad set, one per entry.
  ParamStore as_trainable() const;
  /// Values only, no gradient tracking.
  ParamStore detached() const;

 private:
  std::map<std::string, Tensor> tensors_;
};

/// Truncated normal: samples outside two standard deviations are redrawn.
Tensor trunc_normal(Shape shape, double std, std::mt19937_64& rng);

}  // namespace dcchi
