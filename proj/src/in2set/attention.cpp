// Copyright 2026 The DCCHI Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "dcchi/error.hpp"
#include "dcchi/in2set.hpp"
#include "dcchi/ops.hpp"

namespace dcchi {

namespace {

void check_tokens(const Tensor& a, const Tensor& b, const char* op) {
  if (a.rank() != 3 || b.rank() != 3 || a.dim(0) != b.dim(0) || a.dim(1) != b.dim(1))
    throw DimensionError(std::string(op) + ": token layouts differ, " + shape_str(a.shape()) + " vs " +
                         shape_str(b.shape()));
}

std::int64_t head_dim(const Tensor& t, int heads, const char* op) {
  if (heads < 1 || t.dim(2) % heads != 0)
    throw DimensionError(std::string(op) + ": width " + std::to_string(t.dim(2)) + " not divisible by " +
                         std::to_string(heads) + " heads");
  return t.dim(2) / heads;
}

// [B, N, Ch] -> [B, h, dh, N]
Tensor channel_major(const Tensor& t, int heads, std::int64_t dh) {
  return ops::permute(ops::reshape(t, {t.dim(0), t.dim(1), heads, dh}), {0, 2, 3, 1});
}

// [B, N, Ch] -> [B, h, N, dh]
Tensor token_major(const Tensor& t, int heads, std::int64_t dh) {
  return ops::permute(ops::reshape(t, {t.dim(0), t.dim(1), heads, dh}), {0, 2, 1, 3});
}

Tensor add_bias_table(const Tensor& scores, const Tensor& table, const char* op) {
  Shape want(scores.shape().begin() + 1, scores.shape().end());
  if (table.shape() != want)
    throw DimensionError(std::string(op) + ": positional table " + shape_str(table.shape()) + " expected " +
                         shape_str(want));
  Shape b = want;
  b.insert(b.begin(), 1);
  return ops::add(scores, ops::reshape(table, b));
}

}  // namespace

Tensor channel_attention_weights(const Tensor& q1, const Tensor& k1, const Tensor& p1, int heads) {
  check_tokens(q1, k1, "mha_c");
  if (q1.dim(2) != k1.dim(2)) throw DimensionError("mha_c: query/key widths differ");
  const auto dh = head_dim(q1, heads, "mha_c");
  auto q = channel_major(q1, heads, dh), k = channel_major(k1, heads, dh);
  auto scores = ops::scale(ops::matmul(q, ops::transpose(k)), 1.0 / std::sqrt(static_cast<double>(q1.dim(1))));
  return ops::softmax_lastdim(add_bias_table(scores, p1, "mha_c"));
}

Tensor mha_c(const Tensor& q1, const Tensor& k1, const Tensor& v1, const Tensor& p1, int heads) {
  check_tokens(q1, v1, "mha_c");
  if (v1.dim(2) != q1.dim(2)) throw DimensionError("mha_c: value width differs from query width");
  const auto dh = head_dim(q1, heads, "mha_c");
  auto attn = channel_attention_weights(q1, k1, p1, heads);
  auto out = ops::matmul(attn, channel_major(v1, heads, dh));  // [B, h, dh, N]
  return ops::reshape(ops::permute(out, {0, 3, 1, 2}), v1.shape());
}

Tensor spatial_attention_weights(const Tensor& q2, const Tensor& k2, const Tensor& p2, int heads) {
  check_tokens(q2, k2, "mha_s");
  if (q2.dim(2) != k2.dim(2)) throw DimensionError("mha_s: query/key widths differ");
  const auto dh = head_dim(q2, heads, "mha_s");
  auto q = token_major(q2, heads, dh), k = token_major(k2, heads, dh);
  auto scores = ops::scale(ops::matmul(q, ops::transpose(k)), 1.0 / std::sqrt(static_cast<double>(dh)));
  return ops::softmax_lastdim(add_bias_table(scores, p2, "mha_s"));
}

Tensor mha_s(const Tensor& q2, const Tensor& k2, const Tensor& v2, const Tensor& p2, int heads) {
  check_tokens(q2, v2, "mha_s");
  if (v2.dim(2) != q2.dim(2)) throw DimensionError("mha_s: value width differs from query width");
  const auto dh = head_dim(v2, heads, "mha_s");
  auto attn = spatial_attention_weights(q2, k2, p2, heads);
  auto out = ops::matmul(attn, token_major(v2, heads, dh));  // [B, h, N, dh]
  return ops::reshape(ops::permute(out, {0, 2, 1, 3}), v2.shape());
}

Tensor crw(const Tensor& q2, const Tensor& k3, const Tensor& v3) {
  check_tokens(q2, k3, "crw");
  check_tokens(q2, v3, "crw");
  return ops::mul_lastdim(v3, ops::cosine_lastdim(q2, k3));
}

}  // namespace dcchi
