// Copyright 2026 The DCCHI Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <vector>

#include "dcchi/tensor.hpp"

namespace dcchi::ops {

// Elementwise binary ops. `b` either matches `a` exactly or has the same
// rank with a prefix of extent-1 axes (e.g. [1,1,E] against [B,N,E]); no
// other broadcasting is performed.
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor div(const Tensor& a, const Tensor& b);

/// t[..., D] + bias[D], the bias reshaped to [1, ..., 1, D].
Tensor add_bias(const Tensor& t, const Tensor& bias);

Tensor scale(const Tensor& a, double s);
Tensor add_scalar(const Tensor& a, double s);
/// t * s where `s` holds a single value (any shape with one element).
Tensor mul_by(const Tensor& t, const Tensor& s);
/// a[..., D] * s[..., 1]: per-row scaling along the last axis.
Tensor mul_lastdim(const Tensor& a, const Tensor& s);

Tensor gelu(const Tensor& t);  // tanh approximation
Tensor softplus(const Tensor& t);
Tensor abs(const Tensor& t);
Tensor square(const Tensor& t);

Tensor sum(const Tensor& t);
Tensor mean(const Tensor& t);
/// sum(a * b) as a scalar.
Tensor dot(const Tensor& a, const Tensor& b);

/// Batched product over any number of leading axes: [..., P, Q] x [..., Q, R].
/// Either operand's leading axes may collapse to a single batch of 1.
Tensor matmul(const Tensor& a, const Tensor& b);

Tensor reshape(const Tensor& t, Shape shape);
Tensor permute(const Tensor& t, const std::vector<int>& axes);
/// Swaps the last two axes.
Tensor transpose(const Tensor& t);
Tensor concat_lastdim(const std::vector<Tensor>& parts);
Tensor slice_lastdim(const Tensor& t, std::int64_t start, std::int64_t length);

/// Max-subtracted softmax over the last axis. NaN input throws NumericError.
Tensor softmax_lastdim(const Tensor& t);
inline constexpr double kLayerNormEps = 1e-5;
/// Normalizes each last-axis slice to zero mean / unit variance, then
/// applies gain and bias (both of length equal to the last extent).
Tensor layer_norm(const Tensor& t, const Tensor& gain, const Tensor& bias);
inline constexpr double kCosineEps = 1e-8;
/// Cosine similarity along the last axis, norms clamped below at 1e-8.
/// Output keeps a trailing axis of extent 1.
Tensor cosine_lastdim(const Tensor& a, const Tensor& b);

/// Cross-correlation of t[H, W, Cin] with kernel[k, k, Cin, Cout].
/// `bias` may be undefined or of shape [Cout].
Tensor conv2d(const Tensor& t, const Tensor& kernel, const Tensor& bias,
              int stride = 1, int padding = -1);
/// Transposed convolution: t[H, W, Cin], kernel[k, k, Cin, Cout] with
/// output extent (H - 1) * stride + k.
Tensor conv_transpose2d(const Tensor& t, const Tensor& kernel, const Tensor& bias,
                        int stride);

/// Wraps a linear map and its adjoint as a primitive. `forward` receives the
/// flattened input and must return `out_shape` worth of values; `adjoint`
/// maps an output-shaped gradient back to the input space.
using LinearMap = std::function<std::vector<double>(std::span<const double>)>;
Tensor linear_map(const Tensor& x, const Shape& out_shape, const LinearMap& forward,
                  const LinearMap& adjoint, const char* name = "linear_map");

}  // namespace dcchi::ops
