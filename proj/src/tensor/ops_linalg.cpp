// Copyright 2026 The DCCHI Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <numeric>

#include "dcchi/error.hpp"
#include "dcchi/ops.hpp"
#include "dcchi/parallel.hpp"
#include "node.hpp"

namespace dcchi::ops {

using detail::data_of;
using detail::grad_slot;
using detail::make_result;

namespace {

Shape leading(const Shape& s) { return Shape(s.begin(), s.end() - 2); }

// c[P,R] += a[P,Q] * b[Q,R]
void gemm_nn(const double* a, const double* b, double* c, std::int64_t P, std::int64_t Q,
             std::int64_t R) {
  for (std::int64_t p = 0; p < P; ++p) {
    double* crow = c + p * R;
    for (std::int64_t q = 0; q < Q; ++q) {
      const double av = a[p * Q + q];
      if (av == 0.0) continue;
      const double* brow = b + q * R;
      for (std::int64_t r = 0; r < R; ++r) crow[r] += av * brow[r];
    }
  }
}

// c[P,Q] += g[P,R] * b[Q,R]^T
void gemm_nt(const double* g, const double* b, double* c, std::int64_t P, std::int64_t Q,
             std::int64_t R) {
  for (std::int64_t p = 0; p < P; ++p)
    for (std::int64_t q = 0; q < Q; ++q) {
      double acc = 0.0;
      const double* grow = g + p * R;
      const double* brow = b + q * R;
      for (std::int64_t r = 0; r < R; ++r) acc += grow[r] * brow[r];
      c[p * Q + q] += acc;
    }
}

// c[Q,R] += a[P,Q]^T * g[P,R]
void gemm_tn(const double* a, const double* g, double* c, std::int64_t P, std::int64_t Q,
             std::int64_t R) {
  for (std::int64_t p = 0; p < P; ++p)
    for (std::int64_t q = 0; q < Q; ++q) {
      const double av = a[p * Q + q];
      if (av == 0.0) continue;
      const double* grow = g + p * R;
      double* crow = c + q * R;
      for (std::int64_t r = 0; r < R; ++r) crow[r] += av * grow[r];
    }
}

}  // namespace

Tensor matmul(const Tensor& a, const Tensor& b) {
  const auto& sa = a.shape();
  const auto& sb = b.shape();
  auto fail = [&](const char* why) {
    throw DimensionError(std::string("matmul: ") + why + " for " + shape_str(sa) + " x " +
                         shape_str(sb));
  };
  if (sa.size() < 2 || sb.size() < 2) fail("operands need rank >= 2");
  const std::int64_t P = sa[sa.size() - 2], Q = sa.back(), R = sb.back();
  if (sb[sb.size() - 2] != Q) fail("inner extents differ");
  const Shape la = leading(sa), lb = leading(sb);
  const std::int64_t ba = shape_numel(la), bb = shape_numel(lb);
  Shape lead;
  if (la == lb) lead = la;
  else if (bb == 1) lead = la;
  else if (ba == 1) lead = lb;
  else fail("batch extents differ");
  const std::int64_t batch = shape_numel(lead);
  Shape out_shape = lead;
  out_shape.push_back(P);
  out_shape.push_back(R);

  const double* A = data_of(a).data();
  const double* B = data_of(b).data();
  const std::int64_t sa_step = ba == 1 ? 0 : P * Q;
  const std::int64_t sb_step = bb == 1 ? 0 : Q * R;
  std::vector<double> out(static_cast<std::size_t>(batch * P * R), 0.0);
  double* C = out.data();
  parallel_for(batch, std::max<std::int64_t>(1, 32768 / std::max<std::int64_t>(1, P * Q * R)),
               [&](std::int64_t b0, std::int64_t b1) {
                 for (std::int64_t i = b0; i < b1; ++i)
                   gemm_nn(A + i * sa_step, B + i * sb_step, C + i * P * R, P, Q, R);
               });
  detail::add_macs(batch * P * Q * R);

  return make_result(
      std::move(out_shape), std::move(out), detail::promote({a, b}), {a, b}, "matmul",
      [a, b, P, Q, R, batch, sa_step, sb_step](const std::vector<double>& g) {
        const double* A = data_of(a).data();
        const double* B = data_of(b).data();
        const double* G = g.data();
        if (auto* ga = grad_slot(a)) {
          double* GA = ga->data();
          if (sa_step == 0) {
            for (std::int64_t i = 0; i < batch; ++i) gemm_nt(G + i * P * R, B + i * sb_step, GA, P, Q, R);
          } else {
            parallel_for(batch, 1, [&](std::int64_t b0, std::int64_t b1) {
              for (std::int64_t i = b0; i < b1; ++i)
                gemm_nt(G + i * P * R, B + i * sb_step, GA + i * sa_step, P, Q, R);
            });
          }
        }
        if (auto* gb = grad_slot(b)) {
          double* GB = gb->data();
          if (sb_step == 0) {
            for (std::int64_t i = 0; i < batch; ++i) gemm_tn(A + i * sa_step, G + i * P * R, GB, P, Q, R);
          } else {
            parallel_for(batch, 1, [&](std::int64_t b0, std::int64_t b1) {
              for (std::int64_t i = b0; i < b1; ++i)
                gemm_tn(A + i * sa_step, G + i * P * R, GB + i * sb_step, P, Q, R);
            });
          }
        }
      });
}

Tensor reshape(const Tensor& t, Shape shape) {
  for (auto e : shape)
    if (e <= 0) throw DimensionError("reshape: non-positive extent in " + shape_str(shape));
  if (shape_numel(shape) != t.numel())
    throw DimensionError("reshape: " + shape_str(t.shape()) + " has " + std::to_string(t.numel()) +
                         " values, target " + shape_str(shape) + " does not");
  return make_result(std::move(shape), data_of(t), t.dtype(), {t}, "reshape",
                     [t](const std::vector<double>& g) {
                       if (auto* gt = grad_slot(t))
                         for (std::size_t i = 0; i < g.size(); ++i) (*gt)[i] += g[i];
                     });
}

namespace {

// For each output flat index, the source flat index.
std::vector<std::int64_t> permute_index(const Shape& in, const std::vector<int>& axes) {
  const std::size_t r = in.size();
  std::vector<std::int64_t> in_stride(r, 1);
  for (std::size_t i = r; i-- > 1;) in_stride[i - 1] = in_stride[i] * in[i];
  Shape out(r);
  std::vector<std::int64_t> step(r);
  for (std::size_t i = 0; i < r; ++i) {
    out[i] = in[static_cast<std::size_t>(axes[i])];
    step[i] = in_stride[static_cast<std::size_t>(axes[i])];
  }
  const std::int64_t n = shape_numel(in);
  std::vector<std::int64_t> src(static_cast<std::size_t>(n));
  std::vector<std::int64_t> idx(r, 0);
  std::int64_t offset = 0;
  for (std::int64_t k = 0; k < n; ++k) {
    src[static_cast<std::size_t>(k)] = offset;
    for (std::size_t d = r; d-- > 0;) {
      ++idx[d];
      offset += step[d];
      if (idx[d] < out[d]) break;
      offset -= step[d] * out[d];
      idx[d] = 0;
    }
  }
  return src;
}

}  // namespace

Tensor permute(const Tensor& t, const std::vector<int>& axes) {
  const auto& in = t.shape();
  const std::size_t r = in.size();
  std::vector<int> sorted = axes;
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> expect(r);
  std::iota(expect.begin(), expect.end(), 0);
  if (sorted != expect) throw DimensionError("permute: invalid axis order for " + shape_str(in));
  Shape out(r);
  for (std::size_t i = 0; i < r; ++i) out[i] = in[static_cast<std::size_t>(axes[i])];
  auto src = std::make_shared<std::vector<std::int64_t>>(permute_index(in, axes));
  const auto& x = data_of(t);
  std::vector<double> values(x.size());
  for (std::size_t k = 0; k < values.size(); ++k) values[k] = x[static_cast<std::size_t>((*src)[k])];
  return make_result(std::move(out), std::move(values), t.dtype(), {t}, "permute",
                     [t, src](const std::vector<double>& g) {
                       if (auto* gt = grad_slot(t))
                         for (std::size_t k = 0; k < g.size(); ++k)
                           (*gt)[static_cast<std::size_t>((*src)[k])] += g[k];
                     });
}

Tensor transpose(const Tensor& t) {
  const int r = t.rank();
  if (r < 2) throw DimensionError("transpose needs rank >= 2, got " + shape_str(t.shape()));
  std::vector<int> axes(static_cast<std::size_t>(r));
  std::iota(axes.begin(), axes.end(), 0);
  std::swap(axes[static_cast<std::size_t>(r - 1)], axes[static_cast<std::size_t>(r - 2)]);
  return permute(t, axes);
}

Tensor concat_lastdim(const std::vector<Tensor>& parts) {
  if (parts.empty()) throw DimensionError("concat_lastdim: no inputs");
  const Shape lead(parts[0].shape().begin(), parts[0].shape().end() - 1);
  std::vector<std::int64_t> widths;
  std::int64_t total = 0;
  DType dtype = DType::f32;
  for (const auto& p : parts) {
    if (p.rank() == 0 || Shape(p.shape().begin(), p.shape().end() - 1) != lead)
      throw DimensionError("concat_lastdim: " + shape_str(p.shape()) + " does not match " +
                           shape_str(parts[0].shape()));
    widths.push_back(p.dim(-1));
    total += p.dim(-1);
    if (p.dtype() == DType::f64) dtype = DType::f64;
  }
  const std::int64_t rows = shape_numel(lead);
  std::vector<double> out(static_cast<std::size_t>(rows * total));
  std::int64_t col = 0;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const auto& x = data_of(parts[k]);
    const std::int64_t w = widths[k];
    for (std::int64_t r = 0; r < rows; ++r)
      std::copy_n(x.begin() + r * w, w, out.begin() + r * total + col);
    col += w;
  }
  Shape shape = lead;
  shape.push_back(total);
  return make_result(std::move(shape), std::move(out), dtype, parts, "concat_lastdim",
                     [parts, widths, total, rows](const std::vector<double>& g) {
                       std::int64_t col = 0;
                       for (std::size_t k = 0; k < parts.size(); ++k) {
                         const std::int64_t w = widths[k];
                         if (auto* gp = grad_slot(parts[k]))
                           for (std::int64_t r = 0; r < rows; ++r)
                             for (std::int64_t c = 0; c < w; ++c)
                               (*gp)[static_cast<std::size_t>(r * w + c)] +=
                                   g[static_cast<std::size_t>(r * total + col + c)];
                         col += w;
                       }
                     });
}

Tensor slice_lastdim(const Tensor& t, std::int64_t start, std::int64_t length) {
  if (t.rank() == 0 || start < 0 || length <= 0 || start + length > t.dim(-1))
    throw DimensionError("slice_lastdim: [" + std::to_string(start) + ", +" +
                         std::to_string(length) + ") outside " + shape_str(t.shape()));
  const std::int64_t w = t.dim(-1);
  const std::int64_t rows = t.numel() / w;
  const auto& x = data_of(t);
  std::vector<double> out(static_cast<std::size_t>(rows * length));
  for (std::int64_t r = 0; r < rows; ++r)
    std::copy_n(x.begin() + r * w + start, length, out.begin() + r * length);
  Shape shape = t.shape();
  shape.back() = length;
  return make_result(std::move(shape), std::move(out), t.dtype(), {t}, "slice_lastdim",
                     [t, w, rows, start, length](const std::vector<double>& g) {
                       if (auto* gt = grad_slot(t))
                         for (std::int64_t r = 0; r < rows; ++r)
                           for (std::int64_t c = 0; c < length; ++c)
                             (*gt)[static_cast<std::size_t>(r * w + start + c)] +=
                                 g[static_cast<std::size_t>(r * length + c)];
                     });
}

Tensor linear_map(const Tensor& x, const Shape& out_shape, const LinearMap& forward,
                  const LinearMap& adjoint, const char* name) {
  auto values = forward(data_of(x));
  if (static_cast<std::int64_t>(values.size()) != shape_numel(out_shape))
    throw DimensionError(std::string(name) + ": produced " + std::to_string(values.size()) +
                         " values for shape " + shape_str(out_shape));
  const auto in_size = static_cast<std::size_t>(x.numel());
  return make_result(out_shape, std::move(values), x.dtype(), {x}, name,
                     [x, adjoint, in_size, name](const std::vector<double>& g) {
                       if (auto* gx = grad_slot(x)) {
                         auto back = adjoint(g);
                         if (back.size() != in_size)
                           throw DimensionError(std::string(name) + ": adjoint size mismatch");
                         for (std::size_t i = 0; i < in_size; ++i) (*gx)[i] += back[i];
                       }
                     });
}

}  // namespace dcchi::ops
