// Copyright 2026 The DCCHI Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "dcchi/error.hpp"
#include "dcchi/ops.hpp"
#include "node.hpp"

namespace dcchi::ops {

using detail::data_of;
using detail::grad_slot;
using detail::make_result;

namespace {

void check_broadcast(const Tensor& a, const Tensor& b, const char* op) {
  const auto& sa = a.shape();
  const auto& sb = b.shape();
  bool ok = sa.size() == sb.size();
  if (ok) {
    std::size_t i = sa.size();
    while (i > 0 && sa[i - 1] == sb[i - 1]) --i;
    for (std::size_t j = 0; j < i; ++j) ok = ok && sb[j] == 1;
  }
  if (!ok)
    throw DimensionError(std::string(op) + ": cannot combine " + shape_str(sa) + " with " +
                         shape_str(sb));
}

enum class Binary { add, sub, mul, div };

Tensor binary(const Tensor& a, const Tensor& b, Binary kind, const char* name) {
  check_broadcast(a, b, name);
  const auto& x = data_of(a);
  const auto& y = data_of(b);
  const std::size_t n = x.size();
  const std::size_t nb = y.size();
  std::vector<double> out(n);
  switch (kind) {
    case Binary::add: for (std::size_t i = 0; i < n; ++i) out[i] = x[i] + y[i % nb]; break;
    case Binary::sub: for (std::size_t i = 0; i < n; ++i) out[i] = x[i] - y[i % nb]; break;
    case Binary::mul: for (std::size_t i = 0; i < n; ++i) out[i] = x[i] * y[i % nb]; break;
    case Binary::div: for (std::size_t i = 0; i < n; ++i) out[i] = x[i] / y[i % nb]; break;
  }
  return make_result(a.shape(), std::move(out), detail::promote({a, b}), {a, b}, name,
                     [a, b, kind](const std::vector<double>& g) {
                       const auto& x = data_of(a);
                       const auto& y = data_of(b);
                       const std::size_t nb = y.size();
                       if (auto* ga = grad_slot(a)) {
                         for (std::size_t i = 0; i < g.size(); ++i) {
                           switch (kind) {
                             case Binary::add:
                             case Binary::sub: (*ga)[i] += g[i]; break;
                             case Binary::mul: (*ga)[i] += g[i] * y[i % nb]; break;
                             case Binary::div: (*ga)[i] += g[i] / y[i % nb]; break;
                           }
                         }
                       }
                       if (auto* gb = grad_slot(b)) {
                         for (std::size_t i = 0; i < g.size(); ++i) {
                           const std::size_t j = i % nb;
                           switch (kind) {
                             case Binary::add: (*gb)[j] += g[i]; break;
                             case Binary::sub: (*gb)[j] -= g[i]; break;
                             case Binary::mul: (*gb)[j] += g[i] * x[i]; break;
                             case Binary::div: (*gb)[j] -= g[i] * x[i] / (y[j] * y[j]); break;
                           }
                         }
                       }
                     });
}

template <typename F, typename D>
Tensor unary(const Tensor& t, const char* name, F f, D df) {
  const auto& x = data_of(t);
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = f(x[i]);
  return make_result(t.shape(), std::move(out), t.dtype(), {t}, name,
                     [t, df](const std::vector<double>& g) {
                       if (auto* gt = grad_slot(t)) {
                         const auto& x = data_of(t);
                         for (std::size_t i = 0; i < g.size(); ++i) (*gt)[i] += g[i] * df(x[i]);
                       }
                     });
}

constexpr double kGeluC = 0.7978845608028654;  // sqrt(2 / pi)
constexpr double kGeluA = 0.044715;

}  // namespace

Tensor add(const Tensor& a, const Tensor& b) { return binary(a, b, Binary::add, "add"); }
Tensor sub(const Tensor& a, const Tensor& b) { return binary(a, b, Binary::sub, "sub"); }
Tensor mul(const Tensor& a, const Tensor& b) { return binary(a, b, Binary::mul, "mul"); }
Tensor div(const Tensor& a, const Tensor& b) { return binary(a, b, Binary::div, "div"); }

Tensor add_bias(const Tensor& t, const Tensor& bias) {
  if (t.rank() < 1 || bias.rank() != 1 || bias.dim(0) != t.dim(-1))
    throw DimensionError("add_bias: bias " + shape_str(bias.shape()) + " does not match " + shape_str(t.shape()));
  Shape s(t.shape().size(), 1);
  s.back() = bias.dim(0);
  return add(t, reshape(bias, std::move(s)));
}

Tensor scale(const Tensor& a, double s) {
  return unary(a, "scale", [s](double x) { return s * x; }, [s](double) { return s; });
}

Tensor add_scalar(const Tensor& a, double s) {
  return unary(a, "add_scalar", [s](double x) { return x + s; }, [](double) { return 1.0; });
}

Tensor mul_by(const Tensor& t, const Tensor& s) {
  if (s.numel() != 1) throw DimensionError("mul_by expects a single-valued factor, got " + shape_str(s.shape()));
  if (t.rank() == 0) return mul(t, reshape(s, {}));
  return mul(t, reshape(s, Shape(static_cast<std::size_t>(t.rank()), 1)));
}

Tensor mul_lastdim(const Tensor& a, const Tensor& s) {
  const auto& sa = a.shape();
  const auto& ss = s.shape();
  bool ok = sa.size() == ss.size() && !sa.empty() && ss.back() == 1;
  for (std::size_t i = 0; ok && i + 1 < sa.size(); ++i) ok = sa[i] == ss[i];
  if (!ok)
    throw DimensionError("mul_lastdim: cannot scale " + shape_str(sa) + " by " + shape_str(ss));
  const auto d = static_cast<std::size_t>(sa.back());
  const auto& x = data_of(a);
  const auto& w = data_of(s);
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] * w[i / d];
  return make_result(sa, std::move(out), detail::promote({a, s}), {a, s}, "mul_lastdim",
                     [a, s, d](const std::vector<double>& g) {
                       const auto& x = data_of(a);
                       const auto& w = data_of(s);
                       if (auto* ga = grad_slot(a))
                         for (std::size_t i = 0; i < g.size(); ++i) (*ga)[i] += g[i] * w[i / d];
                       if (auto* gs = grad_slot(s))
                         for (std::size_t i = 0; i < g.size(); ++i) (*gs)[i / d] += g[i] * x[i];
                     });
}

Tensor gelu(const Tensor& t) {
  return unary(
      t, "gelu",
      [](double x) { return 0.5 * x * (1.0 + std::tanh(kGeluC * (x + kGeluA * x * x * x))); },
      [](double x) {
        const double th = std::tanh(kGeluC * (x + kGeluA * x * x * x));
        return 0.5 * (1.0 + th) +
               0.5 * x * (1.0 - th * th) * kGeluC * (1.0 + 3.0 * kGeluA * x * x);
      });
}

Tensor softplus(const Tensor& t) {
  return unary(
      t, "softplus",
      [](double x) { return x > 30.0 ? x : std::log1p(std::exp(x)); },
      [](double x) { return 1.0 / (1.0 + std::exp(-x)); });
}

Tensor abs(const Tensor& t) {
  return unary(
      t, "abs", [](double x) { return std::fabs(x); },
      [](double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); });
}

Tensor square(const Tensor& t) {
  return unary(t, "square", [](double x) { return x * x; }, [](double x) { return 2.0 * x; });
}

Tensor sum(const Tensor& t) {
  double acc = 0.0;
  for (double v : data_of(t)) acc += v;
  return make_result({}, {acc}, t.dtype(), {t}, "sum", [t](const std::vector<double>& g) {
    if (auto* gt = grad_slot(t))
      for (auto& v : *gt) v += g[0];
  });
}

Tensor mean(const Tensor& t) { return scale(sum(t), 1.0 / static_cast<double>(t.numel())); }

Tensor dot(const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape())
    throw DimensionError("dot: shapes " + shape_str(a.shape()) + " and " + shape_str(b.shape()) + " differ");
  const auto& x = data_of(a);
  const auto& y = data_of(b);
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
  return make_result({}, {acc}, detail::promote({a, b}), {a, b}, "dot",
                     [a, b](const std::vector<double>& g) {
                       const auto& x = data_of(a);
                       const auto& y = data_of(b);
                       if (auto* ga = grad_slot(a))
                         for (std::size_t i = 0; i < x.size(); ++i) (*ga)[i] += g[0] * y[i];
                       if (auto* gb = grad_slot(b))
                         for (std::size_t i = 0; i < y.size(); ++i) (*gb)[i] += g[0] * x[i];
                     });
}

}  // namespace dcchi::ops
