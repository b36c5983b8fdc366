// Copyright 2026 The DCCHI Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <limits>
#include <sstream>

#include "dcchi/error.hpp"
#include "dcchi/metrics.hpp"

namespace dcchi {

namespace {

void same_shape(const Tensor& x, const Tensor& ref, const char* op) {
  if (x.shape() != ref.shape())
    throw DimensionError(std::string(op) + ": " + shape_str(x.shape()) + " vs " + shape_str(ref.shape()));
}

double psnr_of(std::span<const double> a, std::span<const double> b, std::size_t offset, std::size_t stride,
               double peak) {
  double se = 0.0;
  std::size_t n = 0;
  for (std::size_t i = offset; i < a.size(); i += stride, ++n) {
    const double e = a[i] - b[i];
    se += e * e;
  }
  if (se == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(peak * peak / (se / static_cast<double>(n)));
}

std::vector<double> gaussian_taps(int size, double sigma) {
  std::vector<double> t(static_cast<std::size_t>(size));
  const int r = size / 2;
  double s = 0.0;
  for (int i = 0; i < size; ++i) s += (t[static_cast<std::size_t>(i)] = std::exp(-0.5 * (i - r) * (i - r) / (sigma * sigma)));
  for (auto& v : t) v /= s;
  return t;
}

// Separable weighted mean over every fully contained window.
std::vector<double> filter_valid(const std::vector<double>& img, std::int64_t H, std::int64_t W,
                                 const std::vector<double>& taps) {
  const auto k = static_cast<std::int64_t>(taps.size());
  const std::int64_t Ho = H - k + 1, Wo = W - k + 1;
  std::vector<double> rows(static_cast<std::size_t>(H * Wo));
  for (std::int64_t h = 0; h < H; ++h)
    for (std::int64_t w = 0; w < Wo; ++w) {
      double acc = 0.0;
      for (std::int64_t j = 0; j < k; ++j) acc += taps[static_cast<std::size_t>(j)] * img[static_cast<std::size_t>(h * W + w + j)];
      rows[static_cast<std::size_t>(h * Wo + w)] = acc;
    }
  std::vector<double> out(static_cast<std::size_t>(Ho * Wo));
  for (std::int64_t h = 0; h < Ho; ++h)
    for (std::int64_t w = 0; w < Wo; ++w) {
      double acc = 0.0;
      for (std::int64_t i = 0; i < k; ++i) acc += taps[static_cast<std::size_t>(i)] * rows[static_cast<std::size_t>((h + i) * Wo + w)];
      out[static_cast<std::size_t>(h * Wo + w)] = acc;
    }
  return out;
}

double ssim_plane(const std::vector<double>& x, const std::vector<double>& y, std::int64_t H, std::int64_t W,
                  const SsimOptions& o) {
  int size = std::min<std::int64_t>({o.window, H, W});
  if (size % 2 == 0) --size;
  if (size < 1) throw DimensionError("ssim: image too small");
  const auto taps = gaussian_taps(size, o.sigma);
  std::vector<double> xx(x.size()), yy(x.size()), xy(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    xx[i] = x[i] * x[i];
    yy[i] = y[i] * y[i];
    xy[i] = x[i] * y[i];
  }
  const auto mx = filter_valid(x, H, W, taps), my = filter_valid(y, H, W, taps);
  const auto sxx = filter_valid(xx, H, W, taps), syy = filter_valid(yy, H, W, taps), sxy = filter_valid(xy, H, W, taps);
  const double c1 = std::pow(o.k1 * o.data_range, 2), c2 = std::pow(o.k2 * o.data_range, 2);
  double total = 0.0;
  for (std::size_t i = 0; i < mx.size(); ++i) {
    const double vx = sxx[i] - mx[i] * mx[i], vy = syy[i] - my[i] * my[i], cxy = sxy[i] - mx[i] * my[i];
    total += (2 * mx[i] * my[i] + c1) * (2 * cxy + c2) / ((mx[i] * mx[i] + my[i] * my[i] + c1) * (vx + vy + c2));
  }
  return total / static_cast<double>(mx.size());
}

std::vector<double> band(const Tensor& t, std::int64_t c) {
  const auto C = t.dim(2);
  std::vector<double> out(static_cast<std::size_t>(t.dim(0) * t.dim(1)));
  const auto v = t.values();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = v[i * static_cast<std::size_t>(C) + static_cast<std::size_t>(c)];
  return out;
}

}  // namespace

double psnr(const Tensor& x, const Tensor& ref, double peak) {
  same_shape(x, ref, "psnr");
  if (!(peak > 0.0)) throw InvalidArgument("psnr: peak must be positive");
  return psnr_of(x.values(), ref.values(), 0, 1, peak);
}

double ssim_image(const Tensor& x, const Tensor& ref, const SsimOptions& options) {
  same_shape(x, ref, "ssim");
  if (x.rank() != 2) throw DimensionError("ssim_image expects [H, W], got " + shape_str(x.shape()));
  return ssim_plane(x.to_vector(), ref.to_vector(), x.dim(0), x.dim(1), options);
}

double ssim(const Tensor& x, const Tensor& ref, const SsimOptions& options) {
  return quality(x, ref, options).ssim;
}

QualityReport quality(const Tensor& x, const Tensor& ref, const SsimOptions& options) {
  same_shape(x, ref, "quality");
  if (x.rank() != 3) throw DimensionError("quality expects [H, W, C] cubes, got " + shape_str(x.shape()));
  QualityReport r;
  r.psnr_db = psnr(x, ref);
  const auto C = x.dim(2);
  for (std::int64_t c = 0; c < C; ++c) {
    r.band_psnr_db.push_back(psnr_of(x.values(), ref.values(), static_cast<std::size_t>(c), static_cast<std::size_t>(C), 1.0));
    r.band_ssim.push_back(ssim_plane(band(x, c), band(ref, c), x.dim(0), x.dim(1), options));
    r.ssim += r.band_ssim.back() / static_cast<double>(C);
  }
  return r;
}

std::string QualityReport::to_text() const {
  std::ostringstream os;
  os.precision(17);
  os << "psnr_db=" << psnr_db << "\nssim=" << ssim << "\n";
  for (std::size_t c = 0; c < band_ssim.size(); ++c)
    os << "band=" << c << " psnr_db=" << band_psnr_db[c] << " ssim=" << band_ssim[c] << "\n";
  return os.str();
}

}  // namespace dcchi
