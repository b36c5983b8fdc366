// Copyright 2026 The DCCHI Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "dcchi/tensor.hpp"

namespace dcchi {

/// 10 log10(peak^2 / MSE) over every value of the cube. Identical inputs
/// return +infinity.
double psnr(const Tensor& x, const Tensor& ref, double peak = 1.0);

struct SsimOptions {
  int window = 11;  // shrunk to the largest odd size that fits small images
  double sigma = 1.5;
  double k1 = 0.01;
  double k2 = 0.03;
  double data_range = 1.0;
};

/// Gaussian-window SSIM of one [H, W] image pair, averaged over the
/// positions where the window lies fully inside the image.
double ssim_image(const Tensor& x, const Tensor& ref, const SsimOptions& options = {});
/// Band-averaged SSIM of [H, W, C] cubes.
double ssim(const Tensor& x, const Tensor& ref, const SsimOptions& options = {});

struct QualityReport {
  double psnr_db = 0.0;
  double ssim = 0.0;
  std::vector<double> band_psnr_db;
  std::vector<double> band_ssim;

  /// key=value lines: psnr_db, ssim, then one band line per band.
  std::string to_text() const;
};

QualityReport quality(const Tensor& x, const Tensor& ref, const SsimOptions& options = {});

// ---------------------------------------------------------------------------
// Spatial correlation maps.

enum class SimilarityKernel { gaussian, cosine };

const char* kernel_name(SimilarityKernel k);
SimilarityKernel parse_kernel(const std::string& s);

struct CorrelationOptions {
  int window = 8;
  int pan_patch = 3;  // side of the PAN patch descriptor (odd)
  SimilarityKernel kernel = SimilarityKernel::gaussian;
  /// Bandwidth h of exp(-mean((a - b)^2) / (2 h^2)).
  double bandwidth = 0.1;
};

/// Per-pixel descriptors [H, W, P]: the spectrum of an [H, W, C] cube.
Tensor spectral_descriptors(const Tensor& cube);
/// p x p neighbourhood of an [H, W] image, edges replicated: [H, W, p*p].
Tensor patch_descriptors(const Tensor& image, int patch);

/// One N x N similarity matrix per non-overlapping M x M window:
/// [HW/M^2, M^2, M^2]. Windows are ordered row-major, tokens row-major
/// inside each window.
Tensor correlation_map(const Tensor& descriptors, const CorrelationOptions& options);

struct CorrProxyReport {
  double rmse = 0.0;
  double correlation = 0.0;  // Pearson over all map entries
  double psnr_db = 0.0;      // peak 1
};

/// Compares HSI-derived (spectral descriptors) and PAN-derived (patch
/// descriptors) correlation maps.
CorrProxyReport proxy_compare(const Tensor& hsi, const Tensor& pan, const CorrelationOptions& options = {});

}  // namespace dcchi
