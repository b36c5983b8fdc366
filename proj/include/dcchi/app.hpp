// Copyright 2026 The DCCHI Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dcchi/gradcheck.hpp"
#include "dcchi/in2set.hpp"
#include "dcchi/io.hpp"
#include "dcchi/metrics.hpp"
#include "dcchi/sensing.hpp"
#include "dcchi/solver.hpp"

namespace dcchi {

/// Everything a command needs, read from a sectioned text config. Missing
/// keys take the defaults below.
struct RunConfig {
  // [sensing]
  std::string preset = "simulation";  // simulation | real
  std::int64_t height = 32;
  std::int64_t width = 32;
  std::int64_t bands = 8;
  int step = 2;
  Dispersion direction = Dispersion::right;
  std::uint64_t mask_seed = 1;
  std::string mask_file;             // [H, W] tensor; overrides mask_seed
  std::vector<double> pan_response;  // empty: uniform 1/C

  // [noise]
  double sigma_c = 0.0;
  double sigma_p = 0.0;
  std::uint64_t noise_seed = 0;

  // [arch] + [solver]; height/width/bands mirror the sensing block
  ArchConfig arch;
  int cg_iters = 5;
  std::uint64_t init_seed = 0;

  // [train]
  int train_steps = 200;
  double lr = 2e-3;
  double eta_min = 0.0;
  int train_batch = 1;
  std::uint64_t train_seed = 0;
  double train_sigma_c = 0.0;
  double train_sigma_p = 0.0;

  // [paths]
  std::string scene;
  std::string cassi;
  std::string pan;
  std::string truth;
  std::string checkpoint;
  std::string dataset;

  // [synth]
  int synth_count = 8;
  std::uint64_t synth_seed = 100;

  // [corr]
  CorrelationOptions corr;
  int corr_scenes = 10;
  std::uint64_t corr_seed = 1000;
  std::int64_t corr_height = 64;
  std::int64_t corr_width = 64;
  std::int64_t corr_bands = 8;

  // [gradcheck]
  double gc_tol_primitive = 1e-4;
  double gc_tol_network = 1e-3;
  std::int64_t gc_network_coords = 0;  // <= 0: every input coordinate

  // [ablate]
  std::string ablate_mode = "both";  // cg | breakdown | both
  int ablate_repeats = 5;
  int ablate_train_steps = 1;
  std::uint64_t ablate_scene_seed = 999;

  static RunConfig from_config(const Config& cfg);
  static RunConfig load(const std::filesystem::path& path);
  /// Every field, canonical form. to_config() round-trips through from_config.
  Config to_config() const;
  /// Keys that decide the weight layout: image size, arch.*, solver.stages.
  Config model_config() const;
  /// Keys that decide the forward operator.
  Config sensing_config() const;
  std::uint64_t hash() const;
  std::uint64_t model_hash() const;
  std::uint64_t sensing_hash() const;

  SensingSystem sensing() const;
  /// `arch` with the image size filled in from the sensing block.
  ArchConfig model_arch() const;
  CgConfig cg() const { return CgConfig::preset(cg_iters); }
  /// Throws ConfigError / DimensionError for inconsistent settings.
  void validate() const;
};

/// Command-line style overrides, applied on top of a loaded config.
struct Overrides {
  std::optional<std::uint64_t> seed;  // noise, init and train seeds
  std::optional<int> cg_iters;
  std::optional<int> stages;
  bool disable_crw = false;
  bool disable_mhac = false;
  bool disable_mhas = false;
};
void apply_overrides(RunConfig& rc, const Overrides& o);

using LogSink = std::function<void(const std::string&)>;

// Commands. Each writes into `out_dir` (created if missing) and leaves a
// manifest.txt carrying the config hashes and a content hash of every file
// written. Text meant for a terminal goes to `log`.

/// Writes cassi.dct, pan.dct and sensing.ini for the scene at paths.scene.
void cmd_simulate(const RunConfig& rc, const std::filesystem::path& out_dir, const LogSink& log);

/// Writes recon.dct; quality.txt as well when paths.truth is set. Refuses a
/// checkpoint or measurement set made under a different config.
QualityReport cmd_reconstruct(const RunConfig& rc, const std::filesystem::path& out_dir, const LogSink& log);

/// Trains on every .dct cube in paths.dataset (sorted by name). Writes
/// checkpoint.dck and loss.csv. train_steps = 0 saves the initial weights.
std::vector<double> cmd_train(const RunConfig& rc, const std::filesystem::path& out_dir, const LogSink& log);

struct GradSuiteResult {
  std::string name;
  GradCheckReport report;
};
/// Fixed-shape finite-difference checks of every autodiff primitive.
std::vector<GradSuiteResult> primitive_gradient_suite(double tolerance);
/// Full denoiser (input and sigma) and end-to-end K=1 pipeline weights on a
/// 16x16x4 model.
std::vector<GradSuiteResult> network_gradient_suite(double tolerance, std::int64_t max_coords);

/// Runs both suites and writes gradcheck.txt. Returns true when all pass.
bool cmd_gradcheck(const RunConfig& rc, const std::filesystem::path& out_dir, const LogSink& log);

struct AblationRow {
  std::string table;    // "breakdown" or "cg"
  std::string variant;  // baseline, +CRW, ... or CG-1, ...
  int cg_iters = 0;
  double psnr_db = 0.0;
  double ssim = 0.0;
  std::int64_t flops = 0;
  double wall_ms = 0.0;
  double data_objective = 0.0;  // first data step; cg table only
  double final_loss = 0.0;      // breakdown table only
};

/// Break-down rows train a fresh model per variant for ablate_train_steps
/// steps; CG rows reuse paths.checkpoint (fresh weights when unset) with
/// CG-1/2/5/10. Both evaluate a held-out synthetic scene. Writes ablate.csv.
std::vector<AblationRow> cmd_ablate(const RunConfig& rc, const std::filesystem::path& out_dir, const LogSink& log);

struct CorrRow {
  std::string scene;
  CorrProxyReport report;
};
/// One row per seeded synthetic scene, or a single row for paths.scene.
/// Writes corr.csv with a trailing mean row.
std::vector<CorrRow> cmd_analyze_corr(const RunConfig& rc, const std::filesystem::path& out_dir,
                                      const LogSink& log);

/// Writes synth_count synthetic cubes scene_XXX.dct.
void cmd_synth(const RunConfig& rc, const std::filesystem::path& out_dir, const LogSink& log);

}  // namespace dcchi
