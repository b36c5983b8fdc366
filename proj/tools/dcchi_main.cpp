// Copyright 2026 The DCCHI Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end. Everything goes through the C interface.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "dcchi.h"

namespace {

// Exit codes: 0 ok, 2 config (also dimension / io / bad arguments),
// 3 numeric failure (also a failed gradient check), 4 format error.
int exit_code(dcchi_status s) {
  switch (s) {
    case DCCHI_OK: return 0;
    case DCCHI_ERR_NUMERIC: return 3;
    case DCCHI_ERR_FORMAT: return 4;
    case DCCHI_ERR_STATE:
    case DCCHI_ERR_INTERNAL: return 1;
    default: return 2;
  }
}

void print_line(const char* line, void*) { std::printf("%s\n", line); }

struct Options {
  std::string config;
  std::string out = "out";
  std::vector<std::string> sets;
  long long seed = -1;
  int cg_iters = 0;
  int stages = 0;
  bool disable_crw = false;
  bool disable_mhac = false;
  bool disable_mhas = false;
};

using ConfigPtr = std::unique_ptr<dcchi_config, decltype(&dcchi_config_destroy)>;

dcchi_status build_config(const Options& o, ConfigPtr& cfg) {
  dcchi_config* raw = nullptr;
  dcchi_status s = o.config.empty() ? dcchi_config_create(&raw) : dcchi_config_load(o.config.c_str(), &raw);
  if (s != DCCHI_OK) return s;
  cfg.reset(raw);
  std::vector<std::pair<std::string, std::string>> kv;
  for (const auto& item : o.sets) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "error: --set expects key=value, got '%s'\n", item.c_str());
      return DCCHI_ERR_CONFIG;
    }
    kv.emplace_back(item.substr(0, eq), item.substr(eq + 1));
  }
  if (o.seed >= 0)
    for (const char* key : {"noise.seed", "arch.init_seed", "train.seed"}) kv.emplace_back(key, std::to_string(o.seed));
  if (o.cg_iters > 0) kv.emplace_back("solver.cg_iters", std::to_string(o.cg_iters));
  if (o.stages > 0) kv.emplace_back("solver.stages", std::to_string(o.stages));
  if (o.disable_crw) kv.emplace_back("arch.crw", "false");
  if (o.disable_mhac) kv.emplace_back("arch.mha_c", "false");
  if (o.disable_mhas) kv.emplace_back("arch.mha_s", "false");
  for (const auto& [k, v] : kv)
    if ((s = dcchi_config_set(cfg.get(), k.c_str(), v.c_str())) != DCCHI_OK) return s;
  return DCCHI_OK;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dual-camera compressive hyperspectral imaging toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(dcchi_version()));

  Options o;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "config file (sectioned key = value)")->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "output directory")->capture_default_str();
    sub->add_option("--set", o.sets, "extra setting, section.key=value (repeatable)");
    sub->add_option("--seed", o.seed, "seed for noise, weight init and training")->check(CLI::NonNegativeNumber);
    sub->add_option("--cg-iters", o.cg_iters, "CG iterations per data step (1, 2, 5 or 10)");
    sub->add_option("--stages", o.stages, "number of unrolled stages")->check(CLI::PositiveNumber);
    sub->add_flag("--disable-crw", o.disable_crw, "turn off cosine similarity reweighting");
    sub->add_flag("--disable-mhac", o.disable_mhac, "turn off channel attention");
    sub->add_flag("--disable-mhas", o.disable_mhas, "turn off PAN-guided spatial attention");
  };
  auto* simulate = app.add_subcommand("simulate", "simulate CASSI + PAN measurements of paths.scene");
  auto* reconstruct = app.add_subcommand("reconstruct", "reconstruct a cube from measurements and a checkpoint");
  auto* train = app.add_subcommand("train", "train on the cubes in paths.dataset");
  auto* gradcheck = app.add_subcommand("gradcheck", "finite-difference checks of primitives and the network");
  auto* ablate = app.add_subcommand("ablate", "component break-down and CG-iteration tables");
  auto* corr = app.add_subcommand("analyze-corr", "HSI vs PAN spatial correlation map comparison");
  auto* synth = app.add_subcommand("synth", "write seeded synthetic cubes");
  for (auto* sub : {simulate, reconstruct, train, gradcheck, ablate, corr, synth}) common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  ConfigPtr cfg(nullptr, &dcchi_config_destroy);
  dcchi_status s = build_config(o, cfg);
  const char* out = o.out.c_str();
  int passed = 1;
  if (s == DCCHI_OK) {
    if (*simulate) {
      s = dcchi_simulate(cfg.get(), out, print_line, nullptr);
    } else if (*reconstruct) {
      double psnr = NAN, ssim = NAN;
      s = dcchi_reconstruct(cfg.get(), out, print_line, nullptr, &psnr, &ssim);
    } else if (*train) {
      double loss = NAN;
      s = dcchi_train(cfg.get(), out, print_line, nullptr, &loss);
    } else if (*gradcheck) {
      s = dcchi_gradcheck(cfg.get(), out, print_line, nullptr, &passed);
    } else if (*ablate) {
      s = dcchi_ablate(cfg.get(), out, print_line, nullptr);
    } else if (*corr) {
      double mean = NAN;
      s = dcchi_analyze_corr(cfg.get(), out, print_line, nullptr, &mean);
    } else if (*synth) {
      s = dcchi_synth(cfg.get(), out, print_line, nullptr);
    }
  }
  if (s != DCCHI_OK) {
    std::fprintf(stderr, "error (%s): %s\n", dcchi_status_name(s), dcchi_last_error());
    return exit_code(s);
  }
  if (!passed) {
    std::fprintf(stderr, "gradient check failed\n");
    return 3;
  }
  return 0;
}
