// Copyright 2026 The DCCHI Authors
// SPDX-License-Identifier: Apache-2.0

#include <charconv>
#include <sstream>

#include "dcchi/app.hpp"
#include "dcchi/error.hpp"

namespace dcchi {

namespace {

std::string num(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}
std::string num(std::int64_t v) { return std::to_string(v); }
std::string num(std::uint64_t v) { return std::to_string(v); }
std::string num(int v) { return std::to_string(v); }
std::string flag(bool b) { return b ? "true" : "false"; }

std::uint64_t get_u64(const Config& c, const std::string& key, std::uint64_t fallback) {
  const auto v = c.get_int(key, static_cast<std::int64_t>(fallback));
  if (v < 0) throw ConfigError(key + ": must be non-negative");
  return static_cast<std::uint64_t>(v);
}

int get_small(const Config& c, const std::string& key, int fallback) {
  const auto v = c.get_int(key, fallback);
  if (v < -(1 << 30) || v > (1 << 30)) throw ConfigError(key + ": out of range");
  return static_cast<int>(v);
}

Dispersion parse_direction(const std::string& s) {
  if (s == "right") return Dispersion::right;
  if (s == "up") return Dispersion::up;
  throw ConfigError("sensing.direction: expected right or up, got '" + s + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& s) {
  std::vector<double> out;
  std::stringstream in(s);
  for (std::string item; std::getline(in, item, ',');) {
    const auto b = item.find_first_not_of(' ');
    const auto e = item.find_last_not_of(' ');
    double v = 0;
    const char* first = b == std::string::npos ? item.data() : item.data() + b;
    const char* last = b == std::string::npos ? first : item.data() + e + 1;
    auto [p, ec] = std::from_chars(first, last, v);
    if (first == last || ec != std::errc() || p != last) throw ConfigError(key + ": bad list entry '" + item + "'");
    out.push_back(v);
  }
  return out;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + num(v[i]);
  return s;
}

}  // namespace

RunConfig RunConfig::from_config(const Config& c) {
  static const char* kKnown[] = {
      "sensing.preset", "sensing.height", "sensing.width", "sensing.bands", "sensing.step", "sensing.direction",
      "sensing.mask_seed", "sensing.mask_file", "sensing.pan_response", "noise.sigma_c", "noise.sigma_p",
      "noise.seed", "arch.window", "arch.crw", "arch.mha_c", "arch.mha_s", "arch.denoiser", "arch.ffn_mult",
      "arch.init_hidden", "arch.init_seed", "solver.stages", "solver.cg_iters", "train.steps", "train.lr",
      "train.eta_min", "train.batch", "train.seed", "train.sigma_c", "train.sigma_p", "paths.scene", "paths.cassi", "paths.pan",
      "paths.truth", "paths.checkpoint", "paths.dataset", "synth.count", "synth.seed", "corr.window",
      "corr.pan_patch", "corr.kernel", "corr.bandwidth", "corr.scenes", "corr.seed", "corr.height", "corr.width",
      "corr.bands", "gradcheck.tol_primitive", "gradcheck.tol_network", "gradcheck.network_coords", "ablate.mode",
      "ablate.repeats", "ablate.train_steps", "ablate.scene_seed"};
  for (const auto& [key, value] : c.entries()) {
    bool known = false;
    for (const char* k : kKnown) known = known || key == k;
    if (!known) throw ConfigError("unknown config key '" + key + "'");
  }

  RunConfig r;
  r.preset = c.get_string("sensing.preset", r.preset);
  if (r.preset == "simulation") {
    r.step = 2;
    r.direction = Dispersion::right;
  } else if (r.preset == "real") {
    r.step = 1;
    r.direction = Dispersion::up;
  } else {
    throw ConfigError("sensing.preset: expected simulation or real, got '" + r.preset + "'");
  }
  r.height = c.get_int("sensing.height", r.height);
  r.width = c.get_int("sensing.width", r.width);
  r.bands = c.get_int("sensing.bands", r.bands);
  r.step = get_small(c, "sensing.step", r.step);
  if (auto d = c.get("sensing.direction")) r.direction = parse_direction(*d);
  r.mask_seed = get_u64(c, "sensing.mask_seed", r.mask_seed);
  r.mask_file = c.get_string("sensing.mask_file", "");
  if (auto s = c.get("sensing.pan_response"); s && !s->empty()) r.pan_response = parse_list("sensing.pan_response", *s);

  r.sigma_c = c.get_double("noise.sigma_c", r.sigma_c);
  r.sigma_p = c.get_double("noise.sigma_p", r.sigma_p);
  r.noise_seed = get_u64(c, "noise.seed", r.noise_seed);

  r.arch.window = get_small(c, "arch.window", r.arch.window);
  r.arch.crw = c.get_bool("arch.crw", r.arch.crw);
  r.arch.mha_c = c.get_bool("arch.mha_c", r.arch.mha_c);
  r.arch.mha_s = c.get_bool("arch.mha_s", r.arch.mha_s);
  if (auto d = c.get("arch.denoiser")) r.arch.denoiser = parse_denoiser(*d);
  r.arch.ffn_mult = get_small(c, "arch.ffn_mult", r.arch.ffn_mult);
  r.arch.init_hidden = get_small(c, "arch.init_hidden", r.arch.init_hidden);
  r.init_seed = get_u64(c, "arch.init_seed", r.init_seed);
  r.arch.stages = get_small(c, "solver.stages", r.arch.stages);
  r.cg_iters = get_small(c, "solver.cg_iters", r.cg_iters);

  r.train_steps = get_small(c, "train.steps", r.train_steps);
  r.lr = c.get_double("train.lr", r.lr);
  r.eta_min = c.get_double("train.eta_min", r.eta_min);
  r.train_batch = get_small(c, "train.batch", r.train_batch);
  r.train_seed = get_u64(c, "train.seed", r.train_seed);
  r.train_sigma_c = c.get_double("train.sigma_c", r.train_sigma_c);
  r.train_sigma_p = c.get_double("train.sigma_p", r.train_sigma_p);

  r.scene = c.get_string("paths.scene", "");
  r.cassi = c.get_string("paths.cassi", "");
  r.pan = c.get_string("paths.pan", "");
  r.truth = c.get_string("paths.truth", "");
  r.checkpoint = c.get_string("paths.checkpoint", "");
  r.dataset = c.get_string("paths.dataset", "");

  r.synth_count = get_small(c, "synth.count", r.synth_count);
  r.synth_seed = get_u64(c, "synth.seed", r.synth_seed);

  r.corr.window = get_small(c, "corr.window", r.corr.window);
  r.corr.pan_patch = get_small(c, "corr.pan_patch", r.corr.pan_patch);
  if (auto k = c.get("corr.kernel")) r.corr.kernel = parse_kernel(*k);
  r.corr.bandwidth = c.get_double("corr.bandwidth", r.corr.bandwidth);
  r.corr_scenes = get_small(c, "corr.scenes", r.corr_scenes);
  r.corr_seed = get_u64(c, "corr.seed", r.corr_seed);
  r.corr_height = c.get_int("corr.height", r.corr_height);
  r.corr_width = c.get_int("corr.width", r.corr_width);
  r.corr_bands = c.get_int("corr.bands", r.corr_bands);

  r.gc_tol_primitive = c.get_double("gradcheck.tol_primitive", r.gc_tol_primitive);
  r.gc_tol_network = c.get_double("gradcheck.tol_network", r.gc_tol_network);
  r.gc_network_coords = c.get_int("gradcheck.network_coords", r.gc_network_coords);

  r.ablate_mode = c.get_string("ablate.mode", r.ablate_mode);
  r.ablate_repeats = get_small(c, "ablate.repeats", r.ablate_repeats);
  r.ablate_train_steps = get_small(c, "ablate.train_steps", r.ablate_train_steps);
  r.ablate_scene_seed = get_u64(c, "ablate.scene_seed", r.ablate_scene_seed);

  r.validate();
  return r;
}

RunConfig RunConfig::load(const std::filesystem::path& path) { return from_config(Config::load(path)); }

void RunConfig::validate() const {
  if (height <= 0 || width <= 0 || bands <= 0) throw ConfigError("sensing: height, width and bands must be positive");
  if (step < 0) throw ConfigError("sensing.step: must be non-negative");
  if (!pan_response.empty() && static_cast<std::int64_t>(pan_response.size()) != bands)
    throw ConfigError("sensing.pan_response: " + std::to_string(pan_response.size()) + " weights for " +
                      std::to_string(bands) + " bands");
  if (sigma_c < 0 || sigma_p < 0 || train_sigma_c < 0 || train_sigma_p < 0)
    throw ConfigError("noise levels must be non-negative");
  if (arch.stages < 1) throw ConfigError("solver.stages: must be at least 1");
  (void)CgConfig::preset(cg_iters);
  if (train_steps < 0) throw ConfigError("train.steps: must be non-negative");
  if (train_batch < 1) throw ConfigError("train.batch: must be at least 1");
  if (!(lr >= 0) || !(eta_min >= 0)) throw ConfigError("train.lr / train.eta_min: must be non-negative");
  if (synth_count < 1) throw ConfigError("synth.count: must be at least 1");
  if (corr_scenes < 1) throw ConfigError("corr.scenes: must be at least 1");
  if (ablate_mode != "cg" && ablate_mode != "breakdown" && ablate_mode != "both")
    throw ConfigError("ablate.mode: expected cg, breakdown or both, got '" + ablate_mode + "'");
  if (ablate_repeats < 1) throw ConfigError("ablate.repeats: must be at least 1");
  if (ablate_train_steps < 0) throw ConfigError("ablate.train_steps: must be non-negative");
  model_arch().validate();
}

ArchConfig RunConfig::model_arch() const {
  ArchConfig a = arch;
  a.height = height;
  a.width = width;
  a.bands = bands;
  return a;
}

Config RunConfig::sensing_config() const {
  Config c;
  c.set("sensing.preset", preset);
  c.set("sensing.height", num(height));
  c.set("sensing.width", num(width));
  c.set("sensing.bands", num(bands));
  c.set("sensing.step", num(step));
  c.set("sensing.direction", dispersion_name(direction));
  c.set("sensing.mask_seed", num(mask_seed));
  c.set("sensing.mask_file", mask_file);
  c.set("sensing.pan_response", join(pan_response));
  return c;
}

Config RunConfig::model_config() const {
  Config c;
  c.set("sensing.height", num(height));
  c.set("sensing.width", num(width));
  c.set("sensing.bands", num(bands));
  c.set("arch.window", num(arch.window));
  c.set("arch.crw", flag(arch.crw));
  c.set("arch.mha_c", flag(arch.mha_c));
  c.set("arch.mha_s", flag(arch.mha_s));
  c.set("arch.denoiser", denoiser_name(arch.denoiser));
  c.set("arch.ffn_mult", num(arch.ffn_mult));
  c.set("arch.init_hidden", num(arch.init_hidden));
  c.set("solver.stages", num(arch.stages));
  return c;
}

Config RunConfig::to_config() const {
  Config c = sensing_config();
  const Config model = model_config();
  for (const auto& [k, v] : model.entries()) c.set(k, v);
  c.set("noise.sigma_c", num(sigma_c));
  c.set("noise.sigma_p", num(sigma_p));
  c.set("noise.seed", num(noise_seed));
  c.set("arch.init_seed", num(init_seed));
  c.set("solver.cg_iters", num(cg_iters));
  c.set("train.steps", num(train_steps));
  c.set("train.lr", num(lr));
  c.set("train.eta_min", num(eta_min));
  c.set("train.batch", num(train_batch));
  c.set("train.seed", num(train_seed));
  c.set("train.sigma_c", num(train_sigma_c));
  c.set("train.sigma_p", num(train_sigma_p));
  c.set("paths.scene", scene);
  c.set("paths.cassi", cassi);
  c.set("paths.pan", pan);
  c.set("paths.truth", truth);
  c.set("paths.checkpoint", checkpoint);
  c.set("paths.dataset", dataset);
  c.set("synth.count", num(synth_count));
  c.set("synth.seed", num(synth_seed));
  c.set("corr.window", num(corr.window));
  c.set("corr.pan_patch", num(corr.pan_patch));
  c.set("corr.kernel", kernel_name(corr.kernel));
  c.set("corr.bandwidth", num(corr.bandwidth));
  c.set("corr.scenes", num(corr_scenes));
  c.set("corr.seed", num(corr_seed));
  c.set("corr.height", num(corr_height));
  c.set("corr.width", num(corr_width));
  c.set("corr.bands", num(corr_bands));
  c.set("gradcheck.tol_primitive", num(gc_tol_primitive));
  c.set("gradcheck.tol_network", num(gc_tol_network));
  c.set("gradcheck.network_coords", num(gc_network_coords));
  c.set("ablate.mode", ablate_mode);
  c.set("ablate.repeats", num(ablate_repeats));
  c.set("ablate.train_steps", num(ablate_train_steps));
  c.set("ablate.scene_seed", num(ablate_scene_seed));
  return c;
}

std::uint64_t RunConfig::hash() const { return fnv1a(to_config().to_text()); }
std::uint64_t RunConfig::model_hash() const { return fnv1a(model_config().to_text()); }
std::uint64_t RunConfig::sensing_hash() const { return fnv1a(sensing_config().to_text()); }

SensingSystem RunConfig::sensing() const {
  CodedMask mask = CodedMask::bernoulli(height, width, mask_seed);
  if (!mask_file.empty()) {
    auto m = load_tensor(mask_file);
    if (m.shape() != Shape{height, width})
      throw DimensionError("mask file " + mask_file + " has shape " + shape_str(m.shape()) + ", expected " +
                           shape_str({height, width}));
    mask = CodedMask::from_values(height, width, m.to_vector());
  }
  auto response = pan_response;
  if (response.empty()) response.assign(static_cast<std::size_t>(bands), 1.0 / static_cast<double>(bands));
  return SensingSystem(bands, step, direction, std::move(mask), std::move(response));
}

void apply_overrides(RunConfig& rc, const Overrides& o) {
  if (o.seed) rc.noise_seed = rc.init_seed = rc.train_seed = *o.seed;
  if (o.cg_iters) rc.cg_iters = *o.cg_iters;
  if (o.stages) rc.arch.stages = *o.stages;
  if (o.disable_crw) rc.arch.crw = false;
  if (o.disable_mhac) rc.arch.mha_c = false;
  if (o.disable_mhas) rc.arch.mha_s = false;
  rc.validate();
}

}  // namespace dcchi
