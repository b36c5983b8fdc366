// Copyright 2026 The DCCHI Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "dcchi/app.hpp"
#include "dcchi/error.hpp"
#include "dcchi/ops.hpp"
#include "dcchi/pipeline.hpp"
#include "dcchi/scenes.hpp"

namespace dcchi {

namespace fs = std::filesystem;

namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

void emit(const LogSink& log, const std::string& s) {
  if (log) log(s);
}

std::span<const std::uint8_t> as_bytes(const std::string& s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

// Output directory bookkeeping: every file goes through here so the
// manifest can list it with a content hash.
class OutputDir {
 public:
  OutputDir(const fs::path& dir, const RunConfig& rc, std::string command)
      : dir_(dir), rc_(rc), command_(std::move(command)) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw IoError("cannot create output directory '" + dir_.string() + "': " + ec.message());
  }

  fs::path path(const std::string& name) const { return dir_ / name; }

  void tensor(const std::string& name, const Tensor& t) {
    auto bytes = encode_tensor(t);
    write_file_atomic(path(name), bytes);
    files_.emplace_back(name, fnv1a({reinterpret_cast<const char*>(bytes.data()), bytes.size()}));
  }
  void text(const std::string& name, const std::string& body) {
    write_file_atomic(path(name), as_bytes(body));
    files_.emplace_back(name, fnv1a(body));
  }
  void checkpoint(const std::string& name, const Checkpoint& ck) {
    save_checkpoint(path(name), ck);
    auto bytes = read_file(path(name));
    files_.emplace_back(name, fnv1a({reinterpret_cast<const char*>(bytes.data()), bytes.size()}));
  }

  void finish() const {
    std::ostringstream m;
    m << "command = " << command_ << "\n";
    m << "config_hash = " << hash_hex(rc_.hash()) << "\n";
    m << "model_hash = " << hash_hex(rc_.model_hash()) << "\n";
    m << "sensing_hash = " << hash_hex(rc_.sensing_hash()) << "\n";
    for (const auto& [name, h] : files_) m << "file " << name << " = " << hash_hex(h) << "\n";
    m << "\n# config\n" << rc_.to_config().to_text();
    write_file_atomic(path("manifest.txt"), as_bytes(m.str()));
  }

 private:
  fs::path dir_;
  const RunConfig& rc_;
  std::string command_;
  std::vector<std::pair<std::string, std::uint64_t>> files_;
};

const std::string& require(const std::string& value, const char* key) {
  if (value.empty()) throw ConfigError(std::string(key) + " is not set");
  return value;
}

Tensor load_cube(const std::string& path, const Shape& expect) {
  auto t = load_tensor(path);
  if (t.shape() != expect)
    throw DimensionError(path + ": shape " + shape_str(t.shape()) + ", expected " + shape_str(expect));
  return t.to(DType::f64);
}

MeasurementPair load_measurements(const RunConfig& rc, const SensingSystem& sys) {
  // Measurements carry the sensing config they were made with; replaying
  // them under another one is refused.
  const fs::path cassi = require(rc.cassi, "paths.cassi");
  const auto ini = cassi.parent_path() / "sensing.ini";
  if (fs::exists(ini)) {
    const auto stored = Config::load(ini);
    const auto current = rc.sensing_config();
    if (fnv1a(stored.to_text()) != fnv1a(current.to_text()))
      throw ConfigError("measurements in '" + cassi.parent_path().string() +
                        "' were made under a different sensing config:\n" + config_diff(stored, current));
  }
  MeasurementPair y{load_tensor(cassi).to(DType::f64), load_tensor(require(rc.pan, "paths.pan")).to(DType::f64)};
  validate_measurements(y, sys);
  return y;
}

ParamStore load_weights(const RunConfig& rc) {
  auto ck = load_checkpoint(require(rc.checkpoint, "paths.checkpoint"));
  const auto current = rc.model_config();
  if (ck.model_hash != rc.model_hash() || ck.stages != static_cast<std::uint32_t>(rc.arch.stages)) {
    throw ConfigError("checkpoint '" + rc.checkpoint + "' was written for model config " + hash_hex(ck.model_hash) +
                      ", current is " + hash_hex(rc.model_hash()) + ":\n" +
                      config_diff(Config::parse(ck.model_text, rc.checkpoint), current));
  }
  return ck.weights;
}

Checkpoint make_checkpoint(const RunConfig& rc, const ParamStore& w) {
  Checkpoint ck;
  ck.model_hash = rc.model_hash();
  ck.stages = static_cast<std::uint32_t>(rc.arch.stages);
  ck.model_text = rc.model_config().to_text();
  ck.weights = w.detached();
  return ck;
}

std::vector<Tensor> synthetic_dataset(const RunConfig& rc) {
  std::vector<Tensor> data;
  for (int i = 0; i < rc.synth_count; ++i)
    data.push_back(synthetic_scene(rc.height, rc.width, rc.bands, rc.synth_seed + static_cast<std::uint64_t>(i)));
  return data;
}

std::vector<Tensor> load_dataset(const RunConfig& rc) {
  const fs::path dir = require(rc.dataset, "paths.dataset");
  if (!fs::is_directory(dir)) throw IoError("dataset directory '" + dir.string() + "' does not exist");
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".dct") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw ConfigError("dataset directory '" + dir.string() + "' holds no .dct cubes");
  std::vector<Tensor> data;
  for (const auto& f : files) data.push_back(load_cube(f.string(), {rc.height, rc.width, rc.bands}));
  return data;
}

TrainConfig train_config(const RunConfig& rc, int steps) {
  TrainConfig t;
  t.steps = steps;
  t.lr = rc.lr;
  t.eta_min = rc.eta_min;
  t.batch_size = rc.train_batch;
  t.seed = rc.train_seed;
  t.noise_sigma_c = rc.train_sigma_c;
  t.noise_sigma_p = rc.train_sigma_p;
  t.cg = rc.cg();
  return t;
}

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

void cmd_simulate(const RunConfig& rc, const fs::path& out_dir, const LogSink& log) {
  const auto sys = rc.sensing();
  const auto scene = load_cube(require(rc.scene, "paths.scene"), sys.cube_shape());
  const auto y = simulate(scene, sys, {rc.sigma_c, rc.sigma_p, rc.noise_seed});
  OutputDir out(out_dir, rc, "simulate");
  out.tensor("cassi.dct", y.cassi);
  out.tensor("pan.dct", y.pan);
  out.text("sensing.ini", rc.sensing_config().to_text());
  out.finish();
  emit(log, "simulate: cassi " + shape_str(y.cassi.shape()) + ", pan " + shape_str(y.pan.shape()) + " -> " +
                out_dir.string());
}

QualityReport cmd_reconstruct(const RunConfig& rc, const fs::path& out_dir, const LogSink& log) {
  const auto sys = rc.sensing();
  const auto arch = rc.model_arch();
  const auto w = load_weights(rc);
  const auto y = load_measurements(rc, sys);
  NoGradGuard no_grad;
  PipelineTrace trace;
  const auto x = run_pipeline(y, sys, w, arch, {rc.cg(), {}, {}}, &trace);
  OutputDir out(out_dir, rc, "reconstruct");
  out.tensor("recon.dct", x);
  QualityReport report;
  if (!rc.truth.empty()) {
    report = quality(x, load_cube(rc.truth, sys.cube_shape()));
    out.text("quality.txt", report.to_text());
    emit(log, "reconstruct: PSNR " + fmt("%.3f", report.psnr_db) + " dB, SSIM " + fmt("%.4f", report.ssim));
  }
  out.finish();
  emit(log, "reconstruct: " + std::to_string(arch.stages) + " stages, CG-" + std::to_string(rc.cg_iters) + " -> " +
                out.path("recon.dct").string());
  return report;
}

std::vector<double> cmd_train(const RunConfig& rc, const fs::path& out_dir, const LogSink& log) {
  const auto sys = rc.sensing();
  const auto arch = rc.model_arch();
  const auto data = load_dataset(rc);
  const auto model = Model::create(arch, rc.init_seed);
  auto cfg = train_config(rc, rc.train_steps);
  const int every = std::max(1, rc.train_steps / 10);
  cfg.on_step = [&](int step, double loss) {
    if (step % every == 0 || step + 1 == rc.train_steps)
      emit(log, "train: step " + std::to_string(step) + " loss " + fmt("%.6f", loss));
  };
  auto result = train(data, sys, arch, model.weights, cfg);
  OutputDir out(out_dir, rc, "train");
  out.checkpoint("checkpoint.dck", make_checkpoint(rc, result.weights));
  std::ostringstream csv;
  csv << "step,lr,loss\n";
  char line[96];
  for (std::size_t i = 0; i < result.losses.size(); ++i) {
    std::snprintf(line, sizeof line, "%zu,%.17g,%.17g\n", i, cosine_lr(cfg, static_cast<int>(i)), result.losses[i]);
    csv << line;
  }
  out.text("loss.csv", csv.str());
  out.finish();
  emit(log, "train: " + std::to_string(data.size()) + " cubes, " + std::to_string(rc.train_steps) + " steps -> " +
                out.path("checkpoint.dck").string());
  return result.losses;
}

bool cmd_gradcheck(const RunConfig& rc, const fs::path& out_dir, const LogSink& log) {
  auto results = primitive_gradient_suite(rc.gc_tol_primitive);
  auto net = network_gradient_suite(rc.gc_tol_network, rc.gc_network_coords);
  results.insert(results.end(), net.begin(), net.end());
  bool all = true;
  std::ostringstream text;
  for (const auto& r : results) {
    all = all && r.report.passed;
    const auto line = std::string(r.report.passed ? "PASS " : "FAIL ") + r.name + ": " + r.report.summary();
    text << line << "\n";
    emit(log, line);
  }
  text << (all ? "all checks passed\n" : "some checks failed\n");
  OutputDir out(out_dir, rc, "gradcheck");
  out.text("gradcheck.txt", text.str());
  out.finish();
  return all;
}

std::vector<AblationRow> cmd_ablate(const RunConfig& rc, const fs::path& out_dir, const LogSink& log) {
  const auto sys = rc.sensing();
  const auto truth = synthetic_scene(rc.height, rc.width, rc.bands, rc.ablate_scene_seed);
  const auto y = simulate(truth, sys, {rc.sigma_c, rc.sigma_p, rc.noise_seed});
  std::vector<AblationRow> rows;

  if (rc.ablate_mode != "cg") {
    const auto data = rc.dataset.empty() ? synthetic_dataset(rc) : load_dataset(rc);
    const std::tuple<const char*, bool, bool, bool> variants[] = {
        {"baseline", false, false, false}, {"+CRW", true, false, false}, {"+MHA-C", true, true, false},
        {"+MHA-S", true, true, true}};
    for (const auto& [name, c, mc, ms] : variants) {
      auto arch = rc.model_arch();
      arch.crw = c;
      arch.mha_c = mc;
      arch.mha_s = ms;
      auto model = Model::create(arch, rc.init_seed);
      AblationRow row{"breakdown", name, rc.cg_iters};
      row.final_loss = std::numeric_limits<double>::quiet_NaN();
      if (rc.ablate_train_steps > 0) {
        auto r = train(data, sys, arch, model.weights, train_config(rc, rc.ablate_train_steps));
        model.weights = r.weights;
        row.final_loss = r.losses.back();
      }
      NoGradGuard no_grad;
      row.wall_ms = std::numeric_limits<double>::infinity();
      Tensor x;
      for (int rep = 0; rep < rc.ablate_repeats; ++rep) {
        const auto t0 = std::chrono::steady_clock::now();
        x = run_pipeline(y, sys, model.weights, arch, {rc.cg(), {}, {}});
        row.wall_ms = std::min(row.wall_ms, elapsed_ms(t0));
      }
      const auto q = quality(x, truth);
      row.psnr_db = q.psnr_db;
      row.ssim = q.ssim;
      row.flops = flop_count(arch, rc.cg_iters).flops();
      rows.push_back(row);
    }
  }

  if (rc.ablate_mode != "breakdown") {
    const auto arch = rc.model_arch();
    const auto weights = rc.checkpoint.empty() ? Model::create(arch, rc.init_seed).weights : load_weights(rc);
    const int presets[] = {1, 2, 5, 10};
    std::vector<AblationRow> cg_rows;
    std::vector<PipelineTrace> traces(4);
    std::vector<Tensor> outputs(4);
    for (int iters : presets) {
      AblationRow row{"cg", "CG-" + std::to_string(iters), iters};
      row.wall_ms = std::numeric_limits<double>::infinity();
      row.flops = flop_count(arch, iters).flops();
      row.final_loss = std::numeric_limits<double>::quiet_NaN();
      cg_rows.push_back(row);
    }
    NoGradGuard no_grad;
    // Interleaved repeats so that slow phases of the machine hit every
    // preset alike; the minimum is the least noisy estimate.
    for (int rep = 0; rep < rc.ablate_repeats; ++rep) {
      for (std::size_t i = 0; i < cg_rows.size(); ++i) {
        PipelineTrace trace;
        const auto t0 = std::chrono::steady_clock::now();
        outputs[i] = run_pipeline(y, sys, weights, arch, {CgConfig::preset(presets[i]), {}, {}}, &trace);
        cg_rows[i].wall_ms = std::min(cg_rows[i].wall_ms, elapsed_ms(t0));
        traces[i] = std::move(trace);
      }
    }
    for (std::size_t i = 0; i < cg_rows.size(); ++i) {
      const auto q = quality(outputs[i], truth);
      cg_rows[i].psnr_db = q.psnr_db;
      cg_rows[i].ssim = q.ssim;
      cg_rows[i].data_objective = data_objective(traces[i].x[0], y, traces[i].x0, traces[i].mu[0], sys);
    }
    rows.insert(rows.end(), cg_rows.begin(), cg_rows.end());
  }

  std::ostringstream csv;
  csv << "table,variant,cg_iters,psnr_db,ssim,flops,wall_ms,data_objective,final_loss\n";
  char line[256];
  emit(log, "table      variant   CG   PSNR(dB)  SSIM    GFLOPs   time(ms)  objective");
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%s,%s,%d,%.17g,%.17g,%lld,%.6f,%.17g,%.17g\n", r.table.c_str(),
                  r.variant.c_str(), r.cg_iters, r.psnr_db, r.ssim, static_cast<long long>(r.flops), r.wall_ms,
                  r.data_objective, r.final_loss);
    csv << line;
    std::snprintf(line, sizeof line, "%-10s %-9s %-4d %-9.3f %-7.4f %-8.4f %-9.2f %.6g", r.table.c_str(),
                  r.variant.c_str(), r.cg_iters, r.psnr_db, r.ssim, static_cast<double>(r.flops) * 1e-9, r.wall_ms,
                  r.data_objective);
    emit(log, line);
  }
  OutputDir out(out_dir, rc, "ablate");
  out.text("ablate.csv", csv.str());
  out.finish();
  return rows;
}

std::vector<CorrRow> cmd_analyze_corr(const RunConfig& rc, const fs::path& out_dir, const LogSink& log) {
  std::vector<std::pair<std::string, Tensor>> scenes;
  if (!rc.scene.empty()) {
    auto cube = load_tensor(rc.scene).to(DType::f64);
    if (cube.rank() != 3) throw DimensionError(rc.scene + ": expected an [H, W, C] cube, got " + shape_str(cube.shape()));
    scenes.emplace_back(fs::path(rc.scene).filename().string(), cube);
  } else {
    for (int i = 0; i < rc.corr_scenes; ++i) {
      const auto seed = rc.corr_seed + static_cast<std::uint64_t>(i);
      scenes.emplace_back("synthetic_" + std::to_string(seed),
                          synthetic_scene(rc.corr_height, rc.corr_width, rc.corr_bands, seed));
    }
  }
  std::vector<CorrRow> rows;
  for (const auto& [name, cube] : scenes) {
    const auto C = cube.dim(2);
    auto response = rc.pan_response;
    if (static_cast<std::int64_t>(response.size()) != C) response.assign(static_cast<std::size_t>(C), 1.0 / C);
    std::vector<double> pan(static_cast<std::size_t>(cube.dim(0) * cube.dim(1)), 0.0);
    for (std::size_t p = 0; p < pan.size(); ++p)
      for (std::int64_t c = 0; c < C; ++c) pan[p] += response[c] * cube.at(static_cast<std::int64_t>(p) * C + c);
    rows.push_back({name, proxy_compare(cube, Tensor::from_vector({cube.dim(0), cube.dim(1)}, pan), rc.corr)});
  }
  std::ostringstream csv;
  csv << "scene,rmse,correlation,psnr_db\n";
  CorrProxyReport mean;
  char line[160];
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%s,%.17g,%.17g,%.17g\n", r.scene.c_str(), r.report.rmse, r.report.correlation,
                  r.report.psnr_db);
    csv << line;
    mean.rmse += r.report.rmse / static_cast<double>(rows.size());
    mean.correlation += r.report.correlation / static_cast<double>(rows.size());
    mean.psnr_db += r.report.psnr_db / static_cast<double>(rows.size());
  }
  std::snprintf(line, sizeof line, "mean,%.17g,%.17g,%.17g\n", mean.rmse, mean.correlation, mean.psnr_db);
  csv << line;
  OutputDir out(out_dir, rc, "analyze-corr");
  out.text("corr.csv", csv.str());
  out.finish();
  emit(log, "analyze-corr: " + std::to_string(rows.size()) + " scenes, mean RMSE " + fmt("%.4f", mean.rmse) +
                ", correlation " + fmt("%.4f", mean.correlation) + ", PSNR " + fmt("%.2f", mean.psnr_db) + " dB");
  return rows;
}

void cmd_synth(const RunConfig& rc, const fs::path& out_dir, const LogSink& log) {
  OutputDir out(out_dir, rc, "synth");
  const auto data = synthetic_dataset(rc);
  char name[32];
  for (std::size_t i = 0; i < data.size(); ++i) {
    std::snprintf(name, sizeof name, "scene_%03zu.dct", i);
    out.tensor(name, data[i]);
  }
  out.finish();
  emit(log, "synth: " + std::to_string(data.size()) + " cubes " + shape_str(data.front().shape()) + " -> " +
                out_dir.string());
}

}  // namespace dcchi
