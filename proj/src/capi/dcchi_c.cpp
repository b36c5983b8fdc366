// Copyright 2026 The DCCHI Authors
// SPDX-License-Identifier: Apache-2.0

#include "dcchi.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <new>
#include <string>

#include "dcchi/app.hpp"
#include "dcchi/error.hpp"
#include "dcchi/io.hpp"

struct dcchi_config {
  dcchi::Config raw;
  dcchi::RunConfig run;
};

struct dcchi_tensor {
  dcchi::Tensor value;
};

namespace {

thread_local std::string g_last_error;

dcchi_status fail(dcchi_status s, const char* what) {
  g_last_error = what;
  return s;
}

template <typename Fn>
dcchi_status guarded(Fn&& fn) {
  g_last_error.clear();
  try {
    fn();
    return DCCHI_OK;
  } catch (const dcchi::Error& e) {
    return fail(static_cast<dcchi_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(DCCHI_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(DCCHI_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(DCCHI_ERR_INTERNAL, "unknown error");
  }
}

void need(const void* p, const char* what) {
  if (!p) throw dcchi::InvalidArgument(std::string(what) + " is null");
}

dcchi::LogSink sink(dcchi_log_fn log, void* user) {
  if (!log) return {};
  return [log, user](const std::string& line) { log(line.c_str(), user); };
}

dcchi_config* make_config(dcchi::Config raw) {
  auto run = dcchi::RunConfig::from_config(raw);
  return new dcchi_config{std::move(raw), std::move(run)};
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

extern "C" {

const char* dcchi_version(void) { return "0.1.0"; }

const char* dcchi_status_name(dcchi_status status) {
  switch (status) {
    case DCCHI_OK: return "ok";
    case DCCHI_ERR_INVALID_ARGUMENT: return "invalid argument";
    case DCCHI_ERR_CONFIG: return "config error";
    case DCCHI_ERR_NUMERIC: return "numeric failure";
    case DCCHI_ERR_FORMAT: return "format error";
    case DCCHI_ERR_DIMENSION: return "dimension error";
    case DCCHI_ERR_STATE: return "state error";
    case DCCHI_ERR_IO: return "io error";
    case DCCHI_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* dcchi_last_error(void) { return g_last_error.c_str(); }

dcchi_status dcchi_config_create(dcchi_config** out) {
  return guarded([&] {
    need(out, "out");
    *out = make_config({});
  });
}

dcchi_status dcchi_config_load(const char* path, dcchi_config** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = make_config(dcchi::Config::load(path));
  });
}

dcchi_status dcchi_config_parse(const char* text, dcchi_config** out) {
  return guarded([&] {
    need(text, "text");
    need(out, "out");
    *out = make_config(dcchi::Config::parse(text));
  });
}

void dcchi_config_destroy(dcchi_config* cfg) { delete cfg; }

dcchi_status dcchi_config_set(dcchi_config* cfg, const char* key, const char* value) {
  return guarded([&] {
    need(cfg, "cfg");
    need(key, "key");
    need(value, "value");
    auto raw = cfg->raw;
    raw.set(key, value);
    auto run = dcchi::RunConfig::from_config(raw);
    cfg->raw = std::move(raw);
    cfg->run = std::move(run);
  });
}

dcchi_status dcchi_config_hash(const dcchi_config* cfg, uint64_t* out) {
  return guarded([&] {
    need(cfg, "cfg");
    need(out, "out");
    *out = cfg->run.hash();
  });
}

dcchi_status dcchi_config_model_hash(const dcchi_config* cfg, uint64_t* out) {
  return guarded([&] {
    need(cfg, "cfg");
    need(out, "out");
    *out = cfg->run.model_hash();
  });
}

dcchi_status dcchi_config_text(const dcchi_config* cfg, char* buffer, size_t capacity, size_t* needed) {
  return guarded([&] {
    need(cfg, "cfg");
    const auto text = cfg->run.to_config().to_text();
    if (needed) *needed = text.size() + 1;
    if (buffer && capacity > 0) {
      const auto n = std::min(capacity - 1, text.size());
      std::memcpy(buffer, text.data(), n);
      buffer[n] = '\0';
    }
  });
}

dcchi_status dcchi_synth(const dcchi_config* cfg, const char* out_dir, dcchi_log_fn log, void* user) {
  return guarded([&] {
    need(cfg, "cfg");
    need(out_dir, "out_dir");
    dcchi::cmd_synth(cfg->run, out_dir, sink(log, user));
  });
}

dcchi_status dcchi_simulate(const dcchi_config* cfg, const char* out_dir, dcchi_log_fn log, void* user) {
  return guarded([&] {
    need(cfg, "cfg");
    need(out_dir, "out_dir");
    dcchi::cmd_simulate(cfg->run, out_dir, sink(log, user));
  });
}

dcchi_status dcchi_reconstruct(const dcchi_config* cfg, const char* out_dir, dcchi_log_fn log, void* user,
                               double* psnr_db, double* ssim) {
  return guarded([&] {
    need(cfg, "cfg");
    need(out_dir, "out_dir");
    auto q = dcchi::cmd_reconstruct(cfg->run, out_dir, sink(log, user));
    const bool scored = !cfg->run.truth.empty();
    if (psnr_db) *psnr_db = scored ? q.psnr_db : kNaN;
    if (ssim) *ssim = scored ? q.ssim : kNaN;
  });
}

dcchi_status dcchi_train(const dcchi_config* cfg, const char* out_dir, dcchi_log_fn log, void* user,
                         double* final_loss) {
  return guarded([&] {
    need(cfg, "cfg");
    need(out_dir, "out_dir");
    auto losses = dcchi::cmd_train(cfg->run, out_dir, sink(log, user));
    if (final_loss) *final_loss = losses.empty() ? kNaN : losses.back();
  });
}

dcchi_status dcchi_gradcheck(const dcchi_config* cfg, const char* out_dir, dcchi_log_fn log, void* user,
                             int* passed) {
  return guarded([&] {
    need(cfg, "cfg");
    need(out_dir, "out_dir");
    const bool ok = dcchi::cmd_gradcheck(cfg->run, out_dir, sink(log, user));
    if (passed) *passed = ok ? 1 : 0;
  });
}

dcchi_status dcchi_ablate(const dcchi_config* cfg, const char* out_dir, dcchi_log_fn log, void* user) {
  return guarded([&] {
    need(cfg, "cfg");
    need(out_dir, "out_dir");
    dcchi::cmd_ablate(cfg->run, out_dir, sink(log, user));
  });
}

dcchi_status dcchi_analyze_corr(const dcchi_config* cfg, const char* out_dir, dcchi_log_fn log, void* user,
                                double* mean_correlation) {
  return guarded([&] {
    need(cfg, "cfg");
    need(out_dir, "out_dir");
    auto rows = dcchi::cmd_analyze_corr(cfg->run, out_dir, sink(log, user));
    double mean = 0.0;
    for (const auto& r : rows) mean += r.report.correlation / static_cast<double>(rows.size());
    if (mean_correlation) *mean_correlation = mean;
  });
}

dcchi_status dcchi_tensor_create(dcchi_dtype dtype, int ndim, const int64_t* shape, const double* data,
                                 dcchi_tensor** out) {
  return guarded([&] {
    need(out, "out");
    if (dtype != DCCHI_F32 && dtype != DCCHI_F64) throw dcchi::InvalidArgument("unknown dtype");
    if (ndim < 0 || (ndim > 0 && !shape)) throw dcchi::InvalidArgument("bad shape");
    dcchi::Shape s(shape, shape + ndim);
    for (auto e : s)
      if (e <= 0) throw dcchi::InvalidArgument("extents must be positive");
    const auto n = dcchi::shape_numel(s);
    need(data, "data");
    *out = new dcchi_tensor{dcchi::Tensor::from_vector(s, std::vector<double>(data, data + n),
                                                       static_cast<dcchi::DType>(dtype))};
  });
}

dcchi_status dcchi_tensor_load(const char* path, dcchi_tensor** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new dcchi_tensor{dcchi::load_tensor(path)};
  });
}

dcchi_status dcchi_tensor_save(const dcchi_tensor* t, const char* path) {
  return guarded([&] {
    need(t, "tensor");
    need(path, "path");
    dcchi::save_tensor(path, t->value);
  });
}

void dcchi_tensor_destroy(dcchi_tensor* t) { delete t; }

int dcchi_tensor_ndim(const dcchi_tensor* t) { return t ? t->value.rank() : -1; }

dcchi_dtype dcchi_tensor_dtype(const dcchi_tensor* t) {
  return t ? static_cast<dcchi_dtype>(t->value.dtype()) : DCCHI_F64;
}

int64_t dcchi_tensor_numel(const dcchi_tensor* t) { return t ? t->value.numel() : -1; }

dcchi_status dcchi_tensor_shape(const dcchi_tensor* t, int64_t* shape, int capacity) {
  return guarded([&] {
    need(t, "tensor");
    need(shape, "shape");
    for (int i = 0; i < std::min(capacity, t->value.rank()); ++i) shape[i] = t->value.shape()[i];
  });
}

dcchi_status dcchi_tensor_read(const dcchi_tensor* t, double* data, int64_t count) {
  return guarded([&] {
    need(t, "tensor");
    need(data, "data");
    if (count != t->value.numel())
      throw dcchi::DimensionError("buffer holds " + std::to_string(count) + " values, tensor has " +
                                  std::to_string(t->value.numel()));
    const auto v = t->value.values();
    std::copy(v.begin(), v.end(), data);
  });
}

}  // extern "C"
