// Copyright 2026 The DCCHI Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "dcchi.h"

namespace {

namespace fs = std::filesystem;

struct Dir {
  fs::path path = fs::temp_directory_path() / ("dcchi_capi_" + std::to_string(::getpid()));
  Dir() {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~Dir() { fs::remove_all(path); }
  std::string operator/(const std::string& s) const { return (path / s).string(); }
};

struct Config {
  dcchi_config* h = nullptr;
  ~Config() { dcchi_config_destroy(h); }
};

void count_lines(const char*, void* user) { ++*static_cast<int*>(user); }

TEST(CApi, StatusNamesAndVersion) {
  EXPECT_STREQ(dcchi_version(), "0.1.0");
  EXPECT_STREQ(dcchi_status_name(DCCHI_ERR_FORMAT), "format error");
  EXPECT_EQ(DCCHI_ERR_CONFIG, 2);
  EXPECT_EQ(DCCHI_ERR_NUMERIC, 3);
  EXPECT_EQ(DCCHI_ERR_FORMAT, 4);
}

TEST(CApi, ConfigSetIsAtomic) {
  Config c;
  ASSERT_EQ(dcchi_config_create(&c.h), DCCHI_OK);
  std::uint64_t before = 0, after = 0, model = 0;
  ASSERT_EQ(dcchi_config_hash(c.h, &before), DCCHI_OK);
  EXPECT_EQ(dcchi_config_set(c.h, "solver.cg_iters", "4"), DCCHI_ERR_CONFIG);
  EXPECT_NE(std::string(dcchi_last_error()).find("CG preset"), std::string::npos);
  EXPECT_EQ(dcchi_config_set(c.h, "bogus.key", "1"), DCCHI_ERR_CONFIG);
  ASSERT_EQ(dcchi_config_hash(c.h, &after), DCCHI_OK);
  EXPECT_EQ(before, after);
  ASSERT_EQ(dcchi_config_set(c.h, "solver.cg_iters", "10"), DCCHI_OK);
  EXPECT_STREQ(dcchi_last_error(), "");
  ASSERT_EQ(dcchi_config_hash(c.h, &after), DCCHI_OK);
  EXPECT_NE(before, after);
  ASSERT_EQ(dcchi_config_model_hash(c.h, &model), DCCHI_OK);

  std::size_t needed = 0;
  ASSERT_EQ(dcchi_config_text(c.h, nullptr, 0, &needed), DCCHI_OK);
  std::vector<char> buf(needed);
  ASSERT_EQ(dcchi_config_text(c.h, buf.data(), buf.size(), nullptr), DCCHI_OK);
  EXPECT_EQ(std::strlen(buf.data()) + 1, needed);
  EXPECT_NE(std::string(buf.data()).find("cg_iters = 10"), std::string::npos);

  Config parsed;
  ASSERT_EQ(dcchi_config_parse(buf.data(), &parsed.h), DCCHI_OK);
  std::uint64_t again = 0;
  dcchi_config_hash(parsed.h, &again);
  EXPECT_EQ(again, after);
  EXPECT_EQ(dcchi_config_parse("[solver\n", &parsed.h), DCCHI_ERR_CONFIG);
  EXPECT_EQ(dcchi_config_load("/nonexistent/x.ini", &parsed.h), DCCHI_ERR_IO);
  EXPECT_EQ(dcchi_config_hash(nullptr, &again), DCCHI_ERR_INVALID_ARGUMENT);
}

TEST(CApi, TensorRoundTrip) {
  Dir d;
  const std::int64_t shape[] = {2, 3};
  const double data[] = {1, 2, 3, 4, 5, 6.25};
  dcchi_tensor* t = nullptr;
  ASSERT_EQ(dcchi_tensor_create(DCCHI_F32, 2, shape, data, &t), DCCHI_OK);
  ASSERT_EQ(dcchi_tensor_save(t, (d / "t.dct").c_str()), DCCHI_OK);
  dcchi_tensor_destroy(t);
  ASSERT_EQ(dcchi_tensor_load((d / "t.dct").c_str(), &t), DCCHI_OK);
  EXPECT_EQ(dcchi_tensor_ndim(t), 2);
  EXPECT_EQ(dcchi_tensor_dtype(t), DCCHI_F32);
  std::int64_t got[2] = {};
  ASSERT_EQ(dcchi_tensor_shape(t, got, 2), DCCHI_OK);
  EXPECT_EQ(got[1], 3);
  double back[6] = {};
  EXPECT_EQ(dcchi_tensor_read(t, back, 5), DCCHI_ERR_DIMENSION);
  ASSERT_EQ(dcchi_tensor_read(t, back, 6), DCCHI_OK);
  for (int i = 0; i < 6; ++i) EXPECT_EQ(back[i], data[i]);
  dcchi_tensor_destroy(t);

  std::ofstream(d / "bad.dct") << "DCT1";
  EXPECT_EQ(dcchi_tensor_load((d / "bad.dct").c_str(), &t), DCCHI_ERR_FORMAT);
  EXPECT_NE(std::string(dcchi_last_error()).find("offset"), std::string::npos);
  EXPECT_EQ(dcchi_tensor_create(DCCHI_F64, 1, shape, nullptr, &t), DCCHI_ERR_INVALID_ARGUMENT);
}

TEST(CApi, CommandsEndToEnd) {
  Dir d;
  Config c;
  const std::string text = "[sensing]\nheight = 16\nwidth = 16\nbands = 4\n[arch]\nwindow = 4\n[solver]\nstages = 1\n"
                           "[train]\nsteps = 2\n[synth]\ncount = 2\n[gradcheck]\nnetwork_coords = 16\n";
  ASSERT_EQ(dcchi_config_parse(text.c_str(), &c.h), DCCHI_OK);
  int lines = 0;
  ASSERT_EQ(dcchi_synth(c.h, (d / "data").c_str(), count_lines, &lines), DCCHI_OK);
  ASSERT_EQ(dcchi_config_set(c.h, "paths.dataset", (d / "data").c_str()), DCCHI_OK);
  ASSERT_EQ(dcchi_config_set(c.h, "paths.scene", (d / "data/scene_000.dct").c_str()), DCCHI_OK);
  ASSERT_EQ(dcchi_simulate(c.h, (d / "meas").c_str(), count_lines, &lines), DCCHI_OK);
  double loss = 0;
  ASSERT_EQ(dcchi_train(c.h, (d / "model").c_str(), nullptr, nullptr, &loss), DCCHI_OK);
  EXPECT_TRUE(std::isfinite(loss));
  dcchi_config_set(c.h, "paths.cassi", (d / "meas/cassi.dct").c_str());
  dcchi_config_set(c.h, "paths.pan", (d / "meas/pan.dct").c_str());
  dcchi_config_set(c.h, "paths.checkpoint", (d / "model/checkpoint.dck").c_str());
  double psnr = 0, ssim = 0;
  ASSERT_EQ(dcchi_reconstruct(c.h, (d / "rec").c_str(), count_lines, &lines, &psnr, &ssim), DCCHI_OK);
  EXPECT_TRUE(std::isnan(psnr));
  dcchi_config_set(c.h, "paths.truth", (d / "data/scene_000.dct").c_str());
  ASSERT_EQ(dcchi_reconstruct(c.h, (d / "rec").c_str(), nullptr, nullptr, &psnr, &ssim), DCCHI_OK);
  EXPECT_GT(psnr, 0.0);
  EXPECT_GE(lines, 3);

  ASSERT_EQ(dcchi_config_set(c.h, "arch.mha_s", "false"), DCCHI_OK);
  EXPECT_EQ(dcchi_reconstruct(c.h, (d / "rec").c_str(), nullptr, nullptr, &psnr, &ssim), DCCHI_ERR_CONFIG);
  EXPECT_NE(std::string(dcchi_last_error()).find("arch.mha_s"), std::string::npos);

  int passed = 0;
  ASSERT_EQ(dcchi_gradcheck(c.h, (d / "gc").c_str(), nullptr, nullptr, &passed), DCCHI_OK);
  EXPECT_EQ(passed, 1);
  double corr = 0;
  ASSERT_EQ(dcchi_config_set(c.h, "paths.scene", ""), DCCHI_OK);
  ASSERT_EQ(dcchi_config_set(c.h, "corr.scenes", "2"), DCCHI_OK);
  ASSERT_EQ(dcchi_analyze_corr(c.h, (d / "corr").c_str(), nullptr, nullptr, &corr), DCCHI_OK);
  EXPECT_GT(corr, 0.5);
}

}  // namespace
