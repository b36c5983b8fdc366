// Copyright 2026 The DCCHI Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dcchi/params.hpp"
#include "dcchi/tensor.hpp"

namespace dcchi {

// ---------------------------------------------------------------------------
// Tensor container.
//
//   offset 0   "DCT1"
//   offset 4   u32 dtype code (1 = f32, 2 = f64)
//   offset 8   u32 ndim
//   offset 12  ndim x u64 extents
//   then       row-major payload, product(extents) x dtype size
//
// All integers and values little-endian. A scalar has ndim 0.

std::vector<std::uint8_t> encode_tensor(const Tensor& t);
/// Decodes one record starting at `offset` and advances it. Any structural
/// problem throws FormatError naming the byte offset.
Tensor decode_tensor(std::span<const std::uint8_t> bytes, std::size_t& offset);

/// Writes through a temporary file and renames, so readers never see a
/// partial tensor.
void save_tensor(const std::filesystem::path& path, const Tensor& t);
/// `expect` rejects files of another dtype with FormatError.
Tensor load_tensor(const std::filesystem::path& path, std::optional<DType> expect = std::nullopt);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

// ---------------------------------------------------------------------------
// Text configuration: `key = value` lines grouped under `[section]`
// headers, addressed as "section.key". '#' and ';' start comments.

class Config {
 public:
  static Config parse(std::string_view text, const std::string& origin = "<text>");
  static Config load(const std::filesystem::path& path);

  void set(const std::string& key, const std::string& value);
  bool contains(const std::string& key) const { return values_.count(key) != 0; }
  std::optional<std::string> get(const std::string& key) const;

  std::string get_string(const std::string& key, const std::string& fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  double get_double(const std::string& key, double fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  const std::map<std::string, std::string>& entries() const { return values_; }
  /// Canonical text: sections in name order, keys sorted within a section.
  std::string to_text() const;

 private:
  std::map<std::string, std::string> values_;
};

std::uint64_t fnv1a(std::string_view data);
std::string hash_hex(std::uint64_t h);

/// Keys whose values differ (or exist on one side only), one per line as
/// "key: a -> b".
std::string config_diff(const Config& a, const Config& b);

// ---------------------------------------------------------------------------
// Checkpoint container.
//
//   "DCK1", u32 version, u64 model hash, u32 stages,
//   u64 text length + model config text,
//   u32 tensor count, then per tensor: u32 name length, name, DCT1 record.

struct Checkpoint {
  std::uint64_t model_hash = 0;
  std::uint32_t stages = 0;
  std::string model_text;
  ParamStore weights;
};

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace dcchi
