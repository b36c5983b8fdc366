// Copyright 2026 The DCCHI Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dcchi/error.hpp"

namespace dcchi::detail {

// Little-endian regardless of host order.
struct ByteWriter {
  std::vector<std::uint8_t> bytes;

  void raw(const void* p, std::size_t n) {
    auto* b = static_cast<const std::uint8_t*>(p);
    bytes.insert(bytes.end(), b, b + n);
  }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) bytes.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) bytes.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void str(const std::string& s, bool wide) {
    if (wide) u64(s.size());
    else u32(static_cast<std::uint32_t>(s.size()));
    raw(s.data(), s.size());
  }
};

class ByteReader {
 public:
  ByteReader(std::span<const std::uint8_t> bytes, std::size_t offset, const char* what)
      : bytes_(bytes), offset_(offset), what_(what) {}

  std::size_t offset() const { return offset_; }
  std::size_t remaining() const { return bytes_.size() - offset_; }

  std::span<const std::uint8_t> take(std::size_t n, const char* field) {
    if (remaining() < n)
      throw FormatError(std::string(what_) + ": truncated " + field + " at offset " + std::to_string(offset_) +
                        " (need " + std::to_string(n) + " bytes, have " + std::to_string(remaining()) + ")");
    auto s = bytes_.subspan(offset_, n);
    offset_ += n;
    return s;
  }
  std::uint32_t u32(const char* field) {
    auto s = take(4, field);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(s[static_cast<std::size_t>(i)]) << (8 * i);
    return v;
  }
  std::uint64_t u64(const char* field) {
    auto s = take(8, field);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(s[static_cast<std::size_t>(i)]) << (8 * i);
    return v;
  }
  std::string str(bool wide, const char* field) {
    const std::uint64_t n = wide ? u64(field) : u32(field);
    if (n > remaining())
      throw FormatError(std::string(what_) + ": " + field + " length " + std::to_string(n) + " exceeds file at offset " +
                        std::to_string(offset_));
    auto s = take(static_cast<std::size_t>(n), field);
    return {s.begin(), s.end()};
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t offset_;
  const char* what_;
};

}  // namespace dcchi::detail
