// Copyright 2026 The DCCHI Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstring>

#include "dcchi/error.hpp"
#include "dcchi/io.hpp"
#include "io_bytes.hpp"

namespace dcchi {

namespace {
constexpr char kMagic[4] = {'D', 'C', 'K', '1'};
constexpr std::uint32_t kVersion = 1;
}  // namespace

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  detail::ByteWriter w;
  w.raw(kMagic, 4);
  w.u32(kVersion);
  w.u64(ckpt.model_hash);
  w.u32(ckpt.stages);
  w.str(ckpt.model_text, true);
  const auto names = ckpt.weights.names();
  w.u32(static_cast<std::uint32_t>(names.size()));
  for (const auto& name : names) {
    w.str(name, false);
    auto rec = encode_tensor(ckpt.weights.get(name));
    w.raw(rec.data(), rec.size());
  }
  write_file_atomic(path, w.bytes);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  const auto fail = [&](const std::string& msg) { return FormatError(path.string() + ": " + msg); };
  try {
    detail::ByteReader r(bytes, 0, "checkpoint");
    if (std::memcmp(r.take(4, "magic").data(), kMagic, 4) != 0) throw FormatError("checkpoint: bad magic at offset 0");
    const auto version = r.u32("version");
    if (version != kVersion)
      throw FormatError("checkpoint: unsupported version " + std::to_string(version) + " at offset 4");
    Checkpoint ckpt;
    ckpt.model_hash = r.u64("config hash");
    ckpt.stages = r.u32("stage count");
    ckpt.model_text = r.str(true, "config text");
    const auto count = r.u32("tensor count");
    for (std::uint32_t i = 0; i < count; ++i) {
      const std::size_t at = r.offset();
      auto name = r.str(false, "tensor name");
      if (ckpt.weights.contains(name))
        throw FormatError("checkpoint: duplicate tensor '" + name + "' at offset " + std::to_string(at));
      std::size_t offset = r.offset();
      auto t = decode_tensor(bytes, offset);
      r.take(offset - r.offset(), "tensor");
      ckpt.weights.set(name, std::move(t));
    }
    if (r.remaining() != 0)
      throw FormatError("checkpoint: " + std::to_string(r.remaining()) + " trailing bytes at offset " +
                        std::to_string(r.offset()));
    return ckpt;
  } catch (const FormatError& e) {
    throw fail(e.what());
  }
}

}  // namespace dcchi
