// Copyright 2026 The DCCHI Authors
// SPDX-License-Identifier: Apache-2.0

#include <bit>
#include <cstring>
#include <fstream>

#include "dcchi/error.hpp"
#include "dcchi/io.hpp"
#include "io_bytes.hpp"

namespace dcchi {

namespace {
constexpr char kMagic[4] = {'D', 'C', 'T', '1'};
}  // namespace

std::vector<std::uint8_t> encode_tensor(const Tensor& t) {
  detail::ByteWriter w;
  w.raw(kMagic, 4);
  w.u32(static_cast<std::uint32_t>(t.dtype()));
  w.u32(static_cast<std::uint32_t>(t.rank()));
  for (auto e : t.shape()) w.u64(static_cast<std::uint64_t>(e));
  for (double v : t.values()) {
    if (t.dtype() == DType::f32) w.u32(std::bit_cast<std::uint32_t>(static_cast<float>(v)));
    else w.u64(std::bit_cast<std::uint64_t>(v));
  }
  return std::move(w.bytes);
}

Tensor decode_tensor(std::span<const std::uint8_t> bytes, std::size_t& offset) {
  detail::ByteReader r(bytes, offset, "tensor");
  const std::size_t start = r.offset();
  if (std::memcmp(r.take(4, "magic").data(), kMagic, 4) != 0)
    throw FormatError("tensor: bad magic at offset " + std::to_string(start));
  const std::size_t dtype_at = r.offset();
  const auto code = r.u32("dtype code");
  if (code != 1 && code != 2)
    throw FormatError("tensor: unknown dtype code " + std::to_string(code) + " at offset " + std::to_string(dtype_at));
  const DType dtype = static_cast<DType>(code);
  const std::size_t ndim_at = r.offset();
  const auto ndim = r.u32("ndim");
  if (ndim > 16) throw FormatError("tensor: implausible ndim " + std::to_string(ndim) + " at offset " + std::to_string(ndim_at));
  Shape shape;
  std::uint64_t count = 1;
  for (std::uint32_t i = 0; i < ndim; ++i) {
    const std::size_t at = r.offset();
    const auto e = r.u64("extent");
    if (e == 0 || e > (1ULL << 40) || count > (1ULL << 40) / e)
      throw FormatError("tensor: invalid extent " + std::to_string(e) + " at offset " + std::to_string(at));
    count *= e;
    shape.push_back(static_cast<std::int64_t>(e));
  }
  const std::size_t width = dtype == DType::f32 ? 4 : 8;
  const std::size_t payload_at = r.offset();
  if (r.remaining() < count * width)
    throw FormatError("tensor: truncated payload at offset " + std::to_string(payload_at) + ": need " +
                      std::to_string(count * width) + " bytes, have " + std::to_string(r.remaining()));
  std::vector<double> values(static_cast<std::size_t>(count));
  for (auto& v : values)
    v = dtype == DType::f32 ? static_cast<double>(std::bit_cast<float>(r.u32("value"))) : std::bit_cast<double>(r.u64("value"));
  offset = r.offset();
  return Tensor::from_vector(std::move(shape), std::move(values), dtype);
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  auto tmp = path;
  tmp += ".partial";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot move '" + tmp.string() + "' into place: " + ec.message());
}

void save_tensor(const std::filesystem::path& path, const Tensor& t) { write_file_atomic(path, encode_tensor(t)); }

Tensor load_tensor(const std::filesystem::path& path, std::optional<DType> expect) {
  const auto bytes = read_file(path);
  std::size_t offset = 0;
  Tensor t;
  try {
    t = decode_tensor(bytes, offset);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  if (offset != bytes.size())
    throw FormatError(path.string() + ": " + std::to_string(bytes.size() - offset) + " trailing bytes at offset " +
                      std::to_string(offset));
  if (expect && t.dtype() != *expect)
    throw FormatError(path.string() + ": dtype " + dtype_name(t.dtype()) + " at offset 4, expected " +
                      dtype_name(*expect));
  return t;
}

}  // namespace dcchi
