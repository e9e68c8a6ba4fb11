/* Copyright 2026 The gprop Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "gprc_format.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "gprop/error.hpp"

namespace gprop::detail {

namespace {
constexpr unsigned char kMagic[4] = {'G', 'P', 'R', 'C'};
}

void put_f64(std::vector<unsigned char>& out, double v) {
  put_u64(out, std::bit_cast<std::uint64_t>(v));
}

void ByteReader::need(std::size_t n) {
  if (n > size_ - pos_) {
    fail(ErrorKind::Integrity, what_ + ": truncated data at byte " + std::to_string(pos_));
  }
}

std::uint16_t ByteReader::u16() {
  need(2);
  std::uint16_t v = static_cast<std::uint16_t>(data_[pos_] | (data_[pos_ + 1] << 8));
  pos_ += 2;
  return v;
}

std::uint32_t ByteReader::u32() {
  need(4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(data_[pos_ + i]) << (8 * i);
  pos_ += 4;
  return v;
}

std::uint64_t ByteReader::u64() {
  need(8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(data_[pos_ + i]) << (8 * i);
  pos_ += 8;
  return v;
}

double ByteReader::f64() { return std::bit_cast<double>(u64()); }

void ByteReader::bytes(unsigned char* out, std::size_t n) {
  need(n);
  std::memcpy(out, data_ + pos_, n);
  pos_ += n;
}

std::vector<unsigned char> encode_gprc(const GprcContents& c) {
  std::vector<unsigned char> out(std::begin(kMagic), std::end(kMagic));
  out.reserve(28 + 8 * (c.row_ptr.size() + c.src_idx.size() + c.weights.size() + c.owned.size()));
  put_u16(out, kGprcVersion);
  put_u16(out, c.flags);
  put_u64(out, c.rows);
  put_u64(out, c.src_idx.size());
  for (auto v : c.row_ptr) put_u64(out, v);
  for (auto v : c.src_idx) put_u64(out, v);
  if (c.flags & kFlagWeighted) {
    for (auto w : c.weights) put_f64(out, w);
  }
  if (c.flags & kFlagPartition) {
    for (auto v : c.owned) put_u64(out, v);
  }
  return out;
}

GprcContents decode_gprc(const std::vector<unsigned char>& bytes, const std::string& what) {
  ByteReader in(bytes.data(), bytes.size(), what);
  unsigned char magic[4];
  in.bytes(magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0) fail(ErrorKind::Integrity, what + ": bad magic");
  const auto version = in.u16();
  if (version != kGprcVersion) {
    fail(ErrorKind::Integrity, what + ": unsupported format version " + std::to_string(version));
  }
  GprcContents c;
  c.flags = in.u16();
  if (c.flags & ~(kFlagWeighted | kFlagDirected | kFlagPartition)) {
    fail(ErrorKind::Integrity, what + ": unknown flag bits");
  }
  c.rows = in.u64();
  const auto m = in.u64();
  // Every array element takes 8 bytes; reject impossible sizes before allocating.
  const std::size_t words = in.remaining() / 8;
  const bool weighted = c.flags & kFlagWeighted;
  const bool partition = c.flags & kFlagPartition;
  if (c.rows >= words || m > words ||
      (c.rows + 1) + m * (weighted ? 2 : 1) + (partition ? c.rows : 0) != words ||
      in.remaining() % 8 != 0) {
    fail(ErrorKind::Integrity, what + ": size fields do not match file length");
  }
  c.row_ptr.resize(c.rows + 1);
  for (auto& v : c.row_ptr) v = in.u64();
  c.src_idx.resize(m);
  for (auto& v : c.src_idx) v = in.u64();
  if (weighted) {
    c.weights.resize(m);
    for (auto& w : c.weights) w = in.f64();
  }
  if (partition) {
    c.owned.resize(c.rows);
    for (auto& v : c.owned) v = in.u64();
  }
  if (c.row_ptr.front() != 0 || c.row_ptr.back() != m) {
    fail(ErrorKind::Integrity, what + ": row pointers do not span the edge array");
  }
  for (std::size_t i = 1; i < c.row_ptr.size(); ++i) {
    if (c.row_ptr[i] < c.row_ptr[i - 1]) {
      fail(ErrorKind::Integrity, what + ": row pointers decrease at row " + std::to_string(i - 1));
    }
  }
  return c;
}

std::vector<unsigned char> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (in.bad()) fail(ErrorKind::Io, "read failed: " + path.string());
  return bytes;
}

void write_file(const std::filesystem::path& path, const std::vector<unsigned char>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::Io, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorKind::Io, "write failed: " + path.string());
}

std::uint64_t fnv1a64(const unsigned char* data, std::size_t size, std::uint64_t state) {
  for (std::size_t i = 0; i < size; ++i) {
    state ^= data[i];
    state *= 0x100000001b3ull;
  }
  return state;
}

}  // namespace gprop::detail
