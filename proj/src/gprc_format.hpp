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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace gprop::detail {

inline constexpr std::uint16_t kGprcVersion = 1;
inline constexpr std::uint16_t kFlagWeighted = 1u << 0;
inline constexpr std::uint16_t kFlagDirected = 1u << 1;
inline constexpr std::uint16_t kFlagPartition = 1u << 2;

/// Raw contents of a GPRC file. `rows` is N for a whole graph and the number
/// of owned targets for a partition shard.
struct GprcContents {
  std::uint16_t flags = 0;
  std::uint64_t rows = 0;
  std::vector<std::uint64_t> row_ptr;
  std::vector<std::uint64_t> src_idx;
  std::vector<double> weights;        // present iff flags & kFlagWeighted
  std::vector<std::uint64_t> owned;   // present iff flags & kFlagPartition
};

std::vector<unsigned char> encode_gprc(const GprcContents& contents);

/// Structural decode only (magic, version, sizes, monotone row_ptr). `what`
/// names the source in error messages.
GprcContents decode_gprc(const std::vector<unsigned char>& bytes, const std::string& what);

std::vector<unsigned char> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::vector<unsigned char>& bytes);

std::uint64_t fnv1a64(const unsigned char* data, std::size_t size,
                      std::uint64_t state = 0xcbf29ce484222325ull);

inline void put_u16(std::vector<unsigned char>& out, std::uint16_t v) {
  out.push_back(static_cast<unsigned char>(v));
  out.push_back(static_cast<unsigned char>(v >> 8));
}

inline void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

inline void put_u64(std::vector<unsigned char>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

void put_f64(std::vector<unsigned char>& out, double v);

/// Bounds-checked little-endian cursor; overruns throw ErrorKind::Integrity.
class ByteReader {
 public:
  ByteReader(const unsigned char* data, std::size_t size, std::string what)
      : data_(data), size_(size), what_(std::move(what)) {}

  std::uint16_t u16();
  std::uint32_t u32();
  std::uint64_t u64();
  double f64();
  void bytes(unsigned char* out, std::size_t n);
  std::size_t remaining() const noexcept { return size_ - pos_; }

 private:
  void need(std::size_t n);

  const unsigned char* data_;
  std::size_t size_;
  std::size_t pos_ = 0;
  std::string what_;
};

}  // namespace gprop::detail
