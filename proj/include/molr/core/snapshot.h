// Copyright 2026 The molr Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#ifndef MOLR_CORE_SNAPSHOT_H_
#define MOLR_CORE_SNAPSHOT_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "molr/core/matrix.h"

namespace molr {

// Matrix snapshot: "MOLR", u16 version, u64 rows, u64 cols, u8 dtype, then
// payload; little-endian throughout.
//   dtype 0: rows*cols f32
//   dtype 1: rows*cols i8 codes followed by rows f32 scales
inline constexpr char kSnapshotMagic[4] = {'M', 'O', 'L', 'R'};
inline constexpr uint16_t kSnapshotVersion = 1;

enum class DType : uint8_t { kF32 = 0, kI8RowScaled = 1 };

struct SnapshotHeader {
  uint64_t rows = 0;
  uint64_t cols = 0;
  DType dtype = DType::kF32;

  uint64_t PayloadBytes() const;
};

// Little-endian byte sink/source used by every serializer in the project.
class ByteWriter {
 public:
  void U8(uint8_t v) { buf_.push_back(static_cast<char>(v)); }
  void U16(uint16_t v);
  void U32(uint32_t v);
  void U64(uint64_t v);
  void F32(float v);
  void Bytes(std::string_view b) { buf_.append(b); }
  const std::string& str() const noexcept { return buf_; }
  std::string Take() { return std::move(buf_); }

 private:
  std::string buf_;
};

class ByteReader {
 public:
  explicit ByteReader(std::string_view data) : data_(data) {}
  uint8_t U8();
  uint16_t U16();
  uint32_t U32();
  uint64_t U64();
  float F32();
  std::string_view Bytes(size_t n);
  size_t remaining() const noexcept { return data_.size() - pos_; }

 private:
  void Need(size_t n) const;
  std::string_view data_;
  size_t pos_ = 0;
};

void WriteSnapshotHeader(ByteWriter& out, const SnapshotHeader& header);
SnapshotHeader ReadSnapshotHeader(ByteReader& in);

std::string EncodeMatrix(const Matrix& m);
Matrix DecodeMatrix(std::string_view bytes);

// Named collection of snapshot sections with a manifest. Layout:
//   "MOLA", u16 version, u32 meta_count, {u32 len, key, u32 len, value}*,
//   u32 section_count, manifest {u16 name_len, name, u64 rows, u64 cols,
//   u8 dtype, u64 byte_length}*, then the section snapshots in order.
class Archive {
 public:
  struct ManifestEntry {
    std::string name;
    SnapshotHeader header;
    uint64_t byte_length = 0;
  };

  void SetMeta(const std::string& key, const std::string& value) {
    meta_[key] = value;
  }
  bool HasMeta(const std::string& key) const { return meta_.count(key) > 0; }
  const std::string& Meta(const std::string& key) const;
  const std::map<std::string, std::string>& meta() const { return meta_; }

  // `snapshot` must be a complete snapshot (header + payload).
  void AddSection(const std::string& name, std::string snapshot);
  void AddMatrix(const std::string& name, const Matrix& m) {
    AddSection(name, EncodeMatrix(m));
  }
  bool HasSection(const std::string& name) const;
  std::string_view Section(const std::string& name) const;
  Matrix SectionMatrix(const std::string& name) const {
    return DecodeMatrix(Section(name));
  }
  std::vector<ManifestEntry> Manifest() const;

  std::string Encode() const;
  static Archive Decode(std::string_view bytes);

  void Save(const std::filesystem::path& path) const;
  // Throws MissingArtifact when the file is absent, Format on bad contents.
  static Archive Load(const std::filesystem::path& path);

 private:
  std::map<std::string, std::string> meta_;
  std::vector<std::pair<std::string, std::string>> sections_;
};

}  // namespace molr

#endif  // MOLR_CORE_SNAPSHOT_H_
