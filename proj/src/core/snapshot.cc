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
#include "molr/core/snapshot.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

namespace molr {
namespace {

constexpr char kArchiveMagic[4] = {'M', 'O', 'L', 'A'};
constexpr uint16_t kArchiveVersion = 1;

template <typename U>
void PutLe(std::string& buf, U v) {
  for (size_t i = 0; i < sizeof(U); ++i) {
    buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
}

}  // namespace

uint64_t SnapshotHeader::PayloadBytes() const {
  switch (dtype) {
    case DType::kF32: return rows * cols * 4;
    case DType::kI8RowScaled: return rows * cols + rows * 4;
  }
  throw Error(ErrorCode::kFormat, "unknown dtype");
}

void ByteWriter::U16(uint16_t v) { PutLe(buf_, v); }
void ByteWriter::U32(uint32_t v) { PutLe(buf_, v); }
void ByteWriter::U64(uint64_t v) { PutLe(buf_, v); }
void ByteWriter::F32(float v) { PutLe(buf_, std::bit_cast<uint32_t>(v)); }

void ByteReader::Need(size_t n) const {
  if (remaining() < n) {
    throw Error(ErrorCode::kFormat, "truncated input: need " +
                                        std::to_string(n) + " bytes, have " +
                                        std::to_string(remaining()));
  }
}

uint8_t ByteReader::U8() {
  Need(1);
  return static_cast<uint8_t>(data_[pos_++]);
}

uint16_t ByteReader::U16() {
  uint16_t v = U8();
  v |= static_cast<uint16_t>(U8()) << 8;
  return v;
}

uint32_t ByteReader::U32() {
  Need(4);
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(U8()) << (8 * i);
  return v;
}

uint64_t ByteReader::U64() {
  Need(8);
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(U8()) << (8 * i);
  return v;
}

float ByteReader::F32() { return std::bit_cast<float>(U32()); }

std::string_view ByteReader::Bytes(size_t n) {
  Need(n);
  auto out = data_.substr(pos_, n);
  pos_ += n;
  return out;
}

void WriteSnapshotHeader(ByteWriter& out, const SnapshotHeader& header) {
  out.Bytes(std::string_view(kSnapshotMagic, 4));
  out.U16(kSnapshotVersion);
  out.U64(header.rows);
  out.U64(header.cols);
  out.U8(static_cast<uint8_t>(header.dtype));
}

SnapshotHeader ReadSnapshotHeader(ByteReader& in) {
  if (in.Bytes(4) != std::string_view(kSnapshotMagic, 4)) {
    throw Error(ErrorCode::kFormat, "bad snapshot magic");
  }
  const uint16_t version = in.U16();
  if (version != kSnapshotVersion) {
    throw Error(ErrorCode::kFormat,
                "unsupported snapshot version " + std::to_string(version));
  }
  SnapshotHeader h;
  h.rows = in.U64();
  h.cols = in.U64();
  const uint8_t tag = in.U8();
  if (tag > 1) {
    throw Error(ErrorCode::kFormat, "unknown dtype tag " + std::to_string(tag));
  }
  h.dtype = static_cast<DType>(tag);
  return h;
}

std::string EncodeMatrix(const Matrix& m) {
  ByteWriter out;
  WriteSnapshotHeader(out, {m.rows(), m.cols(), DType::kF32});
  for (const float v : m.values()) out.F32(v);
  return out.Take();
}

Matrix DecodeMatrix(std::string_view bytes) {
  ByteReader in(bytes);
  const SnapshotHeader h = ReadSnapshotHeader(in);
  if (h.dtype != DType::kF32) {
    throw Error(ErrorCode::kFormat, "expected f32 snapshot");
  }
  if (in.remaining() != h.PayloadBytes()) {
    throw Error(ErrorCode::kFormat, "snapshot payload length mismatch");
  }
  std::vector<float> data(h.rows * h.cols);
  for (auto& v : data) v = in.F32();
  return Matrix(h.rows, h.cols, std::move(data));
}

const std::string& Archive::Meta(const std::string& key) const {
  auto it = meta_.find(key);
  if (it == meta_.end()) {
    throw Error(ErrorCode::kFormat, "archive missing metadata key '" + key + "'");
  }
  return it->second;
}

void Archive::AddSection(const std::string& name, std::string snapshot) {
  ByteReader probe(snapshot);
  ReadSnapshotHeader(probe);
  for (auto& [n, bytes] : sections_) {
    if (n == name) {
      bytes = std::move(snapshot);
      return;
    }
  }
  sections_.emplace_back(name, std::move(snapshot));
}

bool Archive::HasSection(const std::string& name) const {
  for (const auto& [n, bytes] : sections_) {
    if (n == name) return true;
  }
  return false;
}

std::string_view Archive::Section(const std::string& name) const {
  for (const auto& [n, bytes] : sections_) {
    if (n == name) return bytes;
  }
  throw Error(ErrorCode::kFormat, "archive missing section '" + name + "'");
}

std::vector<Archive::ManifestEntry> Archive::Manifest() const {
  std::vector<ManifestEntry> out;
  for (const auto& [name, bytes] : sections_) {
    ByteReader in(bytes);
    out.push_back({name, ReadSnapshotHeader(in), bytes.size()});
  }
  return out;
}

std::string Archive::Encode() const {
  ByteWriter out;
  out.Bytes(std::string_view(kArchiveMagic, 4));
  out.U16(kArchiveVersion);
  out.U32(static_cast<uint32_t>(meta_.size()));
  for (const auto& [k, v] : meta_) {
    out.U32(static_cast<uint32_t>(k.size()));
    out.Bytes(k);
    out.U32(static_cast<uint32_t>(v.size()));
    out.Bytes(v);
  }
  const auto manifest = Manifest();
  out.U32(static_cast<uint32_t>(manifest.size()));
  for (const auto& e : manifest) {
    out.U16(static_cast<uint16_t>(e.name.size()));
    out.Bytes(e.name);
    out.U64(e.header.rows);
    out.U64(e.header.cols);
    out.U8(static_cast<uint8_t>(e.header.dtype));
    out.U64(e.byte_length);
  }
  for (const auto& [name, bytes] : sections_) out.Bytes(bytes);
  return out.Take();
}

Archive Archive::Decode(std::string_view bytes) {
  ByteReader in(bytes);
  if (in.Bytes(4) != std::string_view(kArchiveMagic, 4)) {
    throw Error(ErrorCode::kFormat, "bad archive magic");
  }
  const uint16_t version = in.U16();
  if (version != kArchiveVersion) {
    throw Error(ErrorCode::kFormat,
                "unsupported archive version " + std::to_string(version));
  }
  Archive a;
  const uint32_t n_meta = in.U32();
  for (uint32_t i = 0; i < n_meta; ++i) {
    std::string k(in.Bytes(in.U32()));
    std::string v(in.Bytes(in.U32()));
    a.meta_[k] = v;
  }
  const uint32_t n_sections = in.U32();
  std::vector<ManifestEntry> manifest(n_sections);
  for (auto& e : manifest) {
    e.name = std::string(in.Bytes(in.U16()));
    e.header.rows = in.U64();
    e.header.cols = in.U64();
    e.header.dtype = static_cast<DType>(in.U8());
    e.byte_length = in.U64();
  }
  for (const auto& e : manifest) {
    std::string body(in.Bytes(e.byte_length));
    ByteReader probe(body);
    const SnapshotHeader h = ReadSnapshotHeader(probe);
    if (h.rows != e.header.rows || h.cols != e.header.cols ||
        h.dtype != e.header.dtype || probe.remaining() != h.PayloadBytes()) {
      throw Error(ErrorCode::kFormat,
                  "manifest disagrees with section '" + e.name + "'");
    }
    a.sections_.emplace_back(e.name, std::move(body));
  }
  if (in.remaining() != 0) {
    throw Error(ErrorCode::kFormat, "trailing bytes after archive");
  }
  return a;
}

void Archive::Save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  const std::string bytes = Encode();
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "short write to " + path.string());
}

Archive Archive::Load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kMissingArtifact, "cannot open " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return Decode(ss.str());
}

}  // namespace molr
