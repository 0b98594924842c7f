// Copyright 2026 The abx Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ABX_BINARY_IO_H_
#define ABX_BINARY_IO_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace abx {

// Little-endian encoder into a growable byte buffer.
class ByteWriter {
 public:
  void Bytes(std::string_view data) { buffer_.append(data); }
  void U8(uint8_t v) { buffer_.push_back(static_cast<char>(v)); }
  void U16(uint16_t v);
  void U32(uint32_t v);
  void U64(uint64_t v);
  void F32(float v);
  void F64(double v);

  // u16 length prefix; throws if the string does not fit.
  void ShortString(std::string_view s);
  // u32 length prefix.
  void String(std::string_view s);

  const std::string &buffer() const { return buffer_; }
  std::string Release() { return std::move(buffer_); }

 private:
  std::string buffer_;
};

// Bounds-checked little-endian decoder. Every failed read throws FormatError
// carrying the offset where the read started.
class ByteReader {
 public:
  explicit ByteReader(std::string_view data) : data_(data) {}

  std::string_view Bytes(size_t n);
  uint8_t U8();
  uint16_t U16();
  uint32_t U32();
  uint64_t U64();
  float F32();
  double F64();
  std::string ShortString();
  std::string String();

  size_t offset() const { return offset_; }
  size_t remaining() const { return data_.size() - offset_; }
  bool done() const { return offset_ == data_.size(); }

 private:
  void Require(size_t n, const char *what) const;

  std::string_view data_;
  size_t offset_ = 0;
};

// 64-bit FNV-1a.
uint64_t Fnv1a64(std::string_view data);

// Whole-file read; throws DataError naming the path.
std::string ReadFileBytes(const std::string &path);

// Writes to a sibling temporary file and renames it over `path`, so readers
// never observe a partially written file.
void AtomicWriteFile(const std::string &path, std::string_view contents);

}  // namespace abx

#endif  // ABX_BINARY_IO_H_
