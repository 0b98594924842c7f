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

#include "abx/binary_io.h"

#include <unistd.h>

#include <bit>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include "abx/errors.h"

namespace abx {

static_assert(std::endian::native == std::endian::little,
              "binary formats assume a little-endian host");

namespace {

template <typename T>
void AppendRaw(std::string &out, T v) {
  char raw[sizeof(T)];
  std::memcpy(raw, &v, sizeof(T));
  out.append(raw, sizeof(T));
}

}  // namespace

void ByteWriter::U16(uint16_t v) { AppendRaw(buffer_, v); }
void ByteWriter::U32(uint32_t v) { AppendRaw(buffer_, v); }
void ByteWriter::U64(uint64_t v) { AppendRaw(buffer_, v); }
void ByteWriter::F32(float v) { AppendRaw(buffer_, v); }
void ByteWriter::F64(double v) { AppendRaw(buffer_, v); }

void ByteWriter::ShortString(std::string_view s) {
  if (s.size() > UINT16_MAX) {
    throw DataError("string of " + std::to_string(s.size()) +
                    " bytes exceeds u16 length field");
  }
  U16(static_cast<uint16_t>(s.size()));
  Bytes(s);
}

void ByteWriter::String(std::string_view s) {
  if (s.size() > UINT32_MAX) throw DataError("string exceeds u32 length field");
  U32(static_cast<uint32_t>(s.size()));
  Bytes(s);
}

void ByteReader::Require(size_t n, const char *what) const {
  if (remaining() < n) {
    throw FormatError(std::string("truncated ") + what + ": need " +
                          std::to_string(n) + " bytes, have " +
                          std::to_string(remaining()),
                      offset_);
  }
}

std::string_view ByteReader::Bytes(size_t n) {
  Require(n, "byte run");
  std::string_view out = data_.substr(offset_, n);
  offset_ += n;
  return out;
}

#define ABX_READ_SCALAR(Name, Type)                        \
  Type ByteReader::Name() {                                \
    Require(sizeof(Type), #Name);                          \
    Type v;                                                \
    std::memcpy(&v, data_.data() + offset_, sizeof(Type)); \
    offset_ += sizeof(Type);                               \
    return v;                                              \
  }

ABX_READ_SCALAR(U8, uint8_t)
ABX_READ_SCALAR(U16, uint16_t)
ABX_READ_SCALAR(U32, uint32_t)
ABX_READ_SCALAR(U64, uint64_t)
ABX_READ_SCALAR(F32, float)
ABX_READ_SCALAR(F64, double)

#undef ABX_READ_SCALAR

std::string ByteReader::ShortString() {
  const size_t start = offset_;
  const uint16_t n = U16();
  if (remaining() < n) {
    throw FormatError("truncated string of length " + std::to_string(n), start);
  }
  return std::string(Bytes(n));
}

std::string ByteReader::String() {
  const size_t start = offset_;
  const uint32_t n = U32();
  if (remaining() < n) {
    throw FormatError("truncated string of length " + std::to_string(n), start);
  }
  return std::string(Bytes(n));
}

uint64_t Fnv1a64(std::string_view data) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string ReadFileBytes(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw DataError("error reading file: " + path);
  return ss.str();
}

void AtomicWriteFile(const std::string &path, std::string_view contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path() && !fs::exists(target.parent_path())) {
    throw DataError("output directory does not exist: " +
                    target.parent_path().string());
  }
  const std::string tmp =
      path + ".tmp." + std::to_string(static_cast<long>(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write file: " + tmp);
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) {
      out.close();
      std::remove(tmp.c_str());
      throw DataError("error writing file: " + tmp);
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    std::remove(tmp.c_str());
    throw DataError("cannot rename " + tmp + " to " + path + ": " +
                    ec.message());
  }
}

}  // namespace abx
