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

#ifndef ABX_MODEL_IO_H_
#define ABX_MODEL_IO_H_

#include <string>
#include <string_view>

#include "abx/classifier.h"

namespace abx {

// Model file layout (all integers little-endian):
//   "DCBM", u32 version, u8 provider tag, u16-prefixed abbreviation,
//   u64 seed, u32 input dim, u32 hidden dim, u32 K, u32 hidden-layer count
//   followed by that many u32 widths,
//   K u32-prefixed canonical labels in group-id order,
//   u32 vocabulary size followed by u32-prefixed tokens,
//   u32 block count, then per block a u16-prefixed name, u32 rows, u32 cols
//   and rows*cols f64 values in column-major order,
//   u64 FNV-1a checksum of every preceding byte.
inline constexpr uint32_t kModelFormatVersion = 1;

std::string SerializeModel(const ClassifierModel &model);

// Validates magic, version, dimensions, block names and shapes, and the
// checksum; throws FormatError with the failing byte offset. Nothing is
// returned unless the whole file validates.
ClassifierModel ParseModel(std::string_view bytes);

void SaveModel(const ClassifierModel &model, const std::string &path);
ClassifierModel LoadModel(const std::string &path);

}  // namespace abx

#endif  // ABX_MODEL_IO_H_
