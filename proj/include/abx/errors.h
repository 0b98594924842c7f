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

#ifndef ABX_ERRORS_H_
#define ABX_ERRORS_H_

#include <cstdint>
#include <stdexcept>
#include <string>

namespace abx {

// Bad input data: malformed files, missing paths, inconsistent records.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Binary file that fails magic, version, checksum or shape validation.
class FormatError : public DataError {
 public:
  FormatError(const std::string &what, uint64_t offset)
      : DataError(what + " at byte offset " + std::to_string(offset)),
        offset_(offset) {}

  uint64_t offset() const { return offset_; }

 private:
  uint64_t offset_;
};

// Non-finite loss or gradient during training.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace abx

#endif  // ABX_ERRORS_H_
