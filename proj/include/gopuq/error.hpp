// Copyright 2026 The gopuq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GOPUQ_ERROR_HPP_
#define GOPUQ_ERROR_HPP_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace gopuq {

/// Every failure the engine can report. Each kind belongs to one of three
/// categories (usage, data validation, I/O) which the CLI turns into exit
/// codes 1, 2 and 3.
enum class ErrorKind {
  kUsage,
  kConfig,
  kUnknownLabel,
  kBadMagic,
  kTruncated,
  kWidthMismatch,
  kNonFinite,
  kEmptySegment,
  kOverlap,
  kFrameOutOfRange,
  kParse,
  kDuplicateKey,
  kNegativeSeverity,
  kPriorSum,
  kMissingLabel,
  kUnscorable,
  kUndefinedCorrelation,
  kIo,
};

enum class ErrorCategory { kUsage = 1, kValidation = 2, kIo = 3 };

ErrorCategory CategoryOf(ErrorKind kind);
const char* KindName(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}
  Error(ErrorKind kind, const std::string& message, std::uint64_t byte_offset)
      : std::runtime_error(message), kind_(kind), byte_offset_(byte_offset) {}

  ErrorKind kind() const { return kind_; }
  ErrorCategory category() const { return CategoryOf(kind_); }
  /// Set for binary-format errors: where in the file the problem sits.
  std::optional<std::uint64_t> byte_offset() const { return byte_offset_; }

 private:
  ErrorKind kind_;
  std::optional<std::uint64_t> byte_offset_;
};

}  // namespace gopuq

#endif  // GOPUQ_ERROR_HPP_
