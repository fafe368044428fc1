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

#include "gopuq/error.hpp"

namespace gopuq {

ErrorCategory CategoryOf(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kUsage:
    case ErrorKind::kConfig:
      return ErrorCategory::kUsage;
    case ErrorKind::kIo:
      return ErrorCategory::kIo;
    default:
      return ErrorCategory::kValidation;
  }
}

const char* KindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kUsage: return "usage";
    case ErrorKind::kConfig: return "config";
    case ErrorKind::kUnknownLabel: return "unknown-label";
    case ErrorKind::kBadMagic: return "bad-magic";
    case ErrorKind::kTruncated: return "truncated";
    case ErrorKind::kWidthMismatch: return "width-mismatch";
    case ErrorKind::kNonFinite: return "non-finite";
    case ErrorKind::kEmptySegment: return "empty-segment";
    case ErrorKind::kOverlap: return "overlap";
    case ErrorKind::kFrameOutOfRange: return "frame-out-of-range";
    case ErrorKind::kParse: return "parse";
    case ErrorKind::kDuplicateKey: return "duplicate-key";
    case ErrorKind::kNegativeSeverity: return "negative-severity";
    case ErrorKind::kPriorSum: return "prior-sum";
    case ErrorKind::kMissingLabel: return "missing-label";
    case ErrorKind::kUnscorable: return "unscorable";
    case ErrorKind::kUndefinedCorrelation: return "undefined-correlation";
    case ErrorKind::kIo: return "io";
  }
  return "unknown";
}

}  // namespace gopuq
