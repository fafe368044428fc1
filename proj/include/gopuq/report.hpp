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

#ifndef GOPUQ_REPORT_HPP_
#define GOPUQ_REPORT_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gopuq/phone_core.hpp"
#include "gopuq/stats.hpp"

namespace gopuq {

/// One evaluated grid cell. `result` is empty when the correlation was
/// undefined; `error` then says why.
struct MethodResult {
  GopMethod method;
  std::optional<CorrelationResult> result;
  std::string error;
};

struct PhonemeRow {
  std::string label;
  double tau = 0.0;
  std::size_t n_segments = 0;
};

struct SkippedPhoneRow {
  std::string label;
  std::size_t n_segments = 0;
  std::string reason;
};

struct EvaluationReport {
  std::string tool_version;
  std::string manifest_sha256;
  std::vector<MethodResult> methods;  // grid order
  std::optional<GopMethod> phoneme_method;
  std::size_t min_support = 0;
  std::vector<PhonemeRow> phonemes;
  std::vector<PhonemeRow> top_k;
  std::vector<SkippedPhoneRow> skipped_phones;
  std::vector<std::string> skipped_utterances;
};

/// Renders the JSON document (object keys sorted, two-space indent).
std::string RenderReportJson(const EvaluationReport& report);
/// Renders the flat method table:
/// group, normalization, scoring, temperature, tau, n_items.
std::string RenderMethodTable(const EvaluationReport& report);

/// Writes the JSON document to `json_path` and the method table to
/// `table_path`.
void WriteReport(const EvaluationReport& report,
                 const std::filesystem::path& json_path,
                 const std::filesystem::path& table_path);

/// `path` with its extension replaced by ".tsv".
std::filesystem::path TablePathFor(const std::filesystem::path& path);

}  // namespace gopuq

#endif  // GOPUQ_REPORT_HPP_
