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

#include "gopuq/report.hpp"

#include <cmath>

#include <fmt/format.h>

#include "gopuq/io_formats.hpp"
#include "json.hpp"

namespace gopuq {

namespace {

bool IsBaseline(const GopMethod& m) {
  return m.scoring == Scoring::kGmm || m.scoring == Scoring::kNn ||
         m.scoring == Scoring::kDnn;
}

nlohmann::json PhonemeJson(const PhonemeRow& row) {
  return {{"label", row.label},
          {"tau", row.tau},
          {"abs_tau", std::abs(row.tau)},
          {"n_segments", row.n_segments}};
}

}  // namespace

std::string RenderReportJson(const EvaluationReport& report) {
  nlohmann::json doc;
  doc["tool"] = "gopuq";
  doc["version"] = report.tool_version;
  doc["manifest_sha256"] = report.manifest_sha256;

  nlohmann::json methods = nlohmann::json::array();
  for (const auto& m : report.methods) {
    nlohmann::json row;
    row["method"] = m.method.Name();
    row["group"] = IsBaseline(m.method) ? "baseline" : "proposed";
    row["normalization"] = NormalizationName(m.method.normalization);
    row["scoring"] = ScoringName(m.method.scoring);
    row["temperature"] = m.method.normalization == Normalization::kScale
                             ? nlohmann::json(m.method.temperature)
                             : nlohmann::json(nullptr);
    if (m.result) {
      row["tau"] = m.result->tau;
      row["n_items"] = m.result->n_items;
      row["n_pairs"] = m.result->n_pairs;
      row["error"] = nullptr;
    } else {
      row["tau"] = nullptr;
      row["n_items"] = nullptr;
      row["n_pairs"] = nullptr;
      row["error"] = m.error;
    }
    methods.push_back(std::move(row));
  }
  doc["methods"] = std::move(methods);

  nlohmann::json phonemes;
  phonemes["method"] = report.phoneme_method
                           ? nlohmann::json(report.phoneme_method->Name())
                           : nlohmann::json(nullptr);
  phonemes["min_support"] = report.min_support;
  phonemes["correlations"] = nlohmann::json::array();
  for (const auto& p : report.phonemes) phonemes["correlations"].push_back(PhonemeJson(p));
  phonemes["top_k"] = nlohmann::json::array();
  for (const auto& p : report.top_k) phonemes["top_k"].push_back(PhonemeJson(p));
  phonemes["skipped"] = nlohmann::json::array();
  for (const auto& s : report.skipped_phones) {
    phonemes["skipped"].push_back(
        {{"label", s.label}, {"n_segments", s.n_segments}, {"reason", s.reason}});
  }
  doc["phonemes"] = std::move(phonemes);
  doc["skipped_utterances"] = report.skipped_utterances;
  return doc.dump(2) + "\n";
}

std::string RenderMethodTable(const EvaluationReport& report) {
  std::string out = "group\tnormalization\tscoring\ttemperature\ttau\tn_items\n";
  for (const auto& m : report.methods) {
    const std::string temperature =
        m.method.normalization == Normalization::kScale
            ? fmt::format("{:g}", m.method.temperature)
            : "NA";
    const std::string tau = m.result ? fmt::format("{:.6f}", m.result->tau) : "NA";
    const std::string n = m.result ? fmt::format("{}", m.result->n_items) : "NA";
    out += fmt::format("{}\t{}\t{}\t{}\t{}\t{}\n",
                       IsBaseline(m.method) ? "baseline" : "proposed",
                       NormalizationName(m.method.normalization),
                       ScoringName(m.method.scoring), temperature, tau, n);
  }
  return out;
}

void WriteReport(const EvaluationReport& report, const std::filesystem::path& json_path,
                 const std::filesystem::path& table_path) {
  const std::string json = RenderReportJson(report);
  const std::string table = RenderMethodTable(report);
  WriteFileAtomic(json_path, json);
  WriteFileAtomic(table_path, table);
}

std::filesystem::path TablePathFor(const std::filesystem::path& path) {
  std::filesystem::path out = path;
  if (out.extension() == ".tsv") {
    out += ".tsv";
  } else {
    out.replace_extension(".tsv");
  }
  return out;
}

}  // namespace gopuq
