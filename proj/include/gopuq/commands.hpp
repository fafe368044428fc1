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

// File-in, file-out batch commands. Each command validates all inputs and
// computes all results before the first output byte is written.

#ifndef GOPUQ_COMMANDS_HPP_
#define GOPUQ_COMMANDS_HPP_

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gopuq/calibration.hpp"
#include "gopuq/corpus.hpp"
#include "gopuq/synthetic.hpp"

namespace gopuq {

/// Estimates priors from the manifest's alignments and writes the TSV.
PhonePrior RunPriors(const std::filesystem::path& manifest,
                     const std::filesystem::path& out,
                     PriorCounting counting = PriorCounting::kFrames);

/// Writes segments.tsv, utterances.tsv and skipped.tsv into `out_dir`.
CorpusScores RunScore(const std::filesystem::path& manifest, const GopMethod& method,
                      const ScoringOptions& options, std::size_t jobs,
                      const std::filesystem::path& out_dir);

/// Writes the JSON report to `out` and the method table next to it.
EvaluationReport RunEvaluate(const std::filesystem::path& manifest,
                             const EvaluationOptions& options,
                             const std::filesystem::path& out);

/// Per-phoneme analysis only; same report document with an empty method list.
EvaluationReport RunPhonemeCorr(const std::filesystem::path& manifest,
                                const GopMethod& method, std::size_t k,
                                std::size_t min_support, const ScoringOptions& options,
                                std::size_t jobs, const std::filesystem::path& out);

/// Validation segments are the non-skip segments of the utterances listed in
/// `validation_ids` (one id per line), or of every aligned utterance.
CalibrationResult RunCalibrate(const std::filesystem::path& manifest,
                               std::span<const double> grid,
                               const std::optional<std::filesystem::path>& validation_ids);

/// Writes a complete corpus plus manifest.json into `out_dir`. A non-empty
/// existing directory is refused unless `force`.
void RunSynth(const SyntheticConfig& config, const std::filesystem::path& out_dir,
              bool force);

}  // namespace gopuq

#endif  // GOPUQ_COMMANDS_HPP_
