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

#ifndef GOPUQ_CORPUS_HPP_
#define GOPUQ_CORPUS_HPP_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gopuq/gop_scores.hpp"
#include "gopuq/io_formats.hpp"
#include "gopuq/phone_core.hpp"
#include "gopuq/report.hpp"
#include "gopuq/stats.hpp"

namespace gopuq {

/// A manifest and everything it references, validated and in memory.
struct Corpus {
  std::filesystem::path manifest_path;
  CorpusManifest manifest;
  PhoneInventory inventory;
  std::vector<UtteranceAlignment> alignments;      // sorted by utterance id
  std::map<std::string, FrameLogitMatrix> logits;  // empty unless loaded
  std::optional<std::vector<SeverityLabel>> labels;
  std::optional<PhonePrior> prior;  // the manifest's priors file, if any
};

struct LoadOptions {
  bool logits = true;
  bool labels = false;  // when true, a manifest without labels is an error
};

Corpus LoadCorpus(const std::filesystem::path& manifest_path,
                  const LoadOptions& options = {});

/// The manifest's priors file when present, otherwise frame-count estimates.
PhonePrior ResolvePrior(const Corpus& corpus);

/// Utterance id -> severity. An utterance takes its own label if present,
/// else its speaker's.
SeverityMap ExpandSeverities(const Corpus& corpus);

struct CorpusScores {
  std::vector<SegmentScore> segments;  // by (utterance id, start frame)
  std::vector<UtteranceScore> utterances;
  std::vector<std::string> skipped;  // "id<TAB>reason"
};

/// Scores every utterance with `jobs` worker threads. Output order and values
/// do not depend on `jobs`. The first failing utterance in id order decides
/// the error.
CorpusScores ScoreCorpus(const Corpus& corpus, const GopMethod& method,
                         const PhonePrior* prior, const ScoringOptions& options,
                         std::size_t jobs);

struct EvaluationOptions {
  std::vector<GopMethod> methods;
  ScoringOptions scoring;
  std::size_t jobs = 1;
  std::size_t min_support = 10;
  std::size_t top_k = 5;
  /// Adds the per-phoneme section using this method.
  std::optional<GopMethod> phoneme_method;
};

/// Runs every grid cell. Undefined correlations are recorded per cell; other
/// failures abort.
EvaluationReport EvaluateCorpus(const Corpus& corpus, const EvaluationOptions& options);

/// Most negative defined tau; earliest grid cell on ties. Null if none.
const MethodResult* BestMethod(const EvaluationReport& report);

}  // namespace gopuq

#endif  // GOPUQ_CORPUS_HPP_
