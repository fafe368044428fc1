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

#ifndef GOPUQ_STATS_HPP_
#define GOPUQ_STATS_HPP_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "gopuq/gop_scores.hpp"
#include "gopuq/phone_core.hpp"

namespace gopuq {

struct UtteranceScore {
  std::string utterance_id;
  double score = 0.0;
  std::size_t n_segments = 0;
};

struct CorrelationResult {
  double tau = 0.0;
  std::int64_t n_pairs = 0;  // n(n-1)/2
  std::size_t n_items = 0;
};

/// Exact pair statistics behind tau-b. Both counting paths produce the same
/// integers, so they produce bit-identical tau.
struct PairCounts {
  std::int64_t n_pairs = 0;
  std::int64_t concordant_minus_discordant = 0;
  std::int64_t ties_x = 0;  // pairs tied in x (including joint ties)
  std::int64_t ties_y = 0;  // pairs tied in y (including joint ties)
};

enum class TauAlgorithm { kBruteForce, kMergeSort };

PairCounts CountPairsBruteForce(std::span<const double> x, std::span<const double> y);
/// Knight's O(n log n) method.
PairCounts CountPairsMergeSort(std::span<const double> x, std::span<const double> y);

/// Tie-corrected Kendall rank correlation. Throws kUndefinedCorrelation when
/// every x or every y is tied.
CorrelationResult KendallTauB(std::span<const double> x, std::span<const double> y,
                              TauAlgorithm algorithm = TauAlgorithm::kMergeSort);

/// Mean of one utterance's segment scores, summed in segment order.
UtteranceScore AggregateUtterance(std::span<const SegmentScore> scores);

/// Utterance id -> severity, after speaker labels have been expanded.
using SeverityMap = std::map<std::string, int>;

/// Tau-b between utterance scores and their severities. Throws kMissingLabel
/// listing every unlabeled utterance.
CorrelationResult EvaluateMethod(std::span<const UtteranceScore> utterance_scores,
                                 const SeverityMap& severities);

struct PhonemeCorrelation {
  PhoneIndex phone = 0;
  double tau = 0.0;
  std::size_t n_segments = 0;
};

struct SkippedPhone {
  PhoneIndex phone = 0;
  std::size_t n_segments = 0;
  std::string reason;
};

struct PhonemeAnalysis {
  std::vector<PhonemeCorrelation> correlations;  // most negative tau first
  std::vector<SkippedPhone> skipped;             // in inventory order
};

/// Per phone: tau-b between each segment score and the severity of the
/// segment's utterance. Phones with fewer than `min_support` segments, or
/// whose correlation is undefined, land in `skipped`. Ties in tau are broken
/// by label.
PhonemeAnalysis PhonemeCorrelations(std::span<const SegmentScore> segment_scores,
                                    const SeverityMap& severities,
                                    const PhoneInventory& inventory,
                                    std::size_t min_support = 10);

/// First k entries by most negative tau, ties by label. k larger than the
/// list returns everything.
std::vector<PhonemeCorrelation> TopKPhonemes(std::span<const PhonemeCorrelation> correlations,
                                             std::size_t k,
                                             const PhoneInventory& inventory);

}  // namespace gopuq

#endif  // GOPUQ_STATS_HPP_
