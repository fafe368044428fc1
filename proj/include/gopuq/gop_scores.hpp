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

// Goodness-of-pronunciation scoring functions over segment statistics.
//
// Baselines:
//   gmm         mean over frames of log softmax(L)[p]
//   nn          log Pbar(p) - max_q log Pbar(q)        (max includes p)
//   dnn         Pbar(p) / P(p)
// Uncertainty scores:
//   entropy     -sum_q Pbar(q) log Pbar(q)             (independent of p)
//   margin      Pbar(p) - max_{q != p} Pbar(q)
//   maxlogit    Lbar(p)
//   logitmargin Lbar(p) - max_{q != p} Lbar(q)
//
// Pbar and Lbar are frame means of the normalized probabilities and logits;
// see ComputeSegmentStats.

#ifndef GOPUQ_GOP_SCORES_HPP_
#define GOPUQ_GOP_SCORES_HPP_

#include <optional>
#include <string>

#include "gopuq/phone_core.hpp"
#include "gopuq/posterior.hpp"

namespace gopuq {

enum class EntropyForm {
  kShannon,
  /// -sum_q Pbar(q) log Pbar(p), which reduces to -log Pbar(p). Kept for
  /// reproduction studies only.
  kLiteral,
};

struct ScoringOptions {
  EntropyForm entropy_form = EntropyForm::kShannon;
  /// Replaces log(0) in the nn score.
  double log_floor = -745.0;
};

struct SegmentScore {
  std::string utterance_id;
  PhoneIndex phone = 0;
  std::size_t start_frame = 0;
  std::size_t end_frame = 0;
  double score = 0.0;
  GopMethod method;
};

double ScoreGmm(const SegmentStats& stats, PhoneIndex p);
double ScoreNn(const SegmentStats& stats, PhoneIndex p, double log_floor = -745.0);
double ScoreDnn(const SegmentStats& stats, PhoneIndex p, const PhonePrior& prior);
double ScoreEntropy(const SegmentStats& stats);
double ScoreEntropyLiteral(const SegmentStats& stats, PhoneIndex p,
                           double log_floor = -745.0);
double ScoreMargin(const SegmentStats& stats, PhoneIndex p);
double ScoreMaxLogit(const SegmentStats& stats, PhoneIndex p);
double ScoreLogitMargin(const SegmentStats& stats, PhoneIndex p);

/// Scores `stats` for canonical phone `p` with the method's scoring function.
/// `prior` is needed for dnn.
double ScoreStats(const SegmentStats& stats, PhoneIndex p, const GopMethod& method,
                  const PhonePrior* prior, const ScoringOptions& options = {});

/// Computes stats with the method's normalization and scores the segment.
/// Returns nullopt for segments whose phone is a skip label. Errors carry
/// the utterance id and frame range.
std::optional<SegmentScore> ScoreSegment(const FrameLogitMatrix& logits,
                                         const PhoneSegment& segment,
                                         const PhoneInventory& inventory,
                                         const GopMethod& method,
                                         const PhonePrior* prior,
                                         const ScoringOptions& options = {});

}  // namespace gopuq

#endif  // GOPUQ_GOP_SCORES_HPP_
