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

#include "gopuq/gop_scores.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "gopuq/error.hpp"

namespace gopuq {

namespace {

void CheckPhone(const SegmentStats& stats, PhoneIndex p) {
  if (p >= stats.mean_prob.size()) {
    throw Error(ErrorKind::kUnknownLabel,
                fmt::format("phone index {} outside {} columns", p,
                            stats.mean_prob.size()));
  }
}

double MaxExcluding(const std::vector<double>& v, PhoneIndex p) {
  if (v.size() < 2) {
    throw Error(ErrorKind::kConfig, "margin scores need at least 2 phones");
  }
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t q = 0; q < v.size(); ++q) {
    if (q != p) best = std::max(best, v[q]);
  }
  return best;
}

double FlooredLog(double x, double floor) {
  if (x <= 0.0) return floor;
  return std::max(std::log(x), floor);
}

}  // namespace

double ScoreGmm(const SegmentStats& stats, PhoneIndex p) {
  CheckPhone(stats, p);
  return stats.mean_log_prob[p];
}

double ScoreNn(const SegmentStats& stats, PhoneIndex p, double log_floor) {
  CheckPhone(stats, p);
  const double best =
      *std::max_element(stats.mean_prob.begin(), stats.mean_prob.end());
  return FlooredLog(stats.mean_prob[p], log_floor) - std::log(best);
}

double ScoreDnn(const SegmentStats& stats, PhoneIndex p, const PhonePrior& prior) {
  CheckPhone(stats, p);
  return stats.mean_prob[p] / prior.prob(p);
}

double ScoreEntropy(const SegmentStats& stats) {
  double h = 0.0;
  for (double q : stats.mean_prob) {
    if (q > 0.0) h -= q * std::log(q);
  }
  return h;
}

double ScoreEntropyLiteral(const SegmentStats& stats, PhoneIndex p,
                           double log_floor) {
  CheckPhone(stats, p);
  double mass = 0.0;
  for (double q : stats.mean_prob) mass += q;
  return -mass * FlooredLog(stats.mean_prob[p], log_floor);
}

double ScoreMargin(const SegmentStats& stats, PhoneIndex p) {
  CheckPhone(stats, p);
  return stats.mean_prob[p] - MaxExcluding(stats.mean_prob, p);
}

double ScoreMaxLogit(const SegmentStats& stats, PhoneIndex p) {
  CheckPhone(stats, p);
  return stats.mean_logit[p];
}

double ScoreLogitMargin(const SegmentStats& stats, PhoneIndex p) {
  CheckPhone(stats, p);
  return stats.mean_logit[p] - MaxExcluding(stats.mean_logit, p);
}

double ScoreStats(const SegmentStats& stats, PhoneIndex p, const GopMethod& method,
                  const PhonePrior* prior, const ScoringOptions& options) {
  switch (method.scoring) {
    case Scoring::kGmm:
      return ScoreGmm(stats, p);
    case Scoring::kNn:
      return ScoreNn(stats, p, options.log_floor);
    case Scoring::kDnn:
      if (prior == nullptr) {
        throw Error(ErrorKind::kConfig, "dnn scoring without a prior");
      }
      return ScoreDnn(stats, p, *prior);
    case Scoring::kEntropy:
      return options.entropy_form == EntropyForm::kShannon
                 ? ScoreEntropy(stats)
                 : ScoreEntropyLiteral(stats, p, options.log_floor);
    case Scoring::kMargin:
      return ScoreMargin(stats, p);
    case Scoring::kMaxLogit:
      return ScoreMaxLogit(stats, p);
    case Scoring::kLogitMargin:
      return ScoreLogitMargin(stats, p);
  }
  throw Error(ErrorKind::kConfig, "unknown scoring function");
}

std::optional<SegmentScore> ScoreSegment(const FrameLogitMatrix& logits,
                                         const PhoneSegment& segment,
                                         const PhoneInventory& inventory,
                                         const GopMethod& method,
                                         const PhonePrior* prior,
                                         const ScoringOptions& options) {
  if (segment.phone >= inventory.size()) {
    throw Error(ErrorKind::kUnknownLabel,
                fmt::format("utterance '{}': phone index {} outside inventory",
                            logits.utterance_id(), segment.phone));
  }
  if (inventory.is_skip(segment.phone)) return std::nullopt;

  try {
    method.Validate();
    logits.CheckWidth(inventory);
    const SegmentStats stats = ComputeSegmentStats(logits, segment, method, prior);
    const double score = ScoreStats(stats, segment.phone, method, prior, options);
    if (!std::isfinite(score)) {
      throw Error(ErrorKind::kNonFinite, "score is not finite");
    }
    return SegmentScore{logits.utterance_id(), segment.phone, segment.start_frame,
                        segment.end_frame,     score,         method};
  } catch (const Error& e) {
    throw Error(e.kind(),
                fmt::format("utterance '{}' segment {} [{}, {}) {}: {}",
                            logits.utterance_id(), inventory.label(segment.phone),
                            segment.start_frame, segment.end_frame, method.Name(),
                            e.what()));
  }
}

}  // namespace gopuq
