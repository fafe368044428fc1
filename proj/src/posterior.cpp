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

#include "gopuq/posterior.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "gopuq/error.hpp"

namespace gopuq {

namespace {

void CheckFinite(std::span<const double> values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw Error(ErrorKind::kNonFinite,
                  fmt::format("non-finite logit at column {}", i));
    }
  }
}

// Writes log-softmax of `x` into `out`; both have the same length.
void LogSoftmaxInto(std::span<const double> x, std::span<double> out) {
  const double max = *std::max_element(x.begin(), x.end());
  double sum = 0.0;
  for (double v : x) sum += std::exp(v - max);
  const double log_norm = max + std::log(sum);
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] - log_norm;
}

}  // namespace

std::vector<double> LogSoftmax(std::span<const double> logits) {
  if (logits.empty()) {
    throw Error(ErrorKind::kWidthMismatch, "log-softmax of an empty vector");
  }
  CheckFinite(logits);
  std::vector<double> out(logits.size());
  LogSoftmaxInto(logits, out);
  return out;
}

std::vector<double> NormalizeLogits(std::span<const double> logits,
                                    const GopMethod& method,
                                    const PhonePrior* prior) {
  CheckFinite(logits);
  std::vector<double> out(logits.begin(), logits.end());
  switch (method.normalization) {
    case Normalization::kNone:
      break;
    case Normalization::kScale:
      if (!(method.temperature > 0.0)) {
        throw Error(ErrorKind::kConfig,
                    fmt::format("temperature must be positive, got {}",
                                method.temperature));
      }
      for (double& v : out) v /= method.temperature;
      break;
    case Normalization::kPrior:
      if (prior == nullptr) {
        throw Error(ErrorKind::kConfig, "prior normalization without a prior");
      }
      if (prior->size() != out.size()) {
        throw Error(ErrorKind::kWidthMismatch,
                    fmt::format("prior has {} entries, logits have {}",
                                prior->size(), out.size()));
      }
      for (std::size_t p = 0; p < out.size(); ++p) out[p] -= prior->log_prob(p);
      break;
  }
  return out;
}

SegmentStats ComputeSegmentStats(const FrameLogitMatrix& logits,
                                 const PhoneSegment& segment,
                                 const GopMethod& method,
                                 const PhonePrior* prior) {
  if (segment.start_frame >= segment.end_frame) {
    throw Error(ErrorKind::kEmptySegment,
                fmt::format("empty frame range [{}, {})", segment.start_frame,
                            segment.end_frame));
  }
  if (segment.end_frame > logits.n_frames()) {
    throw Error(ErrorKind::kFrameOutOfRange,
                fmt::format("segment [{}, {}) exceeds {} frames of '{}'",
                            segment.start_frame, segment.end_frame,
                            logits.n_frames(), logits.utterance_id()));
  }

  const std::size_t width = logits.n_phones();
  SegmentStats stats;
  stats.mean_prob.assign(width, 0.0);
  stats.mean_logit.assign(width, 0.0);
  stats.mean_log_prob.assign(width, 0.0);
  stats.n_frames = segment.n_frames();

  std::vector<double> frame(width);
  std::vector<double> log_probs(width);
  for (std::size_t f = segment.start_frame; f < segment.end_frame; ++f) {
    const auto row = logits.row(f);
    std::copy(row.begin(), row.end(), frame.begin());
    const std::vector<double> normalized = NormalizeLogits(frame, method, prior);
    LogSoftmaxInto(normalized, log_probs);
    for (std::size_t q = 0; q < width; ++q) {
      stats.mean_logit[q] += normalized[q];
      stats.mean_log_prob[q] += log_probs[q];
      stats.mean_prob[q] += std::exp(log_probs[q]);
    }
  }
  const double n = static_cast<double>(stats.n_frames);
  for (std::size_t q = 0; q < width; ++q) {
    stats.mean_logit[q] /= n;
    stats.mean_log_prob[q] /= n;
    stats.mean_prob[q] /= n;
  }
  return stats;
}

}  // namespace gopuq
