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

#ifndef GOPUQ_POSTERIOR_HPP_
#define GOPUQ_POSTERIOR_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "gopuq/phone_core.hpp"

namespace gopuq {

/// log(e^x_p / sum_q e^x_q) via max-subtracted log-sum-exp.
std::vector<double> LogSoftmax(std::span<const double> logits);

/// Applies the method's logit normalization to one frame:
///   none  -> identity
///   scale -> x / temperature
///   prior -> x_p - log P(p)
/// `prior` may be null unless the normalization is prior.
std::vector<double> NormalizeLogits(std::span<const double> logits,
                                    const GopMethod& method,
                                    const PhonePrior* prior);

/// Frame averages over one segment, after per-frame normalization.
struct SegmentStats {
  std::vector<double> mean_prob;      // mean of softmax(normalized logits)
  std::vector<double> mean_logit;     // mean of normalized logits
  std::vector<double> mean_log_prob;  // mean of log-softmax(normalized logits)
  std::size_t n_frames = 0;
};

/// One pass over the segment's frames in frame order; sums are accumulated in
/// double precision in that order so results are reproducible.
SegmentStats ComputeSegmentStats(const FrameLogitMatrix& logits,
                                 const PhoneSegment& segment,
                                 const GopMethod& method,
                                 const PhonePrior* prior);

}  // namespace gopuq

#endif  // GOPUQ_POSTERIOR_HPP_
