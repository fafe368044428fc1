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

#include "gopuq/calibration.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "gopuq/error.hpp"
#include "gopuq/posterior.hpp"

namespace gopuq {

double MeanCanonicalNll(std::span<const LabeledSegment> segments, double temperature) {
  const GopMethod scale{Normalization::kScale, Scoring::kGmm, temperature};
  scale.Validate();
  double total = 0.0;
  std::size_t frames = 0;
  for (const auto& s : segments) {
    const auto& seg = s.segment;
    if (seg.start_frame >= seg.end_frame || seg.end_frame > s.logits->n_frames()) {
      throw Error(ErrorKind::kFrameOutOfRange,
                  fmt::format("calibration segment [{}, {}) invalid for '{}'",
                              seg.start_frame, seg.end_frame,
                              s.logits->utterance_id()));
    }
    std::vector<double> frame(s.logits->n_phones());
    for (std::size_t f = seg.start_frame; f < seg.end_frame; ++f) {
      const auto row = s.logits->row(f);
      std::copy(row.begin(), row.end(), frame.begin());
      const auto log_probs = LogSoftmax(NormalizeLogits(frame, scale, nullptr));
      total -= log_probs.at(seg.phone);
      ++frames;
    }
  }
  if (frames == 0) {
    throw Error(ErrorKind::kUnscorable, "calibration needs at least one frame");
  }
  return total / static_cast<double>(frames);
}

CalibrationResult CalibrateTemperature(std::span<const LabeledSegment> segments,
                                       std::span<const double> grid) {
  if (grid.empty()) throw Error(ErrorKind::kUsage, "temperature grid is empty");
  for (double t : grid) {
    if (!(t > 0.0) || !std::isfinite(t)) {
      throw Error(ErrorKind::kUsage,
                  fmt::format("temperature grid value {} is not positive", t));
    }
  }
  if (segments.empty()) {
    throw Error(ErrorKind::kUnscorable, "calibration validation set is empty");
  }

  CalibrationResult result;
  result.grid.assign(grid.begin(), grid.end());
  for (const auto& s : segments) result.n_frames += s.segment.n_frames();
  std::size_t best = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    result.nll.push_back(MeanCanonicalNll(segments, grid[i]));
    if (result.nll[i] < result.nll[best]) best = i;
  }
  result.best_temperature = grid[best];
  return result;
}

}  // namespace gopuq
