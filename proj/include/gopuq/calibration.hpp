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

#ifndef GOPUQ_CALIBRATION_HPP_
#define GOPUQ_CALIBRATION_HPP_

#include <span>
#include <vector>

#include "gopuq/phone_core.hpp"

namespace gopuq {

/// A segment whose aligned phone is taken as the correct label.
struct LabeledSegment {
  const FrameLogitMatrix* logits = nullptr;
  PhoneSegment segment;
};

struct CalibrationResult {
  std::vector<double> grid;
  std::vector<double> nll;  // per grid point
  double best_temperature = 1.0;
  std::size_t n_frames = 0;
};

/// Mean over all frames of -log softmax(L / T)[canonical phone].
double MeanCanonicalNll(std::span<const LabeledSegment> segments, double temperature);

/// Grid search for the temperature minimizing MeanCanonicalNll. The first
/// grid point wins ties. Empty or non-positive grids are usage errors; an
/// empty validation set is kUnscorable.
CalibrationResult CalibrateTemperature(std::span<const LabeledSegment> segments,
                                       std::span<const double> grid);

}  // namespace gopuq

#endif  // GOPUQ_CALIBRATION_HPP_
