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

// Seeded synthetic corpora with a known severity signal.
//
// Random stream, fixed so that any implementation can reproduce a corpus bit
// for bit from its seed:
//   * raw bits: std::mt19937_64 seeded with the 64-bit seed (the standard
//     pins its output sequence);
//   * uniform in [0, 1): (bits >> 11) * 2^-53;
//   * integer in [0, n): rejection sampling, accepting bits < 2^64 - (2^64 mod n),
//     then bits mod n;
//   * standard normal: basic Box-Muller, one value per two draws,
//     z = sqrt(-2 ln(1 - u1)) * cos(2 pi u2), second value discarded.
//
// Draw order per utterance: severity, then for every segment its canonical
// phone followed by noise for its frames, frame by frame, column by column. A
// leading silence segment (when enabled) draws its noise first.

#ifndef GOPUQ_SYNTHETIC_HPP_
#define GOPUQ_SYNTHETIC_HPP_

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "gopuq/phone_core.hpp"

namespace gopuq {

class PortableRng {
 public:
  explicit PortableRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t NextBits() { return engine_(); }
  double Uniform();
  std::uint64_t UniformInt(std::uint64_t n);
  double Normal();

 private:
  std::mt19937_64 engine_;
};

struct SyntheticConfig {
  std::size_t n_utterances = 200;
  std::size_t n_phones = 10;  // scorable phones; "sil" is appended
  std::size_t frames_per_segment = 4;
  std::size_t segments_per_utterance = 8;
  std::size_t severity_levels = 5;
  double degradation_slope = 2.0;
  double noise_scale = 1.0;
  std::uint64_t seed = 42;
  double base_high = 2.0;
  double base_low = 0.0;
  /// Frames of leading silence per utterance; 0 disables it.
  std::size_t silence_frames = 2;
  /// When set, only segments of this phone degrade with severity.
  std::optional<PhoneIndex> degrading_phone;

  /// Rejects zero counts and fewer than two severity levels.
  void Validate() const;
};

struct SyntheticCorpus {
  PhoneInventory inventory;
  std::vector<FrameLogitMatrix> logits;  // one per utterance, id order
  std::vector<UtteranceAlignment> alignments;
  PhonePrior prior;  // frame-count estimate over the alignments
  std::vector<SeverityLabel> labels;  // keyed by utterance id
};

/// Canonical logit: base_high - slope * severity + noise; every other column
/// base_low + noise, where noise ~ N(0, noise_scale^2).
SyntheticCorpus GenerateSynthetic(const SyntheticConfig& config);

}  // namespace gopuq

#endif  // GOPUQ_SYNTHETIC_HPP_
