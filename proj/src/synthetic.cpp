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

#include "gopuq/synthetic.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <fmt/format.h>

#include "gopuq/error.hpp"
#include "gopuq/io_formats.hpp"

namespace gopuq {

double PortableRng::Uniform() {
  return static_cast<double>(NextBits() >> 11) * 0x1.0p-53;
}

std::uint64_t PortableRng::UniformInt(std::uint64_t n) {
  if (n == 0) throw Error(ErrorKind::kConfig, "UniformInt over an empty range");
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  // Largest multiple of n representable, expressed as an exclusive bound.
  const std::uint64_t rem = (kMax % n + 1) % n;
  const std::uint64_t limit = kMax - rem;  // accept bits <= limit
  for (;;) {
    const std::uint64_t bits = NextBits();
    if (rem == 0 || bits <= limit) return bits % n;
  }
}

double PortableRng::Normal() {
  const double u1 = Uniform();
  const double u2 = Uniform();
  return std::sqrt(-2.0 * std::log(1.0 - u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

void SyntheticConfig::Validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorKind::kConfig, what);
  };
  require(n_utterances >= 1, "n_utterances must be >= 1");
  require(n_phones >= 1, "n_phones must be >= 1");
  require(frames_per_segment >= 1, "frames_per_segment must be >= 1");
  require(segments_per_utterance >= 1, "segments_per_utterance must be >= 1");
  require(severity_levels >= 2, "severity_levels must be >= 2");
  require(std::isfinite(degradation_slope), "degradation slope must be finite");
  require(std::isfinite(noise_scale) && noise_scale >= 0.0,
          "noise_scale must be finite and non-negative");
  require(std::isfinite(base_high) && std::isfinite(base_low),
          "base logits must be finite");
  if (degrading_phone && *degrading_phone >= n_phones) {
    throw Error(ErrorKind::kConfig,
                fmt::format("degrading phone {} outside {} phones", *degrading_phone,
                            n_phones));
  }
}

namespace {

int Digits(std::size_t n) {
  int d = 1;
  while (n >= 10) {
    n /= 10;
    ++d;
  }
  return d;
}

}  // namespace

SyntheticCorpus GenerateSynthetic(const SyntheticConfig& config) {
  config.Validate();

  const int phone_width = std::max(2, Digits(config.n_phones - 1));
  std::vector<std::string> labels;
  for (std::size_t p = 0; p < config.n_phones; ++p) {
    labels.push_back(fmt::format("ph{:0{}}", p, phone_width));
  }
  labels.push_back("sil");
  PhoneInventory inventory(labels, {"sil"});
  const std::size_t width = inventory.size();
  const PhoneIndex sil = config.n_phones;

  PortableRng rng(config.seed);
  const int utt_width = std::max(4, Digits(config.n_utterances - 1));
  const std::size_t frames = config.silence_frames +
                             config.segments_per_utterance * config.frames_per_segment;

  std::vector<FrameLogitMatrix> matrices;
  std::vector<UtteranceAlignment> alignments;
  std::vector<SeverityLabel> severity_labels;
  matrices.reserve(config.n_utterances);

  for (std::size_t u = 0; u < config.n_utterances; ++u) {
    const std::string id = fmt::format("utt{:0{}}", u, utt_width);
    const int severity = static_cast<int>(rng.UniformInt(config.severity_levels));
    severity_labels.push_back({id, severity});

    std::vector<float> values;
    values.reserve(frames * width);
    UtteranceAlignment alignment{id, {}};

    auto emit_frames = [&](PhoneIndex canonical, double canonical_mean,
                           std::size_t n_frames) {
      for (std::size_t f = 0; f < n_frames; ++f) {
        for (std::size_t q = 0; q < width; ++q) {
          const double mean = q == canonical ? canonical_mean : config.base_low;
          values.push_back(static_cast<float>(mean + config.noise_scale * rng.Normal()));
        }
      }
    };

    std::size_t cursor = 0;
    if (config.silence_frames > 0) {
      emit_frames(sil, config.base_high, config.silence_frames);
      alignment.segments.push_back({sil, cursor, cursor + config.silence_frames});
      cursor += config.silence_frames;
    }
    for (std::size_t s = 0; s < config.segments_per_utterance; ++s) {
      const PhoneIndex phone = rng.UniformInt(config.n_phones);
      const bool degrades = !config.degrading_phone || *config.degrading_phone == phone;
      const double mean =
          config.base_high -
          (degrades ? config.degradation_slope * static_cast<double>(severity) : 0.0);
      emit_frames(phone, mean, config.frames_per_segment);
      alignment.segments.push_back({phone, cursor, cursor + config.frames_per_segment});
      cursor += config.frames_per_segment;
    }

    matrices.emplace_back(id, frames, width, std::move(values));
    alignments.push_back(std::move(alignment));
  }

  PhonePrior prior = EstimatePriors(alignments, inventory);
  return SyntheticCorpus{std::move(inventory), std::move(matrices),
                         std::move(alignments), std::move(prior),
                         std::move(severity_labels)};
}

}  // namespace gopuq
