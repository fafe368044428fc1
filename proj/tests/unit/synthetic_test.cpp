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

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "gopuq/calibration.hpp"
#include "gopuq/error.hpp"
#include "gopuq/gop_scores.hpp"
#include "gopuq/posterior.hpp"
#include "gopuq/stats.hpp"
#include "oracle.hpp"
#include "test_util.hpp"

namespace gopuq {
namespace {

TEST(PortableRngTest, EngineIsStandardMt19937_64) {
  // The 10000th output for the default seed is fixed by the C++ standard.
  PortableRng rng(5489);
  for (int i = 0; i < 9999; ++i) rng.NextBits();
  EXPECT_EQ(rng.NextBits(), 9981545732273789042ULL);
}

TEST(PortableRngTest, UniformUsesTop53Bits) {
  PortableRng a(99), b(99);
  for (int i = 0; i < 100; ++i) {
    const double u = a.Uniform();
    EXPECT_EQ(u, static_cast<double>(b.NextBits() >> 11) / 9007199254740992.0);
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

TEST(PortableRngTest, NormalIsBoxMullerCosine) {
  PortableRng a(7), b(7);
  for (int i = 0; i < 100; ++i) {
    const long double u1 = b.Uniform();
    const long double u2 = b.Uniform();
    const long double z = std::sqrt(-2.0L * std::log(1.0L - u1)) *
                          std::cos(2.0L * 3.14159265358979323846264338327950288L * u2);
    EXPECT_NEAR(a.Normal(), static_cast<double>(z), 1e-12);
  }
}

TEST(PortableRngTest, MomentsAndIntegerRange) {
  PortableRng rng(1);
  double sum = 0.0, sq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double z = rng.Normal();
    sum += z;
    sq += z * z;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.01);
  EXPECT_NEAR(sq / n, 1.0, 0.01);
  std::map<std::uint64_t, int> counts;
  for (int i = 0; i < 60000; ++i) ++counts[rng.UniformInt(6)];
  ASSERT_EQ(counts.size(), 6u);
  for (const auto& [k, c] : counts) EXPECT_NEAR(c, 10000, 500) << k;
}

TEST(SyntheticTest, ShapeAndDeterminism) {
  SyntheticConfig c;
  c.n_utterances = 20;
  const auto a = GenerateSynthetic(c);
  const auto b = GenerateSynthetic(c);
  ASSERT_EQ(a.logits.size(), 20u);
  EXPECT_EQ(a.inventory.size(), 11u);
  EXPECT_EQ(a.inventory.label(0), "ph00");
  EXPECT_TRUE(a.inventory.is_skip(10));
  EXPECT_EQ(a.logits[3].utterance_id(), "utt0003");
  EXPECT_EQ(a.logits[0].n_frames(), 2u + 8u * 4u);
  EXPECT_EQ(a.alignments[0].segments.size(), 9u);
  for (std::size_t u = 0; u < a.logits.size(); ++u) {
    EXPECT_TRUE(std::ranges::equal(a.logits[u].values(), b.logits[u].values()));
    EXPECT_EQ(a.labels[u], b.labels[u]);
    EXPECT_GE(a.labels[u].severity, 0);
    EXPECT_LT(a.labels[u].severity, 5);
  }
  c.seed = 43;
  const auto other = GenerateSynthetic(c);
  EXPECT_FALSE(std::ranges::equal(a.logits[0].values(), other.logits[0].values()));
}

// Rebuilds the first utterance from the documented draw order.
TEST(SyntheticTest, DrawOrderIsDocumented) {
  SyntheticConfig c;
  c.n_utterances = 1;
  c.segments_per_utterance = 3;
  c.n_phones = 4;
  const auto corpus = GenerateSynthetic(c);
  PortableRng rng(c.seed);
  const int severity = static_cast<int>(rng.UniformInt(c.severity_levels));
  EXPECT_EQ(corpus.labels[0].severity, severity);
  std::vector<float> want;
  auto frames = [&](std::size_t canonical, double mean, std::size_t n) {
    for (std::size_t f = 0; f < n; ++f) {
      for (std::size_t q = 0; q < 5; ++q) {
        const double m = q == canonical ? mean : c.base_low;
        want.push_back(static_cast<float>(m + c.noise_scale * rng.Normal()));
      }
    }
  };
  frames(4, c.base_high, c.silence_frames);
  for (int s = 0; s < 3; ++s) {
    const auto phone = rng.UniformInt(4);
    EXPECT_EQ(corpus.alignments[0].segments[s + 1].phone, phone);
    frames(phone, c.base_high - c.degradation_slope * severity, c.frames_per_segment);
  }
  EXPECT_TRUE(std::ranges::equal(corpus.logits[0].values(), want));
}

TEST(SyntheticTest, ConfigErrors) {
  SyntheticConfig c;
  c.severity_levels = 1;
  EXPECT_ERROR_KIND(GenerateSynthetic(c), ErrorKind::kConfig);
  c = {};
  c.n_utterances = 0;
  EXPECT_ERROR_KIND(GenerateSynthetic(c), ErrorKind::kConfig);
  c = {};
  c.degrading_phone = 10;
  EXPECT_ERROR_KIND(GenerateSynthetic(c), ErrorKind::kConfig);
}

TEST(SyntheticTest, NoiselessLargeSlopeGivesPerfectRanking) {
  SyntheticConfig c;
  c.n_utterances = 60;
  c.noise_scale = 0.0;
  c.degradation_slope = 10.0;
  const auto corpus = GenerateSynthetic(c);
  const GopMethod m{Normalization::kNone, Scoring::kMaxLogit, 1.0};
  std::vector<double> scores, sev;
  for (std::size_t u = 0; u < corpus.logits.size(); ++u) {
    std::vector<SegmentScore> segs;
    for (const auto& s : corpus.alignments[u].segments) {
      if (auto r = ScoreSegment(corpus.logits[u], s, corpus.inventory, m, nullptr)) {
        segs.push_back(*r);
      }
    }
    scores.push_back(AggregateUtterance(segs).score);
    sev.push_back(corpus.labels[u].severity);
  }
  EXPECT_EQ(KendallTauB(scores, sev).tau, -1.0);
}

TEST(CalibrationTest, WellCalibratedDataPrefersOne) {
  // Canonical phones drawn from softmax(L): T = 1 is the true temperature.
  std::mt19937_64 rng(17);
  std::normal_distribution<double> logit(0.0, 2.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t n = 20000, q = 4;
  std::vector<std::vector<double>> rows(n, std::vector<double>(q));
  for (auto& r : rows) {
    for (auto& v : r) v = static_cast<float>(logit(rng));
  }
  const auto m = FrameLogitMatrix::FromRows("cal", rows);
  std::vector<LabeledSegment> segments;
  for (std::size_t f = 0; f < n; ++f) {
    const auto p = oracle::Softmax({rows[f].begin(), rows[f].end()});
    double u = unit(rng);
    std::size_t k = 0;
    while (k + 1 < q && u >= static_cast<double>(p[k])) u -= static_cast<double>(p[k++]);
    segments.push_back({&m, {k, f, f + 1}});
  }
  const std::vector<double> grid = {0.5, 0.8, 1.0, 1.25, 2.0};
  const auto r = CalibrateTemperature(segments, grid);
  EXPECT_EQ(r.best_temperature, 1.0);
  ASSERT_EQ(r.nll.size(), grid.size());
  EXPECT_EQ(r.n_frames, n);
  // Independent NLL at T = 2.
  long double nll = 0.0L;
  for (const auto& s : segments) {
    const auto v = oracle::Normalize(rows[s.segment.start_frame], oracle::Norm::kScale,
                                     2.0L, {});
    nll -= std::log(oracle::Softmax(v)[s.segment.phone]);
  }
  EXPECT_NEAR(r.nll[4], static_cast<double>(nll / n), 1e-9);
}

TEST(CalibrationTest, GridEdgeCases) {
  const auto m = FrameLogitMatrix::FromRows("u", {{2, 1, 0}});
  const std::vector<LabeledSegment> seg = {{&m, {0, 0, 1}}};
  const std::vector<double> one = {1.0};
  EXPECT_EQ(CalibrateTemperature(seg, one).best_temperature, 1.0);
  const std::vector<double> zero = {1.0, 0.0};
  EXPECT_ERROR_KIND(CalibrateTemperature(seg, zero), ErrorKind::kUsage);
  EXPECT_ERROR_KIND(CalibrateTemperature(seg, {}), ErrorKind::kUsage);
  EXPECT_ERROR_KIND(CalibrateTemperature({}, one), ErrorKind::kUnscorable);
}

}  // namespace
}  // namespace gopuq
