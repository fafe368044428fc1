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

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "gopuq/error.hpp"
#include "oracle.hpp"
#include "test_util.hpp"

namespace gopuq {
namespace {

constexpr double kTol = 1e-12;

TEST(LogSoftmaxTest, UniformIsMinusLogN) {
  const std::vector<double> x = {0, 0, 0};
  for (double v : LogSoftmax(x)) EXPECT_NEAR(v, -std::log(3.0), kTol);
}

TEST(LogSoftmaxTest, MatchesDirectFormula) {
  const std::vector<double> x = {2, 1, 0};
  const auto got = LogSoftmax(x);
  const auto want = oracle::Softmax({2.0L, 1.0L, 0.0L});
  for (std::size_t q = 0; q < 3; ++q) {
    EXPECT_NEAR(got[q], static_cast<double>(std::log(want[q])), kTol);
  }
  EXPECT_NEAR(got[0], -0.40761, 1e-5);
  EXPECT_NEAR(got[1], -1.40761, 1e-5);
  EXPECT_NEAR(got[2], -2.40761, 1e-5);
}

TEST(LogSoftmaxTest, LargeLogitsStayFinite) {
  const std::vector<double> x = {1000, 0, 0};
  const auto got = LogSoftmax(x);
  EXPECT_NEAR(got[0], 0.0, 1e-12);
  EXPECT_NEAR(got[1], -1000.0, 1e-9);
  EXPECT_NEAR(got[2], -1000.0, 1e-9);
}

TEST(LogSoftmaxTest, RejectsNonFinite) {
  const std::vector<double> x = {0, NAN};
  EXPECT_ERROR_KIND(LogSoftmax(x), ErrorKind::kNonFinite);
}

TEST(NormalizeLogitsTest, Examples) {
  const std::vector<double> x = {2, 1, 0};
  EXPECT_EQ(NormalizeLogits(x, {Normalization::kNone, Scoring::kGmm, 1.0}, nullptr), x);
  const auto scaled = NormalizeLogits(x, {Normalization::kScale, Scoring::kGmm, 2.0}, nullptr);
  EXPECT_EQ(scaled, (std::vector<double>{1.0, 0.5, 0.0}));

  const PhonePrior prior({0.5, 0.25, 0.25});
  const auto shifted =
      NormalizeLogits(x, {Normalization::kPrior, Scoring::kGmm, 1.0}, &prior);
  const auto want =
      oracle::Normalize({2, 1, 0}, oracle::Norm::kPrior, 1.0L, {0.5, 0.25, 0.25});
  for (std::size_t q = 0; q < 3; ++q) {
    EXPECT_NEAR(shifted[q], static_cast<double>(want[q]), kTol);
  }
  EXPECT_NEAR(shifted[0], 2.69315, 1e-5);
  EXPECT_NEAR(shifted[1], 2.38629, 1e-5);
  EXPECT_NEAR(shifted[2], 1.38629, 1e-5);
}

TEST(NormalizeLogitsTest, TemperatureOneIsIdentity) {
  const std::vector<double> x = {0.3, -1.7, 4.25, 1e-3};
  EXPECT_EQ(NormalizeLogits(x, {Normalization::kScale, Scoring::kGmm, 1.0}, nullptr), x);
}

TEST(NormalizeLogitsTest, Errors) {
  const std::vector<double> x = {2, 1, 0};
  EXPECT_ERROR_KIND(
      NormalizeLogits(x, {Normalization::kScale, Scoring::kGmm, 0.0}, nullptr),
      ErrorKind::kConfig);
  EXPECT_ERROR_KIND(
      NormalizeLogits(x, {Normalization::kPrior, Scoring::kGmm, 1.0}, nullptr),
      ErrorKind::kConfig);
}

TEST(SegmentStatsTest, TwoFrameExample) {
  const auto m = FrameLogitMatrix::FromRows("u", {{2, 1, 0}, {0, 1, 2}});
  const auto s = ComputeSegmentStats(m, {0, 0, 2}, {}, nullptr);
  const auto want = oracle::SegmentMeans({{2, 1, 0}, {0, 1, 2}}, oracle::Norm::kNone,
                                         1.0L, {});
  ASSERT_EQ(s.n_frames, 2u);
  for (std::size_t q = 0; q < 3; ++q) {
    EXPECT_NEAR(s.mean_logit[q], 1.0, kTol);
    EXPECT_NEAR(s.mean_prob[q], static_cast<double>(want.prob[q]), kTol);
    EXPECT_NEAR(s.mean_log_prob[q], static_cast<double>(want.log_prob[q]), kTol);
  }
  EXPECT_NEAR(s.mean_prob[0], 0.37764, 1e-5);
  EXPECT_NEAR(s.mean_prob[1], 0.24473, 1e-5);
  EXPECT_NEAR(s.mean_prob[2], 0.37764, 1e-5);
}

TEST(SegmentStatsTest, UniformFrame) {
  const auto m = FrameLogitMatrix::FromRows("u", {{0, 0, 0}});
  const auto s = ComputeSegmentStats(m, {1, 0, 1}, {}, nullptr);
  for (std::size_t q = 0; q < 3; ++q) {
    EXPECT_NEAR(s.mean_prob[q], 1.0 / 3.0, kTol);
    EXPECT_EQ(s.mean_logit[q], 0.0);
  }
}

TEST(SegmentStatsTest, UniformPriorLeavesProbabilitiesAlone) {
  const auto m = FrameLogitMatrix::FromRows("u", {{2, 1, 0}});
  const PhonePrior uniform = PhonePrior::Uniform(3);
  const auto none = ComputeSegmentStats(m, {0, 0, 1}, {}, nullptr);
  const auto prior = ComputeSegmentStats(
      m, {0, 0, 1}, {Normalization::kPrior, Scoring::kGmm, 1.0}, &uniform);
  for (std::size_t q = 0; q < 3; ++q) {
    EXPECT_NEAR(prior.mean_prob[q], none.mean_prob[q], kTol);
    EXPECT_NEAR(prior.mean_logit[q], none.mean_logit[q] + std::log(3.0), kTol);
  }
}

TEST(SegmentStatsTest, SegmentBoundsChecked) {
  const auto m = FrameLogitMatrix::FromRows("u", {{2, 1, 0}, {0, 1, 2}});
  EXPECT_ERROR_KIND(ComputeSegmentStats(m, {0, 1, 1}, {}, nullptr),
                    ErrorKind::kEmptySegment);
  EXPECT_ERROR_KIND(ComputeSegmentStats(m, {0, 1, 3}, {}, nullptr),
                    ErrorKind::kFrameOutOfRange);
}

TEST(SegmentStatsTest, OnlySegmentFramesContribute) {
  const auto m = FrameLogitMatrix::FromRows("u", {{9, 0, 0}, {2, 1, 0}, {0, 1, 2}, {0, 0, 9}});
  const auto s = ComputeSegmentStats(m, {0, 1, 3}, {}, nullptr);
  for (std::size_t q = 0; q < 3; ++q) EXPECT_NEAR(s.mean_logit[q], 1.0, kTol);
}

}  // namespace
}  // namespace gopuq
