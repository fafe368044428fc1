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

#include "gopuq/stats.hpp"

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "gopuq/error.hpp"
#include "oracle.hpp"
#include "test_util.hpp"

namespace gopuq {
namespace {

std::vector<double> RandomVector(std::mt19937_64& rng, std::size_t n, int levels) {
  std::vector<double> v(n);
  if (levels > 0) {
    std::uniform_int_distribution<int> d(0, levels - 1);
    for (auto& x : v) x = d(rng);
  } else {
    std::normal_distribution<double> d;
    for (auto& x : v) x = d(rng);
  }
  return v;
}

TEST(KendallTauTest, Examples) {
  const std::vector<double> x = {1, 2, 3};
  EXPECT_EQ(KendallTauB(x, std::vector<double>{10, 20, 30}).tau, 1.0);
  EXPECT_EQ(KendallTauB(x, std::vector<double>{30, 20, 10}).tau, -1.0);
  const std::vector<double> a = {1, 2, 3, 4};
  const std::vector<double> b = {1, 1, 2, 2};
  const auto r = KendallTauB(a, b);
  EXPECT_NEAR(r.tau, oracle::TauB(a, b), 1e-15);
  EXPECT_NEAR(r.tau, 4.0 / std::sqrt(24.0), 1e-15);
  EXPECT_NEAR(r.tau, 0.81650, 1e-5);
  EXPECT_EQ(r.n_pairs, 6);
  EXPECT_EQ(r.n_items, 4u);
}

TEST(KendallTauTest, Undefined) {
  const std::vector<double> c = {1, 1, 1};
  const std::vector<double> x = {1, 2, 3};
  EXPECT_ERROR_KIND(KendallTauB(c, x), ErrorKind::kUndefinedCorrelation);
  EXPECT_ERROR_KIND(KendallTauB(x, c), ErrorKind::kUndefinedCorrelation);
  EXPECT_ERROR_KIND(KendallTauB(std::vector<double>{1}, std::vector<double>{1}),
                    ErrorKind::kUndefinedCorrelation);
  EXPECT_ERROR_KIND(KendallTauB(x, std::vector<double>{1, 2}), ErrorKind::kWidthMismatch);
  EXPECT_ERROR_KIND(KendallTauB(x, std::vector<double>{1, NAN, 2}), ErrorKind::kNonFinite);
}

TEST(KendallTauTest, PairCountsAgreeBetweenPaths) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + trial % 60;
    const auto x = RandomVector(rng, n, trial % 3 == 0 ? 0 : 1 + trial % 7);
    const auto y = RandomVector(rng, n, trial % 4 == 0 ? 0 : 1 + trial % 5);
    const auto a = CountPairsBruteForce(x, y);
    const auto b = CountPairsMergeSort(x, y);
    EXPECT_EQ(a.n_pairs, b.n_pairs);
    EXPECT_EQ(a.concordant_minus_discordant, b.concordant_minus_discordant);
    EXPECT_EQ(a.ties_x, b.ties_x);
    EXPECT_EQ(a.ties_y, b.ties_y);
    try {
      const double fast = KendallTauB(x, y).tau;
      EXPECT_EQ(fast, KendallTauB(x, y, TauAlgorithm::kBruteForce).tau);
      EXPECT_NEAR(fast, oracle::TauB(x, y), 1e-14);
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::kUndefinedCorrelation);
    }
  }
}

TEST(KendallTauTest, IdentityAntisymmetryBounds) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + trial % 40;
    auto x = RandomVector(rng, n, trial % 2 ? 3 : 0);
    auto y = RandomVector(rng, n, trial % 3 ? 4 : 0);
    x[0] = -100.0;  // at least two distinct values
    y[0] = -100.0;
    std::vector<double> neg_y(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) neg_y[i] = -y[i];
    EXPECT_EQ(KendallTauB(x, x).tau, 1.0);
    const double t = KendallTauB(x, y).tau;
    EXPECT_EQ(KendallTauB(x, neg_y).tau, -t);
    EXPECT_GE(t, -1.0);
    EXPECT_LE(t, 1.0);
  }
}

TEST(KendallTauTest, MonotoneTransformInvariance) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    const auto x = RandomVector(rng, 50, 0);
    const auto y = RandomVector(rng, 50, 5);
    std::vector<double> fx(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) fx[i] = std::exp(x[i]) * 3.0 - 1.0;
    EXPECT_EQ(KendallTauB(x, y).tau, KendallTauB(fx, y).tau);
  }
}

SegmentScore Seg(const std::string& id, PhoneIndex phone, double score) {
  return {id, phone, 0, 1, score, {}};
}

TEST(AggregateTest, MeanOfSegments) {
  std::vector<SegmentScore> s = {Seg("u", 0, -1.0), Seg("u", 1, -2.0), Seg("u", 0, -3.0)};
  EXPECT_DOUBLE_EQ(AggregateUtterance(s).score, -2.0);
  EXPECT_EQ(AggregateUtterance(s).n_segments, 3u);
  std::vector<SegmentScore> one = {Seg("u", 0, 0.5)};
  EXPECT_EQ(AggregateUtterance(one).score, 0.5);
  std::vector<SegmentScore> two = {Seg("u", 0, 1.0), Seg("u", 0, 1.69315)};
  EXPECT_NEAR(AggregateUtterance(two).score, 1.346575, 1e-12);
}

TEST(AggregateTest, Errors) {
  EXPECT_ERROR_KIND(AggregateUtterance({}), ErrorKind::kUnscorable);
  std::vector<SegmentScore> mixed = {Seg("u", 0, 1.0), Seg("v", 0, 1.0)};
  EXPECT_ERROR_KIND(AggregateUtterance(mixed), ErrorKind::kConfig);
}

TEST(AggregateTest, ShiftByConstant) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> d(-4.0, 4.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<SegmentScore> s, shifted;
    const double c = 0.25 * (trial % 8);
    for (int i = 0; i < 1 + trial % 6; ++i) {
      const double v = d(rng);
      s.push_back(Seg("u", 0, v));
      shifted.push_back(Seg("u", 0, v + c));
    }
    EXPECT_NEAR(AggregateUtterance(shifted).score, AggregateUtterance(s).score + c, 1e-12);
  }
}

TEST(EvaluateMethodTest, Examples) {
  std::vector<UtteranceScore> u = {{"a", 4, 1}, {"b", 3, 1}, {"c", 2, 1}, {"d", 1, 1}};
  const SeverityMap sev = {{"a", 0}, {"b", 1}, {"c", 2}, {"d", 3}};
  EXPECT_EQ(EvaluateMethod(u, sev).tau, -1.0);
  std::vector<UtteranceScore> flat = {{"a", 1, 1}, {"b", 1, 1}, {"c", 1, 1}};
  EXPECT_ERROR_KIND(EvaluateMethod(flat, sev), ErrorKind::kUndefinedCorrelation);
  std::vector<UtteranceScore> unlabeled = {{"a", 1, 1}, {"zz", 2, 1}};
  EXPECT_ERROR_KIND(EvaluateMethod(unlabeled, sev), ErrorKind::kMissingLabel);
}

TEST(PhonemeCorrelationTest, RanksAndSkips) {
  const PhoneInventory inv({"a", "b", "c", "sil"});
  const SeverityMap sev = {{"u0", 0}, {"u1", 1}, {"u2", 2}, {"u3", 3}};
  std::vector<SegmentScore> s;
  for (int u = 0; u < 4; ++u) {
    const std::string id = "u" + std::to_string(u);
    s.push_back(Seg(id, 0, -u));      // strictly decreasing
    s.push_back(Seg(id, 1, 5.0));     // constant: undefined
    s.push_back(Seg(id, 2, u % 2));   // weak
    s.push_back(Seg(id, 3, -u));      // skip phone
  }
  const auto r = PhonemeCorrelations(s, sev, inv, 2);
  ASSERT_EQ(r.correlations.size(), 2u);
  EXPECT_EQ(r.correlations[0].phone, 0u);
  EXPECT_EQ(r.correlations[0].tau, -1.0);
  ASSERT_EQ(r.skipped.size(), 1u);
  EXPECT_EQ(r.skipped[0].phone, 1u);

  const auto sparse = PhonemeCorrelations(s, sev, inv, 5);
  EXPECT_TRUE(sparse.correlations.empty());
  EXPECT_EQ(sparse.skipped.size(), 3u);
}

TEST(TopKTest, Examples) {
  const PhoneInventory inv({"a", "b", "c"});
  std::vector<PhonemeCorrelation> c = {{0, -0.5, 10}, {1, -0.1, 10}, {2, -0.9, 10}};
  const auto top = TopKPhonemes(c, 2, inv);
  ASSERT_EQ(top.size(), 2u);
  EXPECT_EQ(top[0].tau, -0.9);
  EXPECT_EQ(top[1].tau, -0.5);
  std::vector<PhonemeCorrelation> one = {{1, 0.3, 10}};
  EXPECT_EQ(TopKPhonemes(one, 1, inv).at(0).phone, 1u);
  EXPECT_ERROR_KIND(TopKPhonemes(c, 0, inv), ErrorKind::kUsage);
}

}  // namespace
}  // namespace gopuq
