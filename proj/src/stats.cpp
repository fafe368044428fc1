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

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "gopuq/error.hpp"

namespace gopuq {

namespace {

std::int64_t TiedPairs(std::int64_t run) { return run * (run - 1) / 2; }

void CheckInputs(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error(ErrorKind::kWidthMismatch,
                fmt::format("kendall tau: {} x values vs {} y values", x.size(),
                            y.size()));
  }
  if (x.size() < 2) {
    throw Error(ErrorKind::kUndefinedCorrelation,
                fmt::format("kendall tau needs at least 2 items, got {}", x.size()));
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) {
      throw Error(ErrorKind::kNonFinite,
                  fmt::format("kendall tau: non-finite value at item {}", i));
    }
  }
}

// Sorts `v` in place with a stable merge sort and returns the number of
// strictly inverted pairs.
std::int64_t SortCountingInversions(std::vector<double>& v) {
  std::vector<double> buf(v.size());
  std::int64_t inversions = 0;
  for (std::size_t width = 1; width < v.size(); width *= 2) {
    for (std::size_t lo = 0; lo < v.size(); lo += 2 * width) {
      const std::size_t mid = std::min(lo + width, v.size());
      const std::size_t hi = std::min(lo + 2 * width, v.size());
      std::size_t i = lo, j = mid, k = lo;
      while (i < mid && j < hi) {
        if (v[j] < v[i]) {
          inversions += static_cast<std::int64_t>(mid - i);
          buf[k++] = v[j++];
        } else {
          buf[k++] = v[i++];
        }
      }
      while (i < mid) buf[k++] = v[i++];
      while (j < hi) buf[k++] = v[j++];
    }
    v.swap(buf);
  }
  return inversions;
}

}  // namespace

PairCounts CountPairsBruteForce(std::span<const double> x, std::span<const double> y) {
  CheckInputs(x, y);
  PairCounts c;
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      ++c.n_pairs;
      const bool tx = x[i] == x[j];
      const bool ty = y[i] == y[j];
      if (tx) ++c.ties_x;
      if (ty) ++c.ties_y;
      if (tx || ty) continue;
      const bool same_direction = (x[i] < x[j]) == (y[i] < y[j]);
      c.concordant_minus_discordant += same_direction ? 1 : -1;
    }
  }
  return c;
}

PairCounts CountPairsMergeSort(std::span<const double> x, std::span<const double> y) {
  CheckInputs(x, y);
  const std::size_t n = x.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return x[a] < x[b] || (x[a] == x[b] && y[a] < y[b]);
  });

  PairCounts c;
  c.n_pairs = TiedPairs(static_cast<std::int64_t>(n));

  std::int64_t joint_ties = 0;
  std::int64_t run_x = 1;
  std::int64_t run_xy = 1;
  for (std::size_t i = 1; i <= n; ++i) {
    const bool same_x = i < n && x[order[i]] == x[order[i - 1]];
    const bool same_xy = same_x && y[order[i]] == y[order[i - 1]];
    if (same_x) {
      ++run_x;
    } else {
      c.ties_x += TiedPairs(run_x);
      run_x = 1;
    }
    if (same_xy) {
      ++run_xy;
    } else {
      joint_ties += TiedPairs(run_xy);
      run_xy = 1;
    }
  }

  std::vector<double> ys(n);
  for (std::size_t i = 0; i < n; ++i) ys[i] = y[order[i]];
  const std::int64_t discordant = SortCountingInversions(ys);

  std::int64_t run_y = 1;
  for (std::size_t i = 1; i <= n; ++i) {
    if (i < n && ys[i] == ys[i - 1]) {
      ++run_y;
    } else {
      c.ties_y += TiedPairs(run_y);
      run_y = 1;
    }
  }

  c.concordant_minus_discordant =
      c.n_pairs - c.ties_x - c.ties_y + joint_ties - 2 * discordant;
  return c;
}

CorrelationResult KendallTauB(std::span<const double> x, std::span<const double> y,
                              TauAlgorithm algorithm) {
  const PairCounts c = algorithm == TauAlgorithm::kBruteForce
                           ? CountPairsBruteForce(x, y)
                           : CountPairsMergeSort(x, y);
  const std::int64_t untied_x = c.n_pairs - c.ties_x;
  const std::int64_t untied_y = c.n_pairs - c.ties_y;
  if (untied_x == 0 || untied_y == 0) {
    throw Error(ErrorKind::kUndefinedCorrelation,
                fmt::format("kendall tau undefined: all {} values tied",
                            untied_x == 0 ? "x" : "y"));
  }
  // The product is exact below 2^53 pairs squared, so tau(x, x) is exactly 1.
  const double denom = std::sqrt(static_cast<double>(untied_x) *
                                 static_cast<double>(untied_y));
  double tau = static_cast<double>(c.concordant_minus_discordant) / denom;
  tau = std::clamp(tau, -1.0, 1.0);
  return CorrelationResult{tau, c.n_pairs, x.size()};
}

UtteranceScore AggregateUtterance(std::span<const SegmentScore> scores) {
  if (scores.empty()) {
    throw Error(ErrorKind::kUnscorable, "utterance has no scorable segments");
  }
  const auto& first = scores.front();
  double sum = 0.0;
  for (const auto& s : scores) {
    if (s.utterance_id != first.utterance_id || !(s.method == first.method)) {
      throw Error(ErrorKind::kConfig,
                  fmt::format("cannot aggregate '{}' ({}) with '{}' ({})",
                              s.utterance_id, s.method.Name(), first.utterance_id,
                              first.method.Name()));
    }
    sum += s.score;
  }
  return UtteranceScore{first.utterance_id,
                        sum / static_cast<double>(scores.size()), scores.size()};
}

CorrelationResult EvaluateMethod(std::span<const UtteranceScore> utterance_scores,
                                 const SeverityMap& severities) {
  std::vector<double> scores;
  std::vector<double> labels;
  std::vector<std::string> missing;
  for (const auto& u : utterance_scores) {
    auto it = severities.find(u.utterance_id);
    if (it == severities.end()) {
      missing.push_back(u.utterance_id);
      continue;
    }
    scores.push_back(u.score);
    labels.push_back(static_cast<double>(it->second));
  }
  if (!missing.empty()) {
    throw Error(ErrorKind::kMissingLabel,
                fmt::format("no severity label for {} utterance(s): {}",
                            missing.size(), fmt::join(missing, ", ")));
  }
  return KendallTauB(scores, labels);
}

PhonemeAnalysis PhonemeCorrelations(std::span<const SegmentScore> segment_scores,
                                    const SeverityMap& severities,
                                    const PhoneInventory& inventory,
                                    std::size_t min_support) {
  std::vector<std::vector<double>> scores(inventory.size());
  std::vector<std::vector<double>> labels(inventory.size());
  std::vector<std::string> missing;
  for (const auto& s : segment_scores) {
    if (s.phone >= inventory.size()) {
      throw Error(ErrorKind::kUnknownLabel,
                  fmt::format("segment phone index {} outside inventory", s.phone));
    }
    auto it = severities.find(s.utterance_id);
    if (it == severities.end()) {
      if (missing.empty() || missing.back() != s.utterance_id) {
        missing.push_back(s.utterance_id);
      }
      continue;
    }
    scores[s.phone].push_back(s.score);
    labels[s.phone].push_back(static_cast<double>(it->second));
  }
  if (!missing.empty()) {
    throw Error(ErrorKind::kMissingLabel,
                fmt::format("no severity label for utterance(s): {}",
                            fmt::join(missing, ", ")));
  }

  PhonemeAnalysis out;
  for (PhoneIndex p = 0; p < inventory.size(); ++p) {
    if (inventory.is_skip(p)) continue;
    const std::size_t n = scores[p].size();
    if (n < min_support) {
      out.skipped.push_back(
          {p, n, fmt::format("below minimum support of {}", min_support)});
      continue;
    }
    try {
      const auto r = KendallTauB(scores[p], labels[p]);
      out.correlations.push_back({p, r.tau, n});
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kUndefinedCorrelation) throw;
      out.skipped.push_back({p, n, e.what()});
    }
  }
  std::sort(out.correlations.begin(), out.correlations.end(),
            [&](const PhonemeCorrelation& a, const PhonemeCorrelation& b) {
              if (a.tau != b.tau) return a.tau < b.tau;
              return inventory.label(a.phone) < inventory.label(b.phone);
            });
  return out;
}

std::vector<PhonemeCorrelation> TopKPhonemes(std::span<const PhonemeCorrelation> correlations,
                                             std::size_t k,
                                             const PhoneInventory& inventory) {
  if (k == 0) throw Error(ErrorKind::kUsage, "top-k needs k >= 1");
  std::vector<PhonemeCorrelation> sorted(correlations.begin(), correlations.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [&](const PhonemeCorrelation& a, const PhonemeCorrelation& b) {
                     if (a.tau != b.tau) return a.tau < b.tau;
                     return inventory.label(a.phone) < inventory.label(b.phone);
                   });
  if (sorted.size() > k) sorted.resize(k);
  return sorted;
}

}  // namespace gopuq
