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

// Domain types shared by every stage of the pipeline: the phone inventory,
// frame-level logit matrices, alignments, priors, severity labels and the
// description of a scoring method.

#ifndef GOPUQ_PHONE_CORE_HPP_
#define GOPUQ_PHONE_CORE_HPP_

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace gopuq {

/// Column of a logit matrix; defined by inventory order.
using PhoneIndex = std::size_t;

/// Ordered phone set. Label order is the logit column order of every matrix
/// paired with this inventory.
class PhoneInventory {
 public:
  /// Labels skipped when no explicit skip set is given. Only the members that
  /// are actually in the inventory take effect.
  static const std::set<std::string>& DefaultSkipLabels();

  /// Uses DefaultSkipLabels() intersected with `labels`.
  explicit PhoneInventory(std::vector<std::string> labels);
  /// `skip_labels` must be a subset of `labels`.
  PhoneInventory(std::vector<std::string> labels,
                 std::set<std::string> skip_labels);

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::set<std::string>& skip_labels() const { return skip_labels_; }
  const std::string& label(PhoneIndex index) const { return labels_.at(index); }
  bool is_skip(PhoneIndex index) const { return skip_mask_.at(index); }

  /// Throws ErrorKind::kUnknownLabel. `context` (an utterance id, a file
  /// position) is appended to the message when non-empty.
  PhoneIndex IndexOf(std::string_view label, std::string_view context = {}) const;
  std::optional<PhoneIndex> Find(std::string_view label) const;

 private:
  void Init();

  std::vector<std::string> labels_;
  std::set<std::string> skip_labels_;
  std::vector<bool> skip_mask_;
  std::unordered_map<std::string, PhoneIndex> index_;
};

/// n_frames x n_phones raw logits for one utterance, row-major. Stored in
/// single precision like the on-disk format; all arithmetic on it is done in
/// double precision.
class FrameLogitMatrix {
 public:
  FrameLogitMatrix(std::string utterance_id, std::size_t n_frames,
                   std::size_t n_phones, std::vector<float> values);

  /// Convenience for tests and small inputs: one inner vector per frame.
  static FrameLogitMatrix FromRows(std::string utterance_id,
                                   const std::vector<std::vector<double>>& rows);

  const std::string& utterance_id() const { return utterance_id_; }
  std::size_t n_frames() const { return n_frames_; }
  std::size_t n_phones() const { return n_phones_; }
  std::span<const float> values() const { return values_; }
  std::span<const float> row(std::size_t frame) const {
    return std::span<const float>(values_).subspan(frame * n_phones_, n_phones_);
  }

  /// Rejects a matrix whose width differs from the inventory size.
  void CheckWidth(const PhoneInventory& inventory) const;

 private:
  std::string utterance_id_;
  std::size_t n_frames_;
  std::size_t n_phones_;
  std::vector<float> values_;
};

/// Frames [start_frame, end_frame) carrying canonical phone `phone`.
struct PhoneSegment {
  PhoneIndex phone = 0;
  std::size_t start_frame = 0;
  std::size_t end_frame = 0;

  std::size_t n_frames() const { return end_frame - start_frame; }
  bool operator==(const PhoneSegment&) const = default;
};

struct UtteranceAlignment {
  std::string utterance_id;
  std::vector<PhoneSegment> segments;

  /// True when at least one segment carries a non-skip phone.
  bool Scorable(const PhoneInventory& inventory) const;
  /// Sorted, non-overlapping, non-empty segments.
  void Validate() const;
};

/// Probability vector over the inventory; strictly positive, sums to one.
class PhonePrior {
 public:
  explicit PhonePrior(std::vector<double> probs);
  static PhonePrior Uniform(std::size_t n_phones);

  std::size_t size() const { return probs_.size(); }
  const std::vector<double>& probs() const { return probs_; }
  double prob(PhoneIndex index) const { return probs_.at(index); }
  double log_prob(PhoneIndex index) const { return log_probs_.at(index); }

 private:
  std::vector<double> probs_;
  std::vector<double> log_probs_;
};

/// Ordinal intelligibility label keyed by an utterance or a speaker id.
/// 0 means healthy.
struct SeverityLabel {
  std::string key;
  int severity = 0;
  bool operator==(const SeverityLabel&) const = default;
};

enum class Normalization { kNone, kScale, kPrior };
enum class Scoring { kGmm, kNn, kDnn, kEntropy, kMargin, kMaxLogit, kLogitMargin };

const char* NormalizationName(Normalization n);
const char* ScoringName(Scoring s);

/// One cell of the evaluation grid: a logit normalization followed by a
/// scoring function.
struct GopMethod {
  Normalization normalization = Normalization::kNone;
  Scoring scoring = Scoring::kGmm;
  /// Only meaningful for Normalization::kScale.
  double temperature = 1.0;

  /// temperature > 0; dnn only with normalization none.
  void Validate() const;
  /// "norm:score", e.g. "prior:maxlogit".
  std::string Name() const;
  bool UsesPrior() const {
    return normalization == Normalization::kPrior || scoring == Scoring::kDnn;
  }

  /// Parses "norm:score". Scale methods take `temperature`; a missing
  /// temperature for a scale method is a usage error.
  static GopMethod Parse(std::string_view text,
                         std::optional<double> temperature = std::nullopt);

  bool operator==(const GopMethod&) const = default;
};

/// The 15-cell grid in report order: the three baselines (none:gmm, none:nn,
/// none:dnn) then none/scale/prior x entropy/margin/maxlogit/logitmargin.
std::vector<GopMethod> DefaultMethodGrid(double temperature);

}  // namespace gopuq

#endif  // GOPUQ_PHONE_CORE_HPP_
