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

#include "gopuq/phone_core.hpp"

#include <cmath>
#include <utility>

#include <fmt/format.h>

#include "gopuq/error.hpp"

namespace gopuq {

// ---------------------------------------------------------------------------
// PhoneInventory

const std::set<std::string>& PhoneInventory::DefaultSkipLabels() {
  static const std::set<std::string> kDefault = {"sil", "sp", "spn", ""};
  return kDefault;
}

PhoneInventory::PhoneInventory(std::vector<std::string> labels)
    : labels_(std::move(labels)) {
  for (const auto& l : labels_) {
    if (DefaultSkipLabels().count(l)) skip_labels_.insert(l);
  }
  Init();
}

PhoneInventory::PhoneInventory(std::vector<std::string> labels,
                               std::set<std::string> skip_labels)
    : labels_(std::move(labels)), skip_labels_(std::move(skip_labels)) {
  Init();
}

void PhoneInventory::Init() {
  if (labels_.size() < 2) {
    throw Error(ErrorKind::kConfig,
                fmt::format("phone inventory needs at least 2 labels, got {}",
                            labels_.size()));
  }
  for (PhoneIndex i = 0; i < labels_.size(); ++i) {
    if (labels_[i].empty()) {
      throw Error(ErrorKind::kParse,
                  fmt::format("empty phone label at inventory position {}", i));
    }
    if (!index_.emplace(labels_[i], i).second) {
      throw Error(ErrorKind::kDuplicateKey,
                  fmt::format("duplicate phone label '{}'", labels_[i]));
    }
  }
  skip_mask_.assign(labels_.size(), false);
  for (const auto& s : skip_labels_) {
    auto it = index_.find(s);
    if (it == index_.end()) {
      throw Error(ErrorKind::kUnknownLabel,
                  fmt::format("skip label '{}' is not in the inventory", s));
    }
    skip_mask_[it->second] = true;
  }
}

std::optional<PhoneIndex> PhoneInventory::Find(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

PhoneIndex PhoneInventory::IndexOf(std::string_view label,
                                   std::string_view context) const {
  if (auto idx = Find(label)) return *idx;
  if (context.empty()) {
    throw Error(ErrorKind::kUnknownLabel,
                fmt::format("unknown phone label '{}'", label));
  }
  throw Error(ErrorKind::kUnknownLabel,
              fmt::format("unknown phone label '{}' ({})", label, context));
}

// ---------------------------------------------------------------------------
// FrameLogitMatrix

FrameLogitMatrix::FrameLogitMatrix(std::string utterance_id,
                                   std::size_t n_frames, std::size_t n_phones,
                                   std::vector<float> values)
    : utterance_id_(std::move(utterance_id)),
      n_frames_(n_frames),
      n_phones_(n_phones),
      values_(std::move(values)) {
  if (n_frames_ == 0) {
    throw Error(ErrorKind::kEmptySegment,
                fmt::format("logit matrix '{}' has no frames", utterance_id_));
  }
  if (n_phones_ == 0 || values_.size() != n_frames_ * n_phones_) {
    throw Error(ErrorKind::kWidthMismatch,
                fmt::format("logit matrix '{}': {} values for {}x{} shape",
                            utterance_id_, values_.size(), n_frames_, n_phones_));
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw Error(ErrorKind::kNonFinite,
                  fmt::format("logit matrix '{}': non-finite value at frame {} "
                              "column {}",
                              utterance_id_, i / n_phones_, i % n_phones_));
    }
  }
}

FrameLogitMatrix FrameLogitMatrix::FromRows(
    std::string utterance_id, const std::vector<std::vector<double>>& rows) {
  const std::size_t width = rows.empty() ? 0 : rows.front().size();
  std::vector<float> values;
  values.reserve(rows.size() * width);
  for (const auto& r : rows) {
    if (r.size() != width) {
      throw Error(ErrorKind::kWidthMismatch, "ragged logit rows");
    }
    for (double v : r) values.push_back(static_cast<float>(v));
  }
  return FrameLogitMatrix(std::move(utterance_id), rows.size(), width,
                          std::move(values));
}

void FrameLogitMatrix::CheckWidth(const PhoneInventory& inventory) const {
  if (n_phones_ != inventory.size()) {
    throw Error(ErrorKind::kWidthMismatch,
                fmt::format("logit matrix '{}' has {} columns, inventory has {}",
                            utterance_id_, n_phones_, inventory.size()));
  }
}

// ---------------------------------------------------------------------------
// UtteranceAlignment

bool UtteranceAlignment::Scorable(const PhoneInventory& inventory) const {
  for (const auto& s : segments) {
    if (!inventory.is_skip(s.phone)) return true;
  }
  return false;
}

void UtteranceAlignment::Validate() const {
  std::size_t prev_end = 0;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const auto& s = segments[i];
    if (s.start_frame >= s.end_frame) {
      throw Error(ErrorKind::kEmptySegment,
                  fmt::format("utterance '{}' segment {}: start {} >= end {}",
                              utterance_id, i, s.start_frame, s.end_frame));
    }
    if (i > 0 && s.start_frame < prev_end) {
      throw Error(ErrorKind::kOverlap,
                  fmt::format("utterance '{}' segment {} starts at {} before "
                              "previous end {}",
                              utterance_id, i, s.start_frame, prev_end));
    }
    prev_end = s.end_frame;
  }
}

// ---------------------------------------------------------------------------
// PhonePrior

PhonePrior::PhonePrior(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.size() < 2) {
    throw Error(ErrorKind::kConfig, "phone prior needs at least 2 entries");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    if (!std::isfinite(probs_[i]) || probs_[i] <= 0.0) {
      throw Error(ErrorKind::kConfig,
                  fmt::format("phone prior entry {} is {}; priors must be "
                              "strictly positive (smooth upstream)",
                              i, probs_[i]));
    }
    sum += probs_[i];
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw Error(ErrorKind::kPriorSum,
                fmt::format("phone prior sums to {:.17g}, expected 1", sum));
  }
  log_probs_.reserve(probs_.size());
  for (double p : probs_) log_probs_.push_back(std::log(p));
}

PhonePrior PhonePrior::Uniform(std::size_t n_phones) {
  return PhonePrior(std::vector<double>(n_phones, 1.0 / static_cast<double>(n_phones)));
}

// ---------------------------------------------------------------------------
// GopMethod

const char* NormalizationName(Normalization n) {
  switch (n) {
    case Normalization::kNone: return "none";
    case Normalization::kScale: return "scale";
    case Normalization::kPrior: return "prior";
  }
  return "?";
}

const char* ScoringName(Scoring s) {
  switch (s) {
    case Scoring::kGmm: return "gmm";
    case Scoring::kNn: return "nn";
    case Scoring::kDnn: return "dnn";
    case Scoring::kEntropy: return "entropy";
    case Scoring::kMargin: return "margin";
    case Scoring::kMaxLogit: return "maxlogit";
    case Scoring::kLogitMargin: return "logitmargin";
  }
  return "?";
}

void GopMethod::Validate() const {
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw Error(ErrorKind::kConfig,
                fmt::format("temperature must be positive, got {}", temperature));
  }
  if (scoring == Scoring::kDnn && normalization != Normalization::kNone) {
    throw Error(ErrorKind::kConfig,
                "dnn scoring divides by the prior itself; use normalization none");
  }
}

std::string GopMethod::Name() const {
  return fmt::format("{}:{}", NormalizationName(normalization), ScoringName(scoring));
}

GopMethod GopMethod::Parse(std::string_view text,
                           std::optional<double> temperature) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw Error(ErrorKind::kUsage,
                fmt::format("method '{}' is not of the form NORM:SCORE", text));
  }
  const auto norm = text.substr(0, colon);
  const auto score = text.substr(colon + 1);

  GopMethod m;
  if (norm == "none") {
    m.normalization = Normalization::kNone;
  } else if (norm == "scale") {
    m.normalization = Normalization::kScale;
  } else if (norm == "prior") {
    m.normalization = Normalization::kPrior;
  } else {
    throw Error(ErrorKind::kUsage,
                fmt::format("unknown normalization '{}' in method '{}'", norm, text));
  }

  static constexpr Scoring kAll[] = {Scoring::kGmm,     Scoring::kNn,
                                     Scoring::kDnn,     Scoring::kEntropy,
                                     Scoring::kMargin,  Scoring::kMaxLogit,
                                     Scoring::kLogitMargin};
  bool found = false;
  for (Scoring s : kAll) {
    if (score == ScoringName(s)) {
      m.scoring = s;
      found = true;
      break;
    }
  }
  if (!found) {
    throw Error(ErrorKind::kUsage,
                fmt::format("unknown scoring function '{}' in method '{}'", score, text));
  }

  if (m.normalization == Normalization::kScale) {
    if (!temperature) {
      throw Error(ErrorKind::kUsage,
                  fmt::format("method '{}' needs a temperature", text));
    }
    m.temperature = *temperature;
  }
  try {
    m.Validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::kUsage, e.what());
  }
  return m;
}

std::vector<GopMethod> DefaultMethodGrid(double temperature) {
  std::vector<GopMethod> grid = {
      {Normalization::kNone, Scoring::kGmm, 1.0},
      {Normalization::kNone, Scoring::kNn, 1.0},
      {Normalization::kNone, Scoring::kDnn, 1.0},
  };
  for (Normalization n :
       {Normalization::kNone, Normalization::kScale, Normalization::kPrior}) {
    for (Scoring s : {Scoring::kEntropy, Scoring::kMargin, Scoring::kMaxLogit,
                      Scoring::kLogitMargin}) {
      grid.push_back({n, s, n == Normalization::kScale ? temperature : 1.0});
    }
  }
  return grid;
}

}  // namespace gopuq
