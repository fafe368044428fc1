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

#include "gopuq/corpus.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <set>
#include <thread>

#include <fmt/format.h>

#include "gopuq/error.hpp"
#include "gopuq/version.hpp"

namespace gopuq {

namespace fs = std::filesystem;

Corpus LoadCorpus(const fs::path& manifest_path, const LoadOptions& options) {
  CorpusManifest manifest = ReadManifest(manifest_path);
  PhoneInventory inventory = ReadInventory(manifest.inventory_path);
  std::vector<UtteranceAlignment> alignments =
      ReadAlignments(manifest.alignment_path, inventory);
  std::sort(alignments.begin(), alignments.end(),
            [](const UtteranceAlignment& a, const UtteranceAlignment& b) {
              return a.utterance_id < b.utterance_id;
            });
  for (const auto& a : alignments) a.Validate();

  Corpus corpus{manifest_path, std::move(manifest), std::move(inventory),
                std::move(alignments), {}, std::nullopt, std::nullopt};

  std::vector<std::string> no_logits;
  for (const auto& a : corpus.alignments) {
    if (!corpus.manifest.utterances.count(a.utterance_id)) {
      no_logits.push_back(a.utterance_id);
    }
  }
  if (!no_logits.empty()) {
    throw Error(ErrorKind::kUnscorable,
                fmt::format("{}: aligned utterance(s) without a logit file: {}",
                            manifest_path.string(), fmt::join(no_logits, ", ")));
  }

  if (options.logits) {
    for (const auto& a : corpus.alignments) {
      const auto& entry = corpus.manifest.utterances.at(a.utterance_id);
      FrameLogitMatrix m =
          ReadLogits(entry.logits_path, a.utterance_id, corpus.inventory.size());
      for (const auto& s : a.segments) {
        if (s.end_frame > m.n_frames()) {
          throw Error(ErrorKind::kFrameOutOfRange,
                      fmt::format("utterance '{}': segment {} [{}, {}) exceeds "
                                  "{} frames in {}",
                                  a.utterance_id, corpus.inventory.label(s.phone),
                                  s.start_frame, s.end_frame, m.n_frames(),
                                  entry.logits_path.string()));
        }
      }
      corpus.logits.emplace(a.utterance_id, std::move(m));
    }
  }

  if (corpus.manifest.labels_path) {
    corpus.labels = ReadLabels(*corpus.manifest.labels_path);
  } else if (options.labels) {
    throw Error(ErrorKind::kIo, fmt::format("{}: manifest names no labels file",
                                            manifest_path.string()));
  }
  if (corpus.manifest.priors_path) {
    corpus.prior = ReadPriors(*corpus.manifest.priors_path, corpus.inventory);
  }
  return corpus;
}

PhonePrior ResolvePrior(const Corpus& corpus) {
  if (corpus.prior) return *corpus.prior;
  return EstimatePriors(corpus.alignments, corpus.inventory);
}

SeverityMap ExpandSeverities(const Corpus& corpus) {
  if (!corpus.labels) {
    throw Error(ErrorKind::kIo, "corpus has no severity labels");
  }
  std::map<std::string, int> by_key;
  for (const auto& l : *corpus.labels) by_key.emplace(l.key, l.severity);
  SeverityMap out;
  for (const auto& [id, entry] : corpus.manifest.utterances) {
    if (auto it = by_key.find(id); it != by_key.end()) {
      out.emplace(id, it->second);
    } else if (entry.speaker) {
      if (auto sit = by_key.find(*entry.speaker); sit != by_key.end()) {
        out.emplace(id, sit->second);
      }
    }
  }
  return out;
}

CorpusScores ScoreCorpus(const Corpus& corpus, const GopMethod& method,
                         const PhonePrior* prior, const ScoringOptions& options,
                         std::size_t jobs) {
  method.Validate();
  if (jobs == 0) throw Error(ErrorKind::kUsage, "jobs must be >= 1");
  if (method.UsesPrior() && prior == nullptr) {
    throw Error(ErrorKind::kConfig, fmt::format("{} needs a phone prior", method.Name()));
  }

  const std::size_t n = corpus.alignments.size();
  std::vector<std::vector<SegmentScore>> per_utt(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      const auto& a = corpus.alignments[i];
      try {
        const auto it = corpus.logits.find(a.utterance_id);
        if (it == corpus.logits.end()) {
          throw Error(ErrorKind::kIo,
                      fmt::format("logits for '{}' not loaded", a.utterance_id));
        }
        for (const auto& seg : a.segments) {
          if (auto s = ScoreSegment(it->second, seg, corpus.inventory, method, prior,
                                    options)) {
            per_utt[i].push_back(std::move(*s));
          }
        }
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  const std::size_t n_threads = std::min(jobs, std::max<std::size_t>(n, 1));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  CorpusScores out;
  std::set<std::string> aligned;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& id = corpus.alignments[i].utterance_id;
    aligned.insert(id);
    if (per_utt[i].empty()) {
      out.skipped.push_back(fmt::format("{}\tno scorable segments", id));
      continue;
    }
    out.utterances.push_back(AggregateUtterance(per_utt[i]));
    for (auto& s : per_utt[i]) out.segments.push_back(std::move(s));
  }
  for (const auto& [id, entry] : corpus.manifest.utterances) {
    if (!aligned.count(id)) out.skipped.push_back(fmt::format("{}\tno alignment", id));
  }
  std::sort(out.skipped.begin(), out.skipped.end());
  return out;
}

EvaluationReport EvaluateCorpus(const Corpus& corpus, const EvaluationOptions& options) {
  if (options.methods.empty() && !options.phoneme_method) {
    throw Error(ErrorKind::kUsage, "no methods to evaluate");
  }
  const SeverityMap severities = ExpandSeverities(corpus);

  bool needs_prior = options.phoneme_method && options.phoneme_method->UsesPrior();
  for (const auto& m : options.methods) needs_prior = needs_prior || m.UsesPrior();
  std::optional<PhonePrior> prior;
  if (needs_prior) prior = ResolvePrior(corpus);
  const PhonePrior* prior_ptr = prior ? &*prior : nullptr;

  EvaluationReport report;
  report.tool_version = kVersion;
  report.manifest_sha256 = Sha256File(corpus.manifest_path);
  report.min_support = options.min_support;

  for (const auto& method : options.methods) {
    const CorpusScores scores =
        ScoreCorpus(corpus, method, prior_ptr, options.scoring, options.jobs);
    if (report.skipped_utterances.empty()) {
      report.skipped_utterances = scores.skipped;
    }
    MethodResult cell{method, std::nullopt, {}};
    try {
      cell.result = EvaluateMethod(scores.utterances, severities);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kUndefinedCorrelation) throw;
      cell.error = e.what();
    }
    report.methods.push_back(std::move(cell));
  }

  if (options.phoneme_method) {
    const CorpusScores scores = ScoreCorpus(corpus, *options.phoneme_method, prior_ptr,
                                            options.scoring, options.jobs);
    if (report.skipped_utterances.empty()) {
      report.skipped_utterances = scores.skipped;
    }
    const PhonemeAnalysis analysis = PhonemeCorrelations(
        scores.segments, severities, corpus.inventory, options.min_support);
    report.phoneme_method = options.phoneme_method;
    for (const auto& c : analysis.correlations) {
      report.phonemes.push_back({corpus.inventory.label(c.phone), c.tau, c.n_segments});
    }
    if (!analysis.correlations.empty()) {
      for (const auto& c :
           TopKPhonemes(analysis.correlations, options.top_k, corpus.inventory)) {
        report.top_k.push_back({corpus.inventory.label(c.phone), c.tau, c.n_segments});
      }
    }
    for (const auto& s : analysis.skipped) {
      report.skipped_phones.push_back(
          {corpus.inventory.label(s.phone), s.n_segments, s.reason});
    }
  }
  return report;
}

const MethodResult* BestMethod(const EvaluationReport& report) {
  const MethodResult* best = nullptr;
  for (const auto& m : report.methods) {
    if (!m.result) continue;
    if (best == nullptr || m.result->tau < best->result->tau) best = &m;
  }
  return best;
}

}  // namespace gopuq
