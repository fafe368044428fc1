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

#include "gopuq/commands.hpp"

#include <set>

#include <fmt/format.h>

#include "gopuq/error.hpp"

namespace gopuq {

namespace fs = std::filesystem;

namespace {

void EnsureDirectory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw Error(ErrorKind::kIo,
                fmt::format("cannot create directory '{}'", dir.string()));
  }
}

}  // namespace

PhonePrior RunPriors(const fs::path& manifest, const fs::path& out,
                     PriorCounting counting) {
  const Corpus corpus = LoadCorpus(manifest, {.logits = false, .labels = false});
  PhonePrior prior = EstimatePriors(corpus.alignments, corpus.inventory, counting);
  WritePriors(out, prior, corpus.inventory);
  return prior;
}

CorpusScores RunScore(const fs::path& manifest, const GopMethod& method,
                      const ScoringOptions& options, std::size_t jobs,
                      const fs::path& out_dir) {
  const Corpus corpus = LoadCorpus(manifest);
  std::optional<PhonePrior> prior;
  if (method.UsesPrior()) prior = ResolvePrior(corpus);
  CorpusScores scores =
      ScoreCorpus(corpus, method, prior ? &*prior : nullptr, options, jobs);

  std::string segments = "utterance_id\tphone\tstart_frame\tend_frame\tscore\n";
  for (const auto& s : scores.segments) {
    segments += fmt::format("{}\t{}\t{}\t{}\t{:.17g}\n", s.utterance_id,
                            corpus.inventory.label(s.phone), s.start_frame,
                            s.end_frame, s.score);
  }
  std::string utterances = "utterance_id\tscore\tn_segments\n";
  for (const auto& u : scores.utterances) {
    utterances += fmt::format("{}\t{:.17g}\t{}\n", u.utterance_id, u.score, u.n_segments);
  }
  std::string skipped = "utterance_id\treason\n";
  for (const auto& s : scores.skipped) skipped += s + "\n";

  EnsureDirectory(out_dir);
  WriteFileAtomic(out_dir / "segments.tsv", segments);
  WriteFileAtomic(out_dir / "utterances.tsv", utterances);
  WriteFileAtomic(out_dir / "skipped.tsv", skipped);
  return scores;
}

EvaluationReport RunEvaluate(const fs::path& manifest, const EvaluationOptions& options,
                             const fs::path& out) {
  const Corpus corpus = LoadCorpus(manifest, {.logits = true, .labels = true});
  EvaluationReport report = EvaluateCorpus(corpus, options);
  WriteReport(report, out, TablePathFor(out));
  return report;
}

EvaluationReport RunPhonemeCorr(const fs::path& manifest, const GopMethod& method,
                                std::size_t k, std::size_t min_support,
                                const ScoringOptions& options, std::size_t jobs,
                                const fs::path& out) {
  if (k == 0) throw Error(ErrorKind::kUsage, "top-k must be >= 1");
  const Corpus corpus = LoadCorpus(manifest, {.logits = true, .labels = true});
  EvaluationOptions eval;
  eval.scoring = options;
  eval.jobs = jobs;
  eval.min_support = min_support;
  eval.top_k = k;
  eval.phoneme_method = method;
  EvaluationReport report = EvaluateCorpus(corpus, eval);
  WriteReport(report, out, TablePathFor(out));
  return report;
}

CalibrationResult RunCalibrate(const fs::path& manifest, std::span<const double> grid,
                               const std::optional<fs::path>& validation_ids) {
  const Corpus corpus = LoadCorpus(manifest);
  std::optional<std::set<std::string>> wanted;
  if (validation_ids) {
    wanted.emplace();
    const std::string text = ReadTextFile(*validation_ids);
    std::size_t pos = 0;
    while (pos < text.size()) {
      std::size_t end = text.find('\n', pos);
      if (end == std::string::npos) end = text.size();
      std::string line = text.substr(pos, end - pos);
      pos = end + 1;
      if (line.empty() || line.front() == '#') continue;
      if (!corpus.logits.count(line)) {
        throw Error(ErrorKind::kMissingLabel,
                    fmt::format("{}: validation utterance '{}' is not aligned",
                                validation_ids->string(), line));
      }
      wanted->insert(std::move(line));
    }
  }
  std::vector<LabeledSegment> segments;
  for (const auto& a : corpus.alignments) {
    if (wanted && !wanted->count(a.utterance_id)) continue;
    const FrameLogitMatrix& m = corpus.logits.at(a.utterance_id);
    for (const auto& s : a.segments) {
      if (!corpus.inventory.is_skip(s.phone)) segments.push_back({&m, s});
    }
  }
  return CalibrateTemperature(segments, grid);
}

void RunSynth(const SyntheticConfig& config, const fs::path& out_dir, bool force) {
  config.Validate();
  if (fs::exists(out_dir)) {
    if (!fs::is_directory(out_dir)) {
      throw Error(ErrorKind::kIo,
                  fmt::format("'{}' exists and is not a directory", out_dir.string()));
    }
    if (!fs::is_empty(out_dir) && !force) {
      throw Error(ErrorKind::kUsage,
                  fmt::format("'{}' is not empty; pass --force to overwrite",
                              out_dir.string()));
    }
  }
  const SyntheticCorpus corpus = GenerateSynthetic(config);

  EnsureDirectory(out_dir / "logits");
  CorpusManifest manifest;
  manifest.inventory_path = "phones.txt";
  manifest.alignment_path = "alignments.tsv";
  manifest.labels_path = "labels.tsv";
  manifest.priors_path = "priors.tsv";
  for (const auto& m : corpus.logits) {
    const fs::path rel = fs::path("logits") / (m.utterance_id() + ".flm");
    WriteLogits(out_dir / rel, m);
    manifest.utterances[m.utterance_id()] = {rel, std::nullopt};
  }
  WriteInventory(out_dir / "phones.txt", corpus.inventory);
  WriteAlignments(out_dir / "alignments.tsv", corpus.alignments, corpus.inventory);
  WriteLabels(out_dir / "labels.tsv", corpus.labels);
  WritePriors(out_dir / "priors.tsv", corpus.prior, corpus.inventory);
  WriteManifest(out_dir / "manifest.json", manifest);
}

}  // namespace gopuq
