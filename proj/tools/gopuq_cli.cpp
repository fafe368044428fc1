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

// gopuq command-line front end. Talks to the engine only through gopuq.h.

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gopuq/gopuq.h"

namespace {

struct Common {
  std::string manifest;
  std::string out;
  std::optional<double> temperature;
  std::size_t jobs = 1;
  std::string entropy_form = "shannon";
};

gopuq_run_options Options(const Common& c, std::size_t min_support, std::size_t top_k) {
  gopuq_run_options o;
  gopuq_run_options_init(&o);
  if (c.temperature) {
    o.temperature = *c.temperature;
    o.has_temperature = 1;
  }
  o.jobs = c.jobs;
  o.min_support = min_support;
  o.top_k = top_k;
  o.entropy_literal = c.entropy_form == "literal";
  return o;
}

int Fail(gopuq_status status) {
  std::fprintf(stderr, "gopuq: %s: %s\n", gopuq_status_name(status), gopuq_last_error());
  return gopuq_status_exit_code(status);
}

void AddShared(CLI::App* cmd, Common& c, bool with_temperature) {
  cmd->add_option("--manifest", c.manifest, "Corpus manifest (JSON)")->required();
  cmd->add_option("--jobs", c.jobs, "Worker threads")->check(CLI::PositiveNumber);
  if (with_temperature) {
    cmd->add_option("--temperature", c.temperature, "Temperature for scale methods");
    cmd->add_option("--entropy-form", c.entropy_form, "Entropy variant")
        ->check(CLI::IsMember({"shannon", "literal"}));
  }
}

void PrintPhonemes(const gopuq_report* report) {
  const std::size_t n = gopuq_report_top_k_count(report);
  if (n == 0) {
    std::fprintf(stderr,
                 "gopuq: warning: no phoneme met the support threshold; top-k is "
                 "empty\n");
    return;
  }
  for (std::size_t i = 0; i < n; ++i) {
    gopuq_phoneme_result r;
    if (gopuq_report_top_k(report, i, &r) != GOPUQ_OK) continue;
    std::printf("%zu\t%s\t%.6f\t%zu\n", i + 1, r.label, r.tau, r.n_segments);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Goodness-of-pronunciation scoring and severity evaluation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(gopuq_version()));

  Common c;
  std::string method;
  std::vector<std::string> methods;
  std::size_t min_support = 10;
  std::size_t top_k = 5;
  bool with_phonemes = false;
  std::vector<double> grid;
  std::optional<std::string> validation;
  bool force = false;

  gopuq_synth_config synth;
  gopuq_synth_config_init(&synth);

  auto* priors = app.add_subcommand("priors", "Estimate phone priors from alignments");
  AddShared(priors, c, false);
  priors->add_option("--out", c.out, "Output priors TSV")->required();

  auto* score = app.add_subcommand("score", "Score every segment with one method");
  AddShared(score, c, true);
  score->add_option("--method", method, "NORM:SCORE")->required();
  score->add_option("--out", c.out, "Output directory")->required();

  auto* evaluate = app.add_subcommand("evaluate", "Correlate scores with severity");
  AddShared(evaluate, c, true);
  evaluate->add_option("--method", methods, "NORM:SCORE (repeatable; default full grid)");
  evaluate->add_option("--min-support", min_support, "Minimum segments per phoneme");
  evaluate->add_option("--top-k", top_k, "Phonemes in the top-k list");
  evaluate->add_flag("--with-phonemes", with_phonemes,
                     "Add per-phoneme analysis of prior:maxlogit");
  evaluate->add_option("--out", c.out, "Output JSON report")->required();

  auto* phoneme = app.add_subcommand("phoneme-corr", "Per-phoneme severity correlation");
  AddShared(phoneme, c, true);
  method = "prior:maxlogit";
  phoneme->add_option("--method", method, "NORM:SCORE")->capture_default_str();
  phoneme->add_option("--min-support", min_support, "Minimum segments per phoneme");
  phoneme->add_option("--top-k", top_k, "Phonemes in the top-k list");
  phoneme->add_option("--out", c.out, "Output JSON report")->required();

  auto* calibrate = app.add_subcommand("calibrate", "Grid-search the scaling temperature");
  AddShared(calibrate, c, false);
  calibrate->add_option("--grid", grid, "Candidate temperatures")->required();
  calibrate->add_option("--validation", validation, "File of validation utterance ids");

  auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic corpus");
  synth_cmd->add_option("--out", c.out, "Output directory")->required();
  synth_cmd->add_option("--seed", synth.seed, "Generator seed");
  synth_cmd->add_flag("--force", force, "Write into a non-empty directory");
  synth_cmd->add_option("--utterances", synth.n_utterances, "Number of utterances");
  synth_cmd->add_option("--phones", synth.n_phones, "Non-silence phones");
  synth_cmd->add_option("--segments", synth.segments_per_utterance,
                        "Scorable segments per utterance");
  synth_cmd->add_option("--frames-per-segment", synth.frames_per_segment,
                        "Frames per segment");
  synth_cmd->add_option("--silence-frames", synth.silence_frames,
                        "Leading silence frames (0 disables)");
  synth_cmd->add_option("--severity-levels", synth.severity_levels,
                        "Distinct severity values");
  synth_cmd->add_option("--slope", synth.degradation_slope,
                        "Canonical logit drop per severity step");
  synth_cmd->add_option("--noise", synth.noise_scale, "Gaussian noise scale");
  synth_cmd->add_option("--base-high", synth.base_high, "Canonical logit mean at severity 0");
  synth_cmd->add_option("--base-low", synth.base_low, "Competing logit mean");
  synth_cmd->add_option("--degrading-phone", synth.degrading_phone,
                        "Only this phone index degrades (-1: all)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  gopuq_status status = GOPUQ_OK;
  if (*priors) {
    status = gopuq_priors(c.manifest.c_str(), c.out.c_str());
  } else if (*score) {
    const auto o = Options(c, min_support, top_k);
    gopuq_score_summary summary;
    status = gopuq_score(c.manifest.c_str(), method.c_str(), &o, c.out.c_str(), &summary);
    if (status == GOPUQ_OK) {
      std::printf("segments\t%zu\nutterances\t%zu\nskipped\t%zu\n", summary.n_segments,
                  summary.n_utterances, summary.n_skipped);
    }
  } else if (*evaluate) {
    const auto o = Options(c, min_support, top_k);
    std::vector<const char*> ptrs;
    for (const auto& m : methods) ptrs.push_back(m.c_str());
    gopuq_report* report = nullptr;
    status = gopuq_evaluate(c.manifest.c_str(), ptrs.data(), ptrs.size(), with_phonemes,
                            &o, c.out.c_str(), &report);
    if (status == GOPUQ_OK) {
      std::size_t best = 0;
      if (gopuq_report_best(report, &best)) {
        gopuq_method_result r;
        gopuq_report_method(report, best, &r);
        std::printf("best\t%s\t%.6f\n", r.method, r.tau);
      } else {
        std::fprintf(stderr, "gopuq: warning: every correlation is undefined\n");
      }
      if (with_phonemes) PrintPhonemes(report);
    }
    gopuq_report_free(report);
  } else if (*phoneme) {
    const auto o = Options(c, min_support, top_k);
    gopuq_report* report = nullptr;
    status = gopuq_phoneme_corr(c.manifest.c_str(), method.c_str(), &o, c.out.c_str(),
                                &report);
    if (status == GOPUQ_OK) PrintPhonemes(report);
    gopuq_report_free(report);
  } else if (*calibrate) {
    std::vector<double> nll(grid.size());
    double best = 0.0;
    status = gopuq_calibrate(c.manifest.c_str(), grid.data(), grid.size(),
                             validation ? validation->c_str() : nullptr, nll.data(),
                             &best);
    if (status == GOPUQ_OK) {
      for (std::size_t i = 0; i < grid.size(); ++i) {
        std::printf("%.17g\t%.17g\n", grid[i], nll[i]);
      }
      std::printf("best\t%.17g\n", best);
    }
  } else if (*synth_cmd) {
    status = gopuq_synth(&synth, c.out.c_str(), force);
  }
  return status == GOPUQ_OK ? 0 : Fail(status);
}
