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

#include "gopuq/gopuq.h"

#include <exception>
#include <memory>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "gopuq/commands.hpp"
#include "gopuq/error.hpp"
#include "gopuq/gop_scores.hpp"
#include "gopuq/io_formats.hpp"
#include "gopuq/stats.hpp"
#include "gopuq/version.hpp"

struct gopuq_matrix {
  gopuq::FrameLogitMatrix rep;
};

struct gopuq_report {
  gopuq::EvaluationReport rep;
  std::vector<std::string> method_names;
};

namespace {

thread_local std::string g_last_error;
thread_local std::optional<std::uint64_t> g_last_offset;

gopuq_status StatusOf(gopuq::ErrorKind kind) {
  using gopuq::ErrorKind;
  switch (kind) {
    case ErrorKind::kUsage: return GOPUQ_ERR_USAGE;
    case ErrorKind::kConfig: return GOPUQ_ERR_CONFIG;
    case ErrorKind::kUnknownLabel: return GOPUQ_ERR_UNKNOWN_LABEL;
    case ErrorKind::kBadMagic: return GOPUQ_ERR_BAD_MAGIC;
    case ErrorKind::kTruncated: return GOPUQ_ERR_TRUNCATED;
    case ErrorKind::kWidthMismatch: return GOPUQ_ERR_WIDTH_MISMATCH;
    case ErrorKind::kNonFinite: return GOPUQ_ERR_NON_FINITE;
    case ErrorKind::kEmptySegment: return GOPUQ_ERR_EMPTY_SEGMENT;
    case ErrorKind::kOverlap: return GOPUQ_ERR_OVERLAP;
    case ErrorKind::kFrameOutOfRange: return GOPUQ_ERR_FRAME_OUT_OF_RANGE;
    case ErrorKind::kParse: return GOPUQ_ERR_PARSE;
    case ErrorKind::kDuplicateKey: return GOPUQ_ERR_DUPLICATE_KEY;
    case ErrorKind::kNegativeSeverity: return GOPUQ_ERR_NEGATIVE_SEVERITY;
    case ErrorKind::kPriorSum: return GOPUQ_ERR_PRIOR_SUM;
    case ErrorKind::kMissingLabel: return GOPUQ_ERR_MISSING_LABEL;
    case ErrorKind::kUnscorable: return GOPUQ_ERR_UNSCORABLE;
    case ErrorKind::kUndefinedCorrelation: return GOPUQ_ERR_UNDEFINED_CORRELATION;
    case ErrorKind::kIo: return GOPUQ_ERR_IO;
  }
  return GOPUQ_ERR_INTERNAL;
}

template <typename Fn>
gopuq_status Guard(Fn&& fn) {
  g_last_error.clear();
  g_last_offset.reset();
  try {
    fn();
    return GOPUQ_OK;
  } catch (const gopuq::Error& e) {
    g_last_error = e.what();
    g_last_offset = e.byte_offset();
    return StatusOf(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
  } catch (const std::exception& e) {
    g_last_error = e.what();
  } catch (...) {
    g_last_error = "unknown error";
  }
  return GOPUQ_ERR_INTERNAL;
}

void RequireNonNull(const void* p, const char* what) {
  if (p == nullptr) {
    throw gopuq::Error(gopuq::ErrorKind::kUsage, std::string(what) + " is NULL");
  }
}

gopuq::GopMethod ToMethod(const gopuq_method& m) {
  gopuq::GopMethod out;
  if (m.normalization < GOPUQ_NORM_NONE || m.normalization > GOPUQ_NORM_PRIOR ||
      m.scoring < GOPUQ_SCORE_GMM || m.scoring > GOPUQ_SCORE_LOGITMARGIN) {
    throw gopuq::Error(gopuq::ErrorKind::kUsage, "method enum out of range");
  }
  out.normalization = static_cast<gopuq::Normalization>(m.normalization);
  out.scoring = static_cast<gopuq::Scoring>(m.scoring);
  out.temperature = m.normalization == GOPUQ_NORM_SCALE ? m.temperature : 1.0;
  out.Validate();
  return out;
}

gopuq_run_options Defaults(const gopuq_run_options* options) {
  gopuq_run_options o;
  gopuq_run_options_init(&o);
  return options ? *options : o;
}

std::optional<double> TemperatureOf(const gopuq_run_options& o) {
  if (o.has_temperature) return o.temperature;
  return std::nullopt;
}

gopuq::ScoringOptions ScoringOf(const gopuq_run_options& o) {
  gopuq::ScoringOptions s;
  s.entropy_form =
      o.entropy_literal ? gopuq::EntropyForm::kLiteral : gopuq::EntropyForm::kShannon;
  return s;
}

std::unique_ptr<gopuq_report> WrapReport(gopuq::EvaluationReport report) {
  auto r = std::make_unique<gopuq_report>();
  r->rep = std::move(report);
  for (const auto& m : r->rep.methods) r->method_names.push_back(m.method.Name());
  return r;
}

gopuq_status PhonemeAt(const std::vector<gopuq::PhonemeRow>& rows, size_t index,
                       gopuq_phoneme_result* out) {
  return Guard([&] {
    RequireNonNull(out, "out");
    if (index >= rows.size()) {
      throw gopuq::Error(gopuq::ErrorKind::kUsage, "phoneme index out of range");
    }
    out->label = rows[index].label.c_str();
    out->tau = rows[index].tau;
    out->n_segments = rows[index].n_segments;
  });
}

}  // namespace

extern "C" {

const char* gopuq_version(void) { return gopuq::kVersion; }

const char* gopuq_status_name(gopuq_status status) {
  switch (status) {
    case GOPUQ_OK: return "ok";
    case GOPUQ_ERR_INTERNAL: return "internal";
    default:
      if (status > GOPUQ_OK && status < GOPUQ_ERR_INTERNAL) {
        return gopuq::KindName(static_cast<gopuq::ErrorKind>(status - 1));
      }
      return "unknown";
  }
}

int gopuq_status_exit_code(gopuq_status status) {
  if (status == GOPUQ_OK) return 0;
  if (status == GOPUQ_ERR_INTERNAL || status < GOPUQ_OK || status > GOPUQ_ERR_INTERNAL) {
    return 2;
  }
  return static_cast<int>(gopuq::CategoryOf(static_cast<gopuq::ErrorKind>(status - 1)));
}

const char* gopuq_last_error(void) { return g_last_error.c_str(); }

int gopuq_last_error_offset(uint64_t* offset) {
  if (!g_last_offset) return 0;
  if (offset) *offset = *g_last_offset;
  return 1;
}

gopuq_status gopuq_method_parse(const char* text, double temperature,
                                int has_temperature, gopuq_method* out) {
  return Guard([&] {
    RequireNonNull(text, "text");
    RequireNonNull(out, "out");
    const auto m = gopuq::GopMethod::Parse(
        text, has_temperature ? std::optional<double>(temperature) : std::nullopt);
    out->normalization = static_cast<gopuq_normalization>(m.normalization);
    out->scoring = static_cast<gopuq_scoring>(m.scoring);
    out->temperature = m.temperature;
  });
}

gopuq_status gopuq_score_frames(const float* logits, size_t n_frames, size_t n_phones,
                                size_t phone, const gopuq_method* method,
                                const double* prior, double* out_score) {
  return Guard([&] {
    RequireNonNull(logits, "logits");
    RequireNonNull(method, "method");
    RequireNonNull(out_score, "out_score");
    const auto m = ToMethod(*method);
    gopuq::FrameLogitMatrix matrix("", n_frames, n_phones,
                                   std::vector<float>(logits, logits + n_frames * n_phones));
    std::optional<gopuq::PhonePrior> p;
    if (prior) p.emplace(std::vector<double>(prior, prior + n_phones));
    if (phone >= n_phones) {
      throw gopuq::Error(gopuq::ErrorKind::kUnknownLabel, "phone index out of range");
    }
    const gopuq::PhoneSegment seg{phone, 0, n_frames};
    const auto stats = gopuq::ComputeSegmentStats(matrix, seg, m, p ? &*p : nullptr);
    *out_score = gopuq::ScoreStats(stats, phone, m, p ? &*p : nullptr);
  });
}

gopuq_status gopuq_kendall_tau_b(const double* x, const double* y, size_t n,
                                 double* out_tau) {
  return Guard([&] {
    RequireNonNull(x, "x");
    RequireNonNull(y, "y");
    RequireNonNull(out_tau, "out_tau");
    *out_tau = gopuq::KendallTauB({x, n}, {y, n}).tau;
  });
}

gopuq_status gopuq_matrix_read(const char* path, size_t expected_width,
                               gopuq_matrix** out) {
  return Guard([&] {
    RequireNonNull(path, "path");
    RequireNonNull(out, "out");
    *out = nullptr;
    auto m = gopuq::ReadLogits(
        path, "", expected_width ? std::optional<size_t>(expected_width) : std::nullopt);
    *out = new gopuq_matrix{std::move(m)};
  });
}

gopuq_status gopuq_matrix_write(const char* path, const float* values, size_t n_frames,
                                size_t n_phones) {
  return Guard([&] {
    RequireNonNull(path, "path");
    RequireNonNull(values, "values");
    gopuq::FrameLogitMatrix m("", n_frames, n_phones,
                              std::vector<float>(values, values + n_frames * n_phones));
    gopuq::WriteLogits(path, m);
  });
}

size_t gopuq_matrix_n_frames(const gopuq_matrix* m) { return m ? m->rep.n_frames() : 0; }
size_t gopuq_matrix_n_phones(const gopuq_matrix* m) { return m ? m->rep.n_phones() : 0; }
const float* gopuq_matrix_data(const gopuq_matrix* m) {
  return m ? m->rep.values().data() : nullptr;
}
void gopuq_matrix_free(gopuq_matrix* m) { delete m; }

void gopuq_run_options_init(gopuq_run_options* options) {
  if (!options) return;
  options->temperature = 1.0;
  options->has_temperature = 0;
  options->min_support = 10;
  options->top_k = 5;
  options->jobs = 1;
  options->entropy_literal = 0;
}

gopuq_status gopuq_priors(const char* manifest, const char* out_path) {
  return Guard([&] {
    RequireNonNull(manifest, "manifest");
    RequireNonNull(out_path, "out_path");
    gopuq::RunPriors(manifest, out_path);
  });
}

gopuq_status gopuq_score(const char* manifest, const char* method,
                         const gopuq_run_options* options, const char* out_dir,
                         gopuq_score_summary* summary) {
  return Guard([&] {
    RequireNonNull(manifest, "manifest");
    RequireNonNull(method, "method");
    RequireNonNull(out_dir, "out_dir");
    const auto o = Defaults(options);
    const auto m = gopuq::GopMethod::Parse(method, TemperatureOf(o));
    const auto scores = gopuq::RunScore(manifest, m, ScoringOf(o), o.jobs, out_dir);
    if (summary) {
      summary->n_segments = scores.segments.size();
      summary->n_utterances = scores.utterances.size();
      summary->n_skipped = scores.skipped.size();
    }
  });
}

gopuq_status gopuq_evaluate(const char* manifest, const char* const* methods,
                            size_t n_methods, int with_phonemes,
                            const gopuq_run_options* options, const char* out_path,
                            gopuq_report** report) {
  if (report) *report = nullptr;
  return Guard([&] {
    RequireNonNull(manifest, "manifest");
    RequireNonNull(out_path, "out_path");
    const auto o = Defaults(options);
    gopuq::EvaluationOptions eval;
    if (n_methods == 0) {
      if (!o.has_temperature) {
        throw gopuq::Error(gopuq::ErrorKind::kUsage,
                           "the default grid has scale methods; a temperature is "
                           "required");
      }
      eval.methods = gopuq::DefaultMethodGrid(o.temperature);
    } else {
      RequireNonNull(methods, "methods");
      for (size_t i = 0; i < n_methods; ++i) {
        RequireNonNull(methods[i], "method");
        eval.methods.push_back(gopuq::GopMethod::Parse(methods[i], TemperatureOf(o)));
      }
    }
    eval.scoring = ScoringOf(o);
    eval.jobs = o.jobs;
    eval.min_support = o.min_support;
    eval.top_k = o.top_k;
    if (with_phonemes) {
      eval.phoneme_method =
          gopuq::GopMethod{gopuq::Normalization::kPrior, gopuq::Scoring::kMaxLogit, 1.0};
    }
    auto r = WrapReport(gopuq::RunEvaluate(manifest, eval, out_path));
    if (report) *report = r.release();
  });
}

gopuq_status gopuq_phoneme_corr(const char* manifest, const char* method,
                                const gopuq_run_options* options, const char* out_path,
                                gopuq_report** report) {
  if (report) *report = nullptr;
  return Guard([&] {
    RequireNonNull(manifest, "manifest");
    RequireNonNull(method, "method");
    RequireNonNull(out_path, "out_path");
    const auto o = Defaults(options);
    const auto m = gopuq::GopMethod::Parse(method, TemperatureOf(o));
    auto r = WrapReport(gopuq::RunPhonemeCorr(manifest, m, o.top_k, o.min_support,
                                              ScoringOf(o), o.jobs, out_path));
    if (report) *report = r.release();
  });
}

size_t gopuq_report_method_count(const gopuq_report* r) {
  return r ? r->rep.methods.size() : 0;
}

gopuq_status gopuq_report_method(const gopuq_report* r, size_t index,
                                 gopuq_method_result* out) {
  return Guard([&] {
    RequireNonNull(r, "report");
    RequireNonNull(out, "out");
    if (index >= r->rep.methods.size()) {
      throw gopuq::Error(gopuq::ErrorKind::kUsage, "method index out of range");
    }
    const auto& m = r->rep.methods[index];
    out->method = r->method_names[index].c_str();
    out->defined = m.result.has_value();
    out->tau = m.result ? m.result->tau : 0.0;
    out->n_items = m.result ? m.result->n_items : 0;
    out->error = m.error.c_str();
  });
}

int gopuq_report_best(const gopuq_report* r, size_t* index) {
  if (!r) return 0;
  const auto* best = gopuq::BestMethod(r->rep);
  if (!best) return 0;
  if (index) *index = static_cast<size_t>(best - r->rep.methods.data());
  return 1;
}

size_t gopuq_report_phoneme_count(const gopuq_report* r) {
  return r ? r->rep.phonemes.size() : 0;
}

gopuq_status gopuq_report_phoneme(const gopuq_report* r, size_t index,
                                  gopuq_phoneme_result* out) {
  if (!r) return Guard([] { RequireNonNull(nullptr, "report"); });
  return PhonemeAt(r->rep.phonemes, index, out);
}

size_t gopuq_report_top_k_count(const gopuq_report* r) {
  return r ? r->rep.top_k.size() : 0;
}

gopuq_status gopuq_report_top_k(const gopuq_report* r, size_t index,
                                gopuq_phoneme_result* out) {
  if (!r) return Guard([] { RequireNonNull(nullptr, "report"); });
  return PhonemeAt(r->rep.top_k, index, out);
}

size_t gopuq_report_skipped_phone_count(const gopuq_report* r) {
  return r ? r->rep.skipped_phones.size() : 0;
}

void gopuq_report_free(gopuq_report* r) { delete r; }

gopuq_status gopuq_calibrate(const char* manifest, const double* grid, size_t n_grid,
                             const char* validation_ids, double* nll_out,
                             double* best_temperature) {
  return Guard([&] {
    RequireNonNull(manifest, "manifest");
    if (n_grid > 0) RequireNonNull(grid, "grid");
    std::optional<std::filesystem::path> ids;
    if (validation_ids) ids = validation_ids;
    const auto result = gopuq::RunCalibrate(
        manifest, std::span<const double>(grid, grid ? n_grid : 0), ids);
    if (nll_out) {
      for (size_t i = 0; i < result.nll.size(); ++i) nll_out[i] = result.nll[i];
    }
    if (best_temperature) *best_temperature = result.best_temperature;
  });
}

void gopuq_synth_config_init(gopuq_synth_config* config) {
  if (!config) return;
  const gopuq::SyntheticConfig d;
  config->n_utterances = d.n_utterances;
  config->n_phones = d.n_phones;
  config->frames_per_segment = d.frames_per_segment;
  config->segments_per_utterance = d.segments_per_utterance;
  config->severity_levels = d.severity_levels;
  config->degradation_slope = d.degradation_slope;
  config->noise_scale = d.noise_scale;
  config->seed = d.seed;
  config->base_high = d.base_high;
  config->base_low = d.base_low;
  config->silence_frames = d.silence_frames;
  config->degrading_phone = -1;
}

gopuq_status gopuq_synth(const gopuq_synth_config* config, const char* out_dir,
                         int force) {
  return Guard([&] {
    RequireNonNull(config, "config");
    RequireNonNull(out_dir, "out_dir");
    gopuq::SyntheticConfig c;
    c.n_utterances = config->n_utterances;
    c.n_phones = config->n_phones;
    c.frames_per_segment = config->frames_per_segment;
    c.segments_per_utterance = config->segments_per_utterance;
    c.severity_levels = config->severity_levels;
    c.degradation_slope = config->degradation_slope;
    c.noise_scale = config->noise_scale;
    c.seed = config->seed;
    c.base_high = config->base_high;
    c.base_low = config->base_low;
    c.silence_frames = config->silence_frames;
    if (config->degrading_phone >= 0) {
      c.degrading_phone = static_cast<gopuq::PhoneIndex>(config->degrading_phone);
    }
    gopuq::RunSynth(c, out_dir, force != 0);
  });
}

}  // extern "C"
