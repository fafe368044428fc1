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

#include "gopuq/io_formats.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "gopuq/error.hpp"
#include "json.hpp"

namespace gopuq {

namespace fs = std::filesystem;

namespace {

constexpr char kFlmMagic[4] = {'F', 'L', 'M', '1'};
constexpr std::size_t kFlmHeaderBytes = 12;

void PutU32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t GetU32(std::span<const std::uint8_t> bytes, std::size_t offset) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= static_cast<std::uint32_t>(bytes[offset + i]) << (8 * i);
  }
  return v;
}

// One logical line of a text file, with its 1-based line number.
struct Line {
  std::size_t number;
  std::string_view text;
};

// Skips blank and '#' lines.
std::vector<Line> DataLines(std::string_view text) {
  std::vector<Line> lines;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++number;
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    if (line.empty() || line.front() == '#') continue;
    lines.push_back({number, line});
  }
  return lines;
}

std::vector<std::string_view> SplitTabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  for (;;) {
    const std::size_t tab = line.find('\t', pos);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(pos));
      return fields;
    }
    fields.push_back(line.substr(pos, tab - pos));
    pos = tab + 1;
  }
}

std::vector<std::string_view> ExpectFields(const Line& line, std::size_t n,
                                           const char* format) {
  auto fields = SplitTabs(line.text);
  if (fields.size() != n) {
    throw Error(ErrorKind::kParse,
                fmt::format("line {}: expected {} tab-separated fields ({}), got {}",
                            line.number, n, format, fields.size()));
  }
  return fields;
}

template <typename T>
T ParseNumber(std::string_view field, const Line& line, const char* what) {
  T value{};
  const char* first = field.data();
  const char* last = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (field.empty() || ec != std::errc() || ptr != last) {
    throw Error(ErrorKind::kParse,
                fmt::format("line {}: invalid {} '{}'", line.number, what, field));
  }
  return value;
}

}  // namespace

// ---------------------------------------------------------------------------
// FLM

std::vector<std::uint8_t> EncodeFlm(const FrameLogitMatrix& matrix) {
  std::vector<std::uint8_t> out;
  out.reserve(kFlmHeaderBytes + matrix.values().size() * 4);
  out.insert(out.end(), std::begin(kFlmMagic), std::end(kFlmMagic));
  PutU32(out, static_cast<std::uint32_t>(matrix.n_frames()));
  PutU32(out, static_cast<std::uint32_t>(matrix.n_phones()));
  for (float v : matrix.values()) PutU32(out, std::bit_cast<std::uint32_t>(v));
  return out;
}

FrameLogitMatrix DecodeFlm(std::span<const std::uint8_t> bytes,
                           std::string utterance_id,
                           std::optional<std::size_t> expected_width) {
  const std::string& id = utterance_id;
  if (bytes.size() < 4) {
    throw Error(ErrorKind::kTruncated,
                fmt::format("FLM '{}': file ends at byte {} inside the magic", id,
                            bytes.size()),
                bytes.size());
  }
  if (std::memcmp(bytes.data(), kFlmMagic, 4) != 0) {
    throw Error(ErrorKind::kBadMagic,
                fmt::format("FLM '{}': bad magic at byte 0 (expected \"FLM1\")", id),
                0);
  }
  if (bytes.size() < kFlmHeaderBytes) {
    throw Error(ErrorKind::kTruncated,
                fmt::format("FLM '{}': header truncated at byte {}", id, bytes.size()),
                bytes.size());
  }
  const std::uint32_t n_frames = GetU32(bytes, 4);
  const std::uint32_t n_phones = GetU32(bytes, 8);
  if (n_frames == 0) {
    throw Error(ErrorKind::kEmptySegment,
                fmt::format("FLM '{}': n_frames is 0 at byte 4", id), 4);
  }
  if (n_phones == 0 || (expected_width && n_phones != *expected_width)) {
    throw Error(ErrorKind::kWidthMismatch,
                fmt::format("FLM '{}': n_phones {} at byte 8, expected {}", id,
                            n_phones, expected_width ? *expected_width : 1),
                8);
  }
  const std::uint64_t count = std::uint64_t{n_frames} * n_phones;
  const std::uint64_t expected_size = kFlmHeaderBytes + count * 4;
  if (bytes.size() < expected_size) {
    throw Error(ErrorKind::kTruncated,
                fmt::format("FLM '{}': payload truncated at byte {}; header "
                            "implies {} bytes",
                            id, bytes.size(), expected_size),
                bytes.size());
  }
  if (bytes.size() > expected_size) {
    throw Error(ErrorKind::kParse,
                fmt::format("FLM '{}': {} trailing bytes after payload end at "
                            "byte {}",
                            id, bytes.size() - expected_size, expected_size),
                expected_size);
  }

  std::vector<float> values(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    const std::size_t offset = kFlmHeaderBytes + i * 4;
    const float v = std::bit_cast<float>(GetU32(bytes, offset));
    if (!std::isfinite(v)) {
      throw Error(ErrorKind::kNonFinite,
                  fmt::format("FLM '{}': non-finite value at byte {} (frame {}, "
                              "column {})",
                              id, offset, i / n_phones, i % n_phones),
                  offset);
    }
    values[i] = v;
  }
  return FrameLogitMatrix(std::move(utterance_id), n_frames, n_phones,
                          std::move(values));
}

FrameLogitMatrix ReadLogits(const fs::path& path, std::string utterance_id,
                            std::optional<std::size_t> expected_width) {
  const auto bytes = ReadBinaryFile(path);
  try {
    return DecodeFlm(bytes, std::move(utterance_id), expected_width);
  } catch (const Error& e) {
    if (e.byte_offset()) {
      throw Error(e.kind(), fmt::format("{}: {}", path.string(), e.what()),
                  *e.byte_offset());
    }
    throw Error(e.kind(), fmt::format("{}: {}", path.string(), e.what()));
  }
}

void WriteLogits(const fs::path& path, const FrameLogitMatrix& matrix) {
  const auto bytes = EncodeFlm(matrix);
  WriteFileAtomic(path, std::string_view(reinterpret_cast<const char*>(bytes.data()),
                                         bytes.size()));
}

// ---------------------------------------------------------------------------
// Inventory

PhoneInventory ParseInventory(const std::string& text) {
  std::vector<std::string> labels;
  std::set<std::string> skip;
  bool explicit_skip = false;
  bool in_header = true;
  std::size_t number = 0;
  std::size_t pos = 0;
  std::vector<std::size_t> label_lines;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    ++number;
    const std::string_view line(text.data() + pos, end - pos);
    pos = end + 1;
    if (line.rfind("#skip:", 0) == 0) {
      if (!in_header) {
        throw Error(ErrorKind::kParse,
                    fmt::format("line {}: #skip: must precede the labels", number));
      }
      explicit_skip = true;
      std::istringstream words{std::string(line.substr(6))};
      std::string w;
      while (words >> w) skip.insert(w);
      continue;
    }
    if (line.empty() || line.front() == '#') continue;
    in_header = false;
    if (line.find_first_of("\t \r") != std::string_view::npos) {
      throw Error(ErrorKind::kParse,
                  fmt::format("line {}: phone label '{}' contains whitespace",
                              number, line));
    }
    labels.emplace_back(line);
    label_lines.push_back(number);
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (labels[i] == labels[j]) {
        throw Error(ErrorKind::kDuplicateKey,
                    fmt::format("line {}: duplicate phone label '{}' (first on "
                                "line {})",
                                label_lines[i], labels[i], label_lines[j]));
      }
    }
  }
  if (explicit_skip) return PhoneInventory(std::move(labels), std::move(skip));
  return PhoneInventory(std::move(labels));
}

PhoneInventory ReadInventory(const fs::path& path) {
  try {
    return ParseInventory(ReadTextFile(path));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kIo) throw;
    throw Error(e.kind(), fmt::format("{}: {}", path.string(), e.what()));
  }
}

void WriteInventory(const fs::path& path, const PhoneInventory& inventory) {
  std::string out;
  if (!inventory.skip_labels().empty()) {
    out += "#skip:";
    for (const auto& s : inventory.skip_labels()) out += " " + s;
    out += "\n";
  }
  for (const auto& l : inventory.labels()) out += l + "\n";
  WriteFileAtomic(path, out);
}

// ---------------------------------------------------------------------------
// Alignments

std::vector<UtteranceAlignment> ParseAlignments(const std::string& text,
                                                const PhoneInventory& inventory) {
  std::vector<UtteranceAlignment> out;
  std::set<std::string> finished;
  for (const Line& line : DataLines(text)) {
    const auto f = ExpectFields(line, 4, "utterance, phone, start, end");
    const std::string utt(f[0]);
    if (utt.empty()) {
      throw Error(ErrorKind::kParse,
                  fmt::format("line {}: empty utterance id", line.number));
    }
    const PhoneIndex phone =
        inventory.IndexOf(f[1], fmt::format("line {}, utterance '{}'", line.number, utt));
    const auto start = ParseNumber<std::size_t>(f[2], line, "start frame");
    const auto end = ParseNumber<std::size_t>(f[3], line, "end frame");
    if (start >= end) {
      throw Error(ErrorKind::kEmptySegment,
                  fmt::format("line {}: empty segment [{}, {}) in '{}'", line.number,
                              start, end, utt));
    }
    if (out.empty() || out.back().utterance_id != utt) {
      if (!out.empty()) finished.insert(out.back().utterance_id);
      if (finished.count(utt)) {
        throw Error(ErrorKind::kParse,
                    fmt::format("line {}: utterance '{}' continues after other "
                                "utterances; group its lines together",
                                line.number, utt));
      }
      out.push_back({utt, {}});
    }
    auto& segments = out.back().segments;
    if (!segments.empty() && start < segments.back().end_frame) {
      throw Error(ErrorKind::kOverlap,
                  fmt::format("line {}: segment [{}, {}) overlaps or precedes the "
                              "previous segment ending at {} in '{}'",
                              line.number, start, end, segments.back().end_frame, utt));
    }
    segments.push_back({phone, start, end});
  }
  return out;
}

std::vector<UtteranceAlignment> ReadAlignments(const fs::path& path,
                                               const PhoneInventory& inventory) {
  try {
    return ParseAlignments(ReadTextFile(path), inventory);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kIo) throw;
    throw Error(e.kind(), fmt::format("{}: {}", path.string(), e.what()));
  }
}

void WriteAlignments(const fs::path& path,
                     std::span<const UtteranceAlignment> alignments,
                     const PhoneInventory& inventory) {
  std::string out;
  for (const auto& a : alignments) {
    for (const auto& s : a.segments) {
      out += fmt::format("{}\t{}\t{}\t{}\n", a.utterance_id, inventory.label(s.phone),
                         s.start_frame, s.end_frame);
    }
  }
  WriteFileAtomic(path, out);
}

// ---------------------------------------------------------------------------
// Labels

std::vector<SeverityLabel> ParseLabels(const std::string& text) {
  std::vector<SeverityLabel> out;
  std::map<std::string, std::size_t> seen;
  for (const Line& line : DataLines(text)) {
    const auto f = ExpectFields(line, 2, "key, severity");
    const std::string key(f[0]);
    if (key.empty()) {
      throw Error(ErrorKind::kParse, fmt::format("line {}: empty key", line.number));
    }
    const int severity = ParseNumber<int>(f[1], line, "severity");
    if (severity < 0) {
      throw Error(ErrorKind::kNegativeSeverity,
                  fmt::format("line {}: negative severity {} for '{}'", line.number,
                              severity, key));
    }
    if (auto [it, inserted] = seen.emplace(key, line.number); !inserted) {
      throw Error(ErrorKind::kDuplicateKey,
                  fmt::format("line {}: duplicate key '{}' (first on line {})",
                              line.number, key, it->second));
    }
    out.push_back({key, severity});
  }
  return out;
}

std::vector<SeverityLabel> ReadLabels(const fs::path& path) {
  try {
    return ParseLabels(ReadTextFile(path));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kIo) throw;
    throw Error(e.kind(), fmt::format("{}: {}", path.string(), e.what()));
  }
}

void WriteLabels(const fs::path& path, std::span<const SeverityLabel> labels) {
  std::string out;
  for (const auto& l : labels) out += fmt::format("{}\t{}\n", l.key, l.severity);
  WriteFileAtomic(path, out);
}

// ---------------------------------------------------------------------------
// Priors

PhonePrior ParsePriors(const std::string& text, const PhoneInventory& inventory) {
  std::vector<double> probs(inventory.size(), 0.0);
  std::vector<std::size_t> seen_line(inventory.size(), 0);
  for (const Line& line : DataLines(text)) {
    const auto f = ExpectFields(line, 2, "phone, probability");
    const PhoneIndex p = inventory.IndexOf(f[0], fmt::format("line {}", line.number));
    if (seen_line[p] != 0) {
      throw Error(ErrorKind::kDuplicateKey,
                  fmt::format("line {}: duplicate prior for '{}' (first on line {})",
                              line.number, f[0], seen_line[p]));
    }
    seen_line[p] = line.number;
    const double v = ParseNumber<double>(f[1], line, "probability");
    if (!std::isfinite(v) || v <= 0.0) {
      throw Error(ErrorKind::kPriorSum,
                  fmt::format("line {}: prior for '{}' is {}; priors must be "
                              "strictly positive",
                              line.number, f[0], v));
    }
    probs[p] = v;
  }
  double sum = 0.0;
  for (PhoneIndex p = 0; p < inventory.size(); ++p) {
    if (seen_line[p] == 0) {
      throw Error(ErrorKind::kParse,
                  fmt::format("prior missing for phone '{}'", inventory.label(p)));
    }
    sum += probs[p];
  }
  if (std::abs(sum - 1.0) > 1e-6) {
    throw Error(ErrorKind::kPriorSum,
                fmt::format("priors sum to {:.17g}, expected 1 within 1e-6", sum));
  }
  for (double& v : probs) v /= sum;
  return PhonePrior(std::move(probs));
}

PhonePrior ReadPriors(const fs::path& path, const PhoneInventory& inventory) {
  try {
    return ParsePriors(ReadTextFile(path), inventory);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kIo) throw;
    throw Error(e.kind(), fmt::format("{}: {}", path.string(), e.what()));
  }
}

void WritePriors(const fs::path& path, const PhonePrior& prior,
                 const PhoneInventory& inventory) {
  std::string out;
  for (PhoneIndex p = 0; p < inventory.size(); ++p) {
    out += fmt::format("{}\t{:.17g}\n", inventory.label(p), prior.prob(p));
  }
  WriteFileAtomic(path, out);
}

PhonePrior EstimatePriors(std::span<const UtteranceAlignment> alignments,
                          const PhoneInventory& inventory, PriorCounting counting) {
  std::vector<double> counts(inventory.size(), 1.0);
  std::size_t scored = 0;
  for (const auto& a : alignments) {
    for (const auto& s : a.segments) {
      if (s.phone >= inventory.size()) {
        throw Error(ErrorKind::kUnknownLabel,
                    fmt::format("utterance '{}': phone index {} outside inventory",
                                a.utterance_id, s.phone));
      }
      if (inventory.is_skip(s.phone)) continue;
      counts[s.phone] += counting == PriorCounting::kFrames
                             ? static_cast<double>(s.n_frames())
                             : 1.0;
      ++scored;
    }
  }
  if (scored == 0) {
    throw Error(ErrorKind::kUnscorable,
                "cannot estimate priors: no segments outside the skip labels");
  }
  double total = 0.0;
  for (double c : counts) total += c;
  for (double& c : counts) c /= total;
  return PhonePrior(std::move(counts));
}

// ---------------------------------------------------------------------------
// Manifest

CorpusManifest ReadManifest(const fs::path& path) {
  const std::string text = ReadTextFile(path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::kParse,
                fmt::format("{}: manifest is not valid JSON: {}", path.string(), e.what()));
  }
  const fs::path base = path.parent_path();
  auto resolve = [&](const std::string& p) {
    const fs::path candidate(p);
    return candidate.is_absolute() ? candidate : base / candidate;
  };
  auto required_string = [&](const char* key) {
    if (!doc.contains(key) || !doc[key].is_string()) {
      throw Error(ErrorKind::kParse,
                  fmt::format("{}: manifest needs a string \"{}\"", path.string(), key));
    }
    return doc[key].get<std::string>();
  };
  auto optional_string = [&](const char* key) -> std::optional<std::string> {
    if (!doc.contains(key) || doc[key].is_null()) return std::nullopt;
    if (!doc[key].is_string()) {
      throw Error(ErrorKind::kParse,
                  fmt::format("{}: manifest \"{}\" must be a string", path.string(), key));
    }
    return doc[key].get<std::string>();
  };

  if (!doc.is_object()) {
    throw Error(ErrorKind::kParse,
                fmt::format("{}: manifest must be a JSON object", path.string()));
  }
  CorpusManifest m;
  m.inventory_path = resolve(required_string("inventory"));
  m.alignment_path = resolve(required_string("alignments"));
  if (auto s = optional_string("labels")) m.labels_path = resolve(*s);
  if (auto s = optional_string("priors")) m.priors_path = resolve(*s);
  if (doc.contains("frame_rate") && !doc["frame_rate"].is_null()) {
    if (!doc["frame_rate"].is_number()) {
      throw Error(ErrorKind::kParse,
                  fmt::format("{}: \"frame_rate\" must be a number", path.string()));
    }
    m.frame_rate = doc["frame_rate"].get<double>();
  }
  if (!doc.contains("utterances") || !doc["utterances"].is_object()) {
    throw Error(ErrorKind::kParse,
                fmt::format("{}: manifest needs an \"utterances\" object", path.string()));
  }
  for (const auto& [id, entry] : doc["utterances"].items()) {
    if (!entry.is_object() || !entry.contains("logits") || !entry["logits"].is_string()) {
      throw Error(ErrorKind::kParse,
                  fmt::format("{}: utterance '{}' needs a string \"logits\"",
                              path.string(), id));
    }
    ManifestUtterance u;
    u.logits_path = resolve(entry["logits"].get<std::string>());
    if (entry.contains("speaker") && !entry["speaker"].is_null()) {
      if (!entry["speaker"].is_string()) {
        throw Error(ErrorKind::kParse,
                    fmt::format("{}: utterance '{}' speaker must be a string",
                                path.string(), id));
      }
      u.speaker = entry["speaker"].get<std::string>();
    }
    m.utterances.emplace(id, std::move(u));
  }
  return m;
}

void WriteManifest(const fs::path& path, const CorpusManifest& manifest) {
  nlohmann::json doc;
  doc["inventory"] = manifest.inventory_path.generic_string();
  doc["alignments"] = manifest.alignment_path.generic_string();
  if (manifest.labels_path) doc["labels"] = manifest.labels_path->generic_string();
  if (manifest.priors_path) doc["priors"] = manifest.priors_path->generic_string();
  if (manifest.frame_rate) doc["frame_rate"] = *manifest.frame_rate;
  nlohmann::json utts = nlohmann::json::object();
  for (const auto& [id, u] : manifest.utterances) {
    nlohmann::json entry;
    entry["logits"] = u.logits_path.generic_string();
    if (u.speaker) entry["speaker"] = *u.speaker;
    utts[id] = std::move(entry);
  }
  doc["utterances"] = std::move(utts);
  WriteFileAtomic(path, doc.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// Helpers

std::string ReadTextFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::kIo, fmt::format("cannot open '{}'", path.string()));
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) {
    throw Error(ErrorKind::kIo, fmt::format("error reading '{}'", path.string()));
  }
  return ss.str();
}

std::vector<std::uint8_t> ReadBinaryFile(const fs::path& path) {
  const std::string s = ReadTextFile(path);
  return std::vector<std::uint8_t>(s.begin(), s.end());
}

void WriteFileAtomic(const fs::path& path, std::string_view contents) {
  fs::path tmp = path;
  tmp += ".tmp";
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw Error(ErrorKind::kIo, fmt::format("cannot write '{}'", path.string()));
    }
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) {
      throw Error(ErrorKind::kIo, fmt::format("error writing '{}'", path.string()));
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorKind::kIo,
                fmt::format("cannot move output into '{}'", path.string()));
  }
}

std::string Sha256File(const fs::path& path) {
  const std::string data = ReadTextFile(path);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorKind::kIo, "sha256 failed");
  }
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

}  // namespace gopuq
