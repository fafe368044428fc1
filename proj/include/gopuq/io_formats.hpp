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

// Readers and writers for every on-disk artifact.
//
// FLM (frame logit matrix), all integers and floats little-endian:
//   offset 0   "FLM1"
//   offset 4   uint32 n_frames (>= 1)
//   offset 8   uint32 n_phones
//   offset 12  n_frames * n_phones IEEE-754 binary32, frame-major
// Nothing may follow the payload.
//
// Text files are UTF-8 with '\n' line endings, tab separated. Blank lines and
// lines starting with '#' are ignored, except for the "#skip:" header of an
// inventory. Every malformed line is an error carrying its line number.
//   inventory   one label per line; order is logit column order. Leading
//               "#skip: a b" lines name the labels excluded from scoring
//               (default: whichever of sil, sp, spn are present).
//   alignments  utterance_id  phone  start_frame  end_frame(exclusive)
//               lines of one utterance are contiguous and sorted.
//   labels      key  severity(int >= 0); key is an utterance or speaker id.
//   priors      phone  probability; each inventory phone exactly once.
//
// The corpus manifest is a JSON object:
//   {
//     "inventory": "phones.txt",
//     "alignments": "alignments.tsv",
//     "labels": "labels.tsv",            (optional)
//     "priors": "priors.tsv",            (optional)
//     "frame_rate": 50,                  (optional, metadata only)
//     "utterances": {"utt0001": {"logits": "logits/utt0001.flm",
//                                "speaker": "spk1"}}   (speaker optional)
//   }
// Relative paths resolve against the manifest's directory.

#ifndef GOPUQ_IO_FORMATS_HPP_
#define GOPUQ_IO_FORMATS_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gopuq/phone_core.hpp"

namespace gopuq {

// --- FLM ---------------------------------------------------------------

std::vector<std::uint8_t> EncodeFlm(const FrameLogitMatrix& matrix);

/// `expected_width`, when set, must equal the header's n_phones.
FrameLogitMatrix DecodeFlm(std::span<const std::uint8_t> bytes,
                           std::string utterance_id,
                           std::optional<std::size_t> expected_width = std::nullopt);

FrameLogitMatrix ReadLogits(const std::filesystem::path& path,
                            std::string utterance_id,
                            std::optional<std::size_t> expected_width = std::nullopt);
void WriteLogits(const std::filesystem::path& path, const FrameLogitMatrix& matrix);

// --- text formats ------------------------------------------------------

PhoneInventory ParseInventory(const std::string& text);
PhoneInventory ReadInventory(const std::filesystem::path& path);
void WriteInventory(const std::filesystem::path& path, const PhoneInventory& inventory);

std::vector<UtteranceAlignment> ParseAlignments(const std::string& text,
                                                const PhoneInventory& inventory);
std::vector<UtteranceAlignment> ReadAlignments(const std::filesystem::path& path,
                                               const PhoneInventory& inventory);
void WriteAlignments(const std::filesystem::path& path,
                     std::span<const UtteranceAlignment> alignments,
                     const PhoneInventory& inventory);

std::vector<SeverityLabel> ParseLabels(const std::string& text);
std::vector<SeverityLabel> ReadLabels(const std::filesystem::path& path);
void WriteLabels(const std::filesystem::path& path,
                 std::span<const SeverityLabel> labels);

/// Sum must be 1 within 1e-6; the result is renormalized.
PhonePrior ParsePriors(const std::string& text, const PhoneInventory& inventory);
PhonePrior ReadPriors(const std::filesystem::path& path, const PhoneInventory& inventory);
void WritePriors(const std::filesystem::path& path, const PhonePrior& prior,
                 const PhoneInventory& inventory);

enum class PriorCounting { kFrames, kSegments };

/// Add-one smoothed phone frequencies over non-skip segments. Every phone,
/// skip phones included, gets the +1 so the result is strictly positive.
PhonePrior EstimatePriors(std::span<const UtteranceAlignment> alignments,
                          const PhoneInventory& inventory,
                          PriorCounting counting = PriorCounting::kFrames);

// --- manifest ----------------------------------------------------------

struct ManifestUtterance {
  std::filesystem::path logits_path;
  std::optional<std::string> speaker;
};

struct CorpusManifest {
  std::filesystem::path inventory_path;
  std::filesystem::path alignment_path;
  std::optional<std::filesystem::path> labels_path;
  std::optional<std::filesystem::path> priors_path;
  std::optional<double> frame_rate;
  std::map<std::string, ManifestUtterance> utterances;
};

/// Paths in the result are resolved (absolute or relative to the cwd).
CorpusManifest ReadManifest(const std::filesystem::path& path);
/// Writes paths exactly as stored; callers choose relative or absolute.
void WriteManifest(const std::filesystem::path& path, const CorpusManifest& manifest);

// --- helpers -----------------------------------------------------------

std::string ReadTextFile(const std::filesystem::path& path);
std::vector<std::uint8_t> ReadBinaryFile(const std::filesystem::path& path);
/// Writes to a sibling temporary and renames it over `path`.
void WriteFileAtomic(const std::filesystem::path& path, std::string_view contents);
/// Lower-case hex SHA-256 of a file's bytes.
std::string Sha256File(const std::filesystem::path& path);

}  // namespace gopuq

#endif  // GOPUQ_IO_FORMATS_HPP_
