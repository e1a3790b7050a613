// Copyright 2026 The lpvc Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LPVC_MANIFEST_H_
#define LPVC_MANIFEST_H_

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "lpvc/evaluation.h"

namespace lpvc {

inline constexpr const char* kManifestFormat = "lpvc-manifest-v1";

struct UtteranceEntry {
  std::string word_id;
  std::filesystem::path wav_path;  // absolute once loaded
  std::vector<PhonemeLabel> labels;
};

struct SpeakerEntry {
  std::string id;
  std::string gender;
  std::vector<UtteranceEntry> utterances;

  const UtteranceEntry* Find(const std::string& word_id) const;
};

struct Manifest {
  int sample_rate = 11025;
  int order = 24;
  bool parallel = true;
  std::vector<SpeakerEntry> speakers;
  std::vector<std::pair<std::string, std::string>> pairing;  // (source, target)
  std::filesystem::path base_dir;

  // Throws kManifestError for unknown ids.
  const SpeakerEntry& Speaker(const std::string& id) const;
  const UtteranceEntry& Utterance(const std::string& speaker, const std::string& word_id) const;
  // Sorted word ids recorded by both speakers.
  std::vector<std::string> SharedWords(const std::string& a, const std::string& b) const;
};

// Reads the JSON manifest; wav paths are resolved against the manifest's
// directory. Validates speaker references, parallel word sets and, when
// |check_files| is set, file existence. Throws kManifestError / kNotFound.
Manifest LoadManifest(const std::filesystem::path& path, bool check_files = true);

// Writes |m| with wav paths relative to the manifest's directory.
void SaveManifest(const Manifest& m, const std::filesystem::path& path);

struct WordSplit {
  std::vector<std::string> train;
  std::vector<std::string> eval;
};

// Deterministic split of sorted word ids: the first round(fraction * n) go to
// training.
WordSplit SplitWords(std::vector<std::string> words, double train_fraction);

}  // namespace lpvc

#endif  // LPVC_MANIFEST_H_
