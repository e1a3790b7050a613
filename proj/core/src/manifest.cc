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

#include "lpvc/manifest.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "lpvc/error.h"

namespace lpvc {

using nlohmann::json;

const UtteranceEntry* SpeakerEntry::Find(const std::string& word_id) const {
  for (const UtteranceEntry& u : utterances) {
    if (u.word_id == word_id) return &u;
  }
  return nullptr;
}

const SpeakerEntry& Manifest::Speaker(const std::string& id) const {
  for (const SpeakerEntry& s : speakers) {
    if (s.id == id) return s;
  }
  throw Error(ErrorCode::kManifestError, "unknown speaker '" + id + "'");
}

const UtteranceEntry& Manifest::Utterance(const std::string& speaker, const std::string& word_id) const {
  const UtteranceEntry* u = Speaker(speaker).Find(word_id);
  if (u == nullptr) {
    throw Error(ErrorCode::kManifestError, "speaker '" + speaker + "' has no word '" + word_id + "'");
  }
  return *u;
}

std::vector<std::string> Manifest::SharedWords(const std::string& a, const std::string& b) const {
  std::set<std::string> left;
  for (const UtteranceEntry& u : Speaker(a).utterances) left.insert(u.word_id);
  std::vector<std::string> out;
  for (const UtteranceEntry& u : Speaker(b).utterances) {
    if (left.count(u.word_id)) out.push_back(u.word_id);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Manifest LoadManifest(const std::filesystem::path& path, bool check_files) {
  std::ifstream file(path);
  if (!file) throw Error(ErrorCode::kNotFound, "cannot open manifest " + path.string());
  json doc;
  try {
    file >> doc;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kManifestError, path.string() + ": " + e.what());
  }

  Manifest m;
  m.base_dir = std::filesystem::absolute(path).parent_path();
  try {
    if (doc.value("format", std::string(kManifestFormat)) != kManifestFormat) {
      throw Error(ErrorCode::kManifestError, "unsupported manifest format");
    }
    m.sample_rate = doc.at("sample_rate").get<int>();
    m.order = doc.value("order", 24);
    m.parallel = doc.value("parallel", true);
    for (const json& s : doc.at("speakers")) {
      SpeakerEntry sp;
      sp.id = s.at("id").get<std::string>();
      sp.gender = s.value("gender", std::string("unknown"));
      for (const json& u : s.at("utterances")) {
        UtteranceEntry ue;
        ue.word_id = u.at("word_id").get<std::string>();
        ue.wav_path = m.base_dir / u.at("wav_path").get<std::string>();
        if (u.contains("phoneme_labels")) {
          for (const json& l : u.at("phoneme_labels")) {
            ue.labels.push_back({l.at("symbol").get<std::string>(), l.at("start").get<std::size_t>(),
                                 l.at("end").get<std::size_t>(), l.value("voiced", false)});
          }
        }
        sp.utterances.push_back(std::move(ue));
      }
      m.speakers.push_back(std::move(sp));
    }
    if (doc.contains("pairing")) {
      for (const json& p : doc.at("pairing")) {
        m.pairing.emplace_back(p.at(0).get<std::string>(), p.at(1).get<std::string>());
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kManifestError, path.string() + ": " + e.what());
  }

  if (m.sample_rate <= 0) throw Error(ErrorCode::kManifestError, "sample_rate must be positive");
  std::set<std::string> ids;
  for (const SpeakerEntry& s : m.speakers) {
    if (!ids.insert(s.id).second) throw Error(ErrorCode::kManifestError, "duplicate speaker '" + s.id + "'");
    for (const UtteranceEntry& u : s.utterances) {
      if (check_files && !std::filesystem::exists(u.wav_path)) {
        throw Error(ErrorCode::kManifestError, "missing file " + u.wav_path.string());
      }
      for (const PhonemeLabel& l : u.labels) {
        if (l.start >= l.end) {
          throw Error(ErrorCode::kManifestError, "label '" + l.symbol + "' in " + u.word_id + " is empty");
        }
      }
    }
  }
  for (const auto& [src, tgt] : m.pairing) {
    const SpeakerEntry& a = m.Speaker(src);
    const SpeakerEntry& b = m.Speaker(tgt);
    if (m.parallel) {
      const auto shared = m.SharedWords(src, tgt);
      if (shared.size() != a.utterances.size() || shared.size() != b.utterances.size()) {
        throw Error(ErrorCode::kManifestError,
                    "pair " + src + " -> " + tgt + " does not share an identical word set");
      }
    }
  }
  return m;
}

void SaveManifest(const Manifest& m, const std::filesystem::path& path) {
  const std::filesystem::path dir = std::filesystem::absolute(path).parent_path();
  json doc;
  doc["format"] = kManifestFormat;
  doc["sample_rate"] = m.sample_rate;
  doc["order"] = m.order;
  doc["parallel"] = m.parallel;
  json speakers = json::array();
  for (const SpeakerEntry& s : m.speakers) {
    json sp;
    sp["id"] = s.id;
    sp["gender"] = s.gender;
    json utts = json::array();
    for (const UtteranceEntry& u : s.utterances) {
      json ue;
      ue["word_id"] = u.word_id;
      ue["wav_path"] = std::filesystem::relative(u.wav_path, dir).generic_string();
      json labels = json::array();
      for (const PhonemeLabel& l : u.labels) {
        labels.push_back({{"symbol", l.symbol}, {"start", l.start}, {"end", l.end}, {"voiced", l.voiced}});
      }
      ue["phoneme_labels"] = labels;
      utts.push_back(ue);
    }
    sp["utterances"] = utts;
    speakers.push_back(sp);
  }
  doc["speakers"] = speakers;
  json pairing = json::array();
  for (const auto& [a, b] : m.pairing) pairing.push_back({a, b});
  doc["pairing"] = pairing;

  std::ofstream file(path, std::ios::trunc);
  if (!file) throw Error(ErrorCode::kIoFailure, "cannot create " + path.string());
  file << doc.dump(2) << "\n";
  if (!file) throw Error(ErrorCode::kIoFailure, "write failed for " + path.string());
}

WordSplit SplitWords(std::vector<std::string> words, double train_fraction) {
  std::sort(words.begin(), words.end());
  words.erase(std::unique(words.begin(), words.end()), words.end());
  const auto n_train = static_cast<std::size_t>(
      std::llround(std::clamp(train_fraction, 0.0, 1.0) * static_cast<double>(words.size())));
  WordSplit split;
  split.train.assign(words.begin(), words.begin() + static_cast<std::ptrdiff_t>(n_train));
  split.eval.assign(words.begin() + static_cast<std::ptrdiff_t>(n_train), words.end());
  return split;
}

}  // namespace lpvc
