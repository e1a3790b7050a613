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


#include "lpvc/corpus.h"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <set>
#include <string>

#include <gtest/gtest.h>

#include "common/error_code.h"
#include "common/oracles.h"
#include "lpvc/manifest.h"
#include "lpvc/prosody.h"
#include "lpvc/wav.h"

namespace lpvc {
namespace {

using testing::CodeOf;
using testing::ScratchDir;

std::string Slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

TEST(Corpus, DefaultSpeakersCarryTablePitches) {
  auto specs = DefaultSpeakers();
  ASSERT_EQ(specs.size(), 4u);
  EXPECT_EQ(specs[0].id, "male1");
  EXPECT_DOUBLE_EQ(specs[0].base_f0, 120.86);
  EXPECT_DOUBLE_EQ(specs[1].base_f0, 102.89);
  EXPECT_DOUBLE_EQ(specs[2].base_f0, 245.68);
  EXPECT_DOUBLE_EQ(specs[3].base_f0, 226.32);
  for (const auto& s : specs) {
    s.Validate(kDefaultSampleRate);
    for (const auto& [sym, res] : s.formants) {
      for (const auto& r : res) EXPECT_LT(r.center_hz, kDefaultSampleRate / 2.0);
    }
  }
  EXPECT_EQ(DefaultPairing().size(), 6u);
}

TEST(Corpus, ScriptsAreWellFormed) {
  const std::size_t n = std::llround(kWordSeconds * kDefaultSampleRate);
  auto scripts = MakeWordScripts(40, 9, kDefaultSampleRate);
  ASSERT_EQ(scripts.size(), 40u);
  std::set<std::string> ids;
  for (const auto& s : scripts) {
    ids.insert(s.word_id);
    ASSERT_GE(s.segments.size(), 2u);
    ASSERT_LE(s.segments.size(), 4u);
    EXPECT_EQ(s.segments.front().start, 0u);
    EXPECT_EQ(s.segments.back().end, n);
    bool vowel = false;
    for (std::size_t k = 0; k < s.segments.size(); ++k) {
      EXPECT_LT(s.segments[k].start, s.segments[k].end);
      if (k > 0) {
        EXPECT_EQ(s.segments[k].start, s.segments[k - 1].end);
      }
      vowel = vowel || IsVowel(s.segments[k].symbol);
    }
    EXPECT_TRUE(vowel);
  }
  EXPECT_EQ(ids.size(), 40u);
}

TEST(Corpus, GeneratedFilesAreDeterministicAndParallel) {
  ScratchDir a("corpus"), b("corpus");
  auto specs = DefaultSpeakers();
  auto ma = GenerateSyntheticCorpus(specs, 4, 11, a.path());
  GenerateSyntheticCorpus(specs, 4, 11, b.path());
  EXPECT_EQ(Slurp(a.path() / "manifest.json"), Slurp(b.path() / "manifest.json"));
  const std::size_t n = std::llround(kWordSeconds * kDefaultSampleRate);
  for (const auto& sp : ma.speakers) {
    ASSERT_EQ(sp.utterances.size(), 4u);
    for (const auto& u : sp.utterances) {
      auto rel = std::filesystem::relative(u.wav_path, a.path());
      EXPECT_EQ(Slurp(u.wav_path), Slurp(b.path() / rel));
      auto w = LoadWav(u.wav_path);
      EXPECT_EQ(w.size(), n);
      EXPECT_EQ(w.sample_rate, kDefaultSampleRate);
      EXPECT_FALSE(u.labels.empty());
    }
  }
  auto loaded = LoadManifest(a.path() / "manifest.json");
  EXPECT_EQ(loaded.SharedWords("male1", "female1").size(), 4u);
  EXPECT_EQ(loaded.pairing.size(), 6u);
}

TEST(Corpus, SpeakersMirrorTablePitches) {
  ScratchDir dir("corpus");
  auto specs = DefaultSpeakers();
  // enough words for the per-word intonation slopes to average out
  auto m = GenerateSyntheticCorpus(specs, 40, 3, dir.path());
  for (const auto& spec : specs) {
    std::vector<double> f0;
    for (const auto& u : m.Speaker(spec.id).utterances) {
      auto w = LoadWav(u.wav_path);
      auto t = EstimatePitch(w, FrameGeometry(w.size(), w.sample_rate));
      for (std::size_t i = 0; i < t.size(); ++i) {
        if (t.voiced[i]) f0.push_back(t.f0[i]);
      }
    }
    ASSERT_FALSE(f0.empty());
    std::sort(f0.begin(), f0.end());
    EXPECT_NEAR(f0[f0.size() / 2], spec.base_f0, 0.03 * spec.base_f0) << spec.id;
    // octave slips cluster where the analysis span reaches into a consonant
    const auto gross = std::count_if(f0.begin(), f0.end(),
                                     [&](double v) { return std::abs(v / spec.base_f0 - 1.0) > 0.2; });
    EXPECT_LT(static_cast<double>(gross), 0.05 * static_cast<double>(f0.size())) << spec.id;
  }
}

TEST(Corpus, BadSpec) {
  ScratchDir dir("corpus");
  EXPECT_EQ(CodeOf([&] { GenerateSyntheticCorpus(DefaultSpeakers(), 1, 1, dir.path()); }),
            ErrorCode::kBadSpec);
  auto spec = DefaultSpeakers()[0];
  spec.base_f0 = 20.0;
  EXPECT_EQ(CodeOf([&] { spec.Validate(kDefaultSampleRate); }), ErrorCode::kBadSpec);
}

TEST(Manifest, SplitIsDisjointAndOrderIndependent) {
  std::vector<std::string> words;
  for (int i = 0; i < 100; ++i) words.push_back("w" + std::to_string(1000 + i));
  auto split = SplitWords(words, 0.8);
  EXPECT_EQ(split.train.size(), 80u);
  EXPECT_EQ(split.eval.size(), 20u);
  std::set<std::string> train(split.train.begin(), split.train.end());
  for (const auto& w : split.eval) EXPECT_EQ(train.count(w), 0u);
  std::reverse(words.begin(), words.end());
  auto again = SplitWords(words, 0.8);
  EXPECT_EQ(again.train, split.train);
  EXPECT_EQ(again.eval, split.eval);
}

TEST(Manifest, Errors) {
  ScratchDir dir("manifest");
  EXPECT_EQ(CodeOf([&] { LoadManifest(dir.path() / "none.json"); }), ErrorCode::kNotFound);
  std::ofstream(dir.path() / "bad.json") << "{\"sample_rate\": 11025, \"speakers\": [{\"id\": \"a\", "
                                            "\"utterances\": [{\"word_id\": \"w\", \"wav_path\": \"x.wav\"}]}]}";
  EXPECT_EQ(CodeOf([&] { LoadManifest(dir.path() / "bad.json"); }), ErrorCode::kManifestError);
  EXPECT_EQ(CodeOf([&] { LoadManifest(dir.path() / "bad.json", false).Speaker("zz"); }),
            ErrorCode::kManifestError);
}

}  // namespace
}  // namespace lpvc
