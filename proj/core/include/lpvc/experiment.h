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

#ifndef LPVC_EXPERIMENT_H_
#define LPVC_EXPERIMENT_H_

// Experiment harness: noise sweep, prosody ablation, phoneme contribution.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lpvc/evaluation.h"
#include "lpvc/mapping.h"
#include "lpvc/pipeline.h"

namespace lpvc {

using SpeakerPair = std::pair<std::string, std::string>;

// Trained maps keyed by (source, target), filled on demand.
class ModelStore {
 public:
  explicit ModelStore(CorpusCache& cache) : cache_(cache) {}

  const SpeakerMap& Get(const std::string& source, const std::string& target);
  void Put(const std::string& source, const std::string& target, SpeakerMap map);

 private:
  CorpusCache& cache_;
  std::map<SpeakerPair, SpeakerMap> maps_;
};

struct NoiseRow {
  double level_db = 0.0;
  std::uint64_t seed = 0;
  SuccessFragment all;
  SuccessFragment voiced;
  SuccessFragment unvoiced;
};

struct NoiseSweepResult {
  std::string source, target;
  std::vector<NoiseRow> rows;

  const NoiseRow& Row(double level_db, std::uint64_t seed) const;
  // success(lowest level) - success(level) for the given seed and class.
  double Degradation(double level_db, std::uint64_t seed, FrameClass cls) const;
};

NoiseSweepResult NoiseSweep(CorpusCache& cache, const std::string& source, const std::string& target,
                            const std::vector<double>& levels_db,
                            const std::vector<std::uint64_t>& seeds);

struct ProsodyRow {
  std::string source, target;
  bool prosody = false;
  double pitch_rms_hz = 0.0;       // mean over evaluation words
  double mean_f0_hz = 0.0;         // converted output, voiced frames pooled
  double target_mean_f0_hz = 0.0;  // target recordings, voiced frames pooled
  double success_pct = 0.0;        // re-analysed output waveform
};

std::vector<ProsodyRow> ProsodyAblation(CorpusCache& cache, ModelStore& models,
                                        const std::vector<SpeakerPair>& pairs);

// Source/target cepstral distance per phoneme symbol over all shared words.
PhonemeTable PhonemeContribution(CorpusCache& cache, const std::string& source,
                                 const std::string& target);

std::string NoiseSweepCsv(const NoiseSweepResult& r);
std::string ProsodyCsv(const std::vector<ProsodyRow>& rows);

struct ScenarioOptions {
  std::string source = "male1";
  std::string target = "female1";
  std::vector<double> noise_levels_db{0.0, 20.0, 40.0};
  std::vector<std::uint64_t> seeds{1, 2, 3};
  std::vector<SpeakerPair> prosody_pairs{
      {"male1", "female1"}, {"male2", "female2"}, {"female1", "male1"}, {"female2", "male2"}};
};

// Runs a named scenario (noise_sweep, prosody_ablation, phoneme_contribution)
// and writes its CSV and SVG files into out_dir. Returns the written paths.
std::vector<std::filesystem::path> RunScenario(CorpusCache& cache, std::string_view scenario,
                                               const std::filesystem::path& out_dir,
                                               const ScenarioOptions& opts = {});

}  // namespace lpvc

#endif  // LPVC_EXPERIMENT_H_
