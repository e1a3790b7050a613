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

// lpvc: command-line driver for training, conversion, evaluation and
// experiments.

#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "lpvc/corpus.h"
#include "lpvc/error.h"
#include "lpvc/experiment.h"
#include "lpvc/manifest.h"
#include "lpvc/mapping.h"
#include "lpvc/pipeline.h"
#include "lpvc/report.h"
#include "lpvc/wav.h"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

struct Common {
  std::string manifest;
  std::string config;
  std::string source;
  std::string target;
  std::string model;
  std::string out;
  std::optional<int> order;
  std::optional<std::uint64_t> seed;
};

lpvc::PipelineConfig BuildConfig(const Common& c, int manifest_order) {
  lpvc::PipelineConfig cfg;
  if (!c.config.empty()) cfg = lpvc::LoadPipelineConfig(c.config);
  if (manifest_order > 0) cfg.analysis.order = manifest_order;
  if (c.order) cfg.analysis.order = *c.order;
  if (c.seed) cfg.train.seed = *c.seed;
  cfg.Validate();
  return cfg;
}

void PrintLog(const lpvc::SpeakerMap& map) {
  for (std::size_t e = 0; e < map.train_log.size(); ++e) {
    const double val = e < map.validation_log.size() ? map.validation_log[e] : 0.0;
    std::printf("epoch %3zu  train_mse %.6e  val_mse %.6e\n", e, map.train_log[e], val);
  }
}

int GenCorpus(const std::string& out, std::size_t words, std::uint64_t seed, int fs) {
  const lpvc::Manifest m = lpvc::GenerateSyntheticCorpus(lpvc::DefaultSpeakers(fs), words, seed, out, fs);
  std::printf("wrote %zu speakers x %zu words to %s\n", m.speakers.size(), words,
              (m.base_dir / "manifest.json").string().c_str());
  return 0;
}

int TrainCmd(const Common& c, std::optional<double> noise_db) {
  const lpvc::Manifest m = lpvc::LoadManifest(c.manifest);
  const lpvc::PipelineConfig cfg = BuildConfig(c, m.order);
  lpvc::CorpusCache cache(m, cfg);
  const lpvc::SpeakerMap map = lpvc::TrainSpeakerPair(cache, c.source, c.target, noise_db);
  PrintLog(map);
  lpvc::SaveMap(map, c.model);
  std::printf("model written to %s\n", c.model.c_str());
  return 0;
}

int ConvertCmd(const Common& c, const std::string& in, const std::string& prosody,
               const std::string& target_wav, std::optional<double> target_f0) {
  lpvc::PipelineConfig cfg = BuildConfig(c, 0);
  const lpvc::SpeakerMap map = lpvc::LoadMap(c.model);
  if (!c.order) cfg.analysis.order = map.input_dim();
  lpvc::CheckModelOrder(map, cfg.analysis.order);
  const lpvc::Waveform wave = lpvc::LoadWav(in);
  const lpvc::UtteranceAnalysis analysis = lpvc::AnalyzeUtterance(wave, cfg.analysis);

  std::optional<lpvc::Waveform> target;
  std::optional<lpvc::UtteranceAnalysis> target_analysis;
  if (!target_wav.empty()) target = lpvc::LoadWav(target_wav);
  if (cfg.residual == lpvc::ResidualSource::kTarget) {
    if (!target) throw lpvc::Error(lpvc::ErrorCode::kBadSpec, "target residual needs --target-wav");
    target_analysis = lpvc::AnalyzeUtterance(*target, cfg.analysis);
  }
  const lpvc::UtteranceAnalysis* residual_from = target_analysis ? &*target_analysis : nullptr;
  if (prosody == "off") {
    lpvc::SaveWav(lpvc::ConvertAnalysis(map, analysis, residual_from).waveform, c.out);
    std::printf("converted %s -> %s\n", in.c_str(), c.out.c_str());
    return 0;
  }

  const lpvc::FrameGrid grid =
      lpvc::FrameGeometry(wave.size(), wave.sample_rate, cfg.analysis.frame_ms, cfg.analysis.overlap_ms);
  std::optional<lpvc::PitchTrack> track;
  if (target) {
    if (target->size() != wave.size()) {
      throw lpvc::Error(lpvc::ErrorCode::kLengthMismatch, "target wav differs in length from the input");
    }
    track = lpvc::EstimatePitch(*target, grid, cfg.pitch);
  } else if (!target_f0) {
    throw lpvc::Error(lpvc::ErrorCode::kBadSpec, "--prosody on needs --target-wav or --target-f0");
  }
  lpvc::Waveform out;
  if (cfg.prosody_domain == lpvc::ProsodyDomain::kResidual) {
    if (!track) {
      if (!(*target_f0 >= cfg.pitch.min_f0 && *target_f0 <= cfg.pitch.max_f0)) {
        throw lpvc::Error(lpvc::ErrorCode::kBadSpec, "target f0 outside the pitch search range");
      }
      track = lpvc::ConstantTrack(lpvc::EstimatePitch(wave, grid, cfg.pitch), *target_f0);
    }
    out = lpvc::ConvertWithResidualProsody(map, analysis, *track, cfg.pitch, residual_from);
  } else {
    out = lpvc::ConvertAnalysis(map, analysis, residual_from).waveform;
    out = track ? lpvc::ApplyProsody(out, *track, cfg.pitch, cfg.analysis)
                : lpvc::ApplyProsody(out, *target_f0, cfg.pitch, cfg.analysis);
  }
  lpvc::SaveWav(out, c.out);
  std::printf("converted %s -> %s\n", in.c_str(), c.out.c_str());
  return 0;
}

int EvaluateCmd(const Common& c, const std::string& mode_name, std::optional<double> noise_db,
                bool non_parallel) {
  const lpvc::Manifest m = lpvc::LoadManifest(c.manifest);
  const lpvc::PipelineConfig cfg = BuildConfig(c, m.order);
  const lpvc::EvalMode mode = lpvc::ParseEvalMode(mode_name);
  std::optional<lpvc::SpeakerMap> map;
  if (mode == lpvc::EvalMode::kModel) {
    if (c.model.empty()) throw lpvc::Error(lpvc::ErrorCode::kBadSpec, "--model is required in model mode");
    map = lpvc::LoadMap(c.model);
  }
  lpvc::CorpusCache cache(m, cfg);
  const lpvc::EvalReport report = lpvc::EvaluatePair(
      cache, map ? &*map : nullptr, c.source, c.target, mode, {}, noise_db,
      non_parallel ? lpvc::Pairing::kNonParallel : lpvc::Pairing::kParallel);
  lpvc::WriteEvalReport(report, c.out, c.source + "_" + c.target);
  std::fputs(lpvc::SummaryText(report).c_str(), stdout);
  return 0;
}

int ExperimentCmd(const Common& c, const std::string& scenario) {
  const lpvc::Manifest m = lpvc::LoadManifest(c.manifest);
  const lpvc::PipelineConfig cfg = BuildConfig(c, m.order);
  lpvc::CorpusCache cache(m, cfg);
  lpvc::ScenarioOptions opts;
  if (!c.source.empty()) opts.source = c.source;
  if (!c.target.empty()) opts.target = c.target;
  if (c.seed) opts.seeds = {*c.seed, *c.seed + 1, *c.seed + 2};
  for (const auto& p : lpvc::RunScenario(cache, scenario, c.out, opts)) {
    std::printf("wrote %s\n", p.string().c_str());
  }
  return 0;
}

int ExitCodeFor(const lpvc::Error& e) {
  switch (lpvc::CategoryOf(e.code())) {
    case lpvc::ErrorCategory::kUsage: return kExitUsage;
    case lpvc::ErrorCategory::kData: return kExitData;
    case lpvc::ErrorCategory::kNumeric: return kExitNumeric;
  }
  return kExitData;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lpvc: LPC voice conversion toolkit"};
  app.require_subcommand(1);
  Common c;

  std::size_t words = 100;
  std::uint64_t corpus_seed = 1;
  int sample_rate = lpvc::kDefaultSampleRate;
  auto* gen = app.add_subcommand("gen-corpus", "Generate the synthetic four-speaker corpus");
  gen->add_option("--out", c.out, "Output directory")->required();
  gen->add_option("--words", words, "Number of words")->check(CLI::Range(2, 100000));
  gen->add_option("--seed", corpus_seed, "Corpus seed");
  gen->add_option("--sample-rate", sample_rate, "Sample rate in Hz")->check(CLI::Range(8000, 96000));

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", c.config, "JSON configuration file")->check(CLI::ExistingFile);
    sub->add_option("--order", c.order, "LPC order override");
    sub->add_option("--seed", c.seed, "Training seed override");
  };

  std::optional<double> noise_db;
  auto* train = app.add_subcommand("train", "Train a source-to-target spectral map");
  train->add_option("--manifest", c.manifest, "Corpus manifest")->required();
  train->add_option("--source", c.source, "Source speaker id")->required();
  train->add_option("--target", c.target, "Target speaker id")->required();
  train->add_option("--model", c.model, "Output model file")->required();
  train->add_option("--noise-db", noise_db, "Training noise level above the floor (dB)");
  add_common(train);

  std::string in_wav, prosody = "off", target_wav;
  std::optional<double> target_f0;
  auto* convert = app.add_subcommand("convert", "Convert one utterance");
  convert->add_option("--model", c.model, "Model file")->required();
  convert->add_option("--in", in_wav, "Input WAV")->required();
  convert->add_option("--out", c.out, "Output WAV")->required();
  convert->add_option("--prosody", prosody, "Prosody transfer")->check(CLI::IsMember({"on", "off"}));
  auto* tw = convert->add_option("--target-wav", target_wav, "Target recording supplying the pitch contour");
  convert->add_option("--target-f0", target_f0, "Constant target f0 in Hz")->excludes(tw);
  add_common(convert);

  std::string mode = "model";
  auto* evaluate = app.add_subcommand("evaluate", "Evaluate a map on the held-out words");
  evaluate->add_option("--manifest", c.manifest, "Corpus manifest")->required();
  evaluate->add_option("--model", c.model, "Model file");
  evaluate->add_option("--source", c.source, "Source speaker id")->required();
  evaluate->add_option("--target", c.target, "Target speaker id")->required();
  evaluate->add_option("--out", c.out, "Report directory")->required();
  evaluate->add_option("--mode", mode, "model | oracle-target | passthrough")
      ->check(CLI::IsMember({"model", "oracle-target", "passthrough"}));
  evaluate->add_option("--noise-db", noise_db, "Noise level above the floor for the evaluation recordings (dB)");
  bool non_parallel = false;
  evaluate->add_flag("--non-parallel", non_parallel,
                     "Score each word against a different target word, aligned by index (heuristic)");
  add_common(evaluate);

  std::string scenario;
  auto* experiment = app.add_subcommand("experiment", "Run an experiment scenario");
  experiment->add_option("--manifest", c.manifest, "Corpus manifest")->required();
  experiment->add_option("--scenario", scenario, "noise_sweep | prosody_ablation | phoneme_contribution")
      ->required();
  experiment->add_option("--out", c.out, "Output directory")->required();
  experiment->add_option("--source", c.source, "Source speaker id");
  experiment->add_option("--target", c.target, "Target speaker id");
  add_common(experiment);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*gen) return GenCorpus(c.out, words, corpus_seed, sample_rate);
    if (*train) return TrainCmd(c, noise_db);
    if (*convert) return ConvertCmd(c, in_wav, prosody, target_wav, target_f0);
    if (*evaluate) return EvaluateCmd(c, mode, noise_db, non_parallel);
    if (*experiment) return ExperimentCmd(c, scenario);
  } catch (const lpvc::Error& e) {
    std::fprintf(stderr, "lpvc: %s: %s\n", lpvc::ErrorCodeName(e.code()), e.what());
    return ExitCodeFor(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "lpvc: %s\n", e.what());
    return kExitData;
  }
  return kExitUsage;
}
