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


#include "lpvc/pipeline.h"

#include <algorithm>
#include <cmath>
#include <memory>

#include <gtest/gtest.h>

#include "common/error_code.h"
#include "common/oracles.h"
#include "lpvc/corpus.h"
#include "lpvc/experiment.h"
#include "lpvc/report.h"

namespace lpvc {
namespace {

using testing::CodeOf;

class SmallCorpus : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new testing::ScratchDir("pipeline");
    manifest_ = new Manifest(GenerateSyntheticCorpus(DefaultSpeakers(), 8, 21, dir_->path()));
  }
  static void TearDownTestSuite() {
    delete manifest_;
    delete dir_;
  }

  static PipelineConfig Quick() {
    PipelineConfig cfg;
    cfg.train.max_epochs = 3;
    cfg.train.max_pairs = 300;
    return cfg;
  }

  static testing::ScratchDir* dir_;
  static Manifest* manifest_;
};

testing::ScratchDir* SmallCorpus::dir_ = nullptr;
Manifest* SmallCorpus::manifest_ = nullptr;

TEST(PipelineConfig, ParseAndReject) {
  auto cfg = ParsePipelineConfig(
      R"({"analysis": {"order": 16}, "train": {"max_epochs": 7, "seed": 9},
          "train_fraction": 0.75, "residual": "target"})");
  EXPECT_EQ(cfg.analysis.order, 16);
  EXPECT_EQ(cfg.train.max_epochs, 7);
  EXPECT_EQ(cfg.train.seed, 9u);
  EXPECT_EQ(cfg.train_fraction, 0.75);
  EXPECT_EQ(cfg.residual, ResidualSource::kTarget);
  EXPECT_EQ(ParsePipelineConfig("{}").analysis.order, 24);
  EXPECT_EQ(CodeOf([] { ParsePipelineConfig(R"({"trian": {}})"); }), ErrorCode::kBadSpec);
  EXPECT_EQ(CodeOf([] { ParsePipelineConfig(R"({"train": {"epochs": 3}})"); }), ErrorCode::kBadSpec);
  EXPECT_EQ(CodeOf([] { ParsePipelineConfig(R"({"residual": "both"})"); }), ErrorCode::kBadSpec);
  EXPECT_EQ(ParsePipelineConfig("{}").prosody_domain, ProsodyDomain::kOutput);
  EXPECT_EQ(ParsePipelineConfig(R"({"prosody_domain": "residual"})").prosody_domain, ProsodyDomain::kResidual);
  EXPECT_EQ(CodeOf([] { ParsePipelineConfig(R"({"prosody_domain": "lpc"})"); }), ErrorCode::kBadSpec);
  EXPECT_EQ(CodeOf([] { ParsePipelineConfig("not json"); }), ErrorCode::kBadSpec);
}

TEST(EvalModeNames, RoundTrip) {
  for (auto m : {EvalMode::kModel, EvalMode::kOracleTarget, EvalMode::kPassthrough}) {
    EXPECT_EQ(ParseEvalMode(EvalModeName(m)), m);
  }
  EXPECT_EQ(CodeOf([] { ParseEvalMode("best"); }), ErrorCode::kBadSpec);
}

TEST_F(SmallCorpus, PairFramesSkipSilence) {
  CorpusCache cache(*manifest_, Quick());
  const auto& words = manifest_->SharedWords("male1", "female1");
  const auto& a = cache.Analysis("male1", words[0]);
  const auto& b = cache.Analysis("female1", words[0]);
  auto pairs = PairFrames(a, b);
  std::size_t valid = 0;
  for (std::size_t i = 0; i < a.frames.size(); ++i) valid += !a.frames[i].silent && !b.frames[i].silent;
  EXPECT_EQ(pairs.size(), valid);
  for (const auto& p : pairs) {
    EXPECT_EQ(p.source.size(), 24u);
    EXPECT_EQ(p.target.size(), 24u);
  }
}

TEST_F(SmallCorpus, SplitMatchesSortedWords) {
  auto split = PairSplit(*manifest_, "male1", "female1", 0.8);
  EXPECT_EQ(split.train.size() + split.eval.size(), 8u);
  EXPECT_FALSE(split.eval.empty());
  EXPECT_EQ(CodeOf([&] { PairSplit(*manifest_, "male1", "nobody", 0.8); }), ErrorCode::kManifestError);
}

TEST_F(SmallCorpus, BoundModes) {
  CorpusCache cache(*manifest_, Quick());
  auto upper = EvaluatePair(cache, nullptr, "male1", "female1", EvalMode::kOracleTarget);
  EXPECT_EQ(upper.aggregate.success_pct, 100.0);
  auto lower = EvaluatePair(cache, nullptr, "male1", "female1", EvalMode::kPassthrough);
  EXPECT_LT(std::abs(lower.aggregate.success_pct), 1.0);
  EXPECT_EQ(lower.words.size(), PairSplit(*manifest_, "male1", "female1", 0.8).eval.size());
}

TEST_F(SmallCorpus, TrainConvertEvaluate) {
  CorpusCache cache(*manifest_, Quick());
  auto map = TrainSpeakerPair(cache, "male1", "female1");
  EXPECT_EQ(map.input_dim(), 24);
  EXPECT_EQ(SerializeMap(map), SerializeMap(TrainSpeakerPair(cache, "male1", "female1")));

  const auto split = PairSplit(*manifest_, "male1", "female1", 0.8);
  const auto& src = cache.Analysis("male1", split.eval[0]);
  auto conv = ConvertAnalysis(map, src);
  EXPECT_EQ(conv.frames.size(), src.frames.size());
  EXPECT_EQ(conv.waveform.size(), cache.Wave("male1", split.eval[0]).size());
  for (double v : conv.waveform.samples) ASSERT_TRUE(std::isfinite(v));

  auto report = EvaluatePair(cache, &map, "male1", "female1");
  EXPECT_EQ(report.words.size(), split.eval.size());
  EXPECT_GT(report.aggregate.n_frames, 0u);
  EXPECT_FALSE(report.phonemes_source_target.empty());

  auto small = map;
  small.w1 = small.w1.leftCols(12).eval();
  small.in_mean = small.in_mean.head(12).eval();
  small.in_std = small.in_std.head(12).eval();
  EXPECT_EQ(CodeOf([&] { CheckModelOrder(small, 24); }), ErrorCode::kModelMismatch);
}

TEST_F(SmallCorpus, ProsodyOnConvertedOutput) {
  CorpusCache cache(*manifest_, Quick());
  const auto split = PairSplit(*manifest_, "male1", "female1", 0.8);
  const std::string word = split.eval[0];
  // Apply the target's own track to the source recording: the pitch moves
  // toward the female speaker.
  const Waveform& src = cache.Wave("male1", word);
  const PitchTrack& tgt = cache.Track("female1", word);
  auto out = ApplyProsody(src, tgt, cache.config().pitch, cache.config().analysis);
  auto t = EstimatePitch(out, FrameGeometry(out.size(), out.sample_rate));
  EXPECT_NEAR(t.MeanVoicedF0(), tgt.MeanVoicedF0(), 0.1 * tgt.MeanVoicedF0());
  auto flat = ApplyProsody(src, 200.0, cache.config().pitch, cache.config().analysis);
  auto tf = EstimatePitch(flat, FrameGeometry(flat.size(), flat.sample_rate));
  EXPECT_NEAR(tf.MeanVoicedF0(), 200.0, 20.0);
}

TEST_F(SmallCorpus, IdentityModelIsNearlyTransparent) {
  CorpusCache cache(*manifest_, Quick());
  const auto split = PairSplit(*manifest_, "male1", "female1", 0.8);
  std::vector<FeaturePair> pairs;
  for (const auto& w : split.train) {
    const auto& a = cache.Analysis("male1", w);
    auto p = PairFrames(a, a);
    pairs.insert(pairs.end(), p.begin(), p.end());
  }
  TrainConfig cfg;
  cfg.mse_goal = 1e-9;
  cfg.max_pairs = 400;
  auto map = Train(pairs, cfg);
  for (const auto& w : split.eval) {
    const Waveform& x = cache.Wave("male1", w);
    auto y = ConvertAnalysis(map, cache.Analysis("male1", w)).waveform;
    ASSERT_EQ(y.size(), x.size());
    double sig = 0.0, err = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      sig += x.samples[i] * x.samples[i];
      err += (x.samples[i] - y.samples[i]) * (x.samples[i] - y.samples[i]);
    }
    EXPECT_GT(10.0 * std::log10(sig / err), 35.0) << w;
  }
}

TEST_F(SmallCorpus, ProsodyWithOwnTrackIsNearIdentity) {
  CorpusCache cache(*manifest_, Quick());
  const auto split = PairSplit(*manifest_, "male1", "female1", 0.8);
  auto map = TrainSpeakerPair(cache, "male1", "female1");
  auto conv = ConvertAnalysis(map, cache.Analysis("male1", split.eval[0])).waveform;
  const auto& pc = cache.config().pitch;
  auto own = EstimatePitch(conv, FrameGeometry(conv.size(), conv.sample_rate), pc);
  auto out = ApplyProsody(conv, own, pc, cache.config().analysis);
  ASSERT_EQ(out.size(), conv.size());
  EXPECT_LT(UtteranceMcd(AnalyzeUtterance(conv).frames, AnalyzeUtterance(out).frames), 0.5);
}

TEST_F(SmallCorpus, ResidualDomainProsody) {
  // tanh(eps x) / eps ~ x: filters stay the source's own, so the pitch
  // oracle sees only the excitation change
  auto map = SpeakerMap::Zero(24, 50, 24);
  const double eps = 1e-3;
  for (Eigen::Index i = 0; i < 24; ++i) {
    map.w1(i, i) = eps;
    map.w2(i, i) = 1.0 / eps;
  }
  map.in_mean.setZero();
  map.out_mean.setZero();
  map.in_std.setOnes();
  map.out_std.setOnes();

  CorpusCache cache(*manifest_, Quick());
  const std::string word = PairSplit(*manifest_, "male1", "female1", 0.8).eval[0];
  const auto& src = cache.Analysis("male1", word);
  const PitchTrack& tgt = cache.Track("female1", word);
  const auto geometry = [](const Waveform& w) { return FrameGeometry(w.size(), w.sample_rate); };
  auto plain = ConvertAnalysis(map, src).waveform;
  EXPECT_NEAR(EstimatePitch(plain, geometry(plain)).MeanVoicedF0(), cache.Track("male1", word).MeanVoicedF0(),
              0.01 * cache.Track("male1", word).MeanVoicedF0());

  auto out = ConvertWithResidualProsody(map, src, tgt, cache.config().pitch);
  ASSERT_EQ(out.size(), cache.Wave("male1", word).size());
  for (double v : out.samples) ASSERT_TRUE(std::isfinite(v));
  EXPECT_NEAR(EstimatePitch(out, geometry(out)).MeanVoicedF0(), tgt.MeanVoicedF0(), 0.1 * tgt.MeanVoicedF0());
}

TEST_F(SmallCorpus, NonParallelPairing) {
  CorpusCache cache(*manifest_, Quick());
  const auto eval = PairSplit(*manifest_, "male1", "female1", 0.8).eval;
  ASSERT_GE(eval.size(), 2u);
  auto upper = EvaluatePair(cache, nullptr, "male1", "female1", EvalMode::kOracleTarget, {}, std::nullopt,
                            Pairing::kNonParallel);
  EXPECT_EQ(upper.pairing, Pairing::kNonParallel);
  EXPECT_EQ(upper.aggregate.success_pct, 100.0);
  ASSERT_EQ(upper.words.size(), eval.size());
  EXPECT_EQ(upper.words[0].word_id, eval[0] + ":" + eval[1]);
  EXPECT_EQ(upper.words.back().word_id, eval.back() + ":" + eval[0]);
  EXPECT_TRUE(upper.phonemes_source_target.empty());
  EXPECT_NE(SummaryText(upper).find("non-parallel"), std::string::npos);
  EXPECT_EQ(SummaryText(EvaluatePair(cache, nullptr, "male1", "female1", EvalMode::kPassthrough))
                .find("non-parallel"),
            std::string::npos);

  auto map = TrainSpeakerPair(cache, "male1", "female1");
  auto model = EvaluatePair(cache, &map, "male1", "female1", EvalMode::kModel, {}, std::nullopt,
                            Pairing::kNonParallel);
  EXPECT_TRUE(std::isfinite(model.aggregate.success_pct));
  EXPECT_EQ(CodeOf([&] {
              EvaluatePair(cache, nullptr, "male1", "female1", EvalMode::kPassthrough, {eval[0]},
                           std::nullopt, Pairing::kNonParallel);
            }),
            ErrorCode::kManifestError);
}

TEST_F(SmallCorpus, ReportsAreWellFormed) {
  CorpusCache cache(*manifest_, Quick());
  auto report = EvaluatePair(cache, nullptr, "male1", "female1", EvalMode::kPassthrough);
  auto csv = UtteranceCsv(report);
  EXPECT_EQ(csv.rfind("word_id,mcd_source_target_db,mcd_converted_target_db,success_pct,n_frames\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), static_cast<long>(report.words.size() + 1));
  auto classes = ClassCsv(report);
  EXPECT_NE(classes.find("\nvoiced,"), std::string::npos);
  EXPECT_NE(classes.find("\nunvoiced,"), std::string::npos);
  EXPECT_EQ(PhonemeCsv(report.phonemes_source_target).rfind("symbol,mean_db,n_frames", 0), 0u);

  testing::ScratchDir out("report");
  WriteEvalReport(report, out.path(), "r");
  for (const char* suffix : {"_utterances.csv", "_classes.csv", "_phonemes.csv", "_summary.txt"}) {
    EXPECT_TRUE(std::filesystem::exists(out.path() / ("r" + std::string(suffix)))) << suffix;
  }
}

TEST_F(SmallCorpus, PhonemeContributionIdentityIsZero) {
  CorpusCache cache(*manifest_, Quick());
  auto table = PhonemeContribution(cache, "male1", "male1");
  ASSERT_FALSE(table.empty());
  for (const auto& [sym, stat] : table) EXPECT_EQ(stat.mean_db(), 0.0) << sym;
}

TEST_F(SmallCorpus, UnknownScenario) {
  CorpusCache cache(*manifest_, Quick());
  testing::ScratchDir out("scenario");
  EXPECT_EQ(CodeOf([&] { RunScenario(cache, "nope", out.path()); }), ErrorCode::kScenarioUnknown);
}

// Default configuration on the full-size corpus.
TEST(FullCorpus, TrainAndEvaluate) {
  testing::ScratchDir dir("full");
  auto manifest = GenerateSyntheticCorpus(DefaultSpeakers(), 100, 1, dir.path());
  CorpusCache cache(manifest, PipelineConfig{});
  auto map = TrainSpeakerPair(cache, "male1", "female1");
  ASSERT_EQ(map.train_log.size(), map.validation_log.size());
  const auto best = static_cast<std::size_t>(
      std::min_element(map.validation_log.begin(), map.validation_log.end()) - map.validation_log.begin());
  EXPECT_LT(map.train_log[best], 1.5 * map.validation_log[best]);

  auto report = EvaluatePair(cache, &map, "male1", "female1");
  EXPECT_EQ(report.words.size(), 20u);
  EXPECT_GT(report.aggregate.success_pct, 0.0);
  auto csv = UtteranceCsv(report);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 21);
}

TEST(Charts, Deterministic) {
  std::vector<Series> s{{"on", {1.0, 2.5, -0.5}}, {"off", {0.5, 1.0, 2.0}}};
  std::vector<std::string> cats{"a", "b", "c"};
  auto bar = BarChartSvg("t", cats, s, "dB");
  EXPECT_EQ(bar, BarChartSvg("t", cats, s, "dB"));
  EXPECT_EQ(bar.rfind("<svg", 0), 0u);
  auto line = LineChartSvg("t", cats, s, "%");
  EXPECT_EQ(line, LineChartSvg("t", cats, s, "%"));
  EXPECT_NE(line.find("</svg>"), std::string::npos);
  EXPECT_EQ(FormatNumber(std::nan("")), "nan");
  EXPECT_EQ(FormatNumber(1.5), "1.500000");
}

}  // namespace
}  // namespace lpvc
