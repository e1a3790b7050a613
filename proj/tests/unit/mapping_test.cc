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


#include "lpvc/mapping.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "common/error_code.h"
#include "common/oracles.h"
#include "lpvc/polynomial.h"

namespace lpvc {
namespace {

using testing::CodeOf;

SpeakerMap RandomMap(int in, int hid, int out, std::uint32_t seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  SpeakerMap m = SpeakerMap::Zero(in, hid, out);
  auto fill = [&](auto& mat) {
    for (Eigen::Index i = 0; i < mat.size(); ++i) mat.data()[i] = u(gen);
  };
  fill(m.w1);
  fill(m.b1);
  fill(m.w2);
  fill(m.b2);
  fill(m.in_mean);
  fill(m.out_mean);
  for (Eigen::Index i = 0; i < in; ++i) m.in_std(i) = 0.5 + std::abs(u(gen));
  for (Eigen::Index i = 0; i < out; ++i) m.out_std(i) = 0.5 + std::abs(u(gen));
  return m;
}

Eigen::MatrixXd RandomMatrix(Eigen::Index r, Eigen::Index c, std::uint32_t seed) {
  auto v = testing::RandomVector(static_cast<std::size_t>(r * c), seed);
  return Eigen::Map<Eigen::MatrixXd>(v.data(), r, c);
}

TEST(Forward, ZeroNetwork) {
  auto m = SpeakerMap::Zero(24, 50, 24);
  auto y = Forward(m, testing::RandomVector(24, 1));
  for (double v : y) EXPECT_EQ(v, 0.0);
}

TEST(Forward, BiasPassThrough) {
  auto m = SpeakerMap::Zero(24, 50, 24);
  for (int k = 0; k < 24; ++k) {
    m.b2(k) = 0.1 * k;
    m.out_mean(k) = 1.0;
    m.out_std(k) = 2.0;
  }
  auto y = Forward(m, testing::RandomVector(24, 2));
  for (int k = 0; k < 24; ++k) EXPECT_DOUBLE_EQ(y[static_cast<std::size_t>(k)], 0.1 * k * 2.0 + 1.0);
}

TEST(Forward, MatchesScalarLoops) {
  for (std::uint32_t seed = 0; seed < 10; ++seed) {
    auto m = RandomMap(24, 50, 24, seed);
    auto x = testing::RandomVector(24, seed + 99);
    auto y = Forward(m, x);
    for (int k = 0; k < 24; ++k) {
      double acc = m.b2(k);
      for (int j = 0; j < 50; ++j) {
        double pre = m.b1(j);
        for (int i = 0; i < 24; ++i) {
          pre += m.w1(j, i) * (x[static_cast<std::size_t>(i)] - m.in_mean(i)) / m.in_std(i);
        }
        acc += m.w2(k, j) * std::tanh(pre);
      }
      EXPECT_NEAR(y[static_cast<std::size_t>(k)], acc * m.out_std(k) + m.out_mean(k), 1e-12);
    }
  }
}

TEST(Forward, ShapeAndFiniteness) {
  auto m = SpeakerMap::Zero(24, 50, 24);
  EXPECT_EQ(CodeOf([&] { Forward(m, std::vector<double>(23, 0.0)); }), ErrorCode::kShapeMismatch);
  std::vector<double> x(24, 0.0);
  x[3] = std::nan("");
  EXPECT_EQ(CodeOf([&] { Forward(m, x); }), ErrorCode::kNonFiniteInput);
}

TEST(Jacobian, CentralDifferences) {
  // 4-2-4 miniature, 100 random parameter points
  double worst = 0.0;
  for (std::uint32_t seed = 0; seed < 100; ++seed) {
    SpeakerMap m = RandomMap(4, 2, 4, seed);
    const Eigen::MatrixXd x = RandomMatrix(3, 4, seed + 500);
    const Eigen::MatrixXd jac = lm::Jacobian(m, x);
    Eigen::VectorXd theta = lm::PackParameters(m);
    constexpr double kStep = 1e-6;
    for (Eigen::Index p = 0; p < theta.size(); ++p) {
      SpeakerMap plus = m, minus = m;
      Eigen::VectorXd t = theta;
      t(p) += kStep;
      lm::UnpackParameters(t, plus);
      t(p) -= 2.0 * kStep;
      lm::UnpackParameters(t, minus);
      const Eigen::MatrixXd d =
          (lm::NormalizedForward(plus, x) - lm::NormalizedForward(minus, x)) / (2.0 * kStep);
      for (Eigen::Index s = 0; s < x.rows(); ++s) {
        for (Eigen::Index k = 0; k < 4; ++k) {
          const double a = jac(s * 4 + k, p);
          const double rel = std::abs(a - d(s, k)) / std::max(1.0, std::abs(a));
          worst = std::max(worst, rel);
        }
      }
    }
  }
  EXPECT_LT(worst, 1e-4);
}

TEST(NormalEquations, MatchExplicitJacobian) {
  SpeakerMap m = RandomMap(5, 3, 4, 17);
  const Eigen::MatrixXd x = RandomMatrix(40, 5, 18);
  const Eigen::MatrixXd y = RandomMatrix(40, 4, 19);
  lm::NormalEquations ne(m, x, y);
  const Eigen::MatrixXd jac = lm::Jacobian(m, x);
  const Eigen::MatrixXd f = lm::NormalizedForward(m, x);
  Eigen::VectorXd r(40 * 4);
  for (Eigen::Index s = 0; s < 40; ++s) {
    for (Eigen::Index k = 0; k < 4; ++k) r(s * 4 + k) = y(s, k) - f(s, k);
  }
  const Eigen::MatrixXd jtj = jac.transpose() * jac;
  EXPECT_LT((ne.DenseJtJ() - jtj).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LT((ne.Gradient() - jac.transpose() * r).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_NEAR(ne.mse(), r.squaredNorm() / static_cast<double>(r.size()), 1e-12);
  for (double lambda : {1e-3, 1e-1, 10.0}) {
    Eigen::MatrixXd damped = jtj;
    damped.diagonal().array() += lambda;
    const Eigen::VectorXd want = damped.ldlt().solve(jac.transpose() * r);
    auto got = ne.Solve(lambda);
    ASSERT_TRUE(got.has_value());
    EXPECT_LT((*got - want).cwiseAbs().maxCoeff(), 1e-8 * std::max(1.0, want.cwiseAbs().maxCoeff()));
  }
}

std::vector<FeaturePair> LinearTask(std::size_t n, std::uint32_t seed, bool identity) {
  const Eigen::MatrixXd a = RandomMatrix(24, 24, seed) * 0.3;
  std::vector<FeaturePair> pairs;
  for (std::size_t s = 0; s < n; ++s) {
    auto x = testing::RandomVector(24, seed + 1 + static_cast<std::uint32_t>(s));
    Eigen::Map<const Eigen::VectorXd> xv(x.data(), 24);
    Eigen::VectorXd y = identity ? Eigen::VectorXd(xv) : Eigen::VectorXd(a * xv);
    pairs.push_back({x, std::vector<double>(y.data(), y.data() + 24)});
  }
  return pairs;
}

TrainConfig TightConfig() {
  TrainConfig cfg;
  cfg.mse_goal = 1e-7;
  cfg.seed = 3;
  return cfg;
}

bool NonIncreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[i - 1]) return false;
  }
  return true;
}

TEST(Train, LinearMap) {
  auto pairs = LinearTask(500, 100, false);
  auto map = Train(pairs, TightConfig());
  ASSERT_FALSE(map.train_log.empty());
  EXPECT_LE(map.train_log.size() - 1, 200u);  // first entry is the untrained mse
  EXPECT_LT(map.train_log.back(), 1e-6);
  EXPECT_TRUE(NonIncreasing(map.train_log));
  double raw = 0.0;
  for (const auto& p : pairs) {
    auto y = Forward(map, p.source);
    for (std::size_t k = 0; k < y.size(); ++k) raw += (y[k] - p.target[k]) * (y[k] - p.target[k]);
  }
  EXPECT_LT(raw / static_cast<double>(pairs.size() * 24), 1e-6);
  EXPECT_EQ(map.input_dim(), 24);
  EXPECT_EQ(map.hidden_dim(), 50);
  EXPECT_EQ(map.output_dim(), 24);
}

TEST(Train, IdentityTask) {
  auto pairs = LinearTask(500, 200, true);
  auto map = Train(pairs, TightConfig());
  EXPECT_LT(map.train_log.back(), 1e-6);
  double worst = 0.0;
  for (std::size_t s = 0; s < 50; ++s) {
    auto y = Forward(map, pairs[s].source);
    for (std::size_t k = 0; k < 24; ++k) worst = std::max(worst, std::abs(y[k] - pairs[s].source[k]));
  }
  EXPECT_LT(worst, 1e-2);
}

TEST(Train, DeterministicGivenSeed) {
  auto pairs = LinearTask(120, 7, false);
  TrainConfig cfg;
  cfg.max_epochs = 10;
  EXPECT_EQ(SerializeMap(Train(pairs, cfg)), SerializeMap(Train(pairs, cfg)));
  TrainConfig other = cfg;
  other.seed = 2;
  EXPECT_NE(SerializeMap(Train(pairs, cfg)), SerializeMap(Train(pairs, other)));
}

TEST(Train, Errors) {
  auto pairs = LinearTask(49, 1, false);
  EXPECT_EQ(CodeOf([&] { Train(pairs, TrainConfig{}); }), ErrorCode::kTooFewPairs);
  pairs = LinearTask(60, 1, false);
  pairs[5].target[2] = std::numeric_limits<double>::infinity();
  EXPECT_EQ(CodeOf([&] { Train(pairs, TrainConfig{}); }), ErrorCode::kNonFiniteInput);
  TrainConfig bad;
  bad.validation_fraction = 0.7;
  EXPECT_EQ(CodeOf([&] { bad.Validate(); }), ErrorCode::kBadSpec);
}

TEST(Serialization, RoundTripIsBitExact) {
  auto m = RandomMap(24, 50, 24, 5);
  m.seed = 77;
  m.train_log = {0.5, 0.25, 0.125};
  auto back = ParseMap(SerializeMap(m));
  EXPECT_EQ(back.seed, 77u);
  EXPECT_EQ(back.train_log, m.train_log);
  EXPECT_EQ(lm::PackParameters(back), lm::PackParameters(m));
  for (std::uint32_t s = 0; s < 20; ++s) {
    auto x = testing::RandomVector(24, s);
    EXPECT_EQ(Forward(back, x), Forward(m, x));
  }
  EXPECT_EQ(SerializeMap(back), SerializeMap(m));
}

TEST(Serialization, FileRoundTripAndErrors) {
  testing::ScratchDir dir("map");
  auto m = RandomMap(24, 50, 24, 6);
  SaveMap(m, dir.path() / "m.json");
  EXPECT_EQ(SerializeMap(LoadMap(dir.path() / "m.json")), SerializeMap(m));
  EXPECT_EQ(CodeOf([] { ParseMap("{\"format\": \"other\"}"); }), ErrorCode::kModelMismatch);
  EXPECT_EQ(CodeOf([] { ParseMap("not json"); }), ErrorCode::kModelMismatch);
  EXPECT_EQ(CodeOf([&] { LoadMap(dir.path() / "missing.json"); }), ErrorCode::kNotFound);
}

LpcFrame Frame(std::vector<double> a) {
  LpcFrame f;
  f.coeffs = std::move(a);
  return f;
}

TEST(Stabilize, StableUnchanged) {
  auto f = Stabilize(Frame({1.0, -0.5}));
  EXPECT_EQ(f.coeffs, (std::vector<double>{1.0, -0.5}));
}

TEST(Stabilize, RealRootMovedToRadius) {
  auto f = Stabilize(Frame({1.0, -2.0}));
  ASSERT_EQ(f.coeffs.size(), 2u);
  EXPECT_EQ(f.coeffs[0], 1.0);
  EXPECT_NEAR(f.coeffs[1], -0.995, 1e-12);
}

TEST(Stabilize, RandomUnstableOrder24) {
  for (std::uint32_t seed = 0; seed < 20; ++seed) {
    // 8 unstable pairs among 12
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> ang(0.1, 3.0);
    std::vector<std::complex<double>> roots;
    for (int k = 0; k < 12; ++k) {
      const double r = k < 4 ? 1.0 + 0.05 * k : 0.4 + 0.05 * k;
      auto z = std::polar(r, ang(gen) + 0.001 * k);
      roots.push_back(z);
      roots.push_back(std::conj(z));
    }
    auto a = testing::PolyFromRoots(roots);
    auto out = Stabilize(Frame(a)).coeffs;
    ASSERT_EQ(out.size(), 25u);
    EXPECT_EQ(out[0], 1.0);
    auto got = testing::CompanionRoots(out);
    EXPECT_LT(testing::MaxMagnitude(got), kStabilityThreshold);
    // stable roots survive
    for (const auto& z : roots) {
      if (std::abs(z) >= kStabilityThreshold) continue;
      double best = 1e9;
      for (const auto& g : got) best = std::min(best, std::abs(g - z));
      EXPECT_LT(best, 1e-6) << seed;
    }
    // moved roots keep their angle at radius 0.995
    for (const auto& z : roots) {
      if (std::abs(z) < kStabilityThreshold) continue;
      const auto want = std::polar(kStabilizedRadius, std::arg(z));
      double best = 1e9;
      for (const auto& g : got) best = std::min(best, std::abs(g - want));
      EXPECT_LT(best, 1e-6) << seed;
    }
  }
}

TEST(Stabilize, StableRootsUntouchedExactly) {
  for (std::uint32_t seed = 0; seed < 20; ++seed) {
    auto a = testing::RandomPolynomial(24, seed, 0.3, 0.95);
    auto out = Stabilize(Frame(a)).coeffs;
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(out[i], a[i], 1e-9);
  }
}

TEST(Stabilize, Idempotent) {
  for (std::uint32_t seed = 0; seed < 20; ++seed) {
    auto a = testing::RandomPolynomial(24, seed + 40, 0.5, 1.6);
    auto once = Stabilize(Frame(a));
    auto twice = Stabilize(once);
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(twice.coeffs[i], once.coeffs[i], 1e-9);
  }
}

TEST(Polynomial, RootsAgreeWithCompanion) {
  for (std::uint32_t seed = 0; seed < 10; ++seed) {
    auto a = testing::RandomPolynomial(16, seed + 300, 0.2, 1.3);
    EXPECT_NEAR(MaxRootMagnitude(a), testing::MaxMagnitude(testing::CompanionRoots(a)), 1e-8);
    auto rebuilt = PolynomialFromRoots(PolynomialRoots(a));
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(rebuilt[i], a[i], 1e-8);
  }
}

TEST(ConvertUtterance, SilentFramesPassAndOutputsStable) {
  auto m = RandomMap(24, 50, 24, 9);
  m.w2 *= 3.0;  // wild outputs
  std::vector<LpcFrame> frames;
  for (std::uint32_t s = 0; s < 10; ++s) {
    auto x = testing::RandomVector(276, s);
    frames.push_back(AnalyzeFrame(x, 24));
  }
  frames[4] = LpcFrame::Flat(24);
  auto res = ConvertUtterance(m, frames);
  ASSERT_EQ(res.frames.size(), frames.size());
  EXPECT_TRUE(res.frames[4].silent);
  EXPECT_EQ(res.frames[4].coeffs, frames[4].coeffs);
  for (const auto& f : res.frames) {
    EXPECT_EQ(f.coeffs[0], 1.0);
    EXPECT_LT(testing::MaxMagnitude(testing::CompanionRoots(f.coeffs)), 1.0);
  }
  std::vector<LpcFrame> wrong{AnalyzeFrame(testing::RandomVector(276, 1), 12)};
  EXPECT_EQ(CodeOf([&] { ConvertUtterance(m, wrong); }), ErrorCode::kShapeMismatch);
}

TEST(ConvertUtterance, IdentityMapReproducesFrames) {
  // frames from random AR signals; every frame is a training frame
  std::vector<LpcFrame> frames;
  std::vector<FeaturePair> pairs;
  for (std::uint32_t s = 0; s < 120; ++s) {
    auto a = testing::RandomPolynomial(6, s, 0.3, 0.9);
    auto x = testing::AllPole(testing::GaussianNoise(276, s + 1000), a);
    frames.push_back(AnalyzeFrame(x, 24));
    auto feat = FeatureOf(frames.back());
    pairs.push_back({feat, feat});
  }
  TrainConfig cfg;
  cfg.mse_goal = 1e-12;
  cfg.validation_fraction = 0.0;
  auto map = Train(pairs, cfg);
  double worst = 0.0;
  for (const LpcFrame& f : frames) {
    auto y = Forward(map, FeatureOf(f));
    for (std::size_t k = 0; k < 24; ++k) worst = std::max(worst, std::abs(y[k] - f.coeffs[k + 1]));
  }
  EXPECT_LT(worst, 1e-4);
}

}  // namespace
}  // namespace lpvc
