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

#ifndef LPVC_MAPPING_H_
#define LPVC_MAPPING_H_

// Two-layer feedforward regression from source LPC coefficient vectors to
// the target speaker's, trained with Levenberg-Marquardt.
//
// Network: y = denorm(W2 tanh(W1 norm(x) + b1) + b2), where norm/denorm are
// per-coefficient z-scores estimated on the training set.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "lpvc/lpc.h"

namespace lpvc {

inline constexpr int kDefaultHiddenUnits = 50;
inline constexpr const char* kMapFormat = "lpvc-map-v1";

struct TrainConfig {
  int hidden = kDefaultHiddenUnits;
  int max_epochs = 200;
  double mse_goal = 1e-4;
  double lambda_init = 1e-3;
  double lambda_factor = 10.0;
  double lambda_max = 1e10;
  double validation_fraction = 0.2;
  int max_validation_failures = 6;
  // Pairs beyond this count are subsampled (seeded); 0 keeps every pair.
  std::size_t max_pairs = 8000;
  std::uint64_t seed = 1;

  void Validate() const;
};

struct FeaturePair {
  std::vector<double> source;
  std::vector<double> target;
};

struct SpeakerMap {
  Eigen::MatrixXd w1;  // hidden x input
  Eigen::VectorXd b1;
  Eigen::MatrixXd w2;  // output x hidden
  Eigen::VectorXd b2;
  Eigen::VectorXd in_mean, in_std;
  Eigen::VectorXd out_mean, out_std;
  std::uint64_t seed = 0;
  std::vector<double> train_log;       // accepted-step training MSE (z-scored units)
  std::vector<double> validation_log;  // validation MSE after each accepted step

  int input_dim() const { return static_cast<int>(w1.cols()); }
  int hidden_dim() const { return static_cast<int>(w1.rows()); }
  int output_dim() const { return static_cast<int>(w2.rows()); }

  // All weights zero, identity normalization.
  static SpeakerMap Zero(int inputs, int hidden, int outputs);
};

// Throws kShapeMismatch or kNonFiniteInput.
std::vector<double> Forward(const SpeakerMap& map, std::span<const double> x);

// Throws kTooFewPairs (fewer than 50) or kNonFiniteInput.
SpeakerMap Train(std::span<const FeaturePair> pairs, const TrainConfig& cfg);

inline constexpr double kStabilityThreshold = 0.998;
inline constexpr double kStabilizedRadius = 0.995;

// Pulls every root of A(z) with magnitude >= 0.998 onto radius 0.995 keeping
// its angle. Stable frames are returned unchanged. Throws
// kRootFindingFailure.
LpcFrame Stabilize(const LpcFrame& frame);

struct ConversionResult {
  std::vector<LpcFrame> frames;
  std::size_t replaced_frames = 0;  // root finding failed; previous frame reused
};

// Maps a_1..a_p of every non-silent frame through |map| and stabilizes it.
ConversionResult ConvertUtterance(const SpeakerMap& map, std::span<const LpcFrame> frames);

std::vector<double> FeatureOf(const LpcFrame& frame);

std::string SerializeMap(const SpeakerMap& map);
SpeakerMap ParseMap(std::string_view text);
void SaveMap(const SpeakerMap& map, const std::filesystem::path& path);
SpeakerMap LoadMap(const std::filesystem::path& path);

namespace lm {

// Parameter layout: for each hidden unit j, [W1(j, :), b1(j)]; then for each
// output k, [W2(k, :), b2(k)].
Eigen::VectorXd PackParameters(const SpeakerMap& map);
void UnpackParameters(const Eigen::VectorXd& theta, SpeakerMap& map);

// Network outputs (rows = samples) in normalized units.
Eigen::MatrixXd NormalizedForward(const SpeakerMap& map, const Eigen::MatrixXd& x_norm);

// Explicit Jacobian of the normalized outputs; row n * outputs + k.
Eigen::MatrixXd Jacobian(const SpeakerMap& map, const Eigen::MatrixXd& x_norm);

// Gauss-Newton normal equations J^T J and J^T r (r = y - f(x)) assembled from
// their block structure rather than from J itself.
class NormalEquations {
 public:
  NormalEquations(const SpeakerMap& map, const Eigen::MatrixXd& x_norm,
                  const Eigen::MatrixXd& y_norm);

  double mse() const { return mse_; }

  // Solves (J^T J + lambda I) delta = J^T r by eliminating the output layer.
  // Returns nullopt when the reduced system is not positive definite.
  std::optional<Eigen::VectorXd> Solve(double lambda) const;

  // Dense J^T J and J^T r; for checking.
  Eigen::MatrixXd DenseJtJ() const;
  Eigen::VectorXd Gradient() const;

 private:
  int inputs_ = 0, hidden_ = 0, outputs_ = 0;
  Eigen::MatrixXd w2_;    // outputs x hidden
  Eigen::MatrixXd q_;     // Z^T Z, (hidden*(inputs+1))^2
  Eigen::MatrixXd p_;     // Z^T Ha
  Eigen::MatrixXd a_;     // Ha^T Ha
  Eigen::MatrixXd gram_;  // W2^T W2
  Eigen::VectorXd g1_;
  Eigen::MatrixXd g2_;    // outputs x (hidden+1)
  double mse_ = 0.0;
};

}  // namespace lm
}  // namespace lpvc

#endif  // LPVC_MAPPING_H_
