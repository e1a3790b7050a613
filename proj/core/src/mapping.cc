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
#include <cstdio>
#include <fstream>
#include <memory>
#include <numeric>
#include <sstream>
#include <string>

#include <Eigen/Cholesky>
#include <json.hpp>

#include "lpvc/error.h"
#include "lpvc/polynomial.h"
#include "random.h"

namespace lpvc {
namespace {

constexpr std::size_t kMinPairs = 50;
constexpr double kStdFloor = 1e-8;

using internal::Rng;

Eigen::MatrixXd Augment(const Eigen::MatrixXd& m) {
  Eigen::MatrixXd out(m.rows(), m.cols() + 1);
  out.leftCols(m.cols()) = m;
  out.col(m.cols()).setOnes();
  return out;
}

double MseOf(const SpeakerMap& map, const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
  if (x.rows() == 0) return 0.0;
  const Eigen::MatrixXd r = y - lm::NormalizedForward(map, x);
  return r.squaredNorm() / static_cast<double>(r.size());
}

void AppendArray(std::ostringstream& os, const char* key, const double* data, std::size_t n) {
  char buf[40];
  os << "  \"" << key << "\": [";
  for (std::size_t i = 0; i < n; ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", data[i]);
    os << (i ? ", " : "") << buf;
  }
  os << "]";
}

std::vector<double> RowMajor(const Eigen::MatrixXd& m) {
  std::vector<double> out(static_cast<std::size_t>(m.size()));
  std::size_t k = 0;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) out[k++] = m(r, c);
  }
  return out;
}

Eigen::VectorXd ReadVector(const nlohmann::json& doc, const char* key, Eigen::Index n) {
  const auto& arr = doc.at(key);
  if (!arr.is_array() || static_cast<Eigen::Index>(arr.size()) != n) {
    throw Error(ErrorCode::kModelMismatch, std::string("field '") + key + "' has wrong length");
  }
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = arr[static_cast<std::size_t>(i)].get<double>();
  return v;
}

Eigen::MatrixXd ReadMatrix(const nlohmann::json& doc, const char* key, Eigen::Index rows,
                           Eigen::Index cols) {
  const Eigen::VectorXd flat = ReadVector(doc, key, rows * cols);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = flat(r * cols + c);
  }
  return m;
}

}  // namespace

void TrainConfig::Validate() const {
  if (hidden <= 0 || max_epochs <= 0 || !(mse_goal > 0.0) || !(lambda_init > 0.0) ||
      !(lambda_factor > 1.0) || !(lambda_max > lambda_init) || max_validation_failures <= 0 ||
      !(validation_fraction >= 0.0 && validation_fraction <= 0.5)) {
    throw Error(ErrorCode::kBadSpec, "invalid training configuration");
  }
}

SpeakerMap SpeakerMap::Zero(int inputs, int hidden, int outputs) {
  SpeakerMap m;
  m.w1 = Eigen::MatrixXd::Zero(hidden, inputs);
  m.b1 = Eigen::VectorXd::Zero(hidden);
  m.w2 = Eigen::MatrixXd::Zero(outputs, hidden);
  m.b2 = Eigen::VectorXd::Zero(outputs);
  m.in_mean = Eigen::VectorXd::Zero(inputs);
  m.in_std = Eigen::VectorXd::Ones(inputs);
  m.out_mean = Eigen::VectorXd::Zero(outputs);
  m.out_std = Eigen::VectorXd::Ones(outputs);
  return m;
}

std::vector<double> Forward(const SpeakerMap& map, std::span<const double> x) {
  if (static_cast<int>(x.size()) != map.input_dim()) {
    throw Error(ErrorCode::kShapeMismatch, "feature of length " + std::to_string(x.size()) +
                                               " for a map with " +
                                               std::to_string(map.input_dim()) + " inputs");
  }
  Eigen::VectorXd xn(map.input_dim());
  for (int i = 0; i < map.input_dim(); ++i) {
    if (!std::isfinite(x[static_cast<std::size_t>(i)])) {
      throw Error(ErrorCode::kNonFiniteInput, "non-finite feature value");
    }
    xn(i) = (x[static_cast<std::size_t>(i)] - map.in_mean(i)) / map.in_std(i);
  }
  const Eigen::VectorXd h = (map.w1 * xn + map.b1).array().tanh().matrix();
  const Eigen::VectorXd yn = map.w2 * h + map.b2;
  std::vector<double> y(static_cast<std::size_t>(map.output_dim()));
  for (int k = 0; k < map.output_dim(); ++k) {
    y[static_cast<std::size_t>(k)] = yn(k) * map.out_std(k) + map.out_mean(k);
  }
  return y;
}

namespace lm {

Eigen::VectorXd PackParameters(const SpeakerMap& map) {
  const int in = map.input_dim(), hid = map.hidden_dim(), out = map.output_dim();
  Eigen::VectorXd theta(hid * (in + 1) + out * (hid + 1));
  Eigen::Index k = 0;
  for (int j = 0; j < hid; ++j) {
    for (int i = 0; i < in; ++i) theta(k++) = map.w1(j, i);
    theta(k++) = map.b1(j);
  }
  for (int o = 0; o < out; ++o) {
    for (int j = 0; j < hid; ++j) theta(k++) = map.w2(o, j);
    theta(k++) = map.b2(o);
  }
  return theta;
}

void UnpackParameters(const Eigen::VectorXd& theta, SpeakerMap& map) {
  const int in = map.input_dim(), hid = map.hidden_dim(), out = map.output_dim();
  if (theta.size() != hid * (in + 1) + out * (hid + 1)) {
    throw Error(ErrorCode::kShapeMismatch, "parameter vector does not match network shape");
  }
  Eigen::Index k = 0;
  for (int j = 0; j < hid; ++j) {
    for (int i = 0; i < in; ++i) map.w1(j, i) = theta(k++);
    map.b1(j) = theta(k++);
  }
  for (int o = 0; o < out; ++o) {
    for (int j = 0; j < hid; ++j) map.w2(o, j) = theta(k++);
    map.b2(o) = theta(k++);
  }
}

Eigen::MatrixXd NormalizedForward(const SpeakerMap& map, const Eigen::MatrixXd& x_norm) {
  Eigen::MatrixXd h = x_norm * map.w1.transpose();
  h.rowwise() += map.b1.transpose();
  h = h.array().tanh().matrix();
  Eigen::MatrixXd y = h * map.w2.transpose();
  y.rowwise() += map.b2.transpose();
  return y;
}

Eigen::MatrixXd Jacobian(const SpeakerMap& map, const Eigen::MatrixXd& x_norm) {
  const int in = map.input_dim(), hid = map.hidden_dim(), out = map.output_dim();
  const Eigen::Index n = x_norm.rows();
  const Eigen::Index layer1 = hid * (in + 1);
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n * out, layer1 + out * (hid + 1));
  for (Eigen::Index s = 0; s < n; ++s) {
    const Eigen::VectorXd x = x_norm.row(s).transpose();
    const Eigen::VectorXd h = (map.w1 * x + map.b1).array().tanh().matrix();
    for (int k = 0; k < out; ++k) {
      auto row = jac.row(s * out + k);
      for (int j = 0; j < hid; ++j) {
        const double back = map.w2(k, j) * (1.0 - h(j) * h(j));
        for (int i = 0; i < in; ++i) row(j * (in + 1) + i) = back * x(i);
        row(j * (in + 1) + in) = back;
        row(layer1 + k * (hid + 1) + j) = h(j);
      }
      row(layer1 + k * (hid + 1) + hid) = 1.0;
    }
  }
  return jac;
}

NormalEquations::NormalEquations(const SpeakerMap& map, const Eigen::MatrixXd& x_norm,
                                 const Eigen::MatrixXd& y_norm)
    : inputs_(map.input_dim()), hidden_(map.hidden_dim()), outputs_(map.output_dim()), w2_(map.w2) {
  const Eigen::Index n = x_norm.rows();
  const int in1 = inputs_ + 1;
  const Eigen::MatrixXd xa = Augment(x_norm);
  Eigen::MatrixXd pre = x_norm * map.w1.transpose();
  pre.rowwise() += map.b1.transpose();
  const Eigen::MatrixXd h = pre.array().tanh().matrix();
  const Eigen::MatrixXd slope = (1.0 - h.array().square()).matrix();
  const Eigen::MatrixXd ha = Augment(h);
  Eigen::MatrixXd w2a(outputs_, hidden_ + 1);
  w2a << map.w2, map.b2;
  Eigen::MatrixXd residual = y_norm - ha * w2a.transpose();
  mse_ = n == 0 ? 0.0 : residual.squaredNorm() / static_cast<double>(residual.size());

  // Z(n, j*(in+1) + i) = s_nj * xa_ni
  Eigen::MatrixXd z(n, hidden_ * in1);
  for (int j = 0; j < hidden_; ++j) {
    z.middleCols(j * in1, in1) = xa.array().colwise() * slope.col(j).array();
  }
  q_ = Eigen::MatrixXd::Zero(z.cols(), z.cols());
  q_.selfadjointView<Eigen::Lower>().rankUpdate(z.transpose());
  q_ = q_.selfadjointView<Eigen::Lower>();
  p_ = z.transpose() * ha;
  a_ = ha.transpose() * ha;
  gram_ = map.w2.transpose() * map.w2;

  const Eigen::MatrixXd back = (residual * map.w2).cwiseProduct(slope);  // n x hidden
  const Eigen::MatrixXd g1 = back.transpose() * xa;                      // hidden x in1
  g1_.resize(hidden_ * in1);
  for (int j = 0; j < hidden_; ++j) g1_.segment(j * in1, in1) = g1.row(j).transpose();
  g2_ = residual.transpose() * ha;
}

std::optional<Eigen::VectorXd> NormalEquations::Solve(double lambda) const {
  const int in1 = inputs_ + 1;
  const int h1 = hidden_ + 1;
  const Eigen::Index d1 = static_cast<Eigen::Index>(hidden_) * in1;

  Eigen::MatrixXd a_damped = a_;
  a_damped.diagonal().array() += lambda;
  const Eigen::LLT<Eigen::MatrixXd> a_llt(a_damped);
  if (a_llt.info() != Eigen::Success) return std::nullopt;

  // Schur complement of the block-diagonal output layer:
  // S = (Q - P A^-1 P^T) o (W2^T W2 (x) 1) + lambda I.
  const Eigen::MatrixXd a_inv_pt = a_llt.solve(p_.transpose());  // h1 x d1
  Eigen::MatrixXd schur = q_;
  schur.noalias() -= p_ * a_inv_pt;
  for (int j = 0; j < hidden_; ++j) {
    for (int jj = 0; jj < hidden_; ++jj) schur.block(j * in1, jj * in1, in1, in1) *= gram_(j, jj);
  }
  schur.diagonal().array() += lambda;

  // rhs = g1 - sum_k d_k o (P A^-1 g2_k), d_k(j, i) = W2(k, j)
  const Eigen::MatrixXd v = p_ * a_llt.solve(g2_.transpose());  // d1 x outputs
  Eigen::VectorXd rhs = g1_;
  for (int j = 0; j < hidden_; ++j) {
    rhs.segment(j * in1, in1).noalias() -= v.middleRows(j * in1, in1) * w2_.col(j);
  }
  const Eigen::LLT<Eigen::MatrixXd> s_llt(schur);
  if (s_llt.info() != Eigen::Success) return std::nullopt;
  const Eigen::VectorXd delta1 = s_llt.solve(rhs);

  // delta2_k = A^-1 (g2_k - P^T (d_k o delta1))
  Eigen::MatrixXd scaled(d1, outputs_);
  for (int j = 0; j < hidden_; ++j) {
    scaled.middleRows(j * in1, in1) = delta1.segment(j * in1, in1) * w2_.col(j).transpose();
  }
  const Eigen::MatrixXd delta2 = a_llt.solve(g2_.transpose() - p_.transpose() * scaled);  // h1 x outputs

  Eigen::VectorXd delta(d1 + static_cast<Eigen::Index>(outputs_) * h1);
  delta.head(d1) = delta1;
  for (int k = 0; k < outputs_; ++k) delta.segment(d1 + k * h1, h1) = delta2.col(k);
  if (!delta.allFinite()) return std::nullopt;
  return delta;
}

Eigen::MatrixXd NormalEquations::DenseJtJ() const {
  const int in1 = inputs_ + 1;
  const int h1 = hidden_ + 1;
  const Eigen::Index d1 = static_cast<Eigen::Index>(hidden_) * in1;
  const Eigen::Index dim = d1 + static_cast<Eigen::Index>(outputs_) * h1;
  Eigen::MatrixXd jtj = Eigen::MatrixXd::Zero(dim, dim);
  for (int j = 0; j < hidden_; ++j) {
    for (int jj = 0; jj < hidden_; ++jj) {
      jtj.block(j * in1, jj * in1, in1, in1) = q_.block(j * in1, jj * in1, in1, in1) * gram_(j, jj);
    }
  }
  for (int k = 0; k < outputs_; ++k) {
    const Eigen::Index col = d1 + k * h1;
    for (int j = 0; j < hidden_; ++j) {
      jtj.block(j * in1, col, in1, h1) = w2_(k, j) * p_.middleRows(j * in1, in1);
    }
    jtj.block(col, 0, h1, d1) = jtj.block(0, col, d1, h1).transpose();
    jtj.block(col, col, h1, h1) = a_;
  }
  return jtj;
}

Eigen::VectorXd NormalEquations::Gradient() const {
  const int h1 = hidden_ + 1;
  Eigen::VectorXd g(g1_.size() + static_cast<Eigen::Index>(outputs_) * h1);
  g.head(g1_.size()) = g1_;
  for (int k = 0; k < outputs_; ++k) g.segment(g1_.size() + k * h1, h1) = g2_.row(k).transpose();
  return g;
}

}  // namespace lm

SpeakerMap Train(std::span<const FeaturePair> pairs, const TrainConfig& cfg) {
  cfg.Validate();
  if (pairs.size() < kMinPairs) {
    throw Error(ErrorCode::kTooFewPairs, std::to_string(pairs.size()) +
                                             " training pairs; at least 50 required");
  }
  const std::size_t in = pairs.front().source.size();
  const std::size_t out = pairs.front().target.size();
  if (in == 0 || out == 0) throw Error(ErrorCode::kShapeMismatch, "empty feature vectors");
  for (const FeaturePair& p : pairs) {
    if (p.source.size() != in || p.target.size() != out) {
      throw Error(ErrorCode::kShapeMismatch, "feature vectors differ in length");
    }
    for (double v : p.source) {
      if (!std::isfinite(v)) throw Error(ErrorCode::kNonFiniteInput, "non-finite source feature");
    }
    for (double v : p.target) {
      if (!std::isfinite(v)) throw Error(ErrorCode::kNonFiniteInput, "non-finite target feature");
    }
  }

  Rng rng(cfg.seed);
  std::vector<std::size_t> order(pairs.size());
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = order.size() - 1; i > 0; --i) std::swap(order[i], order[rng.Below(i + 1)]);
  if (cfg.max_pairs > 0 && order.size() > cfg.max_pairs) order.resize(cfg.max_pairs);
  const auto n_val = static_cast<std::size_t>(
      std::llround(cfg.validation_fraction * static_cast<double>(order.size())));
  const std::size_t n_train = order.size() - n_val;
  if (n_train < kMinPairs) {
    throw Error(ErrorCode::kTooFewPairs, "too few pairs left after the validation split");
  }

  const auto gather = [&](std::size_t first, std::size_t count, bool source) {
    const std::size_t dim = source ? in : out;
    Eigen::MatrixXd m(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(dim));
    for (std::size_t r = 0; r < count; ++r) {
      const auto& v = source ? pairs[order[first + r]].source : pairs[order[first + r]].target;
      for (std::size_t c = 0; c < dim; ++c) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v[c];
    }
    return m;
  };
  Eigen::MatrixXd x_val = gather(0, n_val, true), y_val = gather(0, n_val, false);
  Eigen::MatrixXd x_train = gather(n_val, n_train, true), y_train = gather(n_val, n_train, false);

  SpeakerMap map = SpeakerMap::Zero(static_cast<int>(in), cfg.hidden, static_cast<int>(out));
  map.seed = cfg.seed;
  const auto fit_stats = [](const Eigen::MatrixXd& m, Eigen::VectorXd& mean, Eigen::VectorXd& sd) {
    mean = m.colwise().mean().transpose();
    sd = ((m.rowwise() - mean.transpose()).array().square().colwise().sum() /
          static_cast<double>(m.rows()))
             .sqrt()
             .matrix()
             .transpose();
    sd = sd.cwiseMax(kStdFloor);
  };
  fit_stats(x_train, map.in_mean, map.in_std);
  fit_stats(y_train, map.out_mean, map.out_std);
  const auto normalize = [](Eigen::MatrixXd& m, const Eigen::VectorXd& mean, const Eigen::VectorXd& sd) {
    m = ((m.rowwise() - mean.transpose()).array().rowwise() / sd.transpose().array()).matrix();
  };
  normalize(x_train, map.in_mean, map.in_std);
  normalize(x_val, map.in_mean, map.in_std);
  normalize(y_train, map.out_mean, map.out_std);
  normalize(y_val, map.out_mean, map.out_std);

  const double scale1 = 1.0 / std::sqrt(static_cast<double>(in));
  const double scale2 = 1.0 / std::sqrt(static_cast<double>(cfg.hidden));
  Eigen::VectorXd theta = lm::PackParameters(map);
  const Eigen::Index layer1 = static_cast<Eigen::Index>(cfg.hidden) * static_cast<Eigen::Index>(in + 1);
  for (Eigen::Index k = 0; k < theta.size(); ++k) {
    theta(k) = (rng.Uniform() - 0.5) * (k < layer1 ? scale1 : scale2);
  }
  lm::UnpackParameters(theta, map);

  auto system = std::make_unique<lm::NormalEquations>(map, x_train, y_train);
  double mse = system->mse();
  map.train_log.push_back(mse);
  const bool use_validation = n_val > 0;
  double best_val = use_validation ? MseOf(map, x_val, y_val) : 0.0;
  map.validation_log.push_back(best_val);
  Eigen::VectorXd best_theta = theta;
  int failures = 0;
  double lambda = cfg.lambda_init;

  SpeakerMap trial = map;
  for (int epoch = 0; epoch < cfg.max_epochs && mse > cfg.mse_goal; ++epoch) {
    bool accepted = false;
    double trial_mse = mse;
    Eigen::VectorXd trial_theta;
    while (lambda <= cfg.lambda_max) {
      const std::optional<Eigen::VectorXd> delta = system->Solve(lambda);
      if (!delta) {
        lambda *= cfg.lambda_factor;
        continue;
      }
      trial_theta = theta + *delta;
      lm::UnpackParameters(trial_theta, trial);
      trial_mse = MseOf(trial, x_train, y_train);
      if (trial_mse < mse) {
        accepted = true;
        lambda /= cfg.lambda_factor;
        break;
      }
      lambda *= cfg.lambda_factor;
    }
    if (!accepted) break;

    theta = trial_theta;
    lm::UnpackParameters(theta, map);
    mse = trial_mse;
    map.train_log.push_back(mse);
    if (use_validation) {
      const double val = MseOf(map, x_val, y_val);
      map.validation_log.push_back(val);
      if (val < best_val) {
        best_val = val;
        best_theta = theta;
        failures = 0;
      } else if (++failures >= cfg.max_validation_failures) {
        break;
      }
    } else {
      best_theta = theta;
    }
    if (mse > cfg.mse_goal && epoch + 1 < cfg.max_epochs) {
      system = std::make_unique<lm::NormalEquations>(map, x_train, y_train);
    }
  }
  lm::UnpackParameters(best_theta, map);
  return map;
}

LpcFrame Stabilize(const LpcFrame& frame) {
  if (frame.order() == 0) return frame;
  std::vector<std::complex<double>> roots = PolynomialRoots(frame.coeffs);
  bool changed = false;
  for (auto& r : roots) {
    const double mag = std::abs(r);
    if (mag >= kStabilityThreshold) {
      r *= kStabilizedRadius / mag;
      changed = true;
    }
  }
  if (!changed) return frame;
  LpcFrame out = frame;
  out.coeffs = PolynomialFromRoots(roots);
  return out;
}

std::vector<double> FeatureOf(const LpcFrame& frame) {
  return {frame.coeffs.begin() + 1, frame.coeffs.end()};
}

ConversionResult ConvertUtterance(const SpeakerMap& map, std::span<const LpcFrame> frames) {
  ConversionResult result;
  result.frames.reserve(frames.size());
  for (const LpcFrame& f : frames) {
    if (static_cast<int>(f.order()) != map.input_dim() || map.output_dim() != map.input_dim()) {
      throw Error(ErrorCode::kShapeMismatch, "frame order " + std::to_string(f.order()) +
                                                 " does not match map with " +
                                                 std::to_string(map.input_dim()) + " inputs");
    }
    if (f.silent) {
      result.frames.push_back(f);
      continue;
    }
    LpcFrame mapped = f;
    const std::vector<double> y = Forward(map, FeatureOf(f));
    std::copy(y.begin(), y.end(), mapped.coeffs.begin() + 1);
    try {
      result.frames.push_back(Stabilize(mapped));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kRootFindingFailure) throw;
      ++result.replaced_frames;
      LpcFrame fallback = LpcFrame::Flat(f.order(), f.frame_energy);
      for (auto it = result.frames.rbegin(); it != result.frames.rend(); ++it) {
        if (!it->silent) {
          fallback = *it;
          break;
        }
      }
      fallback.gain = f.gain;
      fallback.frame_energy = f.frame_energy;
      result.frames.push_back(fallback);
    }
  }
  return result;
}

std::string SerializeMap(const SpeakerMap& map) {
  std::ostringstream os;
  os << "{\n";
  os << "  \"format\": \"" << kMapFormat << "\",\n";
  os << "  \"order\": " << map.input_dim() << ",\n";
  os << "  \"hidden\": " << map.hidden_dim() << ",\n";
  os << "  \"outputs\": " << map.output_dim() << ",\n";
  os << "  \"seed\": " << map.seed << ",\n";
  const auto put = [&](const char* key, const std::vector<double>& v, bool last = false) {
    AppendArray(os, key, v.data(), v.size());
    os << (last ? "\n" : ",\n");
  };
  const auto vec = [](const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
  put("w1", RowMajor(map.w1));
  put("b1", vec(map.b1));
  put("w2", RowMajor(map.w2));
  put("b2", vec(map.b2));
  put("in_mean", vec(map.in_mean));
  put("in_std", vec(map.in_std));
  put("out_mean", vec(map.out_mean));
  put("out_std", vec(map.out_std));
  put("train_log", map.train_log);
  put("validation_log", map.validation_log, true);
  os << "}\n";
  return os.str();
}

SpeakerMap ParseMap(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kModelMismatch, std::string("model is not valid JSON: ") + e.what());
  }
  try {
    if (doc.at("format").get<std::string>() != kMapFormat) {
      throw Error(ErrorCode::kModelMismatch, "unknown model format '" +
                                                 doc.at("format").get<std::string>() + "'");
    }
    const int in = doc.at("order").get<int>();
    const int hid = doc.at("hidden").get<int>();
    const int out = doc.value("outputs", in);
    if (in <= 0 || hid <= 0 || out <= 0) throw Error(ErrorCode::kModelMismatch, "bad network shape");
    SpeakerMap m = SpeakerMap::Zero(in, hid, out);
    m.seed = doc.at("seed").get<std::uint64_t>();
    m.w1 = ReadMatrix(doc, "w1", hid, in);
    m.b1 = ReadVector(doc, "b1", hid);
    m.w2 = ReadMatrix(doc, "w2", out, hid);
    m.b2 = ReadVector(doc, "b2", out);
    m.in_mean = ReadVector(doc, "in_mean", in);
    m.in_std = ReadVector(doc, "in_std", in);
    m.out_mean = ReadVector(doc, "out_mean", out);
    m.out_std = ReadVector(doc, "out_std", out);
    m.train_log = doc.value("train_log", std::vector<double>{});
    m.validation_log = doc.value("validation_log", std::vector<double>{});
    if ((m.in_std.array() <= 0.0).any() || (m.out_std.array() <= 0.0).any()) {
      throw Error(ErrorCode::kModelMismatch, "normalization deviations must be positive");
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kModelMismatch, std::string("malformed model: ") + e.what());
  }
}

void SaveMap(const SpeakerMap& map, const std::filesystem::path& path) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(ErrorCode::kIoFailure, "cannot create " + path.string());
  file << SerializeMap(map);
  if (!file) throw Error(ErrorCode::kIoFailure, "write failed for " + path.string());
}

SpeakerMap LoadMap(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::kNotFound, "cannot open model " + path.string());
  std::stringstream ss;
  ss << file.rdbuf();
  return ParseMap(ss.str());
}

}  // namespace lpvc
