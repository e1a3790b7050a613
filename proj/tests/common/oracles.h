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


// Slow but obvious reference implementations used to check the library.

#ifndef LPVC_TESTS_COMMON_ORACLES_H_
#define LPVC_TESTS_COMMON_ORACLES_H_

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>
#include <unistd.h>
#include <vector>

#include <Eigen/Dense>

namespace lpvc::testing {

inline std::vector<double> RandomVector(std::size_t n, std::uint32_t seed, double scale = 1.0) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<double> v(n);
  for (double& x : v) x = u(gen);
  return v;
}

inline std::vector<double> GaussianNoise(std::size_t n, std::uint32_t seed, double sd = 1.0) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> g(0.0, sd);
  std::vector<double> v(n);
  for (double& x : v) x = g(gen);
  return v;
}

// Biased autocorrelation, double loop.
inline std::vector<double> BruteAutocorrelation(const std::vector<double>& x, std::size_t max_lag) {
  std::vector<double> r(max_lag + 1, 0.0);
  for (std::size_t tau = 0; tau <= max_lag; ++tau) {
    for (std::size_t t = 0; t + tau < x.size(); ++t) r[tau] += x[t] * x[t + tau];
    r[tau] /= static_cast<double>(x.size());
  }
  return r;
}

// Solves the Toeplitz normal equations densely; returns a_0..a_p with a_0 = 1.
inline std::vector<double> DenseToeplitzSolve(const std::vector<double>& r) {
  const int p = static_cast<int>(r.size()) - 1;
  Eigen::MatrixXd t(p, p);
  Eigen::VectorXd rhs(p);
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) t(i, j) = r[static_cast<std::size_t>(std::abs(i - j))];
    rhs(i) = -r[static_cast<std::size_t>(i + 1)];
  }
  Eigen::VectorXd a = t.fullPivLu().solve(rhs);
  std::vector<double> out(static_cast<std::size_t>(p) + 1, 1.0);
  for (int i = 0; i < p; ++i) out[static_cast<std::size_t>(i) + 1] = a(i);
  return out;
}

// Polynomial 1 + sum a_i z^-i from roots, by repeated convolution in complex arithmetic.
inline std::vector<double> PolyFromRoots(const std::vector<std::complex<double>>& roots) {
  std::vector<std::complex<double>> c{1.0};
  for (const auto& z : roots) {
    std::vector<std::complex<double>> next(c.size() + 1, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i] += c[i];
      next[i + 1] -= z * c[i];
    }
    c = next;
  }
  std::vector<double> a(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) a[i] = c[i].real();
  return a;
}

// Random real polynomial with conjugate root pairs of magnitude in [rmin, rmax].
inline std::vector<double> RandomPolynomial(int order, std::uint32_t seed, double rmin, double rmax) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> mag(rmin, rmax);
  std::uniform_real_distribution<double> ang(0.05, std::numbers::pi - 0.05);
  std::vector<std::complex<double>> roots;
  for (int i = 0; i + 1 < order; i += 2) {
    auto z = std::polar(mag(gen), ang(gen));
    roots.push_back(z);
    roots.push_back(std::conj(z));
  }
  if (order % 2 == 1) roots.emplace_back(mag(gen) * (gen() % 2 ? 1.0 : -1.0), 0.0);
  return PolyFromRoots(roots);
}

// Roots of 1 + sum a_i z^-i via the companion matrix (independent of the library root finder).
inline std::vector<std::complex<double>> CompanionRoots(const std::vector<double>& a) {
  const int p = static_cast<int>(a.size()) - 1;
  if (p == 0) return {};
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(p, p);
  for (int j = 0; j < p; ++j) c(0, j) = -a[static_cast<std::size_t>(j) + 1] / a[0];
  for (int i = 1; i < p; ++i) c(i, i - 1) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> es(c, false);
  std::vector<std::complex<double>> out;
  for (int i = 0; i < p; ++i) out.push_back(es.eigenvalues()(i));
  return out;
}

inline double MaxMagnitude(const std::vector<std::complex<double>>& roots) {
  double m = 0.0;
  for (const auto& z : roots) m = std::max(m, std::abs(z));
  return m;
}

// Direct-form all-pole filter from rest.
inline std::vector<double> AllPole(const std::vector<double>& e, const std::vector<double>& a) {
  std::vector<double> y(e.size(), 0.0);
  for (std::size_t n = 0; n < e.size(); ++n) {
    double acc = e[n];
    for (std::size_t i = 1; i < a.size() && i <= n; ++i) acc -= a[i] * y[n - i];
    y[n] = acc;
  }
  return y;
}

// First n real-cepstrum coefficients of 1/|A(e^jw)| computed from a dense DFT
// of the log magnitude; aliasing is negligible for nfft >> n.
inline std::vector<double> DftCepstrum(const std::vector<double>& a, std::size_t n,
                                       std::size_t nfft = 8192) {
  std::vector<double> logmag(nfft);
  for (std::size_t k = 0; k < nfft; ++k) {
    const double w = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(nfft);
    std::complex<double> acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      acc += a[i] * std::polar(1.0, -w * static_cast<double>(i));
    }
    logmag[k] = -std::log(std::abs(acc));
  }
  std::vector<double> c(n);
  for (std::size_t q = 1; q <= n; ++q) {
    double acc = 0.0;
    for (std::size_t k = 0; k < nfft; ++k) {
      acc += logmag[k] * std::cos(2.0 * std::numbers::pi * static_cast<double>(q * k % nfft) /
                                  static_cast<double>(nfft));
    }
    // real cepstrum c_q of log|H|, doubled to the one-sided LPC-cepstrum convention
    c[q - 1] = 2.0 * acc / static_cast<double>(nfft);
  }
  return c;
}

inline double ScalarMcd(const std::vector<double>& x, const std::vector<double>& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - y[i]) * (x[i] - y[i]);
  return 10.0 / std::log(10.0) * std::sqrt(2.0 * s);
}

inline std::vector<double> Tone(double hz, int fs, std::size_t n, double amp = 0.5) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = amp * std::sin(2.0 * std::numbers::pi * hz * static_cast<double>(i) / fs);
  }
  return v;
}

// Fresh scratch directory, removed on destruction.
class ScratchDir {
 public:
  explicit ScratchDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("lpvc_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace lpvc::testing

#endif  // LPVC_TESTS_COMMON_ORACLES_H_
