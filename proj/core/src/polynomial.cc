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

#include "lpvc/polynomial.h"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "lpvc/error.h"

namespace lpvc {
namespace {

// Horner evaluation of the monic polynomial and its derivative.
void Evaluate(std::span<const double> a, std::complex<double> z, std::complex<double>& value,
              std::complex<double>& slope) {
  value = a[0];
  slope = 0.0;
  for (std::size_t i = 1; i < a.size(); ++i) {
    slope = slope * z + value;
    value = value * z + a[i];
  }
}

std::complex<double> Polish(std::span<const double> a, std::complex<double> z) {
  for (int iter = 0; iter < 8; ++iter) {
    std::complex<double> v, d;
    Evaluate(a, z, v, d);
    if (std::abs(d) == 0.0) break;
    const std::complex<double> step = v / d;
    const std::complex<double> next = z - step;
    if (!std::isfinite(next.real()) || !std::isfinite(next.imag())) break;
    // Accept only steps that do not move the root far; guards clustered roots.
    if (std::abs(step) > 1e-3 * std::max(1.0, std::abs(z))) break;
    z = next;
    if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(z))) break;
  }
  return z;
}

}  // namespace

std::vector<std::complex<double>> PolynomialRoots(std::span<const double> a) {
  if (a.empty() || a[0] != 1.0) {
    throw Error(ErrorCode::kShapeMismatch, "polynomial must have a_0 == 1");
  }
  const auto p = static_cast<Eigen::Index>(a.size() - 1);
  if (p == 0) return {};
  for (double c : a) {
    if (!std::isfinite(c)) throw Error(ErrorCode::kRootFindingFailure, "non-finite coefficient");
  }
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(p, p);
  for (Eigen::Index j = 0; j < p; ++j) companion(0, j) = -a[static_cast<std::size_t>(j) + 1];
  for (Eigen::Index i = 1; i < p; ++i) companion(i, i - 1) = 1.0;

  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::kRootFindingFailure, "companion eigen-decomposition did not converge");
  }
  std::vector<std::complex<double>> roots(static_cast<std::size_t>(p));
  for (Eigen::Index i = 0; i < p; ++i) {
    roots[static_cast<std::size_t>(i)] = Polish(a, solver.eigenvalues()[i]);
    if (!std::isfinite(roots[static_cast<std::size_t>(i)].real()) ||
        !std::isfinite(roots[static_cast<std::size_t>(i)].imag())) {
      throw Error(ErrorCode::kRootFindingFailure, "non-finite root");
    }
  }
  return roots;
}

std::vector<double> PolynomialFromRoots(std::span<const std::complex<double>> roots) {
  std::vector<std::complex<double>> c{1.0};
  c.reserve(roots.size() + 1);
  for (const auto& r : roots) {
    c.push_back(0.0);
    for (std::size_t i = c.size() - 1; i >= 1; --i) c[i] -= r * c[i - 1];
  }
  std::vector<double> a(c.size());
  std::transform(c.begin(), c.end(), a.begin(), [](const auto& z) { return z.real(); });
  a[0] = 1.0;
  return a;
}

double MaxRootMagnitude(std::span<const double> a) {
  double m = 0.0;
  for (const auto& r : PolynomialRoots(a)) m = std::max(m, std::abs(r));
  return m;
}

}  // namespace lpvc
