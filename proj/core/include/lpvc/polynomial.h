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

#ifndef LPVC_POLYNOMIAL_H_
#define LPVC_POLYNOMIAL_H_

#include <complex>
#include <span>
#include <vector>

namespace lpvc {

// Roots of A(z) = sum_{i=0..p} a_i z^-i, i.e. of the monic polynomial
// z^p + a_1 z^(p-1) + ... + a_p. Requires a_0 == 1. Computed as companion
// matrix eigenvalues followed by Newton polishing. Throws
// kRootFindingFailure when the eigen-decomposition does not converge.
std::vector<std::complex<double>> PolynomialRoots(std::span<const double> a);

// Inverse of PolynomialRoots: the real coefficient vector (a_0 = 1) whose
// roots are |roots|. Imaginary residue from imperfect conjugate pairing is
// discarded.
std::vector<double> PolynomialFromRoots(std::span<const std::complex<double>> roots);

double MaxRootMagnitude(std::span<const double> a);

}  // namespace lpvc

#endif  // LPVC_POLYNOMIAL_H_
