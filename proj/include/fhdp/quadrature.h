//
// Copyright 2026 The FHDP Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// Numerical integration used by library code paths that have no closed form
// (OSGT variance, the brute-force 1-D profile, the K-fold kernel).

#ifndef FHDP_QUADRATURE_H_
#define FHDP_QUADRATURE_H_

#include <functional>
#include <span>
#include <vector>

namespace fhdp {

// Adaptive Gauss-Kronrod (61 points) on [a, b], split at any breakpoints that
// fall strictly inside. Each piece terminates when its error estimate is
// below rel_tol times the L1 norm of the piece. The summed error estimate is
// stored in *error when non-null.
double Integrate(const std::function<double(double)>& f, double a, double b,
                 std::span<const double> breakpoints = {},
                 double rel_tol = 1e-13, double* error = nullptr);

// Gauss-Legendre rule of order 20 mapped to [a, b], appended to the output.
void AppendGaussLegendre20(double a, double b, std::vector<double>* nodes,
                           std::vector<double>* weights);

}  // namespace fhdp

#endif  // FHDP_QUADRATURE_H_
