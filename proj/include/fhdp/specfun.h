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

// Special functions of the standard normal distribution and the imaginary
// error function. Everything here is pure and reentrant.

#ifndef FHDP_SPECFUN_H_
#define FHDP_SPECFUN_H_

#include "absl/status/statusor.h"

namespace fhdp {

inline constexpr double kSqrt2Pi = 2.50662827463100050242;
inline constexpr double kLogSqrt2Pi = 0.91893853320467274178;

// Standard normal density.
double StdNormalPdf(double x);

// Q(x) = P(Z > x) for Z ~ N(0, 1). Saturates to 0 below the smallest
// subnormal and to 1 for very negative x.
double StdNormalSf(double x);

// Standard normal CDF, Phi(x) = Q(-x).
inline double StdNormalCdf(double x) { return StdNormalSf(-x); }

// log Q(x). Finite for every finite x up to about 1e154.
double LogStdNormalSf(double x);

// Mills ratio Q(x) / phi(x) for x >= 0.
double MillsRatio(double x);

// Q^{-1}(p) for p in (0, 1).
absl::StatusOr<double> StdNormalSfInv(double p);

// Q^{-1}(exp(log_p)) for log_p < 0. Works far below the double range of p,
// which the dominance mean and the tail quantile need for large alpha/gamma.
double StdNormalSfInvFromLog(double log_p);

// Dawson's integral F(x) = exp(-x^2) * int_0^x exp(t^2) dt.
double Dawson(double x);

// erfi(x) = (2/sqrt(pi)) int_0^x exp(t^2) dt. Returns OutOfRange when the
// value does not fit in a double.
absl::StatusOr<double> Erfi(double x);

// Q(a1) - exp(eps) * Q(a2), evaluated through log Q so that neither term
// underflows early. The result can be negative; callers clamp.
double GaussianTailDifference(double a1, double eps, double a2);

}  // namespace fhdp

#endif  // FHDP_SPECFUN_H_
