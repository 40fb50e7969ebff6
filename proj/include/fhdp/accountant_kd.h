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

// K-dimensional accounting for the flipped Huber mechanism with independent
// noise per coordinate: a closed-form sufficient condition built on an
// affine bound of the privacy loss and a Gaussian dominating the noise, and a
// numeric profile obtained by folding the one-dimensional profile K times.

#ifndef FHDP_ACCOUNTANT_KD_H_
#define FHDP_ACCOUNTANT_KD_H_

#include <utility>

#include "absl/status/statusor.h"
#include "fhdp/accountant_1d.h"
#include "fhdp/flipped_huber.h"
#include "fhdp/privacy_loss.h"

namespace fhdp {

// Mean theta of the Gaussian N(theta, gamma^2) that stochastically dominates
// FH(alpha, gamma^2).
double DominanceMean(const FHDistribution& dist);

struct SufficientDelta {
  // False when R(alpha) exceeds (2 gamma^2 eps - delta_2^2) / K, in which
  // case the bound does not apply and `delta` is 1.
  bool feasible = false;
  double delta = 1.0;
};

SufficientDelta SufficientDeltaKd(double epsilon, const FHDistribution& dist,
                                  const SensitivityProfile& sens);

// The largest alpha the sufficient condition admits at this gamma, or a
// negative value when even alpha = 0 is inadmissible.
double SufficientAlphaCap(double epsilon, double gamma,
                          const SensitivityProfile& sens);

enum class Interpolation { kLinear };

struct KfoldGrid {
  int points = 4001;
  // Half-width of the symmetric nu grid. Zero picks the loss at
  // alpha + 12 gamma + delta / 2.
  double nu_max = 0.0;
  // Window half-width in units of gamma beyond alpha.
  double window_gammas = 12.0;
  Interpolation interp = Interpolation::kLinear;
};

// Below these the folding is refused; such noise is too peaked for the grid.
inline constexpr double kNumericMinAlpha = 0.02;
inline constexpr double kNumericMinGamma = 0.02;
// Tolerated probability mass outside the quadrature window.
inline constexpr double kNumericMassLoss = 1e-6;

// delta^(k)(nu) on the grid, where every one of the k coordinates moves by
// delta_inf. Fails with InvalidArgument for 0 < alpha < kNumericMinAlpha or
// gamma < kNumericMinGamma, and with OutOfRange when the window loses more
// than kNumericMassLoss.
absl::StatusOr<PrivacyProfileCurve> NumericProfileKd(const FHDistribution& dist,
                                                     int k, double delta_inf,
                                                     const KfoldGrid& grid = {},
                                                     int workers = 0);

// Linear interpolation of a profile curve, clamped to 1 below the grid and
// to the last value above it.
double EvaluateProfile(const PrivacyProfileCurve& curve, double epsilon);

}  // namespace fhdp

#endif  // FHDP_ACCOUNTANT_KD_H_
