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

// Privacy-loss algebra of the flipped Huber mechanism.
//
// For a shift d, the centered loss is
//   zeta_d(t) = log g(t - d/2) - log g(t + d/2)
//             = (rho(t + d/2) - rho(t - d/2)) / gamma^2,
// the log-likelihood ratio between the two output distributions evaluated at
// the midpoint-centered output t. It is odd in t and in d, nondecreasing in t
// for d > 0, and equals t d / gamma^2 once |t| >= alpha + |d|/2.

#ifndef FHDP_PRIVACY_LOSS_H_
#define FHDP_PRIVACY_LOSS_H_

#include "absl/status/status.h"
#include "fhdp/flipped_huber.h"

namespace fhdp {

struct SensitivityProfile {
  int k = 1;               // query dimension
  double delta_inf = 1.0;  // per-coordinate sensitivity
  double delta_1 = 1.0;
  double delta_2 = 1.0;

  // The 1-D profile with sensitivity delta.
  static SensitivityProfile Scalar(double delta) {
    return {1, delta, delta, delta};
  }
  // Every coordinate can move by delta at once.
  static SensitivityProfile Box(int k, double delta);
};

// Checks positivity and the norm inequalities between the three sensitivities.
absl::Status ValidateSensitivity(const SensitivityProfile& sens);

// Coefficients of the affine majorant
//   zeta_d(t) <= slope_scale * <t, d> + offset
// of the K-dimensional privacy loss.
struct LossBoundCoeffs {
  double slope_scale = 0.0;
  double offset = 0.0;
};

struct DifferenceNorms {
  double l1 = 0.0;
  double l2 = 0.0;
};

double CenteredLoss(double t, double d, const FHParams& params);

// Right-continuous partial inverse sup{t : CenteredLoss(t, delta) <= nu} of
// the loss at shift delta > 0. On the flat segment this returns the upper end.
double CenteredLossInverse(double nu, double delta, const FHParams& params);

// R(alpha) = alpha^2 - ([alpha - delta]_+)^2.
double RDelta(double alpha, double delta);
double RDeltaInv(double nu, double delta);

// Majorant for a neighboring difference d with the given norms. The norms
// must respect sens (|d|_2 <= delta_2 and each |d_i| <= delta_inf).
LossBoundCoeffs AffineBound(const DifferenceNorms& d,
                            const SensitivityProfile& sens,
                            const FHParams& params);

}  // namespace fhdp

#endif  // FHDP_PRIVACY_LOSS_H_
