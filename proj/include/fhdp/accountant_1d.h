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

// Exact (epsilon, delta) accounting for the one-dimensional flipped Huber
// mechanism, plus two independent routes to the same number: the generic
// formula for symmetric log-concave noise and a brute-force quadrature over
// the level sets of the privacy loss.

#ifndef FHDP_ACCOUNTANT_1D_H_
#define FHDP_ACCOUNTANT_1D_H_

#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "fhdp/flipped_huber.h"

namespace fhdp {

struct PrivacyBudget {
  double epsilon = 0.0;
  double delta = 0.0;
};

absl::Status ValidateBudget(const PrivacyBudget& budget);

enum class ProfileMethod { kClosedForm, kNumericKfold, kSufficientBound };

std::string_view ProfileMethodName(ProfileMethod method);

// delta(epsilon) sampled on a sorted epsilon grid.
struct PrivacyProfileCurve {
  std::vector<double> eps_grid;
  std::vector<double> delta_values;
  ProfileMethod method = ProfileMethod::kClosedForm;
};

// Endpoints of the epsilon ranges on which the closed-form profile switches
// formula. Ranges that cannot occur for the given alpha are marked by
// the corresponding `has_*` flag being false.
struct FhProfileBreaks {
  bool has_narrow = false;    // alpha < delta / 2
  bool has_laplace = false;   // alpha > delta / 2
  bool has_crossing = false;  // alpha < delta
  double narrow_end = 0.0;    // (delta - 2 alpha) delta / 2 gamma^2
  double laplace_end = 0.0;   // min(2 alpha - delta, delta) alpha / gamma^2
  double nu1 = 0.0;
  double nu2 = 0.0;  // (delta + 2 alpha) delta / 2 gamma^2
};

FhProfileBreaks GetFhProfileBreaks(const FHParams& params, double delta_inf);

// Which of the five closed-form cases (1 to 5) covers epsilon. A boundary
// point goes to the lower-numbered case. Gaussian parameters always give 5.
int FhProfileCase(double epsilon, const FHDistribution& dist, double delta_inf);

// Evaluates the formula of case `which` without checking that epsilon lies in
// its range. Used to test continuity across case boundaries.
double FhProfileCaseFormula(int which, double epsilon,
                            const FHDistribution& dist, double delta_inf);

// The closed-form privacy profile delta(epsilon), clamped to [0, 1]. Negative
// epsilon falls back to the generic formula, which is exact there too.
double FhProfile1d(double epsilon, const FHDistribution& dist,
                   double delta_inf);
absl::StatusOr<double> FhProfile1d(double epsilon, const FHParams& params,
                                   double delta_inf);

// G(t - delta/2) - exp(epsilon) G(t + delta/2) at t = loss_inverse(epsilon),
// where G is the survival function of a symmetric log-concave density and
// loss_inverse the right-continuous inverse of its centered loss. Clamped to
// [0, 1].
double GenericLogConcaveProfile(
    double epsilon, const std::function<double(double)>& survival,
    const std::function<double(double)>& loss_inverse, double delta_inf);

// The generic profile with flipped Huber callbacks.
double FhGenericProfile1d(double epsilon, const FHDistribution& dist,
                          double delta_inf);

// P(zeta_d(T) >= eps) - exp(eps) P(zeta_{-d}(T) <= -eps), with both
// probabilities integrated from the density over level sets found by
// bisection. Slow; meant as a test oracle.
double BruteForceProfile1d(double epsilon, const FHDistribution& dist,
                           double d);

// True when the mechanism is (epsilon, delta)-DP. On false, `why` (if given)
// explains the reason. delta = 0 is never attainable.
bool IsDp1d(const PrivacyBudget& budget, const FHDistribution& dist,
            double delta_inf, absl::Status* why = nullptr);

// Closed-form profile on a grid, evaluated in parallel.
PrivacyProfileCurve FhProfileCurve1d(std::span<const double> eps_grid,
                                     const FHDistribution& dist,
                                     double delta_inf, int workers = 0);

}  // namespace fhdp

#endif  // FHDP_ACCOUNTANT_1D_H_
