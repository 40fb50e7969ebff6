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

// Minimum-variance parameter search for each mechanism at a target
// (epsilon, delta) and sensitivity profile.

#ifndef FHDP_CALIBRATION_H_
#define FHDP_CALIBRATION_H_

#include <span>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "fhdp/accountant_1d.h"
#include "fhdp/accountant_kd.h"
#include "fhdp/baselines.h"
#include "fhdp/flipped_huber.h"
#include "fhdp/privacy_loss.h"

namespace fhdp {

// Box searched on a log scale. For FH the axes are (alpha, gamma); for OSGT
// they are (vartheta, varrho).
struct SearchRegion {
  std::pair<double, double> alpha_range = {0.02, 150.0};
  std::pair<double, double> gamma_range = {0.02, 50.0};
  int coarse_points = 200;
  int refine_rounds = 3;
};

absl::Status ValidateRegion(const SearchRegion& region);

enum class Mechanism { kFlippedHuber, kGaussian, kLaplace, kOsgt };

std::string_view MechanismName(Mechanism mechanism);

enum class CalibrationMethod { kClosed, kSufficientKd, kNumericKd };

std::string_view CalibrationMethodName(CalibrationMethod method);

using MechanismParams =
    std::variant<FHParams, GaussianParams, LaplaceParams, OsgtParams>;

struct CalibrationResult {
  Mechanism mechanism = Mechanism::kFlippedHuber;
  MechanismParams params;
  // Per-coordinate noise variance.
  double variance = 0.0;
  CalibrationMethod method = CalibrationMethod::kClosed;
  bool feasible = false;
  // The accountant's delta at the reported parameters, or 1 if infeasible.
  double achieved_delta = 1.0;
};

// One-dimensional FH search against the exact profile. Besides the grid, the
// explicit point gamma = sigma_G, alpha = [gamma^2 eps / delta_inf -
// delta_inf / 2]_+ is always a candidate (even when it lies outside the
// region), so the result never has a larger variance than the Gaussian.
absl::StatusOr<CalibrationResult> CalibrateFh1d(const PrivacyBudget& budget,
                                                double delta_inf,
                                                const SearchRegion& region = {},
                                                int workers = 0);

// K-dimensional FH search against the sufficient condition. Each alpha
// column starts at the smallest gamma the condition admits, the same
// constraint as SufficientAlphaCap.
absl::StatusOr<CalibrationResult> CalibrateFhKdSufficient(
    const PrivacyBudget& budget, const SensitivityProfile& sens,
    const SearchRegion& region = {}, int workers = 0);

struct NumericSearch {
  // Log-spaced points on the b = alpha / gamma axis per round.
  int b_points = 33;
  int refine_b_points = 9;
  // Grid density for the search; the final point is re-checked, and if
  // needed repaired, on the caller's KfoldGrid.
  int search_grid_points = 2001;
  // Relative tolerance on gamma in the per-b bisection.
  double gamma_rtol = 1e-4;
  int max_k = 10;
};

// K-dimensional FH search against the folded numeric profile. The variance
// scales as gamma^2 at fixed b and the profile is monotone in gamma there, so
// every b gets the smallest admissible gamma by bisection. Fails with
// FailedPrecondition when k exceeds search.max_k.
absl::StatusOr<CalibrationResult> CalibrateFhKdNumeric(
    const PrivacyBudget& budget, const SensitivityProfile& sens,
    const SearchRegion& region = {}, const KfoldGrid& grid = {},
    const NumericSearch& search = {}, int workers = 0);

absl::StatusOr<CalibrationResult> CalibrateGaussian(
    const PrivacyBudget& budget, const SensitivityProfile& sens);

// Approximate one-dimensional calibration for k = 1, pure epsilon-DP on the
// l1 sensitivity otherwise.
absl::StatusOr<CalibrationResult> CalibrateLaplace(
    const PrivacyBudget& budget, const SensitivityProfile& sens);

// One-dimensional OSGT search over (vartheta, varrho) in the region.
absl::StatusOr<CalibrationResult> CalibrateOsgt(const PrivacyBudget& budget,
                                                double delta_inf,
                                                const SearchRegion& region = {},
                                                int workers = 0);

struct CompareOptions {
  SearchRegion region;
  // Accountant used for FH when k > 1.
  CalibrationMethod fh_kd_method = CalibrationMethod::kSufficientKd;
  KfoldGrid grid;
  NumericSearch numeric;
  int workers = 0;
};

struct ComparisonRow {
  Mechanism mechanism = Mechanism::kFlippedHuber;
  absl::StatusOr<CalibrationResult> result;
};

// Calibrates each mechanism in turn. A failure is recorded in its row and
// does not stop the others.
std::vector<ComparisonRow> CompareMechanisms(
    const PrivacyBudget& budget, const SensitivityProfile& sens,
    std::span<const Mechanism> mechanisms, const CompareOptions& options = {});

}  // namespace fhdp

#endif  // FHDP_CALIBRATION_H_
