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

// Zero-concentrated DP accounting for the flipped Huber mechanism. A
// mechanism is (xi, eta)-zCDP when every Renyi divergence of order
// lambda > 1 between neighboring outputs is at most xi + lambda eta.

#ifndef FHDP_ZCDP_H_
#define FHDP_ZCDP_H_

#include <span>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "fhdp/accountant_1d.h"
#include "fhdp/flipped_huber.h"
#include "fhdp/privacy_loss.h"

namespace fhdp {

struct ZcdpParams {
  double xi = 0.0;
  double eta = 0.0;
};

// (K R(alpha) / 2 gamma^2, delta_2^2 / 2 gamma^2).
ZcdpParams FhZcdp(const FHParams& params, const SensitivityProfile& sens);

ZcdpParams Compose(std::span<const ZcdpParams> parts);

enum class ZcdpConversion {
  // eps = xi + eta + 2 sqrt(eta log(1/delta)).
  kStandard,
  // Renyi-to-DP conversion with the (1 - 1/lambda) correction, minimized
  // over the order lambda. Never larger than kStandard.
  kOptimized,
};

std::string_view ZcdpConversionName(ZcdpConversion conversion);

absl::StatusOr<double> ZcdpToDp(
    const ZcdpParams& z, double delta,
    ZcdpConversion conversion = ZcdpConversion::kStandard);

// Parameters of each of `folds` identical K-dimensional releases whose
// composition is (xi, eta)-zCDP.
absl::StatusOr<FHParams> FhParamsFromZcdp(const ZcdpParams& z,
                                          const SensitivityProfile& sens,
                                          int folds);

// Per-coordinate parameters alpha_i = lambda_i R_1^{-1}(xi / eta),
// gamma_i = lambda_i sqrt(K L / 2 eta) for K = lambdas.size() coordinates
// each released L times with sensitivity lambda_i. The K L releases compose
// to (xi, eta).
absl::StatusOr<std::vector<FHParams>> PerCoordinateFhParams(
    const ZcdpParams& z, std::span<const double> lambdas, int folds);

struct ZcdpSelection {
  ZcdpParams z;
  // Variance of the unit-sensitivity noise for one release, i.e. the
  // per-coordinate variance divided by lambda_i^2.
  double unit_variance = 0.0;
};

// Among (xi, eta) pairs that convert to exactly (eps, delta), the one whose
// per-coordinate flipped Huber noise has the smallest variance, searched on
// `grid_points` values of xi in [0, eps). With gaussian_only the search is
// pinned to xi = 0.
absl::StatusOr<ZcdpSelection> SelectZcdp(const PrivacyBudget& budget,
                                         int coordinates, int folds,
                                         ZcdpConversion conversion,
                                         int grid_points = 200,
                                         bool gaussian_only = false);

}  // namespace fhdp

#endif  // FHDP_ZCDP_H_
