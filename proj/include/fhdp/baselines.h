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

// Comparison mechanisms with exact one-dimensional accountants: Gaussian,
// Laplace, and offset symmetric Gaussian tails (OSGT). OSGT noise has density
// proportional to exp(-(|t| + vartheta)^2 / 2 varrho^2).

#ifndef FHDP_BASELINES_H_
#define FHDP_BASELINES_H_

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "fhdp/accountant_1d.h"

namespace fhdp {

struct GaussianParams {
  double sigma = 1.0;
};

struct LaplaceParams {
  double beta = 1.0;
};

struct OsgtParams {
  double vartheta = 0.0;
  double varrho = 1.0;
};

absl::Status ValidateOsgt(const OsgtParams& params);

// Q(s eps / d - d / 2s) - exp(eps) Q(s eps / d + d / 2s), clamped to [0, 1].
double GaussianDelta(double epsilon, double sigma, double delta_2);

// Smallest sigma with GaussianDelta <= delta, to relative precision 1e-10.
absl::StatusOr<double> GaussianCalibrate(const PrivacyBudget& budget,
                                         double delta_2);

enum class LaplaceMode {
  kPureKd,    // beta = delta_1 / epsilon
  kApprox1d,  // beta = delta / (epsilon - 2 log(1 - delta))
};

absl::StatusOr<double> LaplaceCalibrate(const PrivacyBudget& budget,
                                        double delta_inf, double delta_1,
                                        LaplaceMode mode);

// [1 - exp((epsilon - delta / beta) / 2)]_+.
double LaplaceProfile1d(double epsilon, double beta, double delta_inf);

inline double LaplaceVariance(double beta) { return 2.0 * beta * beta; }

double OsgtPdf(double t, const OsgtParams& params);
double OsgtLogPdf(double t, const OsgtParams& params);
double OsgtSurvival(double t, const OsgtParams& params);

// Centered privacy loss t d / varrho^2 + (2 vartheta / varrho^2) sgn(t d)
// min(|t|, |d|/2).
double OsgtCenteredLoss(double t, double d, const OsgtParams& params);
double OsgtCenteredLossInverse(double nu, double delta,
                               const OsgtParams& params);

// Two-case closed-form profile, split at eps = (delta + 2 vartheta) delta /
// 2 varrho^2. Clamped to [0, 1].
double OsgtDelta(double epsilon, const OsgtParams& params, double delta_inf);

// E[T^2] by quadrature of t^2 times the density.
double OsgtVariance(const OsgtParams& params);

}  // namespace fhdp

#endif  // FHDP_BASELINES_H_
