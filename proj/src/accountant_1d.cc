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

#include "fhdp/accountant_1d.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_format.h"
#include "fhdp/parallel.h"
#include "fhdp/privacy_loss.h"
#include "fhdp/quadrature.h"
#include "fhdp/specfun.h"

namespace fhdp {
namespace {

constexpr double kBisectTol = 1e-12;
// Quadrature windows extend this many gamma past the last kink.
constexpr double kWindowGammas = 40.0;

double Clamp01(double x) {
  if (!(x > 0.0)) return 0.0;
  return std::min(x, 1.0);
}

// exp(log_r) [Q(u1) - exp(eps) Q(u2)] with the leading factor kept in logs.
double ScaledGaussianDifference(double log_r, double u1, double eps,
                                double u2) {
  const double l1 = LogStdNormalSf(u1);
  const double l2 = LogStdNormalSf(u2);
  return std::exp(log_r + l1) * -std::expm1(eps + l2 - l1);
}

// log(c - 1/2) for the Laplace weight c = 1 / (b w), using
// 2 - b w = 2 exp(-b^2) (1 - b Mills(b)).
double LogLaplaceExcess(const FHDistribution& dist) {
  const double b = dist.b();
  return -b * b + std::log1p(-b * MillsRatio(b)) -
         std::log(b * dist.scaled_omega());
}

// Mass of {t : f(t) >= level} under dist, for f monotone in the given
// direction. radius brackets the level crossing.
double LevelSetMass(const std::function<double(double)>& f, double level,
                    bool increasing, double radius,
                    const FHDistribution& dist) {
  double lo = -radius;
  double hi = radius;
  // Invariant: the set boundary lies in [lo, hi].
  for (int iter = 0; iter < 400 && hi - lo > kBisectTol; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const bool inside = f(mid) >= level;
    if (inside == increasing) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  const double edge = 0.5 * (lo + hi);
  const double a = dist.alpha();
  const double reach = a + kWindowGammas * dist.gamma();
  const double cuts[] = {-a, 0.0, a};
  auto pdf = [&dist](double t) { return dist.Pdf(t); };
  if (increasing) {
    return Integrate(pdf, edge, std::max(edge, 0.0) + reach, cuts);
  }
  return Integrate(pdf, std::min(edge, 0.0) - reach, edge, cuts);
}

}  // namespace

absl::Status ValidateBudget(const PrivacyBudget& budget) {
  if (!(budget.epsilon >= 0.0) || !std::isfinite(budget.epsilon)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "epsilon must be finite and >= 0, got %g", budget.epsilon));
  }
  if (!(budget.delta >= 0.0 && budget.delta <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("delta must lie in [0, 1], got %g", budget.delta));
  }
  return absl::OkStatus();
}

std::string_view ProfileMethodName(ProfileMethod method) {
  switch (method) {
    case ProfileMethod::kClosedForm:
      return "closed_form";
    case ProfileMethod::kNumericKfold:
      return "numeric_kfold";
    case ProfileMethod::kSufficientBound:
      return "sufficient_bound";
  }
  return "unknown";
}

FhProfileBreaks GetFhProfileBreaks(const FHParams& params, double delta_inf) {
  const double a = params.alpha;
  const double d = delta_inf;
  const double g2 = params.gamma * params.gamma;
  FhProfileBreaks br;
  br.has_narrow = a < 0.5 * d;
  br.has_laplace = a > 0.5 * d;
  br.has_crossing = a < d;
  br.narrow_end = (d - 2.0 * a) * d / (2.0 * g2);
  br.laplace_end = std::min(2.0 * a - d, d) * a / g2;
  const double excess = std::max(d - a, 0.0);
  br.nu1 = (excess * excess + 2.0 * a * d) / (2.0 * g2);
  br.nu2 = (d + 2.0 * a) * d / (2.0 * g2);
  return br;
}

int FhProfileCase(double epsilon, const FHDistribution& dist,
                  double delta_inf) {
  if (dist.is_gaussian()) return 5;
  const FhProfileBreaks br = GetFhProfileBreaks(dist.params(), delta_inf);
  if (br.has_narrow && epsilon <= br.narrow_end) return 1;
  if (br.has_laplace && epsilon <= br.laplace_end) return 2;
  if (br.has_crossing && epsilon <= br.nu1) return 3;
  if (epsilon <= br.nu2) return 4;
  return 5;
}

double FhProfileCaseFormula(int which, double epsilon,
                            const FHDistribution& dist, double delta_inf) {
  const double a = dist.is_gaussian() ? 0.0 : dist.alpha();
  const double g = dist.gamma();
  const double g2 = g * g;
  const double d = delta_inf;
  const double log_r = dist.log_r();
  const double c = dist.laplace_coef();
  const double u1 = g * epsilon / d - 0.5 * d / g;
  const double u2 = g * epsilon / d + 0.5 * d / g;
  switch (which) {
    case 1:
      return -std::expm1(log_r) +
             ScaledGaussianDifference(log_r, u1, epsilon, u2);
    case 2: {
      // 1/2 (1 - e^eps) + c (1 + e^eps - 2 e^{(eps - eps0)/2}), regrouped so
      // the e^eps terms combine into (c - 1/2) e^eps before evaluation.
      const double eps0 = a * d / g2;
      return (c + 0.5) - 2.0 * c * std::exp(0.5 * (epsilon - eps0)) +
             std::exp(LogLaplaceExcess(dist) + epsilon);
    }
    case 3: {
      const double s = std::sqrt(2.0 * (g2 * epsilon + a * d));
      const double y = a / g2 * (s - a - d);
      return 0.5 - c * std::expm1(y) -
             std::exp(epsilon + log_r + LogStdNormalSf((s - a) / g));
    }
    case 4: {
      const double s = std::sqrt(std::max(2.0 * (g2 * epsilon - a * d), 0.0));
      const double y = a / g2 * (d - a - s);
      // 1/2 - c (1 - e^y) = e^y / 2 + (c - 1/2) expm1(y).
      return 0.5 * std::exp(y) +
             std::exp(LogLaplaceExcess(dist)) * std::expm1(y) -
             std::exp(epsilon + log_r + LogStdNormalSf((s + a) / g));
    }
    default:
      return ScaledGaussianDifference(log_r, u1, epsilon, u2);
  }
}

double FhProfile1d(double epsilon, const FHDistribution& dist,
                   double delta_inf) {
  if (epsilon < 0.0) return FhGenericProfile1d(epsilon, dist, delta_inf);
  const int which = FhProfileCase(epsilon, dist, delta_inf);
  return Clamp01(FhProfileCaseFormula(which, epsilon, dist, delta_inf));
}

absl::StatusOr<double> FhProfile1d(double epsilon, const FHParams& params,
                                   double delta_inf) {
  absl::StatusOr<FHDistribution> dist = FHDistribution::Create(params);
  if (!dist.ok()) return dist.status();
  if (!(delta_inf > 0.0) || !std::isfinite(delta_inf)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "sensitivity must be finite and > 0, got %g", delta_inf));
  }
  if (std::isnan(epsilon)) {
    return absl::InvalidArgumentError("epsilon is NaN");
  }
  return FhProfile1d(epsilon, *dist, delta_inf);
}

double GenericLogConcaveProfile(
    double epsilon, const std::function<double(double)>& survival,
    const std::function<double(double)>& loss_inverse, double delta_inf) {
  const double t = loss_inverse(epsilon);
  const double upper = survival(t - 0.5 * delta_inf);
  const double lower = survival(t + 0.5 * delta_inf);
  if (lower <= 0.0) return Clamp01(upper);
  return Clamp01(upper - std::exp(epsilon + std::log(lower)));
}

double FhGenericProfile1d(double epsilon, const FHDistribution& dist,
                          double delta_inf) {
  FHParams params = dist.params();
  if (dist.is_gaussian()) params.alpha = 0.0;
  return GenericLogConcaveProfile(
      epsilon, [&dist](double t) { return dist.Survival(t); },
      [&](double nu) { return CenteredLossInverse(nu, delta_inf, params); },
      delta_inf);
}

double BruteForceProfile1d(double epsilon, const FHDistribution& dist,
                           double d) {
  if (d == 0.0) return 0.0;
  FHParams params = dist.params();
  if (dist.is_gaussian()) params.alpha = 0.0;
  const double g2 = params.gamma * params.gamma;
  const double radius =
      params.alpha + std::abs(d) + g2 * std::abs(epsilon) / std::abs(d) + 1.0;
  // zeta_d(t) = centered(t + d/2, d) is monotone in the direction of d, and
  // zeta_{-d}(t) <= -eps is the same as centered(t - d/2, d) >= eps.
  auto loss = [&](double t) { return CenteredLoss(t + 0.5 * d, d, params); };
  auto mirror = [&](double t) { return CenteredLoss(t - 0.5 * d, d, params); };
  const bool up = d > 0.0;
  const double p1 = LevelSetMass(loss, epsilon, up, radius, dist);
  const double p2 = LevelSetMass(mirror, epsilon, up, radius, dist);
  return Clamp01(p1 - std::exp(epsilon) * p2);
}

bool IsDp1d(const PrivacyBudget& budget, const FHDistribution& dist,
            double delta_inf, absl::Status* why) {
  absl::Status status = ValidateBudget(budget);
  if (status.ok() && budget.delta == 0.0) {
    status = absl::FailedPreconditionError(
        "pure DP (delta = 0) is unattainable: the flipped Huber privacy loss "
        "is unbounded");
  }
  if (status.ok()) {
    const double profile = FhProfile1d(budget.epsilon, dist, delta_inf);
    if (profile > budget.delta) {
      status = absl::FailedPreconditionError(
          absl::StrFormat("delta(%g) = %.6g exceeds the target %.6g",
                          budget.epsilon, profile, budget.delta));
    }
  }
  if (why != nullptr) *why = status;
  return status.ok();
}

PrivacyProfileCurve FhProfileCurve1d(std::span<const double> eps_grid,
                                     const FHDistribution& dist,
                                     double delta_inf, int workers) {
  PrivacyProfileCurve curve;
  curve.eps_grid.assign(eps_grid.begin(), eps_grid.end());
  curve.delta_values.resize(eps_grid.size());
  curve.method = ProfileMethod::kClosedForm;
  ParallelFor(
      eps_grid.size(),
      [&](size_t i) {
        curve.delta_values[i] = FhProfile1d(eps_grid[i], dist, delta_inf);
      },
      workers);
  return curve;
}

}  // namespace fhdp
