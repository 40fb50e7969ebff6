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

#include "fhdp/baselines.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_format.h"
#include "fhdp/quadrature.h"
#include "fhdp/specfun.h"

namespace fhdp {
namespace {

constexpr double kCalibrateRelTol = 1e-10;

double Clamp01(double x) {
  if (!(x > 0.0)) return 0.0;
  return std::min(x, 1.0);
}

// log(2 varrho Q(b) / phi(b)) with b = vartheta / varrho, i.e. the log
// normalizer of the density once exp(-vartheta^2 / 2 varrho^2) is factored
// out.
double OsgtLogNorm(const OsgtParams& p) {
  return std::log(2.0 * p.varrho) + std::log(MillsRatio(p.vartheta / p.varrho));
}

}  // namespace

absl::Status ValidateOsgt(const OsgtParams& params) {
  if (!(params.vartheta >= 0.0) || !std::isfinite(params.vartheta)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "vartheta must be finite and >= 0, got %g", params.vartheta));
  }
  if (!(params.varrho > 0.0) || !std::isfinite(params.varrho)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "varrho must be finite and > 0, got %g", params.varrho));
  }
  return absl::OkStatus();
}

double GaussianDelta(double epsilon, double sigma, double delta_2) {
  const double u = sigma * epsilon / delta_2;
  const double h = 0.5 * delta_2 / sigma;
  return Clamp01(GaussianTailDifference(u - h, epsilon, u + h));
}

absl::StatusOr<double> GaussianCalibrate(const PrivacyBudget& budget,
                                         double delta_2) {
  if (absl::Status s = ValidateBudget(budget); !s.ok()) return s;
  if (!(delta_2 > 0.0)) {
    return absl::InvalidArgumentError("sensitivity must be > 0");
  }
  if (budget.delta == 0.0) {
    return absl::FailedPreconditionError(
        "the Gaussian mechanism cannot reach delta = 0");
  }
  if (budget.delta >= 1.0) {
    return absl::InvalidArgumentError("delta must be < 1 for calibration");
  }
  auto feasible = [&](double s) {
    return GaussianDelta(budget.epsilon, s, delta_2) <= budget.delta;
  };
  double hi = delta_2;
  while (!feasible(hi)) {
    hi *= 2.0;
    if (hi > 1e300) return absl::InternalError("no feasible sigma found");
  }
  double lo = hi;
  while (feasible(lo)) {
    lo *= 0.5;
    if (lo < 1e-300) return lo;
  }
  while (hi / lo - 1.0 > kCalibrateRelTol) {
    const double mid = std::sqrt(lo * hi);
    if (feasible(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

absl::StatusOr<double> LaplaceCalibrate(const PrivacyBudget& budget,
                                        double delta_inf, double delta_1,
                                        LaplaceMode mode) {
  if (absl::Status s = ValidateBudget(budget); !s.ok()) return s;
  if (mode == LaplaceMode::kPureKd) {
    if (!(budget.epsilon > 0.0)) {
      return absl::FailedPreconditionError("pure DP needs epsilon > 0");
    }
    return delta_1 / budget.epsilon;
  }
  const double denom = budget.epsilon - 2.0 * std::log1p(-budget.delta);
  if (!(denom > 0.0) || !std::isfinite(denom)) {
    return absl::FailedPreconditionError(absl::StrFormat(
        "no Laplace scale reaches (%g, %g)", budget.epsilon, budget.delta));
  }
  return delta_inf / denom;
}

double LaplaceProfile1d(double epsilon, double beta, double delta_inf) {
  return Clamp01(-std::expm1(0.5 * (epsilon - delta_inf / beta)));
}

double OsgtLogPdf(double t, const OsgtParams& p) {
  const double at = std::abs(t);
  return -at * (at + 2.0 * p.vartheta) / (2.0 * p.varrho * p.varrho) -
         OsgtLogNorm(p);
}

double OsgtPdf(double t, const OsgtParams& p) {
  return std::exp(OsgtLogPdf(t, p));
}

double OsgtSurvival(double t, const OsgtParams& p) {
  // For t >= 0: Q((t + vartheta) / varrho) / (2 Q(vartheta / varrho)).
  const double b = p.vartheta / p.varrho;
  const double half =
      0.5 * std::exp(LogStdNormalSf((std::abs(t) / p.varrho) + b) -
                     LogStdNormalSf(b));
  return t >= 0.0 ? half : 1.0 - half;
}

double OsgtCenteredLoss(double t, double d, const OsgtParams& p) {
  const double g2 = p.varrho * p.varrho;
  const double sign = ((t > 0.0) == (d > 0.0)) ? 1.0 : -1.0;
  if (t == 0.0 || d == 0.0) return 0.0;
  return t * d / g2 + sign * 2.0 * p.vartheta *
                          std::min(std::abs(t), 0.5 * std::abs(d)) / g2;
}

double OsgtCenteredLossInverse(double nu, double delta, const OsgtParams& p) {
  const double g2 = p.varrho * p.varrho;
  const double knee = (delta + 2.0 * p.vartheta) * delta / (2.0 * g2);
  if (std::abs(nu) <= knee) return g2 * nu / (delta + 2.0 * p.vartheta);
  const double sign = nu < 0.0 ? -1.0 : 1.0;
  return sign * (g2 * std::abs(nu) - p.vartheta * delta) / delta;
}

double OsgtDelta(double epsilon, const OsgtParams& p, double delta_inf) {
  const double d = delta_inf;
  const double r = p.varrho;
  const double w = d + 2.0 * p.vartheta;
  const double log_2q0 = M_LN2 + LogStdNormalSf(p.vartheta / r);
  if (epsilon <= w * d / (2.0 * r * r)) {
    const double a1 = w / (2.0 * r) - r * epsilon / w;
    const double a2 = w / (2.0 * r) + r * epsilon / w;
    const double mass = std::exp(LogStdNormalSf(a1) - log_2q0) +
                        std::exp(epsilon + LogStdNormalSf(a2) - log_2q0);
    return Clamp01(1.0 - mass);
  }
  const double u = r * epsilon / d;
  const double h = 0.5 * d / r;
  const double l1 = LogStdNormalSf(u - h);
  const double l2 = LogStdNormalSf(u + h);
  return Clamp01(std::exp(l1 - log_2q0) * -std::expm1(epsilon + l2 - l1));
}

double OsgtVariance(const OsgtParams& p) {
  // The density falls off on the scale min(varrho, varrho^2 / vartheta).
  const double scale =
      p.vartheta > 0.0 ? std::min(p.varrho, p.varrho * p.varrho / p.vartheta)
                       : p.varrho;
  const double upper = std::min(12.0 * p.varrho, 80.0 * scale);
  const double cuts[] = {scale, 4.0 * scale, 16.0 * scale};
  auto f = [&p](double t) { return 2.0 * t * t * OsgtPdf(t, p); };
  return Integrate(f, 0.0, upper, cuts, 1e-12);
}

}  // namespace fhdp
