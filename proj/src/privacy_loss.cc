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

#include "fhdp/privacy_loss.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_format.h"

namespace fhdp {
namespace {

// Relative slack for the norm inequalities, which callers often build from
// sqrt(k) and so carry an ulp of rounding.
constexpr double kNormSlack = 1e-12;

// Loss for t >= 0 and d > 0.
double CenteredLossPositive(double t, double d, double alpha) {
  const double hi = t + 0.5 * d;
  const double lo = std::abs(t - 0.5 * d);
  if (hi < alpha) return alpha * std::min(2.0 * t, d);
  if (lo < alpha) {
    // (hi^2 + alpha^2)/2 - alpha lo, rearranged to avoid cancellation.
    const double excess = hi - alpha;
    return 0.5 * excess * excess + alpha * (hi - lo);
  }
  return t * d;
}

}  // namespace

SensitivityProfile SensitivityProfile::Box(int k, double delta) {
  return {k, delta, k * delta, std::sqrt(static_cast<double>(k)) * delta};
}

absl::Status ValidateSensitivity(const SensitivityProfile& sens) {
  if (sens.k < 1) {
    return absl::InvalidArgumentError(
        absl::StrFormat("dimension must be >= 1, got %d", sens.k));
  }
  for (double v : {sens.delta_inf, sens.delta_1, sens.delta_2}) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      return absl::InvalidArgumentError(
          absl::StrFormat("sensitivities must be finite and > 0, got %g", v));
    }
  }
  const double tol = 1.0 + kNormSlack;
  if (sens.delta_inf > sens.delta_2 * tol ||
      sens.delta_2 > sens.delta_1 * tol) {
    return absl::InvalidArgumentError(
        absl::StrFormat("need delta_inf <= delta_2 <= delta_1, got %g, %g, %g",
                        sens.delta_inf, sens.delta_2, sens.delta_1));
  }
  const double k = sens.k;
  if (sens.delta_2 > std::sqrt(k) * sens.delta_inf * tol ||
      sens.delta_1 > k * sens.delta_inf * tol) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "sensitivities exceed what %d coordinates of size %g allow", sens.k,
        sens.delta_inf));
  }
  return absl::OkStatus();
}

double CenteredLoss(double t, double d, const FHParams& params) {
  if (d == 0.0 || t == 0.0) return 0.0;
  const double sign = ((t > 0.0) == (d > 0.0)) ? 1.0 : -1.0;
  const double g2 = params.gamma * params.gamma;
  return sign * CenteredLossPositive(std::abs(t), std::abs(d), params.alpha) /
         g2;
}

double CenteredLossInverse(double nu, double delta, const FHParams& params) {
  const double a = params.alpha;
  const double g2 = params.gamma * params.gamma;
  const double mag = std::abs(nu);
  const double sign = nu < 0.0 ? -1.0 : 1.0;

  // Central segment with slope 2 alpha / gamma^2. For nu < 0 the closed end
  // picks the upper end -delta/2 of the flat segment.
  const double central = std::min(2.0 * a - delta, delta) * a / g2;
  if (mag < central || (nu < 0.0 && mag == central && a >= delta)) {
    return g2 * nu / (2.0 * a);
  }
  const double wide = std::max(2.0 * a, delta);
  const double lower = (wide * wide - 2.0 * a * delta) / (2.0 * g2);
  const double excess = std::max(delta - a, 0.0);
  const double nu1 = (excess * excess + 2.0 * a * delta) / (2.0 * g2);
  const double nu2 = (delta + 2.0 * a) * delta / (2.0 * g2);
  if (mag >= lower && mag < nu1) {
    return sign * (std::sqrt(2.0 * (g2 * mag + a * delta)) - 0.5 * delta - a);
  }
  if (mag >= nu1 && mag < nu2) {
    return sign * (std::sqrt(std::max(2.0 * (g2 * mag - a * delta), 0.0)) -
                   0.5 * delta + a);
  }
  return g2 * nu / delta;
}

double RDelta(double alpha, double delta) {
  if (alpha < delta) return alpha * alpha;
  return (2.0 * alpha - delta) * delta;
}

double RDeltaInv(double nu, double delta) {
  if (nu < delta * delta) return std::sqrt(nu);
  return (nu + delta * delta) / (2.0 * delta);
}

LossBoundCoeffs AffineBound(const DifferenceNorms& d,
                            const SensitivityProfile& sens,
                            const FHParams& params) {
  const double g2 = params.gamma * params.gamma;
  const double r = RDelta(params.alpha, sens.delta_inf);
  return {1.0 / g2, (d.l2 * d.l2 + sens.k * r) / (2.0 * g2)};
}

}  // namespace fhdp
