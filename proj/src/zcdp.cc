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

#include "fhdp/zcdp.h"

#include <cmath>
#include <cstdint>
#include <limits>

#include "absl/strings/str_format.h"
#include "boost/math/tools/minima.hpp"

namespace fhdp {
namespace {

// eps for a single Renyi order lambda = 1 + exp(u).
double OptimizedEpsAt(const ZcdpParams& z, double log_inv_delta, double u) {
  const double lm1 = std::exp(u);
  const double lambda = 1.0 + lm1;
  return z.xi + lambda * z.eta + std::log(lm1 / lambda) +
         (log_inv_delta - std::log(lambda)) / lm1;
}

// eta such that (xi, eta) converts to exactly eps at delta.
absl::StatusOr<double> EtaForBudget(double xi, const PrivacyBudget& budget,
                                    ZcdpConversion conversion) {
  const double ld = -std::log(budget.delta);
  if (conversion == ZcdpConversion::kStandard) {
    const double root = std::sqrt(ld + budget.epsilon - xi) - std::sqrt(ld);
    return root * root;
  }
  // The converted eps is increasing in eta; bracket and bisect.
  double lo = 0.0;
  double hi = 1.0;
  auto eps_of = [&](double eta) -> absl::StatusOr<double> {
    return ZcdpToDp({xi, eta}, budget.delta, conversion);
  };
  for (int i = 0; i < 200; ++i) {
    absl::StatusOr<double> e = eps_of(hi);
    if (!e.ok()) return e.status();
    if (*e > budget.epsilon) break;
    lo = hi;
    hi *= 2.0;
  }
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    absl::StatusOr<double> e = eps_of(mid);
    if (!e.ok()) return e.status();
    if (*e > budget.epsilon) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return lo;
}

}  // namespace

ZcdpParams FhZcdp(const FHParams& params, const SensitivityProfile& sens) {
  const double g2 = params.gamma * params.gamma;
  return {sens.k * RDelta(params.alpha, sens.delta_inf) / (2.0 * g2),
          sens.delta_2 * sens.delta_2 / (2.0 * g2)};
}

ZcdpParams Compose(std::span<const ZcdpParams> parts) {
  ZcdpParams total;
  for (const ZcdpParams& p : parts) {
    total.xi += p.xi;
    total.eta += p.eta;
  }
  return total;
}

std::string_view ZcdpConversionName(ZcdpConversion conversion) {
  return conversion == ZcdpConversion::kStandard ? "standard" : "optimized";
}

absl::StatusOr<double> ZcdpToDp(const ZcdpParams& z, double delta,
                                ZcdpConversion conversion) {
  if (!(delta > 0.0 && delta < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("delta must lie in (0, 1), got %g", delta));
  }
  if (!(z.xi >= 0.0) || !(z.eta >= 0.0)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "zCDP parameters must be >= 0, got (%g, %g)", z.xi, z.eta));
  }
  const double ld = -std::log(delta);
  const double standard = z.xi + z.eta + 2.0 * std::sqrt(z.eta * ld);
  if (conversion == ZcdpConversion::kStandard || z.eta == 0.0) {
    return standard;
  }
  // The standard conversion's optimal order is 1 + sqrt(ld / eta); search
  // around it in log(lambda - 1).
  const double center = 0.5 * std::log(ld / z.eta);
  std::uintmax_t iters = 200;
  const auto [u, eps] = boost::math::tools::brent_find_minima(
      [&](double u) { return OptimizedEpsAt(z, ld, u); }, center - 30.0,
      center + 30.0, 52, iters);
  (void)u;
  return std::max(0.0, std::min(eps, standard));
}

absl::StatusOr<FHParams> FhParamsFromZcdp(const ZcdpParams& z,
                                          const SensitivityProfile& sens,
                                          int folds) {
  if (folds < 1) {
    return absl::InvalidArgumentError("fold count must be >= 1");
  }
  if (!(z.eta > 0.0)) {
    return absl::InvalidArgumentError("eta must be > 0");
  }
  if (!(z.xi >= 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("xi must be >= 0, got %g", z.xi));
  }
  const double xi0 = z.xi / folds;
  const double eta0 = z.eta / folds;
  const double d2 = sens.delta_2;
  return FHParams{RDeltaInv(d2 * d2 * xi0 / (sens.k * eta0), sens.delta_inf),
                  d2 / std::sqrt(2.0 * eta0)};
}

absl::StatusOr<std::vector<FHParams>> PerCoordinateFhParams(
    const ZcdpParams& z, std::span<const double> lambdas, int folds) {
  if (folds < 1 || lambdas.empty()) {
    return absl::InvalidArgumentError("need folds >= 1 and a coordinate");
  }
  if (!(z.eta > 0.0) || !(z.xi >= 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("need xi >= 0 and eta > 0, got (%g, %g)", z.xi, z.eta));
  }
  const double unit_alpha = RDeltaInv(z.xi / z.eta, 1.0);
  const double unit_gamma =
      std::sqrt(static_cast<double>(lambdas.size()) * folds / (2.0 * z.eta));
  std::vector<FHParams> out;
  out.reserve(lambdas.size());
  for (double lambda : lambdas) {
    if (!(lambda > 0.0)) {
      return absl::InvalidArgumentError("sensitivities must be > 0");
    }
    out.push_back({lambda * unit_alpha, lambda * unit_gamma});
  }
  return out;
}

absl::StatusOr<ZcdpSelection> SelectZcdp(const PrivacyBudget& budget,
                                         int coordinates, int folds,
                                         ZcdpConversion conversion,
                                         int grid_points, bool gaussian_only) {
  if (absl::Status s = ValidateBudget(budget); !s.ok()) return s;
  if (!(budget.delta > 0.0 && budget.delta < 1.0) || !(budget.epsilon > 0.0)) {
    return absl::FailedPreconditionError(
        "zCDP selection needs eps > 0 and delta in (0, 1)");
  }
  if (coordinates < 1 || folds < 1 || grid_points < 1) {
    return absl::InvalidArgumentError(
        "coordinates, folds and grid points must be >= 1");
  }
  const int points = gaussian_only ? 1 : grid_points;
  ZcdpSelection best;
  best.unit_variance = std::numeric_limits<double>::infinity();
  for (int i = 0; i < points; ++i) {
    const double xi = budget.epsilon * i / points;
    absl::StatusOr<double> eta = EtaForBudget(xi, budget, conversion);
    if (!eta.ok()) return eta.status();
    if (!(*eta > 0.0)) continue;
    const ZcdpParams z{xi, *eta};
    // Unit-sensitivity release, one of coordinates * folds.
    const FHParams unit{
        RDeltaInv(xi / *eta, 1.0),
        std::sqrt(static_cast<double>(coordinates) * folds / (2.0 * *eta))};
    absl::StatusOr<FHDistribution> dist = FHDistribution::Create(unit);
    if (!dist.ok()) return dist.status();
    const double v = dist->Variance();
    if (v < best.unit_variance) {
      best.unit_variance = v;
      best.z = z;
    }
  }
  if (!std::isfinite(best.unit_variance)) {
    return absl::FailedPreconditionError("no admissible (xi, eta) pair");
  }
  return best;
}

}  // namespace fhdp
