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

#include "fhdp/calibration.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>

#include "absl/strings/str_format.h"
#include "fhdp/parallel.h"

namespace fhdp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kShrink = 5.0;

struct Candidate {
  double x = 0.0;
  double y = 0.0;
  double variance = kInf;
  double delta = 1.0;
  bool found = false;
};

// Lower variance wins; ties go to smaller y (gamma), then smaller x (alpha).
bool Better(const Candidate& a, const Candidate& b) {
  if (!a.found) return false;
  if (!b.found) return true;
  if (a.variance != b.variance) return a.variance < b.variance;
  if (a.y != b.y) return a.y < b.y;
  return a.x < b.x;
}

struct Evaluation {
  double variance;
  double delta;
};

// Returns the variance and delta when (x, y) meets the budget.
using Evaluator = std::function<std::optional<Evaluation>(double, double)>;
// Lower end of the y axis for a given x; infinite skips the column.
using ColumnFloor = std::function<double(double)>;

constexpr double kBoundaryRtol = 1e-7;

double LogSpace(double lo, double hi, int i, int n) {
  if (n <= 1 || hi <= lo) return std::exp(lo);
  return std::exp(lo + (hi - lo) * i / (n - 1));
}

// Log-grid search with box refinement around the incumbent. Each x column
// scans its y grid; where the column turns feasible, the boundary between
// the two grid points is located by bisection, since the grid step in y
// otherwise dominates the variance error. Columns are evaluated in parallel
// and reduced in index order.
Candidate GridSearch(const SearchRegion& region, const ColumnFloor& floor,
                     const Evaluator& eval, int workers) {
  const double x_lo = std::log(region.alpha_range.first);
  const double x_hi = std::log(region.alpha_range.second);
  const double y_lo = std::log(region.gamma_range.first);
  const double y_hi = std::log(region.gamma_range.second);
  double bx_lo = x_lo, bx_hi = x_hi, by_lo = y_lo, by_hi = y_hi;
  double half_x = 0.5 * (x_hi - x_lo);
  double half_y = 0.5 * (y_hi - y_lo);
  const int n = std::max(2, region.coarse_points);

  Candidate best;
  for (int round = 0; round <= region.refine_rounds; ++round) {
    std::vector<Candidate> columns(n);
    ParallelFor(
        n,
        [&](size_t j) {
          const double x = LogSpace(bx_lo, bx_hi, static_cast<int>(j), n);
          const double f = floor(x);
          if (!(f < std::exp(by_hi))) return;
          const double col_lo = f > 0.0 ? std::max(by_lo, std::log(f)) : by_lo;
          Candidate col;
          double prev_y = 0.0;
          bool prev_feasible = true;
          for (int i = 0; i < n; ++i) {
            const double y = LogSpace(col_lo, by_hi, i, n);
            const std::optional<Evaluation> e = eval(x, y);
            if (e.has_value() && i > 0 && !prev_feasible) {
              double lo = prev_y;
              double hi = y;
              Evaluation at_hi = *e;
              while (hi / lo > 1.0 + kBoundaryRtol) {
                const double mid = std::sqrt(lo * hi);
                if (std::optional<Evaluation> m = eval(x, mid); m.has_value()) {
                  hi = mid;
                  at_hi = *m;
                } else {
                  lo = mid;
                }
              }
              Candidate edge{x, hi, at_hi.variance, at_hi.delta, true};
              if (Better(edge, col)) col = edge;
            }
            prev_y = y;
            prev_feasible = e.has_value();
            if (!e.has_value()) continue;
            Candidate cand{x, y, e->variance, e->delta, true};
            if (Better(cand, col)) col = cand;
          }
          columns[j] = col;
        },
        workers);
    for (const Candidate& col : columns) {
      if (Better(col, best)) best = col;
    }
    if (!best.found) break;
    half_x /= kShrink;
    half_y /= kShrink;
    const double cx = std::log(best.x);
    const double cy = std::log(best.y);
    bx_lo = std::max(x_lo, cx - half_x);
    bx_hi = std::min(x_hi, cx + half_x);
    by_lo = std::max(y_lo, cy - half_y);
    by_hi = std::min(y_hi, cy + half_y);
  }
  return best;
}

absl::Status ValidateCalibrationBudget(const PrivacyBudget& budget) {
  if (absl::Status s = ValidateBudget(budget); !s.ok()) return s;
  if (!(budget.delta > 0.0 && budget.delta < 1.0)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "calibration needs delta in (0, 1), got %g", budget.delta));
  }
  return absl::OkStatus();
}

absl::Status ValidateScalar(double delta_inf) {
  if (!(delta_inf > 0.0) || !std::isfinite(delta_inf)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "sensitivity must be finite and > 0, got %g", delta_inf));
  }
  return absl::OkStatus();
}

std::optional<double> FhVariance(double alpha, double gamma) {
  absl::StatusOr<FHDistribution> dist = FHDistribution::Create({alpha, gamma});
  if (!dist.ok()) return std::nullopt;
  return dist->Variance();
}

CalibrationResult Infeasible(Mechanism mechanism, CalibrationMethod method) {
  CalibrationResult r;
  r.mechanism = mechanism;
  r.method = method;
  return r;
}

CalibrationResult FhResult(const Candidate& c, CalibrationMethod method) {
  CalibrationResult r;
  r.mechanism = Mechanism::kFlippedHuber;
  r.params = FHParams{c.x, c.y};
  r.variance = c.variance;
  r.method = method;
  r.feasible = true;
  r.achieved_delta = c.delta;
  return r;
}

}  // namespace

absl::Status ValidateRegion(const SearchRegion& region) {
  for (const auto& [lo, hi] : {region.alpha_range, region.gamma_range}) {
    if (!(lo > 0.0 && hi > lo) || !std::isfinite(hi)) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "search range (%g, %g) needs 0 < lo < hi < inf", lo, hi));
    }
  }
  if (region.coarse_points < 2 || region.refine_rounds < 0) {
    return absl::InvalidArgumentError(
        absl::StrFormat("need coarse_points >= 2 and refine_rounds >= 0, got "
                        "%d and %d",
                        region.coarse_points, region.refine_rounds));
  }
  return absl::OkStatus();
}

std::string_view MechanismName(Mechanism mechanism) {
  switch (mechanism) {
    case Mechanism::kFlippedHuber:
      return "fh";
    case Mechanism::kGaussian:
      return "gaussian";
    case Mechanism::kLaplace:
      return "laplace";
    case Mechanism::kOsgt:
      return "osgt";
  }
  return "unknown";
}

std::string_view CalibrationMethodName(CalibrationMethod method) {
  switch (method) {
    case CalibrationMethod::kClosed:
      return "closed";
    case CalibrationMethod::kSufficientKd:
      return "sufficient";
    case CalibrationMethod::kNumericKd:
      return "numeric";
  }
  return "unknown";
}

absl::StatusOr<CalibrationResult> CalibrateFh1d(const PrivacyBudget& budget,
                                                double delta_inf,
                                                const SearchRegion& region,
                                                int workers) {
  if (absl::Status s = ValidateCalibrationBudget(budget); !s.ok()) return s;
  if (absl::Status s = ValidateScalar(delta_inf); !s.ok()) return s;
  if (absl::Status s = ValidateRegion(region); !s.ok()) return s;

  const Evaluator eval = [&](double a, double g) -> std::optional<Evaluation> {
    absl::StatusOr<FHDistribution> dist = FHDistribution::Create({a, g});
    if (!dist.ok()) return std::nullopt;
    const double d = FhProfile1d(budget.epsilon, *dist, delta_inf);
    if (!(d <= budget.delta)) return std::nullopt;
    return Evaluation{dist->Variance(), d};
  };
  const ColumnFloor no_floor = [](double) { return 0.0; };
  Candidate best = GridSearch(region, no_floor, eval, workers);

  // The explicit construction from the Gaussian calibration.
  absl::StatusOr<double> sigma = GaussianCalibrate(budget, delta_inf);
  if (sigma.ok()) {
    const double g = *sigma;
    const double a =
        std::max(0.0, g * g * budget.epsilon / delta_inf - 0.5 * delta_inf);
    if (std::optional<Evaluation> e = eval(a, g); e.has_value()) {
      Candidate anchor{a, g, e->variance, e->delta, true};
      if (Better(anchor, best)) best = anchor;
    }
  }
  if (!best.found) {
    return Infeasible(Mechanism::kFlippedHuber, CalibrationMethod::kClosed);
  }

  absl::StatusOr<FHDistribution> dist =
      FHDistribution::Create({best.x, best.y});
  absl::Status why;
  if (!dist.ok() || !IsDp1d(budget, *dist, delta_inf, &why)) {
    return absl::InternalError(
        absl::StrFormat("calibrated point (%g, %g) fails re-verification: %s",
                        best.x, best.y, why.message()));
  }
  return FhResult(best, CalibrationMethod::kClosed);
}

absl::StatusOr<CalibrationResult> CalibrateFhKdSufficient(
    const PrivacyBudget& budget, const SensitivityProfile& sens,
    const SearchRegion& region, int workers) {
  if (absl::Status s = ValidateCalibrationBudget(budget); !s.ok()) return s;
  if (absl::Status s = ValidateSensitivity(sens); !s.ok()) return s;
  if (absl::Status s = ValidateRegion(region); !s.ok()) return s;

  const Evaluator eval = [&](double a, double g) -> std::optional<Evaluation> {
    absl::StatusOr<FHDistribution> dist = FHDistribution::Create({a, g});
    if (!dist.ok()) return std::nullopt;
    const SufficientDelta s = SufficientDeltaKd(budget.epsilon, *dist, sens);
    if (!s.feasible || !(s.delta <= budget.delta)) return std::nullopt;
    return Evaluation{dist->Variance(), s.delta};
  };
  // The alpha constraint read as a floor on gamma: K R(alpha) + delta_2^2 <=
  // 2 gamma^2 eps.
  const ColumnFloor floor = [&](double a) {
    if (!(budget.epsilon > 0.0)) return kInf;
    const double r = RDelta(a, sens.delta_inf);
    return std::sqrt((sens.k * r + sens.delta_2 * sens.delta_2) /
                     (2.0 * budget.epsilon));
  };
  const Candidate best = GridSearch(region, floor, eval, workers);
  if (!best.found) {
    return Infeasible(Mechanism::kFlippedHuber,
                      CalibrationMethod::kSufficientKd);
  }
  absl::StatusOr<FHDistribution> dist =
      FHDistribution::Create({best.x, best.y});
  const SufficientDelta check =
      dist.ok() ? SufficientDeltaKd(budget.epsilon, *dist, sens)
                : SufficientDelta{};
  if (!check.feasible || check.delta > budget.delta) {
    return absl::InternalError(absl::StrFormat(
        "calibrated point (%g, %g) fails re-verification", best.x, best.y));
  }
  return FhResult(best, CalibrationMethod::kSufficientKd);
}

absl::StatusOr<CalibrationResult> CalibrateFhKdNumeric(
    const PrivacyBudget& budget, const SensitivityProfile& sens,
    const SearchRegion& region, const KfoldGrid& grid,
    const NumericSearch& search, int workers) {
  if (absl::Status s = ValidateCalibrationBudget(budget); !s.ok()) return s;
  if (absl::Status s = ValidateSensitivity(sens); !s.ok()) return s;
  if (absl::Status s = ValidateRegion(region); !s.ok()) return s;
  if (sens.k > search.max_k) {
    return absl::FailedPreconditionError(absl::StrFormat(
        "numeric folding is limited to k <= %d (got %d); use the sufficient "
        "condition instead",
        search.max_k, sens.k));
  }
  if (search.b_points < 2 || search.refine_b_points < 2 ||
      !(search.gamma_rtol > 0.0)) {
    return absl::InvalidArgumentError("invalid numeric search settings");
  }
  const double a_lo = std::max(region.alpha_range.first, kNumericMinAlpha);
  const double a_hi = region.alpha_range.second;
  const double g_lo = std::max(region.gamma_range.first, kNumericMinGamma);
  const double g_hi = region.gamma_range.second;
  if (a_lo >= a_hi || g_lo >= g_hi) {
    return Infeasible(Mechanism::kFlippedHuber, CalibrationMethod::kNumericKd);
  }

  // Every coordinate moves by delta_inf, the worst case for an l_inf ball.
  auto profile_delta = [&](double a, double g,
                           const KfoldGrid& kg) -> std::optional<double> {
    absl::StatusOr<FHDistribution> dist = FHDistribution::Create({a, g});
    if (!dist.ok()) return std::nullopt;
    absl::StatusOr<PrivacyProfileCurve> curve =
        NumericProfileKd(*dist, sens.k, sens.delta_inf, kg, 1);
    if (!curve.ok()) return std::nullopt;
    return EvaluateProfile(*curve, budget.epsilon);
  };
  auto admissible = [&](double b, double g,
                        const KfoldGrid& kg) -> std::optional<double> {
    std::optional<double> d = profile_delta(b * g, g, kg);
    if (d.has_value() && *d <= budget.delta) return d;
    return std::nullopt;
  };
  // Smallest admissible gamma at fixed b within [lo, hi], found by geometric
  // bisection. Returns the candidate with x = alpha.
  auto solve_b = [&](double b, double lo, double hi,
                     const KfoldGrid& kg) -> Candidate {
    Candidate c;
    std::optional<double> d_hi = admissible(b, hi, kg);
    if (!d_hi.has_value()) return c;
    std::optional<double> d_lo = admissible(b, lo, kg);
    if (d_lo.has_value()) {
      hi = lo;
      d_hi = d_lo;
    } else {
      while (hi / lo > 1.0 + search.gamma_rtol) {
        const double mid = std::sqrt(lo * hi);
        std::optional<double> d = admissible(b, mid, kg);
        if (d.has_value()) {
          hi = mid;
          d_hi = d;
        } else {
          lo = mid;
        }
      }
    }
    const std::optional<double> v = FhVariance(b * hi, hi);
    if (!v.has_value()) return c;
    return Candidate{b * hi, hi, *v, *d_hi, true};
  };
  auto gamma_bounds = [&](double b) {
    return std::make_pair(std::max(g_lo, a_lo / b), std::min(g_hi, a_hi / b));
  };

  KfoldGrid coarse = grid;
  coarse.points = std::min(grid.points, search.search_grid_points);
  const double lb_lo = std::log(a_lo / g_hi);
  const double lb_hi = std::log(a_hi / g_lo);
  double box_lo = lb_lo, box_hi = lb_hi;
  double half = 0.5 * (lb_hi - lb_lo);
  Candidate best;
  for (int round = 0; round <= region.refine_rounds; ++round) {
    const int n = round == 0 ? search.b_points : search.refine_b_points;
    std::vector<Candidate> found(n);
    ParallelFor(
        n,
        [&](size_t i) {
          const double b = LogSpace(box_lo, box_hi, static_cast<int>(i), n);
          const auto [lo, hi] = gamma_bounds(b);
          if (lo > hi) return;
          found[i] = solve_b(b, lo, hi, coarse);
        },
        workers);
    for (const Candidate& c : found) {
      if (Better(c, best)) best = c;
    }
    if (!best.found) break;
    half /= kShrink;
    const double center = std::log(best.x / best.y);
    box_lo = std::max(lb_lo, center - half);
    box_hi = std::min(lb_hi, center + half);
  }
  if (!best.found) {
    return Infeasible(Mechanism::kFlippedHuber, CalibrationMethod::kNumericKd);
  }

  // Re-check on the full grid, moving gamma up if the coarse grid was
  // optimistic.
  const double b = best.x / best.y;
  if (std::optional<double> d = admissible(b, best.y, grid); d.has_value()) {
    best.delta = *d;
  } else {
    best = solve_b(b, best.y, gamma_bounds(b).second, grid);
    if (!best.found) {
      return Infeasible(Mechanism::kFlippedHuber,
                        CalibrationMethod::kNumericKd);
    }
  }
  return FhResult(best, CalibrationMethod::kNumericKd);
}

absl::StatusOr<CalibrationResult> CalibrateGaussian(
    const PrivacyBudget& budget, const SensitivityProfile& sens) {
  if (absl::Status s = ValidateCalibrationBudget(budget); !s.ok()) return s;
  if (absl::Status s = ValidateSensitivity(sens); !s.ok()) return s;
  absl::StatusOr<double> sigma = GaussianCalibrate(budget, sens.delta_2);
  if (!sigma.ok()) return sigma.status();
  CalibrationResult r;
  r.mechanism = Mechanism::kGaussian;
  r.params = GaussianParams{*sigma};
  r.variance = *sigma * *sigma;
  r.feasible = true;
  r.achieved_delta = GaussianDelta(budget.epsilon, *sigma, sens.delta_2);
  return r;
}

absl::StatusOr<CalibrationResult> CalibrateLaplace(
    const PrivacyBudget& budget, const SensitivityProfile& sens) {
  if (absl::Status s = ValidateCalibrationBudget(budget); !s.ok()) return s;
  if (absl::Status s = ValidateSensitivity(sens); !s.ok()) return s;
  const LaplaceMode mode =
      sens.k == 1 ? LaplaceMode::kApprox1d : LaplaceMode::kPureKd;
  absl::StatusOr<double> beta =
      LaplaceCalibrate(budget, sens.delta_inf, sens.delta_1, mode);
  if (!beta.ok()) return beta.status();
  CalibrationResult r;
  r.mechanism = Mechanism::kLaplace;
  r.params = LaplaceParams{*beta};
  r.variance = LaplaceVariance(*beta);
  r.feasible = true;
  r.achieved_delta =
      mode == LaplaceMode::kPureKd
          ? 0.0
          : LaplaceProfile1d(budget.epsilon, *beta, sens.delta_inf);
  return r;
}

absl::StatusOr<CalibrationResult> CalibrateOsgt(const PrivacyBudget& budget,
                                                double delta_inf,
                                                const SearchRegion& region,
                                                int workers) {
  if (absl::Status s = ValidateCalibrationBudget(budget); !s.ok()) return s;
  if (absl::Status s = ValidateScalar(delta_inf); !s.ok()) return s;
  if (absl::Status s = ValidateRegion(region); !s.ok()) return s;

  const Evaluator eval = [&](double vt,
                             double vr) -> std::optional<Evaluation> {
    const OsgtParams p{vt, vr};
    const double d = OsgtDelta(budget.epsilon, p, delta_inf);
    if (!(d <= budget.delta)) return std::nullopt;
    return Evaluation{OsgtVariance(p), d};
  };
  const ColumnFloor no_floor = [](double) { return 0.0; };
  const Candidate best = GridSearch(region, no_floor, eval, workers);
  if (!best.found) {
    return Infeasible(Mechanism::kOsgt, CalibrationMethod::kClosed);
  }
  if (OsgtDelta(budget.epsilon, {best.x, best.y}, delta_inf) > budget.delta) {
    return absl::InternalError("OSGT calibration fails re-verification");
  }
  CalibrationResult r;
  r.mechanism = Mechanism::kOsgt;
  r.params = OsgtParams{best.x, best.y};
  r.variance = best.variance;
  r.feasible = true;
  r.achieved_delta = best.delta;
  return r;
}

std::vector<ComparisonRow> CompareMechanisms(
    const PrivacyBudget& budget, const SensitivityProfile& sens,
    std::span<const Mechanism> mechanisms, const CompareOptions& options) {
  std::vector<ComparisonRow> rows;
  rows.reserve(mechanisms.size());
  for (Mechanism m : mechanisms) {
    ComparisonRow row{m, absl::UnknownError("not run")};
    switch (m) {
      case Mechanism::kFlippedHuber:
        if (sens.k == 1) {
          row.result = CalibrateFh1d(budget, sens.delta_inf, options.region,
                                     options.workers);
        } else if (options.fh_kd_method == CalibrationMethod::kNumericKd) {
          row.result =
              CalibrateFhKdNumeric(budget, sens, options.region, options.grid,
                                   options.numeric, options.workers);
        } else {
          row.result = CalibrateFhKdSufficient(budget, sens, options.region,
                                               options.workers);
        }
        break;
      case Mechanism::kGaussian:
        row.result = CalibrateGaussian(budget, sens);
        break;
      case Mechanism::kLaplace:
        row.result = CalibrateLaplace(budget, sens);
        break;
      case Mechanism::kOsgt:
        if (sens.k == 1) {
          row.result = CalibrateOsgt(budget, sens.delta_inf, options.region,
                                     options.workers);
        } else {
          row.result = absl::UnimplementedError(
              "OSGT has only a one-dimensional accountant");
        }
        break;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace fhdp
