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

#include "fhdp/accountant_kd.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "absl/strings/str_format.h"
#include "fhdp/parallel.h"
#include "fhdp/quadrature.h"
#include "fhdp/specfun.h"

namespace fhdp {
namespace {

// Folding kernel on a grid with spacing h: weight[m] is the probability that
// the one-coordinate loss moves delta by m grid steps, after splitting each
// draw between the two neighboring steps by linear interpolation.
struct FoldKernel {
  int offset = 0;  // index of step 0 in weight
  std::vector<double> weight;
  double mass = 0.0;
};

FoldKernel BuildKernel(const FHDistribution& dist, const FHParams& params,
                       double delta, double h, double window) {
  auto loss = [&](double t) {
    return CenteredLoss(t + 0.5 * delta, delta, params);
  };
  const double lo = -window;
  const double hi = window;
  // Split the window wherever the loss crosses a grid multiple and at the
  // kinks of the density and the loss, so each piece is smooth and has a
  // single interpolation cell.
  std::vector<double> cuts = {lo, hi};
  const double a = params.alpha;
  for (double c : {-a - delta, -a, -delta, a - delta, 0.0, a}) {
    cuts.push_back(c);
  }
  const int m_lo = static_cast<int>(std::floor(loss(lo) / h));
  const int m_hi = static_cast<int>(std::ceil(loss(hi) / h));
  for (int m = m_lo; m <= m_hi; ++m) {
    cuts.push_back(CenteredLossInverse(m * h, delta, params) - 0.5 * delta);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::remove_if(cuts.begin(), cuts.end(),
                            [&](double c) { return c < lo || c > hi; }),
             cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  FoldKernel kernel;
  kernel.offset = -m_lo + 1;
  kernel.weight.assign(m_hi - m_lo + 3, 0.0);
  std::vector<double> nodes;
  std::vector<double> weights;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] - cuts[i] <= 0.0) continue;
    nodes.clear();
    weights.clear();
    AppendGaussLegendre20(cuts[i], cuts[i + 1], &nodes, &weights);
    const double cell = std::floor(loss(0.5 * (cuts[i] + cuts[i + 1])) / h);
    for (size_t q = 0; q < nodes.size(); ++q) {
      const double w = weights[q] * dist.Pdf(nodes[q]);
      const double frac = std::clamp(loss(nodes[q]) / h - cell, 0.0, 1.0);
      // delta(nu - l) with l = (cell + frac) h interpolates between grid
      // points cell and cell + 1 steps down.
      const int idx = static_cast<int>(cell) + kernel.offset;
      kernel.weight[idx] += w * (1.0 - frac);
      kernel.weight[idx + 1] += w * frac;
      kernel.mass += w;
    }
  }
  return kernel;
}

}  // namespace

double DominanceMean(const FHDistribution& dist) { return dist.theta(); }

double SufficientAlphaCap(double epsilon, double gamma,
                          const SensitivityProfile& sens) {
  const double budget =
      (2.0 * gamma * gamma * epsilon - sens.delta_2 * sens.delta_2) / sens.k;
  if (budget < 0.0) return -1.0;
  return RDeltaInv(budget, sens.delta_inf);
}

SufficientDelta SufficientDeltaKd(double epsilon, const FHDistribution& dist,
                                  const SensitivityProfile& sens) {
  const double g = dist.gamma();
  const double alpha = dist.is_gaussian() ? 0.0 : dist.alpha();
  const double r = RDelta(alpha, sens.delta_inf);
  const double d2 = sens.delta_2;
  if (sens.k * r > 2.0 * g * g * epsilon - d2 * d2) return {};
  const double shift = sens.k * r / (2.0 * g * d2);
  const double theta = dist.is_gaussian() ? 0.0 : dist.theta();
  const double a1 = g * epsilon / d2 - 0.5 * d2 / g - shift;
  const double a2 =
      g * epsilon / d2 + 0.5 * d2 / g + shift + theta * sens.delta_1 / (g * d2);
  const double v = GaussianTailDifference(a1, epsilon, a2);
  return {true, std::clamp(v, 0.0, 1.0)};
}

absl::StatusOr<PrivacyProfileCurve> NumericProfileKd(const FHDistribution& dist,
                                                     int k, double delta_inf,
                                                     const KfoldGrid& grid,
                                                     int workers) {
  if (k < 1) {
    return absl::InvalidArgumentError(
        absl::StrFormat("fold count must be >= 1, got %d", k));
  }
  if (grid.points < 3) {
    return absl::InvalidArgumentError("the nu grid needs at least 3 points");
  }
  FHParams params = dist.params();
  if (dist.is_gaussian()) params.alpha = 0.0;
  if ((params.alpha > 0.0 && params.alpha < kNumericMinAlpha) ||
      params.gamma < kNumericMinGamma) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "numeric folding needs alpha = 0 or alpha >= %g and gamma >= %g; got "
        "(%g, %g)",
        kNumericMinAlpha, kNumericMinGamma, params.alpha, params.gamma));
  }
  const double window = params.alpha + grid.window_gammas * params.gamma;
  const double nu_max =
      grid.nu_max > 0.0
          ? grid.nu_max
          : CenteredLoss(window + 0.5 * delta_inf, delta_inf, params);
  const int n = grid.points;
  const double h = 2.0 * nu_max / (n - 1);

  PrivacyProfileCurve curve;
  curve.method = ProfileMethod::kNumericKfold;
  curve.eps_grid.resize(n);
  for (int j = 0; j < n; ++j) curve.eps_grid[j] = -nu_max + j * h;
  curve.eps_grid[n - 1] = nu_max;
  std::vector<double> current(n);
  ParallelFor(
      n,
      [&](size_t j) {
        current[j] = FhGenericProfile1d(curve.eps_grid[j], dist, delta_inf);
      },
      workers);
  if (k > 1) {
    const FoldKernel kernel = BuildKernel(dist, params, delta_inf, h, window);
    if (kernel.mass < 1.0 - kNumericMassLoss) {
      return absl::OutOfRangeError(absl::StrFormat(
          "quadrature window keeps only %.9f of the noise mass", kernel.mass));
    }
    const int width = static_cast<int>(kernel.weight.size());
    std::vector<double> next(n);
    for (int fold = 2; fold <= k; ++fold) {
      ParallelFor(
          n,
          [&](size_t j) {
            double acc = 0.0;
            for (int s = 0; s < width; ++s) {
              const double w = kernel.weight[s];
              if (w == 0.0) continue;
              const int src = static_cast<int>(j) - (s - kernel.offset);
              const double v = src < 0 ? 1.0 : current[std::min(src, n - 1)];
              acc += w * v;
            }
            next[j] = std::clamp(acc, 0.0, 1.0);
          },
          workers);
      current.swap(next);
    }
  }
  curve.delta_values = std::move(current);
  return curve;
}

double EvaluateProfile(const PrivacyProfileCurve& curve, double epsilon) {
  const std::vector<double>& x = curve.eps_grid;
  const std::vector<double>& y = curve.delta_values;
  if (x.empty()) return 1.0;
  if (epsilon < x.front()) return 1.0;
  if (epsilon >= x.back()) return y.back();
  const size_t hi = std::upper_bound(x.begin(), x.end(), epsilon) - x.begin();
  const size_t lo = hi - 1;
  const double f = (epsilon - x[lo]) / (x[hi] - x[lo]);
  return y[lo] + f * (y[hi] - y[lo]);
}

}  // namespace fhdp
