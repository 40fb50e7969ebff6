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

// Reference computations shared by the unit tests and the acceptance binary.
// They rely only on Boost.Math and on definitions, never on library shortcuts.

#ifndef FHDP_TESTS_ORACLES_H_
#define FHDP_TESTS_ORACLES_H_

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "boost/math/quadrature/gauss_kronrod.hpp"

namespace fhdp::testing {

// Piecewise adaptive Gauss-Kronrod (31 points) over consecutive cuts.
inline double Quad(const std::function<double(double)>& f,
                   std::vector<double> cuts, double tol = 1e-14) {
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  double total = 0.0;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        f, cuts[i], cuts[i + 1], 10, tol);
  }
  return total;
}

// Flipped Huber loss rho_alpha(t) from its definition.
inline double FhRho(double t, double alpha) {
  const double at = std::abs(t);
  return at <= alpha ? alpha * at : 0.5 * (t * t + alpha * alpha);
}

// Unnormalized flipped Huber density straight from the loss definition.
inline double FhKernel(double t, double alpha, double gamma) {
  return std::exp(-FhRho(t, alpha) / (gamma * gamma));
}

// Cut points resolving both the Laplace core (scale gamma^2/alpha) and the
// Gaussian tails, over [lo, hi].
inline std::vector<double> FhCuts(double alpha, double gamma, double lo,
                                  double hi) {
  std::vector<double> cuts = {lo, hi, 0.0};
  const double scale = alpha > 0 ? gamma * gamma / alpha : gamma;
  for (double k : {1.0, 4.0, 16.0, 64.0, 256.0}) {
    for (double c : {k * scale, k * gamma, alpha + k * gamma / 16}) {
      cuts.push_back(c);
      cuts.push_back(-c);
    }
  }
  cuts.push_back(alpha);
  cuts.push_back(-alpha);
  std::erase_if(cuts, [&](double c) { return c < lo || c > hi; });
  return cuts;
}

// Normalizing constant of the kernel by quadrature over the 12-gamma window.
inline double FhMass(double alpha, double gamma) {
  const double w = alpha + 12 * gamma;
  return Quad([&](double t) { return FhKernel(t, alpha, gamma); },
              FhCuts(alpha, gamma, -w, w));
}

// E[f(T)] for T ~ FH(alpha, gamma^2), by quadrature.
inline double FhExpect(const std::function<double(double)>& f, double alpha,
                       double gamma, double window_gammas = 12.0) {
  const double w = alpha + window_gammas * gamma;
  const auto cuts = FhCuts(alpha, gamma, -w, w);
  const double mass =
      Quad([&](double t) { return FhKernel(t, alpha, gamma); }, cuts);
  return Quad([&](double t) { return f(t) * FhKernel(t, alpha, gamma); },
              cuts) /
         mass;
}

// E[exp(s zeta_d(T))] by quadrature, the Renyi moment of order s + 1, where
// zeta_d(t) = (rho(t + d) - rho(t)) / gamma^2 is the privacy loss at output
// t for a shift d.
inline double LossMoment(double s, double alpha, double gamma, double d) {
  const double w = alpha + 20.0 * gamma + s * d;
  std::vector<double> cuts = FhCuts(alpha, gamma, -w, w);
  for (double c : {-alpha - d, -d, alpha - d}) cuts.push_back(c);
  const double g2 = gamma * gamma;
  const double mass =
      Quad([&](double t) { return FhKernel(t, alpha, gamma); }, cuts);
  const double moment = Quad(
      [&](double t) {
        const double loss = (FhRho(t + d, alpha) - FhRho(t, alpha)) / g2;
        return std::exp(s * loss) * FhKernel(t, alpha, gamma);
      },
      cuts);
  return moment / mass;
}

// Two-sided Kolmogorov-Smirnov statistic of sorted samples against cdf.
inline double KsStatistic(std::vector<double> xs,
                          const std::function<double(double)>& cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max({d, f - i / n, (i + 1) / n - f});
  }
  return d;
}

// Asymptotic 0.1% critical value of sqrt(n) * D.
inline constexpr double kKsCritical001 = 1.94947;

}  // namespace fhdp::testing

#endif  // FHDP_TESTS_ORACLES_H_
