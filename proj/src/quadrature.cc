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

#include "fhdp/quadrature.h"

#include <algorithm>
#include <cmath>

#include "boost/math/quadrature/gauss.hpp"
#include "boost/math/quadrature/gauss_kronrod.hpp"

namespace fhdp {
namespace {

// Boost halves the absolute tolerance at every level, so a piece that never
// converges (for instance one only a few ulps wide, where the error estimate
// is pure roundoff) costs 2^depth panels. Keep the cap modest.
constexpr unsigned kMaxDepth = 15;
// Pieces narrower than this fraction of the interval are merged away.
constexpr double kMinPieceFraction = 1e-12;

}  // namespace

double Integrate(const std::function<double(double)>& f, double a, double b,
                 std::span<const double> breakpoints, double rel_tol,
                 double* error) {
  std::vector<double> cuts = {a};
  for (double c : breakpoints) {
    if (c > a && c < b) cuts.push_back(c);
  }
  std::sort(cuts.begin() + 1, cuts.end());
  cuts.push_back(b);
  const double min_width = kMinPieceFraction * (b - a);
  std::vector<double> kept = {a};
  for (size_t i = 1; i + 1 < cuts.size(); ++i) {
    if (cuts[i] - kept.back() > min_width && b - cuts[i] > min_width) {
      kept.push_back(cuts[i]);
    }
  }
  kept.push_back(b);
  cuts.swap(kept);
  double total = 0.0;
  double total_error = 0.0;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] <= cuts[i]) continue;
    double piece_error = 0.0;
    total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        f, cuts[i], cuts[i + 1], kMaxDepth, rel_tol, &piece_error);
    total_error += piece_error;
  }
  if (error != nullptr) *error = total_error;
  return total;
}

void AppendGaussLegendre20(double a, double b, std::vector<double>* nodes,
                           std::vector<double>* weights) {
  using Rule = boost::math::quadrature::gauss<double, 20>;
  const auto& x = Rule::abscissa();
  const auto& w = Rule::weights();
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  // The rule stores the non-negative half; order 20 has no zero node.
  for (size_t i = 0; i < x.size(); ++i) {
    nodes->push_back(mid - half * x[i]);
    weights->push_back(half * w[i]);
    nodes->push_back(mid + half * x[i]);
    weights->push_back(half * w[i]);
  }
}

}  // namespace fhdp
