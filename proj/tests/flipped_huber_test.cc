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

#include "fhdp/flipped_huber.h"

#include <cmath>
#include <vector>

#include "fhdp/specfun.h"
#include "gtest/gtest.h"
#include "oracles.h"

namespace fhdp {
namespace {

using ::fhdp::testing::FhCuts;
using ::fhdp::testing::FhExpect;
using ::fhdp::testing::FhKernel;
using ::fhdp::testing::FhMass;
using ::fhdp::testing::Quad;

FHDistribution Make(double alpha, double gamma) {
  return *FHDistribution::Create({alpha, gamma});
}

std::vector<double> LogGrid(double lo, double hi, int n) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i) {
    out.push_back(lo * std::pow(hi / lo, i / (n - 1.0)));
  }
  return out;
}

// omega straight from its sinh form, usable for moderate b.
double OmegaDirect(double b) {
  return 2.0 * (kSqrt2Pi * StdNormalSf(b) + 2.0 / b * std::sinh(0.5 * b * b));
}

TEST(FlippedHuberLossTest, Examples) {
  EXPECT_EQ(FlippedHuberLoss(0.0, 1.3), 0.0);
  EXPECT_EQ(FlippedHuberLoss(1.5, 0.0), 1.125);
  EXPECT_EQ(FlippedHuberLoss(2.0, 2.0), 4.0);
  EXPECT_DOUBLE_EQ(FlippedHuberLoss(std::nextafter(2.0, 3.0), 2.0), 4.0);
  EXPECT_EQ(FlippedHuberLoss(-3.1, 2.0), FlippedHuberLoss(3.1, 2.0));
}

TEST(ParamsTest, Validation) {
  EXPECT_TRUE(ValidateParams({0.0, 1.0}).ok());
  EXPECT_FALSE(ValidateParams({-1.0, 1.0}).ok());
  EXPECT_FALSE(ValidateParams({1.0, 0.0}).ok());
  EXPECT_FALSE(ValidateParams({NAN, 1.0}).ok());
  EXPECT_FALSE(FHDistribution::Create({1.0, -2.0}).ok());
}

TEST(OmegaTest, Examples) {
  EXPECT_DOUBLE_EQ(Omega(0.0), kSqrt2Pi);
  // Direct evaluation of the sinh form gives 2.87976071282169.
  EXPECT_NEAR(Omega(1.0), 2.87976071282169, 1e-13);
  for (double b : LogGrid(1e-4, 30.0, 60)) {
    EXPECT_NEAR(Omega(b), OmegaDirect(b), 1e-12 * OmegaDirect(b)) << b;
  }
  for (double b : LogGrid(1e-8, 7500.0, 200)) {
    EXPECT_GE(LogOmega(b), std::log(2.5066282)) << b;
  }
}

TEST(OmegaTest, MatchesQuadratureOfKernel) {
  for (double b : {0.3, 1.0, 2.5, 6.0}) {
    const double gamma = 1.7;
    const double kappa = FhMass(b * gamma, gamma);
    EXPECT_NEAR(Omega(b), kappa * std::exp(0.5 * b * b) / gamma,
                1e-11 * Omega(b))
        << b;
    EXPECT_NEAR(Make(b * gamma, gamma).kappa(), kappa, 1e-11 * kappa);
  }
}

TEST(PdfTest, Examples) {
  const auto d = Make(2.0, 1.0);
  EXPECT_DOUBLE_EQ(d.Pdf(0.0), 1.0 / d.kappa());
  EXPECT_EQ(d.Pdf(3.7), d.Pdf(-3.7));
  double prev = d.Pdf(0.0);
  for (double t = 0.05; t < 10.0; t += 0.05) {
    EXPECT_LT(d.Pdf(t), prev);
    prev = d.Pdf(t);
  }
}

TEST(PdfTest, NormalizedOnLogGrid) {
  constexpr double kMaxError = 1e-9;
  for (double alpha : LogGrid(0.02, 150.0, 12)) {
    for (double gamma : LogGrid(0.02, 50.0, 12)) {
      const auto d = Make(alpha, gamma);
      const double w = alpha + 12 * gamma;
      const double mass =
          Quad([&](double t) { return d.Pdf(t); }, FhCuts(alpha, gamma, -w, w));
      EXPECT_NEAR(mass, 1.0, kMaxError) << alpha << " " << gamma;
    }
  }
}

TEST(CdfTest, Examples) {
  EXPECT_EQ(Make(1.0, 2.0).Cdf(0.0), 0.5);
  const auto d = Make(1.0, 1.0);
  EXPECT_NEAR(d.Cdf(2.2) + d.Cdf(-2.2), 1.0, 1e-15);
}

TEST(CdfTest, MatchesIntegratedPdf) {
  for (const auto& [alpha, gamma] : std::vector<std::pair<double, double>>{
           {2.0, 1.0}, {1.0, 1.0}, {0.5, 3.0}, {7.0, 0.8}}) {
    const double mass = FhMass(alpha, gamma);
    const auto d = Make(alpha, gamma);
    const double lo = -alpha - 40 * gamma;
    for (double t : {-3.0, -alpha, 0.3, alpha, 5.0}) {
      const double want =
          Quad([&](double s) { return FhKernel(s, alpha, gamma); },
               FhCuts(alpha, gamma, lo, t)) /
          mass;
      EXPECT_NEAR(d.Cdf(t), want, 1e-9) << alpha << " " << t;
    }
  }
}

TEST(CdfTest, ContinuousAtTransition) {
  for (double alpha : {0.1, 1.0, 4.0, 20.0}) {
    const auto d = Make(alpha, 1.0);
    const double above = d.Survival(std::nextafter(alpha, 1e9));
    const double at = d.Survival(alpha);
    EXPECT_NEAR(above, at, 1e-12 * at) << alpha;
    EXPECT_NEAR(d.Cdf(std::nextafter(-alpha, -1e9)), d.Cdf(-alpha),
                1e-12 * d.Cdf(-alpha));
  }
}

TEST(SurvivalTest, Examples) {
  const auto d = Make(1.0, 1.0);
  EXPECT_EQ(d.Survival(0.0), 0.5);
  EXPECT_EQ(d.Survival(4.0), d.Cdf(-4.0));
  const double t = 1.0 + 10.0;
  const double want = kSqrt2Pi / OmegaDirect(1.0) * StdNormalSf(t);
  EXPECT_NEAR(d.Survival(t), want, 1e-12 * want);
}

TEST(SurvivalTest, LogSurvivalConsistent) {
  for (double alpha : {0.0, 0.5, 3.0, 40.0}) {
    const auto d = Make(alpha, 1.0);
    for (double t = -5.0; t < alpha + 30.0; t += 0.173) {
      const double s = d.Survival(t);
      if (s < 1e-300) continue;
      EXPECT_NEAR(std::exp(d.LogSurvival(t)), s, 1e-12 * s) << alpha << t;
    }
  }
  // Far beyond the double range of the survival itself.
  const auto big = Make(100.0, 1.0);
  EXPECT_TRUE(std::isfinite(big.LogSurvival(99.0)));
  EXPECT_LT(big.LogSurvival(99.0), -100.0);
}

TEST(QuantileTest, Examples) {
  const auto d = Make(2.0, 1.0);
  EXPECT_EQ(*d.Quantile(0.5), 0.0);
  EXPECT_NEAR(*d.Quantile(1.0 - 0.13), -*d.Quantile(0.13), 1e-14);
  for (double u : {0.0, 1.0, -0.2, 1.2}) EXPECT_FALSE(d.Quantile(u).ok());
}

TEST(QuantileTest, CdfOfQuantileOnGrid) {
  const auto d = Make(2.0, 1.0);
  for (int i = 1; i <= 1000; ++i) {
    const double u = i / 1001.0;
    EXPECT_NEAR(d.Cdf(*d.Quantile(u)), u, 1e-10) << u;
  }
}

TEST(QuantileTest, BranchesMeetAtThreshold) {
  for (double alpha : {0.3, 2.0, 9.0}) {
    const auto d = Make(alpha, 1.0);
    const double u = d.tail_mass();
    EXPECT_NEAR(*d.Quantile(u), -alpha, 1e-12 * alpha);
    EXPECT_NEAR(*d.Quantile(std::nextafter(u, 0.0)), -alpha, 1e-9 * alpha);
  }
}

// On t > 0 the double cdf(t) = 1 - s is rounded to an absolute 1.1e-16,
// which moves the inverse by 1.1e-16 / pdf(t); near t = alpha + 6 gamma that
// exceeds 1e-9. This test keeps the full stated range and records it.
TEST(QuantileTest, QuantileOfCdfIdentityFullRange) {
  const auto d = Make(2.0, 1.0);
  double worst = 0.0, worst_t = 0.0;
  for (double t = -8.0; t <= 8.0; t += 0.01) {
    const double err = std::abs(*d.Quantile(d.Cdf(t)) - t);
    if (err > worst) worst = err, worst_t = t;
  }
  EXPECT_LE(worst, 1e-9) << "at t = " << worst_t;
}

TEST(QuantileTest, QuantileOfSurvivalIdentity) {
  for (const auto& [alpha, gamma] : std::vector<std::pair<double, double>>{
           {2.0, 1.0}, {0.02, 3.0}, {20.0, 1.0}}) {
    const auto d = Make(alpha, gamma);
    const double w = alpha + 6 * gamma;
    for (double t = -w; t <= w; t += w / 500) {
      // quantile(cdf(-t)) = -t uses the cdf in the direction where it is
      // exactly representable.
      const double lower = -std::abs(t);
      EXPECT_NEAR(*d.Quantile(d.Cdf(lower)), lower, 1e-9 * std::max(1.0, w))
          << alpha << " " << t;
    }
  }
}

TEST(SampleTest, DeterminismAndEmpty) {
  const auto d = Make(2.0, 1.0);
  EXPECT_TRUE(d.Sample(0, 1).empty());
  EXPECT_EQ(d.Sample(1000, 9), d.Sample(1000, 9));
  EXPECT_NE(d.Sample(1000, 9), d.Sample(1000, 10));
}

TEST(SampleTest, KolmogorovSmirnov) {
  const auto d = Make(2.0, 1.0);
  const auto xs = d.Sample(1000000, 2026);
  const double ks =
      ::fhdp::testing::KsStatistic(xs, [&](double t) { return d.Cdf(t); });
  EXPECT_LT(ks * std::sqrt(1e6), ::fhdp::testing::kKsCritical001);
}

TEST(SampleTest, EmpiricalVariance) {
  const double alpha = 2.0, gamma = 1.0;
  const auto d = Make(alpha, gamma);
  const auto xs = d.Sample(10000000, 77);
  double s2 = 0.0;
  for (double x : xs) s2 += x * x;
  const double n = static_cast<double>(xs.size());
  const double var = s2 / n;
  const double m4 =
      FhExpect([](double t) { return t * t * t * t; }, alpha, gamma);
  const double se = std::sqrt((m4 - d.Variance() * d.Variance()) / n);
  EXPECT_NEAR(var, d.Variance(), 3 * se);
}

TEST(VarianceTest, Examples) {
  EXPECT_EQ(Make(0.0, 3.0).Variance(), 9.0);
  for (double alpha : LogGrid(1e-8, 150.0, 40)) {
    for (double gamma : LogGrid(0.02, 50.0, 10)) {
      EXPECT_LE(Make(alpha, gamma).Variance(), gamma * gamma * (1 + 1e-15));
    }
  }
}

TEST(VarianceTest, MatchesQuadratureOnLogGrid) {
  constexpr double kMaxError = 1e-8;
  for (double alpha : LogGrid(0.02, 150.0, 9)) {
    for (double gamma : LogGrid(0.02, 50.0, 9)) {
      const double want =
          FhExpect([](double t) { return t * t; }, alpha, gamma);
      EXPECT_NEAR(Make(alpha, gamma).Variance(), want, kMaxError * want)
          << alpha << " " << gamma;
    }
  }
}

TEST(VarianceTest, ContinuousAtZeroAndAtBranchSwitch) {
  const double gamma = 2.0;
  EXPECT_NEAR(Make(1e-5, gamma).Variance(), gamma * gamma, 1e-12);
  EXPECT_NEAR(Make(1e-3, gamma).Variance(), gamma * gamma, 1e-8);
  const double below = Make(std::nextafter(gamma, 0.0), gamma).Variance();
  const double at = Make(gamma, gamma).Variance();
  EXPECT_NEAR(below, at, 1e-13 * at);
}

TEST(FisherTest, Examples) {
  EXPECT_EQ(Make(0.0, 2.0).FisherInformation(), 0.25);
  EXPECT_EQ(Make(0.0, 2.0).NormalizedFisherInformation(), 1.0);
  const double nfi1 = Make(1.0, 1.0).NormalizedFisherInformation();
  EXPECT_GT(nfi1, 1.0);
  EXPECT_LT(nfi1, 2.0);
}

TEST(FisherTest, MatchesQuadratureOnLogGrid) {
  constexpr double kMaxError = 1e-8;
  for (double alpha : LogGrid(0.02, 150.0, 9)) {
    for (double gamma : LogGrid(0.02, 50.0, 9)) {
      const double g2 = gamma * gamma;
      const double want = FhExpect(
          [&](double t) {
            const double psi = FlippedHuberLossDerivative(t, alpha) / g2;
            return psi * psi;
          },
          alpha, gamma);
      const auto d = Make(alpha, gamma);
      EXPECT_NEAR(d.FisherInformation(), want, kMaxError * want)
          << alpha << " " << gamma;
      EXPECT_GE(d.FisherInformation(), 1.0 / g2);
    }
  }
}

TEST(FisherTest, NormalizedInUnitToTwoAndMonotone) {
  double prev = 1.0;
  for (double b : LogGrid(1e-7, 7500.0, 300)) {
    const double nfi = Make(b, 1.0).NormalizedFisherInformation();
    EXPECT_GE(nfi, 1.0);
    EXPECT_LE(nfi, 2.0 + 1e-14);  // the Laplace limit, up to roundoff
    EXPECT_GE(nfi, prev - 1e-12) << b;
    prev = nfi;
  }
}

TEST(MgfTest, Examples) {
  const auto d = Make(2.0, 1.0);
  EXPECT_NEAR(*d.Mgf(0.0), 1.0, 1e-15);
  EXPECT_NEAR(*d.Mgf(-0.4), *d.Mgf(0.4), 1e-15);
  const double want =
      FhExpect([](double t) { return std::exp(0.7 * t); }, 2.0, 1.0, 20.0);
  EXPECT_NEAR(*d.Mgf(0.7), want, 1e-8 * want);
  EXPECT_EQ(d.Mgf(1e3).status().code(), absl::StatusCode::kOutOfRange);
  EXPECT_EQ(*Make(0.0, 2.0).Mgf(0.5), std::exp(0.5));
}

TEST(MgfTest, MatchesQuadratureAcrossShapes) {
  for (double alpha : {0.05, 1.0, 5.0, 30.0}) {
    for (double s : {-3.0, -0.2, 0.1, 1.5}) {
      const double gamma = 1.3;
      const double want = FhExpect([&](double t) { return std::exp(s * t); },
                                   alpha, gamma, 25.0);
      EXPECT_NEAR(*Make(alpha, gamma).Mgf(s), want, 1e-8 * want)
          << alpha << " " << s;
    }
  }
}

TEST(SubGaussianTest, Margins) {
  std::vector<double> grid;
  for (double s = -5.0; s <= 5.0; s += 0.01) grid.push_back(s);
  for (double m : Make(0.0, 1.0).SubGaussianMargin(grid)) EXPECT_EQ(m, 0.0);
  const double zero[] = {0.0};
  EXPECT_NEAR(Make(2.0, 1.0).SubGaussianMargin(zero)[0], 0.0, 1e-15);
  for (double alpha : {0.1, 2.0, 10.0}) {
    for (double m : Make(alpha, 1.0).SubGaussianMargin(grid)) {
      EXPECT_GE(m, -1e-12) << alpha;
    }
  }
}

TEST(OrliczFactorTest, MatchesQuadratureAndBoundedByOne) {
  for (double b : {0.01, 0.5, 2.0, 6.0}) {
    const auto d = Make(b, 1.0);
    for (double s : {0.05, 0.3, 0.7, 0.95}) {
      // Combine exp(s t^2 / 2) with the kernel in the exponent; separately
      // they overflow and underflow.
      const double w = b + 60.0;
      const double num = Quad(
          [&](double t) {
            return std::exp(0.5 * s * t * t - FlippedHuberLoss(t, b));
          },
          FhCuts(b, 1.0, -w, w));
      const double want = num / FhMass(b, 1.0) * std::sqrt(1.0 - s);
      EXPECT_NEAR(*d.OrliczFactor(s), want, 1e-9 * want) << b << " " << s;
    }
  }
}

TEST(OrliczFactorTest, DecreasingFromOne) {
  for (double b : LogGrid(1e-3, 100.0, 25)) {
    const auto d = Make(b, 1.0);
    EXPECT_NEAR(*d.OrliczFactor(1e-9), 1.0, 1e-6) << b;
    double prev = 1.0 + 1e-12;
    for (double s = 1e-3; s < 1.0; s += 1e-3) {
      const double c = *d.OrliczFactor(s);
      EXPECT_LE(c, prev + 1e-13) << b << " " << s;
      prev = c;
    }
  }
  EXPECT_FALSE(Make(1.0, 1.0).OrliczFactor(1.0).ok());
}

TEST(ThetaTest, NonNegativeAndGaussianZero) {
  EXPECT_EQ(Make(0.0, 3.0).theta(), 0.0);
  for (double alpha : LogGrid(0.02, 150.0, 20)) {
    for (double gamma : LogGrid(0.02, 50.0, 8)) {
      const auto d = Make(alpha, gamma);
      EXPECT_GE(d.theta(), 0.0);
      EXPECT_TRUE(std::isfinite(d.theta()));
    }
  }
}

}  // namespace
}  // namespace fhdp
