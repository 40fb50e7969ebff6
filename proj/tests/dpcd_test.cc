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

#include "fhdp/dpcd.h"

#include <cmath>
#include <random>
#include <vector>

#include "fhdp/zcdp.h"
#include "gtest/gtest.h"

namespace fhdp {
namespace {

Dataset RandomDataset(int n, int k, bool binary, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z;
  Dataset d;
  d.n = n;
  d.k = k;
  for (int i = 0; i < n * k; ++i) d.x.push_back(z(rng));
  for (int i = 0; i < n; ++i)
    d.y.push_back(binary ? (z(rng) > 0 ? 1 : -1) : z(rng));
  d.feature_names.assign(k, "f");
  d.label_name = "y";
  return d;
}

TrainConfig NoiseFree(Loss loss, Regularizer reg, double strength) {
  TrainConfig c;
  c.loss = loss;
  c.reg = reg;
  c.strength = strength;
  c.noise_free = true;
  c.batches = 200;
  c.clip_scale = 1e6;
  return c;
}

TEST(SmoothnessTest, IdentityDesign) {
  Dataset d;
  d.n = d.k = 4;
  d.x.assign(16, 0.0);
  for (int i = 0; i < 4; ++i) d.x[i * 4 + i] = 1.0;
  d.y.assign(4, 1.0);
  for (double m : CoordinateSmoothness(d, Loss::kLeastSquares)) {
    EXPECT_DOUBLE_EQ(m, 0.25);
  }
  for (double m : CoordinateSmoothness(d, Loss::kLogistic)) {
    EXPECT_DOUBLE_EQ(m, 0.0625);
  }
}

TEST(SmoothnessTest, ColumnScalingIsQuadratic) {
  Dataset d = RandomDataset(50, 3, false, 1);
  const std::vector<double> before = CoordinateSmoothness(d, Loss::kLogistic);
  for (int n = 0; n < d.n; ++n) d.x[n * d.k + 1] *= 3.0;
  const std::vector<double> after = CoordinateSmoothness(d, Loss::kLogistic);
  EXPECT_DOUBLE_EQ(after[0], before[0]);
  EXPECT_NEAR(after[1], 9.0 * before[1], 1e-12 * after[1]);
}

TEST(SmoothnessTest, BoundsSecondDifference) {
  for (Loss loss : {Loss::kLeastSquares, Loss::kLogistic}) {
    const Dataset d = RandomDataset(200, 4, loss == Loss::kLogistic, 2);
    const std::vector<double> m = CoordinateSmoothness(d, loss);
    std::mt19937_64 rng(3);
    std::normal_distribution<double> z;
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> theta(d.k);
      for (double& t : theta) t = z(rng);
      for (int i = 0; i < d.k; ++i) {
        const double h = 1e-3;
        std::vector<double> up = theta, down = theta;
        up[i] += h;
        down[i] -= h;
        const double f0 = Objective(d, theta, loss, Regularizer::kL2, 0.0);
        const double fu = Objective(d, up, loss, Regularizer::kL2, 0.0);
        const double fd = Objective(d, down, loss, Regularizer::kL2, 0.0);
        EXPECT_LE((fu - 2.0 * f0 + fd) / (h * h), m[i] * (1.0 + 1e-5));
      }
    }
  }
}

TEST(ClipTest, Examples) {
  EXPECT_EQ(Clip(0.5, 1.0), 0.5);
  EXPECT_EQ(Clip(-7.0, 2.0), -2.0);
  EXPECT_EQ(Clip(3.0, 3.0), 3.0);
}

TEST(ProxStepTest, ZeroStrengthIsGradientStep) {
  EXPECT_DOUBLE_EQ(ProxStep(1.0, 2.0, 0.25, Regularizer::kL1, 0.0), 0.5);
  EXPECT_DOUBLE_EQ(ProxStep(1.0, 2.0, 0.25, Regularizer::kL2, 0.0), 0.5);
}

TEST(ProxStepTest, SoftThresholdDeadZone) {
  EXPECT_EQ(ProxStep(0.3, 0.0, 1.0, Regularizer::kL1, 0.5), 0.0);
  EXPECT_EQ(ProxStep(-0.5, 0.0, 1.0, Regularizer::kL1, 0.5), 0.0);
  EXPECT_DOUBLE_EQ(ProxStep(2.0, 0.0, 1.0, Regularizer::kL1, 0.5), 1.5);
}

TEST(ProxStepTest, RidgeMinimizerIsFixedPoint) {
  // (M/2)(t - c)^2 + (s/2) t^2 is minimized at M c / (M + s).
  const double m = 2.5, c = 1.7, s = 0.8;
  const double star = m * c / (m + s);
  for (double tau : {0.1, 1.0 / m, 1.0}) {
    EXPECT_NEAR(ProxStep(star, m * (star - c), tau, Regularizer::kL2, s), star,
                1e-14);
  }
}

TEST(PerCoordinateNoiseTest, UniformSmoothnessGivesIdenticalParams) {
  TrainConfig c;
  const std::vector<double> m(6, 1.0);
  absl::StatusOr<NoisePlan> plan = PerCoordinateNoise(c, m, 1000);
  ASSERT_TRUE(plan.ok()) << plan.status();
  ASSERT_EQ(plan->coordinates.size(), 6u);
  for (const CoordinateNoise& cn : plan->coordinates) {
    EXPECT_EQ(cn.params.alpha, plan->coordinates[0].params.alpha);
    EXPECT_EQ(cn.params.gamma, plan->coordinates[0].params.gamma);
    EXPECT_DOUBLE_EQ(cn.lambda, 2.0 * cn.clip / 1000);
  }
}

TEST(PerCoordinateNoiseTest, LedgerMatchesTarget) {
  for (NoiseMechanism mech :
       {NoiseMechanism::kFlippedHuber, NoiseMechanism::kGaussian}) {
    for (int batches : {1, 3, 20}) {
      TrainConfig c;
      c.mechanism = mech;
      c.batches = batches;
      c.budget = {0.5, 1e-6};
      const std::vector<double> m = {0.3, 1.0, 2.0, 0.0, 5.0};
      absl::StatusOr<NoisePlan> plan = PerCoordinateNoise(c, m, 500);
      ASSERT_TRUE(plan.ok());
      EXPECT_EQ(plan->coordinates.size(), 4u);
      const ZcdpParams ledger = PlanLedger(*plan, batches);
      EXPECT_NEAR(ledger.xi, plan->z.xi, 1e-12 * std::max(1.0, plan->z.xi));
      EXPECT_NEAR(ledger.eta, plan->z.eta, 1e-12 * plan->z.eta);
      absl::StatusOr<double> eps = ZcdpToDp(plan->z, 1e-6, c.conversion);
      ASSERT_TRUE(eps.ok());
      EXPECT_LE(*eps, 0.5 * (1.0 + 1e-9));
    }
  }
}

TEST(PerCoordinateNoiseTest, GaussianHasNoTransition) {
  TrainConfig c;
  c.mechanism = NoiseMechanism::kGaussian;
  absl::StatusOr<NoisePlan> plan =
      PerCoordinateNoise(c, std::vector<double>{1.0, 2.0}, 100);
  ASSERT_TRUE(plan.ok());
  EXPECT_EQ(plan->z.xi, 0.0);
  for (const CoordinateNoise& cn : plan->coordinates) {
    EXPECT_EQ(cn.params.alpha, 0.0);
  }
}

TEST(PerCoordinateNoiseTest, FewReleasesFavorFlippedHuber) {
  TrainConfig c;
  c.batches = 1;
  c.budget = {0.3, 1e-6};
  const std::vector<double> m = {1.0};
  absl::StatusOr<NoisePlan> fh = PerCoordinateNoise(c, m, 100);
  c.mechanism = NoiseMechanism::kGaussian;
  absl::StatusOr<NoisePlan> gauss = PerCoordinateNoise(c, m, 100);
  ASSERT_TRUE(fh.ok() && gauss.ok());
  EXPECT_GT(fh->z.xi, 0.0);
  EXPECT_GT(fh->coordinates[0].params.alpha, 0.0);
  EXPECT_LT(fh->unit_variance, gauss->unit_variance);
}

TEST(PerCoordinateNoiseTest, ZeroOffsetDegeneratesToGaussian) {
  // With 10 coordinates and 10 batches the minimum-variance split has
  // xi = 0, and the two mechanisms coincide exactly.
  TrainConfig c;
  c.batches = 10;
  const std::vector<double> m(10, 1.0);
  absl::StatusOr<NoisePlan> fh = PerCoordinateNoise(c, m, 100);
  c.mechanism = NoiseMechanism::kGaussian;
  absl::StatusOr<NoisePlan> gauss = PerCoordinateNoise(c, m, 100);
  ASSERT_TRUE(fh.ok() && gauss.ok());
  ASSERT_EQ(fh->z.xi, 0.0);
  for (size_t i = 0; i < m.size(); ++i) {
    EXPECT_EQ(fh->coordinates[i].params.alpha,
              gauss->coordinates[i].params.alpha);
    EXPECT_EQ(fh->coordinates[i].params.gamma,
              gauss->coordinates[i].params.gamma);
  }
}

TEST(DpcdTrainTest, NoiseFreeRecoversOptimum) {
  const Dataset lin = SyntheticLinear(2000, 10, 0.5, 4);
  const Dataset log = SyntheticLogistic(2000, 10, 4);
  struct Case {
    const Dataset* data;
    TrainConfig config;
  };
  for (const Case& c :
       {Case{&lin, NoiseFree(Loss::kLeastSquares, Regularizer::kL1, 0.01)},
        Case{&lin, NoiseFree(Loss::kLeastSquares, Regularizer::kL2, 0.1)},
        Case{&log, NoiseFree(Loss::kLogistic, Regularizer::kL2, 0.01)}}) {
    absl::StatusOr<FitReport> r = DpcdTrain(*c.data, c.config);
    ASSERT_TRUE(r.ok()) << r.status();
    EXPECT_LT(r->nmse, 1e-6) << LossName(c.config.loss);
    EXPECT_TRUE(std::isfinite(r->test_error));
  }
}

TEST(DpcdTrainTest, NoiseFreeObjectiveNeverIncreases) {
  const Dataset d = SyntheticLogistic(1000, 6, 5);
  for (double tau : {0.25, 0.5, 1.0}) {
    TrainConfig c = NoiseFree(Loss::kLogistic, Regularizer::kL1, 0.02);
    c.step_scale = tau;
    c.batches = 30;
    absl::StatusOr<FitReport> r = DpcdTrain(d, c);
    ASSERT_TRUE(r.ok());
    for (size_t l = 1; l < r->objective_trace.size(); ++l) {
      EXPECT_LE(r->objective_trace[l], r->objective_trace[l - 1] + 1e-15);
    }
  }
}

TEST(DpcdTrainTest, ClippingBoundsEachStep) {
  // One batch from zero with no regularization: coordinate i moves by
  // tau_i times a clipped mean, so at most tau_i C_i.
  const Dataset d = SyntheticLinear(500, 5, 0.1, 6);
  TrainConfig c = NoiseFree(Loss::kLeastSquares, Regularizer::kL2, 0.0);
  c.batches = 1;
  c.clip_scale = 0.05;
  absl::StatusOr<FitReport> r = DpcdTrain(d, c);
  ASSERT_TRUE(r.ok());
  for (const CoordinateNoise& cn : r->plan.coordinates) {
    EXPECT_LE(std::abs(r->theta_hat[cn.coordinate]),
              cn.tau * cn.clip * (1.0 + 1e-12));
  }
}

TEST(DpcdTrainTest, Deterministic) {
  const Dataset d = SyntheticLinear(800, 8, 0.5, 7);
  TrainConfig c;
  c.seed = 99;
  c.clip_scale = 3.0;
  absl::StatusOr<FitReport> a = DpcdTrain(d, c);
  absl::StatusOr<FitReport> b = DpcdTrain(d, c);
  ASSERT_TRUE(a.ok() && b.ok());
  EXPECT_EQ(a->theta_hat, b->theta_hat);
  EXPECT_EQ(a->nmse, b->nmse);
  EXPECT_EQ(a->test_error, b->test_error);
  c.seed = 100;
  absl::StatusOr<FitReport> other = DpcdTrain(d, c);
  ASSERT_TRUE(other.ok());
  EXPECT_NE(a->theta_hat, other->theta_hat);
}

TEST(DpcdTrainTest, PureNoiseMatchesNoiseVariance) {
  // Zero labels, one coordinate, one batch: the update is -tau_1 t with t
  // the added noise, so across seeds the estimate has mean 0 and variance
  // tau_1^2 Var(t).
  const int n = 1000;
  Dataset d = SyntheticLinear(n, 1, 0.0, 8);
  d.y.assign(n, 0.0);
  TrainConfig c;
  c.batches = 1;
  c.budget = {0.3, 1e-6};
  absl::StatusOr<Problem> problem = PrepareProblem(d, c);
  ASSERT_TRUE(problem.ok());
  problem->theta_star = {1.0};
  const int seeds = 400;
  double sum = 0.0, sum2 = 0.0, expected_var = 0.0;
  for (int s = 0; s < seeds; ++s) {
    c.seed = s;
    absl::StatusOr<FitReport> r = TrainOnProblem(*problem, c);
    ASSERT_TRUE(r.ok());
    const double t = r->theta_hat[0];
    sum += t;
    sum2 += t * t;
    const CoordinateNoise& cn = r->plan.coordinates[0];
    expected_var =
        cn.tau * cn.tau * FHDistribution::Create(cn.params)->Variance();
  }
  const double mean = sum / seeds;
  const double var = sum2 / seeds - mean * mean;
  EXPECT_LT(std::abs(mean), 4.0 * std::sqrt(expected_var / seeds));
  // The sample variance of non-Gaussian noise has a wider spread than
  // chi-square; 6 standard errors of the Gaussian case is still tight.
  EXPECT_NEAR(var, expected_var, 6.0 * std::sqrt(2.0 / seeds) * expected_var);
}

TEST(DpcdTrainTest, DivergenceIsReported) {
  const Dataset d = SyntheticLinear(100, 3, 0.1, 9);
  TrainConfig c = NoiseFree(Loss::kLeastSquares, Regularizer::kL2, 0.0);
  c.step_scale = 1e308;
  absl::StatusOr<FitReport> r = DpcdTrain(d, c);
  EXPECT_EQ(r.status().code(), absl::StatusCode::kOutOfRange);
  EXPECT_NE(r.status().message().find("batch"), std::string::npos);
}

TEST(DpcdTrainTest, LogisticNeedsSignLabels) {
  Dataset d = SyntheticLinear(50, 2, 0.1, 10);
  TrainConfig c = NoiseFree(Loss::kLogistic, Regularizer::kL2, 0.0);
  EXPECT_EQ(DpcdTrain(d, c).status().code(),
            absl::StatusCode::kInvalidArgument);
}

TEST(TuneDpcdTest, PairedSeedsFlippedHuberNoWorse) {
  const Dataset d = SyntheticLinear(2000, 10, 0.5, 11);
  const std::vector<uint64_t> seeds = {1, 2, 3, 4, 5};
  TrainConfig base;
  base.strength = 0.01;
  base.budget = {1.0, 1e-6};
  absl::StatusOr<TuneResult> fh = TuneDpcd(d, base, {}, seeds);
  base.mechanism = NoiseMechanism::kGaussian;
  absl::StatusOr<TuneResult> gauss = TuneDpcd(d, base, {}, seeds);
  ASSERT_TRUE(fh.ok() && gauss.ok());
  EXPECT_LE(fh->mean_nmse, gauss->mean_nmse);
  EXPECT_EQ(fh->reports.size(), seeds.size());
}

TEST(DatasetTest, ParsesHeaderAndRows) {
  absl::StatusOr<Dataset> d = ParseDataset("a,b,label\n1,2,3\n-4.5,6e1,7\n");
  ASSERT_TRUE(d.ok()) << d.status();
  EXPECT_EQ(d->n, 2);
  EXPECT_EQ(d->k, 2);
  EXPECT_EQ(d->x, (std::vector<double>{1, 2, -4.5, 60}));
  EXPECT_EQ(d->y, (std::vector<double>{3, 7}));
  EXPECT_EQ(d->label_name, "label");
}

TEST(DatasetTest, MapsSignLabels) {
  CsvOptions options;
  options.delimiter = ';';
  options.positive_label = "yes";
  absl::StatusOr<Dataset> d = ParseDataset("x;y\r\n1;yes\r\n2;no\r\n", options);
  ASSERT_TRUE(d.ok()) << d.status();
  EXPECT_EQ(d->y, (std::vector<double>{1, -1}));
}

TEST(DatasetTest, ErrorsNameTheLine) {
  absl::StatusOr<Dataset> short_row = ParseDataset("a,b,y\n1,2,3\n4,5\n");
  EXPECT_NE(short_row.status().message().find("line 3"), std::string::npos);
  absl::StatusOr<Dataset> bad = ParseDataset("a,y\nfoo,1\n");
  EXPECT_NE(bad.status().message().find("line 2, field 1"), std::string::npos);
  EXPECT_FALSE(ParseDataset("a,y\n").ok());
  EXPECT_FALSE(ParseDataset("a,y\nnan,1\n").ok());
}

TEST(DatasetTest, FormatRoundTrips) {
  const Dataset d = SyntheticLogistic(30, 3, 12);
  absl::StatusOr<Dataset> back = ParseDataset(FormatDataset(d));
  ASSERT_TRUE(back.ok());
  EXPECT_EQ(back->x, d.x);
  EXPECT_EQ(back->y, d.y);
  EXPECT_EQ(back->feature_names, d.feature_names);
}

}  // namespace
}  // namespace fhdp
