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

// Differentially private proximal coordinate descent with per-coordinate
// clipping and flipped Huber or Gaussian gradient noise, plus the dataset
// plumbing and metrics around it.

#ifndef FHDP_DPCD_H_
#define FHDP_DPCD_H_

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "fhdp/accountant_1d.h"
#include "fhdp/flipped_huber.h"
#include "fhdp/zcdp.h"

namespace fhdp {

// Row-major n x k design with one label per row.
struct Dataset {
  int n = 0;
  int k = 0;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<std::string> feature_names;
  std::string label_name;

  double at(int row, int col) const { return x[size_t(row) * k + col]; }
};

absl::Status ValidateDataset(const Dataset& data);

struct CsvOptions {
  char delimiter = ',';
  // When set, a label equal to this token maps to +1 and any other to -1.
  // Otherwise labels are parsed as numbers.
  std::optional<std::string> positive_label;
};

// Delimited text with a header row; the last column is the label. Errors
// name the offending line (1-based, header is line 1).
absl::StatusOr<Dataset> ParseDataset(std::string_view text,
                                     const CsvOptions& options = {});
absl::StatusOr<Dataset> LoadDataset(const std::string& path,
                                    const CsvOptions& options = {});
std::string FormatDataset(const Dataset& data);

// y = x theta_true + noise_sd * z with standard normal features; theta_true
// has entries spread over [-1, 1].
Dataset SyntheticLinear(int n, int k, double noise_sd, uint64_t seed);
// Labels +-1 drawn from the logistic model with the same theta_true.
Dataset SyntheticLogistic(int n, int k, uint64_t seed);

enum class Loss { kLogistic, kLeastSquares };
enum class Regularizer { kL1, kL2 };
enum class NoiseMechanism { kFlippedHuber, kGaussian };

std::string_view LossName(Loss loss);
std::string_view RegularizerName(Regularizer reg);
std::string_view NoiseMechanismName(NoiseMechanism mechanism);

struct TrainConfig {
  Loss loss = Loss::kLeastSquares;
  Regularizer reg = Regularizer::kL2;
  double strength = 0.0;
  int batches = 10;         // L
  double step_scale = 1.0;  // tau
  double clip_scale = 1.0;  // C
  PrivacyBudget budget{1.0, 1e-6};
  NoiseMechanism mechanism = NoiseMechanism::kFlippedHuber;
  ZcdpConversion conversion = ZcdpConversion::kStandard;
  int selection_points = 200;
  // Runs the same loop without noise; the privacy fields are then unused.
  bool noise_free = false;
  double train_fraction = 0.8;
  uint64_t seed = 0;
};

absl::Status ValidateTrainConfig(const TrainConfig& config);

// M_i = (1/N) sum x_{n,i}^2 for least squares and a quarter of that for
// logistic. Zero marks an all-zero column, which is never updated.
std::vector<double> CoordinateSmoothness(const Dataset& data, Loss loss);

inline double Clip(double v, double c) { return std::min(std::max(v, -c), c); }

// One coordinate of the proximal step: gradient step, then shrinkage by
// 1 / (1 + tau strength) for l2 or soft thresholding at tau strength for l1.
double ProxStep(double theta, double grad, double tau, Regularizer reg,
                double strength);

struct CoordinateNoise {
  int coordinate = 0;
  double clip = 0.0;    // C_i
  double lambda = 0.0;  // 2 C_i / N
  double tau = 0.0;     // tau / M_i
  FHParams params;      // alpha = 0 for Gaussian noise
};

struct NoisePlan {
  ZcdpParams z;
  double unit_variance = 0.0;
  // Active coordinates only.
  std::vector<CoordinateNoise> coordinates;
};

// Clipping constants C_i = C sqrt(M_i / sum M), sensitivities 2 C_i / N and
// per-coordinate noise from the minimum-variance (xi, eta) split of the
// budget over the K L releases.
absl::StatusOr<NoisePlan> PerCoordinateNoise(const TrainConfig& config,
                                             std::span<const double> smoothness,
                                             int n_train);

// zCDP cost of the plan recomputed from the parameters actually used: every
// active coordinate released once per batch.
ZcdpParams PlanLedger(const NoisePlan& plan, int batches);

// (1/N) sum J(theta; D_n) + psi(theta).
double Objective(const Dataset& data, std::span<const double> theta, Loss loss,
                 Regularizer reg, double strength);

struct Problem {
  Dataset train;
  Dataset test;
  std::vector<double> smoothness;
  std::vector<double> theta_star;
  int optimum_sweeps = 0;
};

// Seeded split, standardization fitted on the training part (features to
// zero mean and unit variance, regression labels to unit RMS) and the
// non-private optimum, found by unclipped noise-free coordinate descent run
// for 1e4 sweeps or until the proximal gradient norm drops below 1e-10.
absl::StatusOr<Problem> PrepareProblem(const Dataset& data,
                                       const TrainConfig& config);

struct FitReport {
  std::vector<double> theta_hat;
  std::vector<double> theta_star;
  double nmse = 0.0;
  double test_error = 0.0;
  // Training objective after each batch, starting from theta = 0.
  std::vector<double> objective_trace;
  NoisePlan plan;
  ZcdpParams ledger;
  int n_train = 0;
  int n_test = 0;
};

// Algorithm loop on a prepared problem. Noise for coordinate i in batch l
// uses uniform l * k + i of the seed's stream, so two mechanisms run with
// the same seed share their random numbers.
absl::StatusOr<FitReport> TrainOnProblem(const Problem& problem,
                                         const TrainConfig& config);

absl::StatusOr<FitReport> DpcdTrain(const Dataset& data,
                                    const TrainConfig& config);

struct HyperGrid {
  std::vector<int> batches = {5, 10, 20, 50};
  std::vector<double> steps = {0.25, 0.5, 1.0};
  // 10^(-1 + j / 2) for j = 0..5.
  std::vector<double> clips = {0.1,  0.316227766016838, 1.0, 3.16227766016838,
                               10.0, 31.6227766016838};
};

struct TuneResult {
  TrainConfig best;
  double mean_nmse = 0.0;
  double mean_test_error = 0.0;
  // Per-seed reports at the best setting.
  std::vector<FitReport> reports;
};

// Picks the grid point with the smallest mean NMSE over the seeds (ties go
// to the earlier grid point). Runs are independent and execute in parallel.
absl::StatusOr<TuneResult> TuneDpcd(const Dataset& data,
                                    const TrainConfig& base,
                                    const HyperGrid& grid,
                                    std::span<const uint64_t> seeds,
                                    int workers = 0);

}  // namespace fhdp

#endif  // FHDP_DPCD_H_
