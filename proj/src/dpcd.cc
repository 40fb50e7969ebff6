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

#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "absl/strings/str_format.h"
#include "fhdp/parallel.h"
#include "fhdp/privacy_loss.h"
#include "fhdp/rng.h"

namespace fhdp {
namespace {

constexpr uint64_t kFeatureStream = 1;
constexpr uint64_t kLabelStream = 2;
constexpr uint64_t kSplitStream = 3;
constexpr uint64_t kNoiseStream = 4;

constexpr int kOptimumMaxSweeps = 10000;
constexpr double kOptimumGradTol = 1e-10;
constexpr double kLedgerRtol = 1e-9;

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' '))
    s.remove_suffix(1);
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  return s;
}

std::vector<std::string_view> SplitFields(std::string_view line, char delim) {
  std::vector<std::string_view> out;
  size_t start = 0;
  while (true) {
    const size_t pos = line.find(delim, start);
    if (pos == std::string_view::npos) {
      out.push_back(Trim(line.substr(start)));
      return out;
    }
    out.push_back(Trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
}

bool ParseNumber(std::string_view s, double* out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), *out);
  return ec == std::errc() && end == s.data() + s.size() && std::isfinite(*out);
}

double StdNormal(double u) {
  static const FHDistribution* unit =
      new FHDistribution(*FHDistribution::Create({0.0, 1.0}));
  return unit->QuantileUnchecked(u);
}

std::vector<double> TrueTheta(int k) {
  std::vector<double> theta(k, 1.0);
  for (int j = 0; k > 1 && j < k; ++j) theta[j] = -1.0 + 2.0 * j / (k - 1);
  return theta;
}

Dataset SyntheticFeatures(int n, int k, uint64_t seed) {
  Dataset d;
  d.n = n;
  d.k = k;
  d.x.resize(size_t(n) * k);
  const CounterRng rng(seed, kFeatureStream);
  for (size_t i = 0; i < d.x.size(); ++i) d.x[i] = StdNormal(rng.Uniform(i));
  for (int j = 0; j < k; ++j)
    d.feature_names.push_back(absl::StrFormat("x%d", j));
  d.label_name = "y";
  d.y.resize(n);
  return d;
}

double Dot(const Dataset& d, int row, std::span<const double> theta) {
  double s = 0.0;
  for (int j = 0; j < d.k; ++j) s += d.at(row, j) * theta[j];
  return s;
}

// log(1 + exp(s)) without overflow.
double Softplus(double s) {
  return std::max(s, 0.0) + std::log1p(std::exp(-std::abs(s)));
}

// 1 / (1 + exp(-s)).
double Sigmoid(double s) {
  if (s >= 0.0) return 1.0 / (1.0 + std::exp(-s));
  const double e = std::exp(s);
  return e / (1.0 + e);
}

// d J / d margin for one sample.
double MarginGradient(double margin, double y, Loss loss) {
  if (loss == Loss::kLeastSquares) return margin - y;
  return -y * Sigmoid(-y * margin);
}

double SampleLoss(double margin, double y, Loss loss) {
  if (loss == Loss::kLeastSquares) return 0.5 * (margin - y) * (margin - y);
  return Softplus(-y * margin);
}

double Penalty(std::span<const double> theta, Regularizer reg,
               double strength) {
  double s = 0.0;
  for (double t : theta)
    s += reg == Regularizer::kL2 ? 0.5 * t * t : std::abs(t);
  return strength * s;
}

// Mean over samples of the (optionally clipped) gradient along coordinate i.
double CoordinateGradient(const Dataset& d, std::span<const double> margins,
                          int i, Loss loss, double clip) {
  double s = 0.0;
  for (int n = 0; n < d.n; ++n) {
    const double g = MarginGradient(margins[n], d.y[n], loss) * d.at(n, i);
    s += clip > 0.0 ? Clip(g, clip) : g;
  }
  return s / d.n;
}

void UpdateMargins(const Dataset& d, int i, double step,
                   std::vector<double>* margins) {
  if (step == 0.0) return;
  for (int n = 0; n < d.n; ++n) (*margins)[n] += step * d.at(n, i);
}

Dataset Subset(const Dataset& d, std::span<const int> rows) {
  Dataset out;
  out.n = static_cast<int>(rows.size());
  out.k = d.k;
  out.feature_names = d.feature_names;
  out.label_name = d.label_name;
  out.x.reserve(size_t(out.n) * d.k);
  for (int r : rows) {
    for (int j = 0; j < d.k; ++j) out.x.push_back(d.at(r, j));
    out.y.push_back(d.y[r]);
  }
  return out;
}

// Fits on `train`, applies to both.
void Standardize(Loss loss, Dataset* train, Dataset* test) {
  for (int j = 0; j < train->k; ++j) {
    double mean = 0.0;
    for (int n = 0; n < train->n; ++n) mean += train->at(n, j);
    mean /= train->n;
    double var = 0.0;
    for (int n = 0; n < train->n; ++n) {
      const double c = train->at(n, j) - mean;
      var += c * c;
    }
    const double sd = std::sqrt(var / train->n);
    const double scale = sd > 0.0 ? 1.0 / sd : 1.0;
    for (Dataset* d : {train, test}) {
      for (int n = 0; n < d->n; ++n) {
        double& v = d->x[size_t(n) * d->k + j];
        v = sd > 0.0 ? (v - mean) * scale : 0.0;
      }
    }
  }
  if (loss != Loss::kLeastSquares) return;
  double ss = 0.0;
  for (double y : train->y) ss += y * y;
  const double rms = std::sqrt(ss / train->n);
  if (!(rms > 0.0)) return;
  for (Dataset* d : {train, test}) {
    for (double& y : d->y) y /= rms;
  }
}

double TestError(const Dataset& test, std::span<const double> theta,
                 Loss loss) {
  if (loss == Loss::kLogistic) {
    int wrong = 0;
    for (int n = 0; n < test.n; ++n) {
      const double m = Dot(test, n, theta);
      const double predicted = m > 0.0 ? 1.0 : (m < 0.0 ? -1.0 : 0.0);
      wrong += predicted != test.y[n];
    }
    return static_cast<double>(wrong) / test.n;
  }
  double rss = 0.0;
  double tss = 0.0;
  for (int n = 0; n < test.n; ++n) {
    const double r = test.y[n] - Dot(test, n, theta);
    rss += r * r;
    tss += test.y[n] * test.y[n];
  }
  return tss > 0.0 ? rss / tss : rss;
}

}  // namespace

absl::Status ValidateDataset(const Dataset& data) {
  if (data.n < 1 || data.k < 1) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "dataset needs n >= 1 and k >= 1, got %d x %d", data.n, data.k));
  }
  if (data.x.size() != size_t(data.n) * data.k ||
      data.y.size() != size_t(data.n)) {
    return absl::InvalidArgumentError("dataset arrays do not match n and k");
  }
  for (size_t i = 0; i < data.x.size(); ++i) {
    if (!std::isfinite(data.x[i])) {
      return absl::InvalidArgumentError(
          absl::StrFormat("non-finite feature at row %d, column %d",
                          int(i / data.k), int(i % data.k)));
    }
  }
  for (int n = 0; n < data.n; ++n) {
    if (!std::isfinite(data.y[n])) {
      return absl::InvalidArgumentError(
          absl::StrFormat("non-finite label at row %d", n));
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<Dataset> ParseDataset(std::string_view text,
                                     const CsvOptions& options) {
  Dataset d;
  int line_no = 0;
  size_t width = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = Trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string_view> fields = SplitFields(line, options.delimiter);
    if (width == 0) {
      if (fields.size() < 2) {
        return absl::InvalidArgumentError(absl::StrFormat(
            "line %d: header needs at least one feature and a label", line_no));
      }
      width = fields.size();
      for (size_t j = 0; j + 1 < width; ++j) {
        d.feature_names.emplace_back(fields[j]);
      }
      d.label_name = std::string(fields.back());
      continue;
    }
    if (fields.size() != width) {
      return absl::InvalidArgumentError(
          absl::StrFormat("line %d: expected %d fields, got %d", line_no, width,
                          fields.size()));
    }
    for (size_t j = 0; j + 1 < width; ++j) {
      double v;
      if (!ParseNumber(fields[j], &v)) {
        return absl::InvalidArgumentError(
            absl::StrFormat("line %d, field %d: cannot parse '%s'", line_no,
                            j + 1, std::string(fields[j])));
      }
      d.x.push_back(v);
    }
    double label;
    if (options.positive_label.has_value()) {
      label = fields.back() == *options.positive_label ? 1.0 : -1.0;
    } else if (!ParseNumber(fields.back(), &label)) {
      return absl::InvalidArgumentError(
          absl::StrFormat("line %d, field %d: cannot parse label '%s'", line_no,
                          width, std::string(fields.back())));
    }
    d.y.push_back(label);
    ++d.n;
  }
  if (width == 0) return absl::InvalidArgumentError("missing header row");
  if (d.n == 0) return absl::InvalidArgumentError("no data rows");
  d.k = static_cast<int>(width - 1);
  return d;
}

absl::StatusOr<Dataset> LoadDataset(const std::string& path,
                                    const CsvOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError("cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  absl::StatusOr<Dataset> d = ParseDataset(buffer.str(), options);
  if (!d.ok()) {
    return absl::Status(d.status().code(),
                        path + ": " + std::string(d.status().message()));
  }
  return d;
}

std::string FormatDataset(const Dataset& data) {
  std::string out;
  for (const std::string& name : data.feature_names) out += name + ",";
  out += data.label_name + "\n";
  for (int n = 0; n < data.n; ++n) {
    for (int j = 0; j < data.k; ++j) {
      out += absl::StrFormat("%.17g,", data.at(n, j));
    }
    out += absl::StrFormat("%.17g\n", data.y[n]);
  }
  return out;
}

Dataset SyntheticLinear(int n, int k, double noise_sd, uint64_t seed) {
  Dataset d = SyntheticFeatures(n, k, seed);
  const std::vector<double> theta = TrueTheta(k);
  const CounterRng rng(seed, kLabelStream);
  for (int i = 0; i < n; ++i) {
    d.y[i] = Dot(d, i, theta) + noise_sd * StdNormal(rng.Uniform(i));
  }
  return d;
}

Dataset SyntheticLogistic(int n, int k, uint64_t seed) {
  Dataset d = SyntheticFeatures(n, k, seed);
  const std::vector<double> theta = TrueTheta(k);
  const CounterRng rng(seed, kLabelStream);
  for (int i = 0; i < n; ++i) {
    d.y[i] = rng.Uniform(i) < Sigmoid(Dot(d, i, theta)) ? 1.0 : -1.0;
  }
  return d;
}

std::string_view LossName(Loss loss) {
  return loss == Loss::kLogistic ? "logistic" : "least_squares";
}

std::string_view RegularizerName(Regularizer reg) {
  return reg == Regularizer::kL1 ? "l1" : "l2";
}

std::string_view NoiseMechanismName(NoiseMechanism mechanism) {
  return mechanism == NoiseMechanism::kFlippedHuber ? "fh" : "gaussian";
}

absl::Status ValidateTrainConfig(const TrainConfig& config) {
  if (config.batches < 1) {
    return absl::InvalidArgumentError(
        absl::StrFormat("batches must be >= 1, got %d", config.batches));
  }
  if (!(config.step_scale > 0.0) || !(config.clip_scale > 0.0) ||
      !(config.strength >= 0.0)) {
    return absl::InvalidArgumentError(
        "need step_scale > 0, clip_scale > 0 and strength >= 0");
  }
  if (!(config.train_fraction > 0.0 && config.train_fraction < 1.0)) {
    return absl::InvalidArgumentError("train_fraction must lie in (0, 1)");
  }
  if (!config.noise_free) {
    if (absl::Status s = ValidateBudget(config.budget); !s.ok()) return s;
    if (!(config.budget.epsilon > 0.0) || !(config.budget.delta > 0.0) ||
        !(config.budget.delta < 1.0)) {
      return absl::InvalidArgumentError(
          "private training needs epsilon > 0 and delta in (0, 1)");
    }
  }
  return absl::OkStatus();
}

std::vector<double> CoordinateSmoothness(const Dataset& data, Loss loss) {
  std::vector<double> m(data.k, 0.0);
  for (int n = 0; n < data.n; ++n) {
    for (int j = 0; j < data.k; ++j) m[j] += data.at(n, j) * data.at(n, j);
  }
  const double scale = loss == Loss::kLogistic ? 0.25 : 1.0;
  for (double& v : m) v *= scale / data.n;
  return m;
}

double ProxStep(double theta, double grad, double tau, Regularizer reg,
                double strength) {
  const double z = theta - tau * grad;
  if (reg == Regularizer::kL2) return z / (1.0 + tau * strength);
  const double t = tau * strength;
  if (z > t) return z - t;
  if (z < -t) return z + t;
  return 0.0;
}

absl::StatusOr<NoisePlan> PerCoordinateNoise(const TrainConfig& config,
                                             std::span<const double> smoothness,
                                             int n_train) {
  if (absl::Status s = ValidateTrainConfig(config); !s.ok()) return s;
  if (n_train < 1) return absl::InvalidArgumentError("empty training set");
  const double total =
      std::accumulate(smoothness.begin(), smoothness.end(), 0.0);
  if (!(total > 0.0)) {
    return absl::FailedPreconditionError("every feature column is zero");
  }
  NoisePlan plan;
  std::vector<double> lambdas;
  for (size_t i = 0; i < smoothness.size(); ++i) {
    if (!(smoothness[i] > 0.0)) continue;
    CoordinateNoise c;
    c.coordinate = static_cast<int>(i);
    c.clip = config.clip_scale * std::sqrt(smoothness[i] / total);
    c.lambda = 2.0 * c.clip / n_train;
    c.tau = config.step_scale / smoothness[i];
    plan.coordinates.push_back(c);
    lambdas.push_back(c.lambda);
  }
  if (config.noise_free) {
    plan.z = {0.0, 0.0};
    for (CoordinateNoise& c : plan.coordinates) c.params = {0.0, 0.0};
    return plan;
  }
  const int k = static_cast<int>(plan.coordinates.size());
  absl::StatusOr<ZcdpSelection> sel = SelectZcdp(
      config.budget, k, config.batches, config.conversion,
      config.selection_points, config.mechanism == NoiseMechanism::kGaussian);
  if (!sel.ok()) return sel.status();
  plan.z = sel->z;
  plan.unit_variance = sel->unit_variance;
  absl::StatusOr<std::vector<FHParams>> params =
      PerCoordinateFhParams(plan.z, lambdas, config.batches);
  if (!params.ok()) return params.status();
  for (int i = 0; i < k; ++i) plan.coordinates[i].params = (*params)[i];
  return plan;
}

ZcdpParams PlanLedger(const NoisePlan& plan, int batches) {
  std::vector<ZcdpParams> parts;
  for (const CoordinateNoise& c : plan.coordinates) {
    if (!(c.params.gamma > 0.0)) continue;
    const ZcdpParams one =
        FhZcdp(c.params, SensitivityProfile::Scalar(c.lambda));
    for (int l = 0; l < batches; ++l) parts.push_back(one);
  }
  return Compose(parts);
}

double Objective(const Dataset& data, std::span<const double> theta, Loss loss,
                 Regularizer reg, double strength) {
  double s = 0.0;
  for (int n = 0; n < data.n; ++n) {
    s += SampleLoss(Dot(data, n, theta), data.y[n], loss);
  }
  return s / data.n + Penalty(theta, reg, strength);
}

absl::StatusOr<Problem> PrepareProblem(const Dataset& data,
                                       const TrainConfig& config) {
  if (absl::Status s = ValidateDataset(data); !s.ok()) return s;
  if (absl::Status s = ValidateTrainConfig(config); !s.ok()) return s;
  if (config.loss == Loss::kLogistic) {
    for (int n = 0; n < data.n; ++n) {
      if (data.y[n] != 1.0 && data.y[n] != -1.0) {
        return absl::InvalidArgumentError(absl::StrFormat(
            "logistic loss needs labels in {-1, +1}; row %d has %g", n,
            data.y[n]));
      }
    }
  }
  const int n_train =
      static_cast<int>(std::lround(config.train_fraction * data.n));
  if (n_train < 1 || n_train >= data.n) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "%d rows cannot be split into non-empty train and test parts", data.n));
  }
  // Seeded permutation: sort rows by a random key, ties by index.
  const CounterRng rng(config.seed, kSplitStream);
  std::vector<int> order(data.n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<uint64_t> keys(data.n);
  for (int i = 0; i < data.n; ++i) keys[i] = rng.Bits(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return keys[a] != keys[b] ? keys[a] < keys[b] : a < b;
  });
  Problem p;
  p.train = Subset(data, std::span<const int>(order).first(n_train));
  p.test = Subset(data, std::span<const int>(order).subspan(n_train));
  Standardize(config.loss, &p.train, &p.test);
  p.smoothness = CoordinateSmoothness(p.train, config.loss);

  const Dataset& d = p.train;
  std::vector<double> theta(d.k, 0.0);
  std::vector<double> margins(d.n, 0.0);
  int sweep = 0;
  for (; sweep < kOptimumMaxSweeps; ++sweep) {
    for (int i = 0; i < d.k; ++i) {
      if (!(p.smoothness[i] > 0.0)) continue;
      const double g = CoordinateGradient(d, margins, i, config.loss, 0.0);
      const double next = ProxStep(theta[i], g, 1.0 / p.smoothness[i],
                                   config.reg, config.strength);
      UpdateMargins(d, i, next - theta[i], &margins);
      theta[i] = next;
    }
    double norm2 = 0.0;
    for (int i = 0; i < d.k; ++i) {
      if (!(p.smoothness[i] > 0.0)) continue;
      const double g = CoordinateGradient(d, margins, i, config.loss, 0.0);
      const double m = p.smoothness[i];
      const double step =
          m * (theta[i] -
               ProxStep(theta[i], g, 1.0 / m, config.reg, config.strength));
      norm2 += step * step;
    }
    if (std::sqrt(norm2) < kOptimumGradTol) {
      ++sweep;
      break;
    }
  }
  p.theta_star = std::move(theta);
  p.optimum_sweeps = sweep;
  return p;
}

absl::StatusOr<FitReport> TrainOnProblem(const Problem& problem,
                                         const TrainConfig& config) {
  const Dataset& d = problem.train;
  absl::StatusOr<NoisePlan> plan =
      PerCoordinateNoise(config, problem.smoothness, d.n);
  if (!plan.ok()) return plan.status();

  FitReport report;
  report.ledger = PlanLedger(*plan, config.batches);
  if (!config.noise_free) {
    const double dx = std::abs(report.ledger.xi - plan->z.xi);
    const double de = std::abs(report.ledger.eta - plan->z.eta);
    if (dx > kLedgerRtol * std::max(1.0, plan->z.xi) ||
        de > kLedgerRtol * plan->z.eta) {
      return absl::InternalError(absl::StrFormat(
          "privacy ledger (%.17g, %.17g) differs from the target (%.17g, "
          "%.17g)",
          report.ledger.xi, report.ledger.eta, plan->z.xi, plan->z.eta));
    }
  }
  std::vector<FHDistribution> noise;
  if (!config.noise_free) {
    for (const CoordinateNoise& c : plan->coordinates) {
      absl::StatusOr<FHDistribution> dist = FHDistribution::Create(c.params);
      if (!dist.ok()) return dist.status();
      noise.push_back(*dist);
    }
  }

  const CounterRng rng(config.seed, kNoiseStream);
  std::vector<double> theta(d.k, 0.0);
  std::vector<double> margins(d.n, 0.0);
  report.objective_trace.push_back(
      Objective(d, theta, config.loss, config.reg, config.strength));
  for (int l = 0; l < config.batches; ++l) {
    for (size_t c = 0; c < plan->coordinates.size(); ++c) {
      const CoordinateNoise& cn = plan->coordinates[c];
      const int i = cn.coordinate;
      double nu = CoordinateGradient(d, margins, i, config.loss, cn.clip);
      if (!config.noise_free) {
        const uint64_t index = uint64_t(l) * d.k + i;
        nu += noise[c].QuantileUnchecked(rng.Uniform(index));
      }
      const double next =
          ProxStep(theta[i], nu, cn.tau, config.reg, config.strength);
      if (!std::isfinite(next)) {
        return absl::OutOfRangeError(absl::StrFormat(
            "iterate diverged in batch %d at coordinate %d (gradient %g)", l, i,
            nu));
      }
      UpdateMargins(d, i, next - theta[i], &margins);
      theta[i] = next;
    }
    report.objective_trace.push_back(
        Objective(d, theta, config.loss, config.reg, config.strength));
  }

  double num = 0.0;
  double den = 0.0;
  for (int i = 0; i < d.k; ++i) {
    const double e = theta[i] - problem.theta_star[i];
    num += e * e;
    den += problem.theta_star[i] * problem.theta_star[i];
  }
  if (!(den > 0.0)) {
    return absl::FailedPreconditionError(
        "the non-private optimum is zero, so NMSE is undefined");
  }
  report.nmse = num / den;
  report.test_error = TestError(problem.test, theta, config.loss);
  report.theta_hat = std::move(theta);
  report.theta_star = problem.theta_star;
  report.plan = *std::move(plan);
  report.n_train = d.n;
  report.n_test = problem.test.n;
  return report;
}

absl::StatusOr<FitReport> DpcdTrain(const Dataset& data,
                                    const TrainConfig& config) {
  absl::StatusOr<Problem> problem = PrepareProblem(data, config);
  if (!problem.ok()) return problem.status();
  return TrainOnProblem(*problem, config);
}

absl::StatusOr<TuneResult> TuneDpcd(const Dataset& data,
                                    const TrainConfig& base,
                                    const HyperGrid& grid,
                                    std::span<const uint64_t> seeds,
                                    int workers) {
  if (seeds.empty()) return absl::InvalidArgumentError("no seeds given");
  std::vector<Problem> problems;
  for (uint64_t seed : seeds) {
    TrainConfig c = base;
    c.seed = seed;
    absl::StatusOr<Problem> p = PrepareProblem(data, c);
    if (!p.ok()) return p.status();
    problems.push_back(*std::move(p));
  }
  std::vector<TrainConfig> settings;
  for (int b : grid.batches) {
    for (double s : grid.steps) {
      for (double c : grid.clips) {
        TrainConfig t = base;
        t.batches = b;
        t.step_scale = s;
        t.clip_scale = c;
        settings.push_back(t);
      }
    }
  }
  if (settings.empty()) return absl::InvalidArgumentError("empty grid");
  const size_t ns = seeds.size();
  std::vector<absl::StatusOr<FitReport>> runs(settings.size() * ns,
                                              absl::UnknownError("not run"));
  ParallelFor(
      runs.size(),
      [&](size_t r) {
        TrainConfig t = settings[r / ns];
        t.seed = seeds[r % ns];
        runs[r] = TrainOnProblem(problems[r % ns], t);
      },
      workers);
  for (const auto& r : runs) {
    if (!r.ok()) return r.status();
  }
  size_t best = 0;
  double best_nmse = INFINITY;
  for (size_t h = 0; h < settings.size(); ++h) {
    double mean = 0.0;
    for (size_t s = 0; s < ns; ++s) mean += runs[h * ns + s]->nmse;
    mean /= ns;
    if (mean < best_nmse) {
      best_nmse = mean;
      best = h;
    }
  }
  TuneResult result;
  result.best = settings[best];
  result.mean_nmse = best_nmse;
  for (size_t s = 0; s < ns; ++s) {
    result.mean_test_error += runs[best * ns + s]->test_error / ns;
    result.reports.push_back(*runs[best * ns + s]);
  }
  return result;
}

}  // namespace fhdp
