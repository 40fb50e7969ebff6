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

#include "cli.h"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "boost/math/tools/roots.hpp"
#include "fhdp/accountant_1d.h"
#include "fhdp/accountant_kd.h"
#include "fhdp/baselines.h"
#include "fhdp/calibration.h"
#include "fhdp/dpcd.h"
#include "fhdp/flipped_huber.h"
#include "fhdp/parallel.h"
#include "fhdp/privacy_loss.h"
#include "fhdp/zcdp.h"
#include "output.h"

namespace fhdp::cli {
namespace {

const std::vector<std::string> kMechanismNames = {"fh", "gaussian", "laplace",
                                                  "osgt"};

Mechanism ParseMechanism(const std::string& name) {
  if (name == "gaussian") return Mechanism::kGaussian;
  if (name == "laplace") return Mechanism::kLaplace;
  if (name == "osgt") return Mechanism::kOsgt;
  return Mechanism::kFlippedHuber;
}

int ExitCode(const absl::Status& status) {
  switch (status.code()) {
    case absl::StatusCode::kInvalidArgument:
    case absl::StatusCode::kFailedPrecondition:
    case absl::StatusCode::kUnimplemented:
    case absl::StatusCode::kNotFound:
      return kExitUsage;
    default:
      return kExitNumeric;
  }
}

std::string Basename(const std::string& path) {
  const size_t slash = path.find_last_of('/');
  return slash == std::string::npos ? path : path.substr(slash + 1);
}

// Flag values as given, or their defaults, keyed by long name.
Json ConfigEcho(const CLI::App& sub) {
  Json j = Json::object();
  for (const CLI::Option* opt : sub.get_options()) {
    if (opt->get_lnames().empty()) continue;
    const std::string& name = opt->get_lnames().front();
    if (name == "help") continue;
    if (opt->count() > 0) {
      const std::vector<std::string>& r = opt->results();
      j[name] = r.size() == 1 ? Json(r.front()) : Json(r);
    } else if (!opt->get_default_str().empty()) {
      j[name] = opt->get_default_str();
    } else {
      j[name] = nullptr;
    }
  }
  return j;
}

// Shared plumbing of one subcommand invocation.
struct Run {
  std::string command;
  std::vector<std::string> argv;
  const CLI::App* sub = nullptr;
  int workers = 0;
  std::string out_path;
  std::string manifest_flag;
  std::ostream* out = nullptr;
  std::ostream* err = nullptr;
  Json resolved = Json::object();
  std::optional<uint64_t> seed;

  std::optional<std::string> ManifestPath() const {
    if (out_path.empty()) return std::nullopt;
    return manifest_flag.empty() ? out_path + ".manifest.json" : manifest_flag;
  }

  // How outputs name their manifest: relative to the output when it sits
  // next to it, else the path as given.
  std::optional<std::string> ManifestRef() const {
    if (out_path.empty()) return std::nullopt;
    return manifest_flag.empty() ? Basename(*ManifestPath()) : manifest_flag;
  }

  int Fail(const absl::Status& status) const {
    *err << "fhdp " << command << ": " << status.message() << "\n";
    return ExitCode(status);
  }

  int Fail(int code, std::string_view message) const {
    *err << "fhdp " << command << ": " << message << "\n";
    return code;
  }

  int WriteJson(Json body) const {
    if (std::optional<std::string> ref = ManifestRef(); ref.has_value()) {
      body["manifest"] = *ref;
    }
    return Write(DumpJson(body));
  }

  int WriteCsv(const std::string& table) const {
    std::string body;
    if (std::optional<std::string> ref = ManifestRef(); ref.has_value()) {
      body = "# manifest: " + *ref + "\n";
    }
    return Write(body + table);
  }

  int Write(const std::string& body) const {
    if (out_path.empty()) {
      *out << body;
      return kExitOk;
    }
    if (absl::Status s = WriteFile(out_path, body); !s.ok()) {
      return Fail(kExitUsage, std::string(s.message()));
    }
    Manifest m;
    m.command = command;
    m.argv = argv;
    m.config = ConfigEcho(*sub);
    m.config["workers"] = workers;
    m.resolved = resolved;
    m.seed = seed;
    m.outputs = {out_path};
    if (absl::Status s = WriteFile(*ManifestPath(), FormatManifest(m));
        !s.ok()) {
      return Fail(kExitUsage, std::string(s.message()));
    }
    return kExitOk;
  }
};

void AddOutputFlags(CLI::App* sub, Run* run) {
  sub->add_option("--out", run->out_path,
                  "Output file; standard output when omitted");
  sub->add_option("--manifest", run->manifest_flag,
                  "Manifest path; defaults to <out>.manifest.json");
}

struct SensitivityFlags {
  int k = 1;
  double delta_inf = 1.0;
  std::optional<double> delta_1;
  std::optional<double> delta_2;

  absl::StatusOr<SensitivityProfile> Get() const {
    if (k < 1) return absl::InvalidArgumentError("--k must be >= 1");
    SensitivityProfile s = SensitivityProfile::Box(k, delta_inf);
    if (delta_1.has_value()) s.delta_1 = *delta_1;
    if (delta_2.has_value()) s.delta_2 = *delta_2;
    if (absl::Status st = ValidateSensitivity(s); !st.ok()) return st;
    return s;
  }
};

void AddSensitivityFlags(CLI::App* sub, SensitivityFlags* f) {
  sub->add_option("--k", f->k, "Query dimension");
  sub->add_option("--delta-inf", f->delta_inf, "Per-coordinate sensitivity");
  sub->add_option("--delta1", f->delta_1, "l1 sensitivity; default k Dinf");
  sub->add_option("--delta2", f->delta_2,
                  "l2 sensitivity; default sqrt(k) Dinf");
}

struct RegionFlags {
  double alpha_min = 0.02;
  double alpha_max = 150.0;
  double gamma_min = 0.02;
  double gamma_max = 50.0;
  int grid_points = 200;
  int refine_rounds = 3;
  int kfold_points = 4001;

  SearchRegion Region() const {
    SearchRegion r;
    r.alpha_range = {alpha_min, alpha_max};
    r.gamma_range = {gamma_min, gamma_max};
    r.coarse_points = grid_points;
    r.refine_rounds = refine_rounds;
    return r;
  }

  KfoldGrid Grid() const {
    KfoldGrid g;
    g.points = kfold_points;
    return g;
  }
};

void AddRegionFlags(CLI::App* sub, RegionFlags* f) {
  sub->add_option("--alpha-min", f->alpha_min,
                  "Search box, alpha (vartheta for osgt)");
  sub->add_option("--alpha-max", f->alpha_max);
  sub->add_option("--gamma-min", f->gamma_min,
                  "Search box, gamma (varrho for osgt)");
  sub->add_option("--gamma-max", f->gamma_max);
  sub->add_option("--grid-points", f->grid_points, "Coarse points per axis");
  sub->add_option("--refine-rounds", f->refine_rounds);
  sub->add_option("--kfold-points", f->kfold_points,
                  "Grid size of the numeric K-fold accountant");
}

Json SensitivityJson(const SensitivityProfile& s) {
  Json j;
  j["k"] = s.k;
  j["delta_inf"] = s.delta_inf;
  j["delta_1"] = s.delta_1;
  j["delta_2"] = s.delta_2;
  return j;
}

Json ParamsJson(const MechanismParams& params) {
  Json j;
  if (const auto* p = std::get_if<FHParams>(&params)) {
    j["alpha"] = p->alpha;
    j["gamma"] = p->gamma;
  } else if (const auto* p = std::get_if<GaussianParams>(&params)) {
    j["sigma"] = p->sigma;
  } else if (const auto* p = std::get_if<LaplaceParams>(&params)) {
    j["beta"] = p->beta;
  } else if (const auto* p = std::get_if<OsgtParams>(&params)) {
    j["vartheta"] = p->vartheta;
    j["varrho"] = p->varrho;
  }
  return j;
}

// ---------------------------------------------------------------- calibrate

struct CalibrateFlags {
  std::string mechanism = "fh";
  double eps = 0.0;
  double delta = 0.0;
  std::string method;
  SensitivityFlags sens;
  RegionFlags region;
};

int RunCalibrate(Run& run, const CalibrateFlags& f) {
  const PrivacyBudget budget{f.eps, f.delta};
  absl::StatusOr<SensitivityProfile> sens = f.sens.Get();
  if (!sens.ok()) return run.Fail(sens.status());
  const Mechanism mech = ParseMechanism(f.mechanism);

  std::string method = f.method;
  if (method.empty()) {
    method = mech == Mechanism::kFlippedHuber && sens->k > 1 ? "sufficient"
                                                             : "closed";
  }
  if (mech != Mechanism::kFlippedHuber && method != "closed") {
    return run.Fail(kExitUsage, "--method applies to --mechanism fh only");
  }
  if (mech == Mechanism::kFlippedHuber &&
      (method == "closed") != (sens->k == 1)) {
    return run.Fail(kExitUsage,
                    "fh needs --method closed for k = 1 and sufficient or "
                    "numeric for k > 1");
  }
  if (mech == Mechanism::kOsgt && sens->k != 1) {
    return run.Fail(kExitUsage, "osgt is calibrated for k = 1 only");
  }

  Json body;
  body["mechanism"] = f.mechanism;
  body["method"] = method;
  body["epsilon"] = budget.epsilon;
  body["delta"] = budget.delta;
  body["sensitivity"] = SensitivityJson(*sens);

  auto infeasible = [&](std::string_view why) {
    body["feasible"] = false;
    body["error"] = {{"kind", "infeasible"}, {"message", std::string(why)}};
    if (const int code = run.WriteJson(body); code != kExitOk) return code;
    return run.Fail(kExitInfeasible, why);
  };
  if (budget.delta == 0.0 && mech != Mechanism::kLaplace) {
    return infeasible(
        "delta = 0 is unattainable: the privacy loss of this mechanism is "
        "unbounded");
  }

  const SearchRegion region = f.region.Region();
  absl::StatusOr<CalibrationResult> r;
  switch (mech) {
    case Mechanism::kFlippedHuber:
      if (method == "closed") {
        r = CalibrateFh1d(budget, sens->delta_inf, region);
      } else if (method == "sufficient") {
        r = CalibrateFhKdSufficient(budget, *sens, region);
      } else {
        r = CalibrateFhKdNumeric(budget, *sens, region, f.region.Grid());
      }
      break;
    case Mechanism::kGaussian:
      r = CalibrateGaussian(budget, *sens);
      break;
    case Mechanism::kLaplace:
      r = CalibrateLaplace(budget, *sens);
      break;
    case Mechanism::kOsgt:
      r = CalibrateOsgt(budget, sens->delta_inf, region);
      break;
  }
  if (!r.ok()) return run.Fail(r.status());
  if (!r->feasible) {
    return infeasible("no parameters in the search region meet the budget");
  }
  body["feasible"] = true;
  body["params"] = ParamsJson(r->params);
  body["variance"] = r->variance;
  body["achieved_delta"] = r->achieved_delta;
  return run.WriteJson(body);
}

// ------------------------------------------------------------------ profile

struct ProfileFlags {
  std::string mechanism = "fh";
  double alpha = 0.0;
  std::optional<double> gamma;
  std::optional<double> sigma;
  std::optional<double> beta;
  double vartheta = 0.0;
  std::optional<double> varrho;
  std::optional<double> variance;
  std::string method;
  SensitivityFlags sens;
  std::vector<double> eps;
  double eps_min = 0.0;
  std::optional<double> eps_max;
  int eps_points = 101;
  int kfold_points = 4001;
};

// The scale s with variance_at(s) = target, for variance_at increasing.
absl::StatusOr<double> SolveScale(
    const std::function<double(double)>& variance_at, double target) {
  if (!(target > 0.0) || !std::isfinite(target)) {
    return absl::InvalidArgumentError("--variance must be finite and > 0");
  }
  double lo = std::sqrt(target), hi = lo;
  for (int i = 0; i < 200 && variance_at(lo) > target; ++i) lo *= 0.5;
  for (int i = 0; i < 200 && variance_at(hi) < target; ++i) hi *= 2.0;
  auto f = [&](double s) { return variance_at(s) - target; };
  if (f(lo) > 0.0 || f(hi) < 0.0) {
    return absl::InternalError("could not bracket the variance target");
  }
  if (f(lo) == 0.0) return lo;
  if (f(hi) == 0.0) return hi;
  boost::math::tools::eps_tolerance<double> tol(50);
  std::uintmax_t iters = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, tol, iters);
  return 0.5 * (a + b);
}

absl::StatusOr<std::vector<double>> EpsGrid(const ProfileFlags& f) {
  std::vector<double> grid = f.eps;
  if (grid.empty()) {
    if (!f.eps_max.has_value()) {
      return absl::InvalidArgumentError("give --eps or --eps-max");
    }
    if (f.eps_points < 1) {
      return absl::InvalidArgumentError("--eps-points must be >= 1");
    }
    if (f.eps_points == 1) {
      grid = {f.eps_min};
    } else {
      for (int i = 0; i < f.eps_points; ++i) {
        grid.push_back(f.eps_min +
                       (*f.eps_max - f.eps_min) * i / (f.eps_points - 1));
      }
    }
  }
  for (size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i]) || (i > 0 && !(grid[i] > grid[i - 1]))) {
      return absl::InvalidArgumentError(
          "the epsilon grid must be finite and strictly increasing");
    }
  }
  return grid;
}

int RunProfile(Run& run, const ProfileFlags& f) {
  absl::StatusOr<SensitivityProfile> sens = f.sens.Get();
  if (!sens.ok()) return run.Fail(sens.status());
  absl::StatusOr<std::vector<double>> grid = EpsGrid(f);
  if (!grid.ok()) return run.Fail(grid.status());
  const Mechanism mech = ParseMechanism(f.mechanism);
  if (mech != Mechanism::kFlippedHuber && mech != Mechanism::kGaussian &&
      sens->k != 1) {
    return run.Fail(kExitUsage, f.mechanism + " profiles need k = 1");
  }
  auto scale = [&](const std::optional<double>& given, const char* name,
                   const std::function<double(double)>& variance_at)
      -> absl::StatusOr<double> {
    if (given.has_value() == f.variance.has_value()) {
      return absl::InvalidArgumentError(
          absl::StrCat("give exactly one of --", name, " and --variance"));
    }
    if (given.has_value()) return *given;
    return SolveScale(variance_at, *f.variance);
  };

  std::vector<double> delta(grid->size());
  run.resolved["mechanism"] = f.mechanism;
  switch (mech) {
    case Mechanism::kFlippedHuber: {
      absl::StatusOr<double> gamma = scale(f.gamma, "gamma", [&](double g) {
        absl::StatusOr<FHDistribution> d = FHDistribution::Create({f.alpha, g});
        return d.ok() ? d->Variance() : NAN;
      });
      if (!gamma.ok()) return run.Fail(gamma.status());
      absl::StatusOr<FHDistribution> dist =
          FHDistribution::Create({f.alpha, *gamma});
      if (!dist.ok()) return run.Fail(dist.status());
      const std::string method =
          !f.method.empty() ? f.method : (sens->k == 1 ? "closed" : "numeric");
      run.resolved["alpha"] = f.alpha;
      run.resolved["gamma"] = *gamma;
      run.resolved["variance"] = dist->Variance();
      run.resolved["method"] = method;
      if (method == "closed") {
        if (sens->k != 1) {
          return run.Fail(kExitUsage, "--method closed needs k = 1");
        }
        delta = FhProfileCurve1d(*grid, *dist, sens->delta_inf).delta_values;
      } else if (method == "numeric") {
        KfoldGrid kg;
        kg.points = f.kfold_points;
        absl::StatusOr<PrivacyProfileCurve> curve =
            NumericProfileKd(*dist, sens->k, sens->delta_inf, kg);
        if (!curve.ok()) return run.Fail(curve.status());
        for (size_t i = 0; i < grid->size(); ++i) {
          delta[i] = EvaluateProfile(*curve, (*grid)[i]);
        }
      } else {
        for (size_t i = 0; i < grid->size(); ++i) {
          delta[i] = SufficientDeltaKd((*grid)[i], *dist, *sens).delta;
        }
      }
      break;
    }
    case Mechanism::kGaussian: {
      absl::StatusOr<double> sigma =
          scale(f.sigma, "sigma", [](double s) { return s * s; });
      if (!sigma.ok()) return run.Fail(sigma.status());
      if (!(*sigma > 0.0)) return run.Fail(kExitUsage, "sigma must be > 0");
      run.resolved["sigma"] = *sigma;
      for (size_t i = 0; i < grid->size(); ++i) {
        delta[i] = GaussianDelta((*grid)[i], *sigma, sens->delta_2);
      }
      break;
    }
    case Mechanism::kLaplace: {
      absl::StatusOr<double> beta =
          scale(f.beta, "beta", [](double b) { return LaplaceVariance(b); });
      if (!beta.ok()) return run.Fail(beta.status());
      if (!(*beta > 0.0)) return run.Fail(kExitUsage, "beta must be > 0");
      run.resolved["beta"] = *beta;
      for (size_t i = 0; i < grid->size(); ++i) {
        delta[i] = LaplaceProfile1d((*grid)[i], *beta, sens->delta_inf);
      }
      break;
    }
    case Mechanism::kOsgt: {
      absl::StatusOr<double> varrho = scale(f.varrho, "varrho", [&](double r) {
        return OsgtVariance({f.vartheta, r});
      });
      if (!varrho.ok()) return run.Fail(varrho.status());
      const OsgtParams p{f.vartheta, *varrho};
      if (absl::Status s = ValidateOsgt(p); !s.ok()) return run.Fail(s);
      run.resolved["vartheta"] = p.vartheta;
      run.resolved["varrho"] = p.varrho;
      for (size_t i = 0; i < grid->size(); ++i) {
        delta[i] = OsgtDelta((*grid)[i], p, sens->delta_inf);
      }
      break;
    }
  }

  std::string csv = "eps,delta\n";
  for (size_t i = 0; i < grid->size(); ++i) {
    if (i > 0 && !(delta[i] <= delta[i - 1])) {
      return run.Fail(kExitNumeric,
                      "computed profile increases between eps = " +
                          FormatNumber((*grid)[i - 1]) + " and " +
                          FormatNumber((*grid)[i]));
    }
    csv += FormatNumber((*grid)[i]) + "," + FormatNumber(delta[i]) + "\n";
  }
  return run.WriteCsv(csv);
}

// ------------------------------------------------------------------- sample

struct SampleFlags {
  double alpha = 0.0;
  double gamma = 1.0;
  int64_t n = 0;
  uint64_t seed = 0;
  uint64_t stream = 0;
  std::string query_file;
};

// One number per nonblank line.
absl::StatusOr<std::vector<double>> ParseQueries(std::string_view text) {
  std::vector<double> q;
  int line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? "" : text.substr(nl + 1);
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) {
      line.remove_suffix(1);
    }
    while (!line.empty() && line.front() == ' ') line.remove_prefix(1);
    if (line.empty()) continue;
    double v = 0.0;
    auto [end, ec] = std::from_chars(line.data(), line.data() + line.size(), v);
    if (ec != std::errc() || end != line.data() + line.size() ||
        !std::isfinite(v)) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line_no, ": expected one finite number, got '",
                       std::string(line), "'"));
    }
    q.push_back(v);
  }
  return q;
}

int RunSample(Run& run, const SampleFlags& f, bool n_given) {
  run.seed = f.seed;
  absl::StatusOr<FHDistribution> dist =
      FHDistribution::Create({f.alpha, f.gamma});
  if (!dist.ok())
    return run.Fail(kExitUsage, std::string(dist.status().message()));
  std::vector<double> queries;
  const bool perturb = !f.query_file.empty();
  if (perturb) {
    if (n_given) {
      return run.Fail(kExitUsage, "--n and --query-file are exclusive");
    }
    absl::StatusOr<std::string> text = ReadFile(f.query_file);
    if (!text.ok()) return run.Fail(text.status());
    absl::StatusOr<std::vector<double>> q = ParseQueries(*text);
    if (!q.ok()) {
      return run.Fail(kExitUsage,
                      f.query_file + ": " + std::string(q.status().message()));
    }
    queries = *std::move(q);
  } else if (f.n < 0) {
    return run.Fail(kExitUsage, "--n must be >= 0");
  }
  const size_t n = perturb ? queries.size() : size_t(f.n);
  const std::vector<double> noise = dist->Sample(n, f.seed, f.stream);
  std::string csv = perturb ? "response\n" : "noise\n";
  for (size_t i = 0; i < n; ++i) {
    csv += FormatNumber(perturb ? queries[i] + noise[i] : noise[i]) + "\n";
  }
  return run.WriteCsv(csv);
}

// ------------------------------------------------------------------ compare

struct CompareFlags {
  std::vector<double> eps;
  double delta = 0.0;
  std::vector<std::string> mechanisms = kMechanismNames;
  std::string method = "sufficient";
  SensitivityFlags sens;
  RegionFlags region;
};

int RunCompare(Run& run, const CompareFlags& f) {
  absl::StatusOr<SensitivityProfile> sens = f.sens.Get();
  if (!sens.ok()) return run.Fail(sens.status());
  std::vector<Mechanism> mechs;
  for (const std::string& m : f.mechanisms) mechs.push_back(ParseMechanism(m));
  CompareOptions options;
  options.region = f.region.Region();
  options.grid = f.region.Grid();
  options.fh_kd_method = f.method == "numeric"
                             ? CalibrationMethod::kNumericKd
                             : CalibrationMethod::kSufficientKd;

  // cells[e][m]
  std::vector<std::vector<ComparisonRow>> cells;
  for (double eps : f.eps) {
    cells.push_back(CompareMechanisms({eps, f.delta}, *sens, mechs, options));
  }
  std::string csv = "mechanism,epsilon,method,variance,status,note\n";
  for (size_t m = 0; m < mechs.size(); ++m) {
    for (size_t e = 0; e < f.eps.size(); ++e) {
      const ComparisonRow& row = cells[e][m];
      csv += std::string(MechanismName(mechs[m])) + "," +
             FormatNumber(f.eps[e]) + ",";
      if (!row.result.ok()) {
        csv +=
            ",,error," + CsvField(std::string(row.result.status().message()));
      } else if (!row.result->feasible) {
        csv += std::string(CalibrationMethodName(row.result->method)) +
               ",,infeasible,no parameters in the search region meet the "
               "budget";
      } else {
        csv += std::string(CalibrationMethodName(row.result->method)) + "," +
               FormatNumber(row.result->variance) + ",ok,";
      }
      csv += "\n";
    }
  }
  return run.WriteCsv(csv);
}

// --------------------------------------------------------------------- dpcd

struct DpcdFlags {
  std::string data;
  std::string synthetic;
  int n = 2000;
  int k = 10;
  double noise_sd = 0.5;
  uint64_t data_seed = 1;
  char delimiter = ',';
  std::string positive_label;
  std::string loss = "least_squares";
  std::string reg = "l2";
  double strength = 0.0;
  double eps = 1.0;
  double delta = 1e-6;
  std::string mechanism = "fh";
  std::string conversion = "standard";
  uint64_t seed = 0;
  int batches = 10;
  double step = 1.0;
  double clip = 1.0;
  double train_fraction = 0.8;
  bool noise_free = false;
  bool grid = false;
  int tune_seeds = 5;
};

Json TrainConfigJson(const TrainConfig& c) {
  Json j;
  j["loss"] = LossName(c.loss);
  j["reg"] = RegularizerName(c.reg);
  j["strength"] = c.strength;
  j["batches"] = c.batches;
  j["step_scale"] = c.step_scale;
  j["clip_scale"] = c.clip_scale;
  j["epsilon"] = c.budget.epsilon;
  j["delta"] = c.budget.delta;
  j["mechanism"] = NoiseMechanismName(c.mechanism);
  j["conversion"] = ZcdpConversionName(c.conversion);
  j["noise_free"] = c.noise_free;
  j["train_fraction"] = c.train_fraction;
  j["seed"] = c.seed;
  return j;
}

Json FitReportJson(const FitReport& r) {
  Json j;
  j["seed"] = nullptr;
  j["n_train"] = r.n_train;
  j["n_test"] = r.n_test;
  j["nmse"] = r.nmse;
  j["test_error"] = r.test_error;
  j["theta_hat"] = r.theta_hat;
  j["theta_star"] = r.theta_star;
  j["objective_trace"] = r.objective_trace;
  Json plan;
  plan["xi"] = r.plan.z.xi;
  plan["eta"] = r.plan.z.eta;
  plan["unit_variance"] = r.plan.unit_variance;
  plan["coordinates"] = Json::array();
  for (const CoordinateNoise& c : r.plan.coordinates) {
    plan["coordinates"].push_back({{"coordinate", c.coordinate},
                                   {"clip", c.clip},
                                   {"lambda", c.lambda},
                                   {"tau", c.tau},
                                   {"alpha", c.params.alpha},
                                   {"gamma", c.params.gamma}});
  }
  j["plan"] = plan;
  j["ledger"] = {{"xi", r.ledger.xi}, {"eta", r.ledger.eta}};
  return j;
}

int RunDpcd(Run& run, const DpcdFlags& f) {
  run.seed = f.seed;
  if (f.data.empty() == f.synthetic.empty()) {
    return run.Fail(kExitUsage, "give exactly one of --data and --synthetic");
  }
  Dataset data;
  Json source;
  if (!f.data.empty()) {
    CsvOptions opts;
    opts.delimiter = f.delimiter;
    if (!f.positive_label.empty()) opts.positive_label = f.positive_label;
    absl::StatusOr<Dataset> d = LoadDataset(f.data, opts);
    if (!d.ok()) return run.Fail(kExitUsage, std::string(d.status().message()));
    data = *std::move(d);
    source["path"] = f.data;
  } else {
    if (f.n < 2 || f.k < 1) {
      return run.Fail(kExitUsage, "synthetic data needs --n >= 2, --k >= 1");
    }
    data = f.synthetic == "linear"
               ? SyntheticLinear(f.n, f.k, f.noise_sd, f.data_seed)
               : SyntheticLogistic(f.n, f.k, f.data_seed);
    source["synthetic"] = f.synthetic;
    source["data_seed"] = f.data_seed;
  }
  source["n"] = data.n;
  source["k"] = data.k;

  TrainConfig c;
  c.loss = f.loss == "logistic" ? Loss::kLogistic : Loss::kLeastSquares;
  c.reg = f.reg == "l1" ? Regularizer::kL1 : Regularizer::kL2;
  c.strength = f.strength;
  c.batches = f.batches;
  c.step_scale = f.step;
  c.clip_scale = f.clip;
  c.budget = {f.eps, f.delta};
  c.mechanism = f.mechanism == "gaussian" ? NoiseMechanism::kGaussian
                                          : NoiseMechanism::kFlippedHuber;
  c.conversion = f.conversion == "optimized" ? ZcdpConversion::kOptimized
                                             : ZcdpConversion::kStandard;
  c.noise_free = f.noise_free;
  c.train_fraction = f.train_fraction;
  c.seed = f.seed;

  Json body;
  body["data"] = source;
  body["config"] = TrainConfigJson(c);
  if (!f.grid) {
    absl::StatusOr<FitReport> r = DpcdTrain(data, c);
    if (!r.ok()) return run.Fail(r.status());
    Json report = FitReportJson(*r);
    report["seed"] = c.seed;
    body["report"] = report;
    return run.WriteJson(body);
  }
  if (f.tune_seeds < 1)
    return run.Fail(kExitUsage, "--tune-seeds must be >= 1");
  std::vector<uint64_t> seeds;
  for (int i = 0; i < f.tune_seeds; ++i) seeds.push_back(f.seed + i);
  const HyperGrid grid;
  absl::StatusOr<TuneResult> t = TuneDpcd(data, c, grid, seeds);
  if (!t.ok()) return run.Fail(t.status());
  body["grid"] = {
      {"batches", grid.batches}, {"steps", grid.steps}, {"clips", grid.clips}};
  body["seeds"] = seeds;
  body["best"] = TrainConfigJson(t->best);
  body["mean_nmse"] = t->mean_nmse;
  body["mean_test_error"] = t->mean_test_error;
  body["reports"] = Json::array();
  for (size_t i = 0; i < t->reports.size(); ++i) {
    Json report = FitReportJson(t->reports[i]);
    report["seed"] = seeds[i];
    body["reports"].push_back(report);
  }
  return run.WriteJson(body);
}

// Restores the process-wide worker default on scope exit.
struct WorkerGuard {
  ~WorkerGuard() { SetDefaultWorkers(0); }
};

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Flipped Huber differential privacy toolkit", "fhdp"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1, 1);
  app.fallthrough();
  int workers = 0;
  app.add_option("--workers", workers,
                 "Worker threads; 0 uses FHDP_WORKERS or all cores")
      ->check(CLI::NonNegativeNumber);

  Run run;
  run.argv = args;
  run.out = &out;
  run.err = &err;

  CalibrateFlags cal;
  CLI::App* cal_cmd = app.add_subcommand(
      "calibrate", "Minimum-variance parameters for an (eps, delta) budget");
  cal_cmd->add_option("--mechanism", cal.mechanism)
      ->check(CLI::IsMember(kMechanismNames));
  cal_cmd->add_option("--eps", cal.eps)->required();
  cal_cmd->add_option("--delta", cal.delta)->required();
  cal_cmd
      ->add_option("--method", cal.method,
                   "closed (k = 1), sufficient or numeric (fh, k > 1)")
      ->check(CLI::IsMember({"closed", "sufficient", "numeric"}));
  AddSensitivityFlags(cal_cmd, &cal.sens);
  AddRegionFlags(cal_cmd, &cal.region);
  AddOutputFlags(cal_cmd, &run);

  ProfileFlags prof;
  CLI::App* prof_cmd =
      app.add_subcommand("profile", "Privacy profile delta(eps) as CSV");
  prof_cmd->add_option("--mechanism", prof.mechanism)
      ->check(CLI::IsMember(kMechanismNames));
  prof_cmd->add_option("--alpha", prof.alpha, "fh transition point");
  prof_cmd->add_option("--gamma", prof.gamma, "fh scale");
  prof_cmd->add_option("--sigma", prof.sigma, "Gaussian scale");
  prof_cmd->add_option("--beta", prof.beta, "Laplace scale");
  prof_cmd->add_option("--vartheta", prof.vartheta, "osgt offset");
  prof_cmd->add_option("--varrho", prof.varrho, "osgt scale");
  prof_cmd->add_option("--variance", prof.variance,
                       "Solve the scale for this per-coordinate variance");
  prof_cmd
      ->add_option("--method", prof.method,
                   "fh accountant: closed, numeric or sufficient")
      ->check(CLI::IsMember({"closed", "sufficient", "numeric"}));
  prof_cmd->add_option("--eps", prof.eps, "Comma-separated epsilon grid")
      ->delimiter(',');
  prof_cmd->add_option("--eps-min", prof.eps_min);
  prof_cmd->add_option("--eps-max", prof.eps_max);
  prof_cmd->add_option("--eps-points", prof.eps_points);
  prof_cmd->add_option("--kfold-points", prof.kfold_points);
  AddSensitivityFlags(prof_cmd, &prof.sens);
  AddOutputFlags(prof_cmd, &run);

  SampleFlags samp;
  CLI::App* samp_cmd =
      app.add_subcommand("sample", "Flipped Huber noise or perturbed queries");
  samp_cmd->add_option("--alpha", samp.alpha);
  samp_cmd->add_option("--gamma", samp.gamma);
  CLI::Option* n_opt = samp_cmd->add_option("--n", samp.n, "Number of draws");
  samp_cmd->add_option("--seed", samp.seed);
  samp_cmd->add_option("--stream", samp.stream);
  samp_cmd->add_option("--query-file", samp.query_file,
                       "Responses to perturb, one per line");
  AddOutputFlags(samp_cmd, &run);

  CompareFlags cmp;
  CLI::App* cmp_cmd = app.add_subcommand(
      "compare", "Calibrated variance per mechanism and epsilon as CSV");
  cmp_cmd->add_option("--eps", cmp.eps, "Comma-separated epsilon values")
      ->delimiter(',');
  cmp_cmd->add_option("--delta", cmp.delta)->required();
  cmp_cmd->add_option("--mechanisms", cmp.mechanisms)
      ->delimiter(',')
      ->check(CLI::IsMember(kMechanismNames));
  cmp_cmd->add_option("--method", cmp.method, "fh accountant for k > 1")
      ->check(CLI::IsMember({"sufficient", "numeric"}));
  AddSensitivityFlags(cmp_cmd, &cmp.sens);
  AddRegionFlags(cmp_cmd, &cmp.region);
  AddOutputFlags(cmp_cmd, &run);

  DpcdFlags dp;
  CLI::App* dp_cmd = app.add_subcommand(
      "dpcd", "Private proximal coordinate descent on a dataset");
  dp_cmd->add_option("--data", dp.data, "CSV with header; last column label");
  dp_cmd->add_option("--synthetic", dp.synthetic)
      ->check(CLI::IsMember({"linear", "logistic"}));
  dp_cmd->add_option("--n", dp.n, "Synthetic rows");
  dp_cmd->add_option("--k", dp.k, "Synthetic features");
  dp_cmd->add_option("--noise-sd", dp.noise_sd, "Synthetic label noise");
  dp_cmd->add_option("--data-seed", dp.data_seed);
  dp_cmd->add_option("--delimiter", dp.delimiter);
  dp_cmd->add_option("--positive-label", dp.positive_label,
                     "Label token mapped to +1, others to -1");
  dp_cmd->add_option("--loss", dp.loss)
      ->check(CLI::IsMember({"least_squares", "logistic"}));
  dp_cmd->add_option("--reg", dp.reg)->check(CLI::IsMember({"l1", "l2"}));
  dp_cmd->add_option("--strength", dp.strength);
  dp_cmd->add_option("--eps", dp.eps);
  dp_cmd->add_option("--delta", dp.delta);
  dp_cmd->add_option("--mechanism", dp.mechanism)
      ->check(CLI::IsMember({"fh", "gaussian"}));
  dp_cmd->add_option("--conversion", dp.conversion)
      ->check(CLI::IsMember({"standard", "optimized"}));
  dp_cmd->add_option("--seed", dp.seed);
  dp_cmd->add_option("--batches", dp.batches);
  dp_cmd->add_option("--step", dp.step);
  dp_cmd->add_option("--clip", dp.clip);
  dp_cmd->add_option("--train-fraction", dp.train_fraction);
  dp_cmd->add_flag("--noise-free", dp.noise_free, "Run without privacy noise");
  dp_cmd->add_flag("--grid", dp.grid,
                   "Tune batches, step and clip over the default grid");
  dp_cmd->add_option("--tune-seeds", dp.tune_seeds,
                     "Consecutive seeds averaged per grid point");
  AddOutputFlags(dp_cmd, &run);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  WorkerGuard guard;
  SetDefaultWorkers(workers);
  run.workers = workers;
  const CLI::App* sub = app.get_subcommands().front();
  run.sub = sub;
  run.command = sub->get_name();
  if (sub == cal_cmd) return RunCalibrate(run, cal);
  if (sub == prof_cmd) return RunProfile(run, prof);
  if (sub == samp_cmd) return RunSample(run, samp, n_opt->count() > 0);
  if (sub == cmp_cmd) return RunCompare(run, cmp);
  return RunDpcd(run, dp);
}

}  // namespace fhdp::cli
