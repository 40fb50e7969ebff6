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

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/strings/str_format.h"
#include "fhdp/parallel.h"
#include "fhdp/rng.h"
#include "fhdp/specfun.h"

namespace fhdp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTwoOverSqrtPi = 1.12837916709551257390;
constexpr size_t kSampleBlock = 1 << 16;

// x cosh x - sinh x = sum_{k>=1} 2k x^(2k+1) / (2k+1)!, for small x.
double XCoshMinusSinh(double x) {
  const double x2 = x * x;
  double power = x;  // x^(2k+1) / (2k+1)!
  double sum = 0.0;
  for (int k = 1; k < 40; ++k) {
    power *= x2 / ((2 * k) * (2 * k + 1));
    const double term = 2 * k * power;
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return sum;
}

// (exp(-y) - 1 + y) / 2 without cancellation.
double HalfExpRemainder(double y) {
  if (y > 0.1) return 0.5 * (std::expm1(-y) + y);
  double term = -0.5 * y;  // (-1)^k y^k / (2 k!) at k = 1
  double sum = 0.0;
  for (int k = 2; k < 30; ++k) {
    term *= -y / k;
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

double LogAddExp(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

}  // namespace

absl::Status ValidateParams(const FHParams& params) {
  if (!(params.alpha >= 0.0) || !std::isfinite(params.alpha)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("alpha must be finite and >= 0, got %g", params.alpha));
  }
  if (!(params.gamma > 0.0) || !std::isfinite(params.gamma)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("gamma must be finite and > 0, got %g", params.gamma));
  }
  if (!std::isfinite(params.alpha / params.gamma)) {
    return absl::InvalidArgumentError("alpha/gamma overflows");
  }
  return absl::OkStatus();
}

double FlippedHuberLoss(double t, double alpha) {
  const double at = std::abs(t);
  if (at <= alpha) return alpha * at;
  return 0.5 * (t * t + alpha * alpha);
}

double FlippedHuberLossDerivative(double t, double alpha) {
  if (std::abs(t) <= alpha) return t == 0.0 ? 0.0 : std::copysign(alpha, t);
  return t;
}

double ScaledOmega(double b) {
  if (b <= 0.0) return kSqrt2Pi;
  return 2.0 * (kSqrt2Pi * StdNormalSf(b) * std::exp(-0.5 * b * b) -
                std::expm1(-b * b) / b);
}

double LogOmega(double b) { return std::log(ScaledOmega(b)) + 0.5 * b * b; }

double Omega(double b) { return std::exp(LogOmega(b)); }

absl::StatusOr<FHDistribution> FHDistribution::Create(const FHParams& params) {
  if (absl::Status s = ValidateParams(params); !s.ok()) return s;
  return FHDistribution(params);
}

FHDistribution::FHDistribution(const FHParams& params) : params_(params) {
  const double gamma = params.gamma;
  b_ = params.alpha / gamma;
  gaussian_ = b_ < kGaussianLimitB;
  if (gaussian_) {
    b_ = 0.0;
    scaled_omega_ = kSqrt2Pi;
    log_omega_ = kLogSqrt2Pi;
    log_r_ = 0.0;
    tail_mass_ = 0.5;
    log_tail_mass_ = -M_LN2;
    laplace_coef_ = 0.0;
    theta_ = 0.0;
  } else {
    scaled_omega_ = ScaledOmega(b_);
    log_omega_ = std::log(scaled_omega_) + 0.5 * b_ * b_;
    log_r_ = kLogSqrt2Pi - log_omega_;
    log_tail_mass_ = log_r_ + LogStdNormalSf(b_);
    tail_mass_ = std::exp(log_tail_mass_);
    laplace_coef_ = 1.0 / (b_ * scaled_omega_);
    theta_ = std::max(0.0, gamma * StdNormalSfInvFromLog(log_r_ - M_LN2));
  }
  kappa_ = gamma * scaled_omega_;
  log_kappa_ = std::log(gamma) + std::log(scaled_omega_);
}

double FHDistribution::omega() const { return std::exp(log_omega_); }

double FHDistribution::LogPdf(double t) const {
  const double alpha = gaussian_ ? 0.0 : params_.alpha;
  const double g2 = params_.gamma * params_.gamma;
  return -FlippedHuberLoss(t, alpha) / g2 - log_kappa_;
}

double FHDistribution::Pdf(double t) const { return std::exp(LogPdf(t)); }

double FHDistribution::UpperTail(double t) const {
  const double u = t / params_.gamma;
  if (gaussian_) return StdNormalSf(u);
  if (u > b_) return std::exp(log_r_ + LogStdNormalSf(u));
  return tail_mass_ + laplace_coef_ * (std::exp(-b_ * u) - std::exp(-b_ * b_));
}

double FHDistribution::LogUpperTail(double t) const {
  const double u = t / params_.gamma;
  if (gaussian_) return LogStdNormalSf(u);
  if (u > b_) return log_r_ + LogStdNormalSf(u);
  if (u == b_) return log_tail_mass_;
  const double laplace_part =
      std::log(laplace_coef_) - b_ * u + std::log(-std::expm1(-b_ * (b_ - u)));
  return LogAddExp(log_tail_mass_, laplace_part);
}

double FHDistribution::Survival(double t) const {
  if (t >= 0.0) return UpperTail(t);
  return 1.0 - UpperTail(-t);
}

double FHDistribution::LogSurvival(double t) const {
  if (t >= 0.0) return LogUpperTail(t);
  return std::log1p(-UpperTail(-t));
}

double FHDistribution::Cdf(double t) const { return Survival(-t); }

absl::StatusOr<double> FHDistribution::Quantile(double u) const {
  if (!(u > 0.0 && u < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("quantile: u = %g is outside (0, 1)", u));
  }
  return QuantileUnchecked(u);
}

double FHDistribution::QuantileUnchecked(double u) const {
  if (u == 0.5) return 0.0;
  const double v = std::min(u, 1.0 - u);
  const double sign = u < 0.5 ? -1.0 : 1.0;
  const double gamma = params_.gamma;
  double m;
  if (gaussian_) {
    m = gamma * StdNormalSfInvFromLog(std::log(v));
  } else if (v >= tail_mass_) {
    const double arg =
        std::exp(-b_ * b_) + b_ * scaled_omega_ * (v - tail_mass_);
    m = -(gamma / b_) * std::log(arg);
  } else {
    m = gamma * StdNormalSfInvFromLog(std::log(v) - log_r_);
  }
  return sign * std::max(0.0, m);
}

std::vector<double> FHDistribution::Sample(size_t n, uint64_t seed,
                                           uint64_t stream) const {
  std::vector<double> out(n);
  SampleInto(out, seed, stream);
  return out;
}

void FHDistribution::SampleInto(std::span<double> out, uint64_t seed,
                                uint64_t stream, uint64_t first_index) const {
  const CounterRng rng(seed, stream);
  const size_t n = out.size();
  const size_t blocks = (n + kSampleBlock - 1) / kSampleBlock;
  ParallelFor(blocks, [&](size_t blk) {
    const size_t lo = blk * kSampleBlock;
    const size_t hi = std::min(n, lo + kSampleBlock);
    for (size_t i = lo; i < hi; ++i) {
      out[i] = QuantileUnchecked(rng.Uniform(first_index + i));
    }
  });
}

double FHDistribution::Variance() const {
  const double g2 = params_.gamma * params_.gamma;
  if (gaussian_) return g2;
  const double b = b_;
  if (b < 1.0) {
    const double f = XCoshMinusSinh(0.5 * b * b);
    return g2 * (1.0 - 8.0 * f / (b * b * b * omega()));
  }
  const double bracket = kSqrt2Pi * StdNormalSf(b) * std::exp(-0.5 * b * b) -
                         2.0 / (b * b * b) * std::expm1(-b * b) -
                         2.0 / b * std::exp(-b * b);
  return 2.0 * g2 / scaled_omega_ * bracket;
}

double FHDistribution::FisherInformation() const {
  const double g2 = params_.gamma * params_.gamma;
  if (gaussian_) return 1.0 / g2;
  const double g = HalfExpRemainder(b_ * b_);
  return (1.0 + 4.0 * g / (b_ * scaled_omega_)) / g2;
}

double FHDistribution::ScaledMgf(double s) const {
  const double gs = params_.gamma * s;
  const double gauss = std::exp(-0.5 * gs * gs);
  double total = 0.0;
  for (const double m : {b_ + gs, b_ - gs}) {
    // Laplace part: exp(-gs^2/2) (1 - exp(-b m)) / m. The exponent
    // -b m - gs^2/2 equals -(m^2 + b^2)/2, so the second form never
    // overflows.
    double laplace;
    if (m == 0.0) {
      laplace = gauss * b_;
    } else if (b_ * m > -50.0) {
      laplace = gauss * -std::expm1(-b_ * m) / m;
    } else {
      laplace = (gauss - std::exp(-0.5 * (m * m + b_ * b_))) / m;
    }
    const double tail = kSqrt2Pi * std::exp(-0.5 * b_ * b_ + LogStdNormalSf(m));
    total += (laplace + tail) / scaled_omega_;
  }
  return total;
}

absl::StatusOr<double> FHDistribution::Mgf(double s) const {
  if (!std::isfinite(s)) return absl::InvalidArgumentError("mgf: s not finite");
  const double gs = params_.gamma * s;
  const double gauss = std::exp(0.5 * gs * gs);
  const double value = gaussian_ ? gauss : ScaledMgf(s) * gauss;
  if (!std::isfinite(value)) {
    return absl::OutOfRangeError(absl::StrFormat("mgf overflows at s = %g", s));
  }
  return value;
}

std::vector<double> FHDistribution::SubGaussianMargin(
    std::span<const double> s_grid) const {
  std::vector<double> out;
  out.reserve(s_grid.size());
  for (const double s : s_grid) {
    if (gaussian_) {
      out.push_back(0.0);
      continue;
    }
    const double gs = params_.gamma * s;
    out.push_back(std::exp(0.5 * gs * gs) * (1.0 - ScaledMgf(s)));
  }
  return out;
}

absl::StatusOr<double> FHDistribution::OrliczFactor(double s) const {
  if (!(s > 0.0 && s < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("Orlicz factor: s = %g is outside (0, 1)", s));
  }
  if (gaussian_) return 1.0;
  const double b = b_;
  // erfi(z) = (2/sqrt(pi)) exp(z^2) D(z); the exp(z^2) factors combine with
  // the exp(-(1/s - 1) b^2/2) prefactor and 1/omega into bounded terms.
  const double z1 = b / std::sqrt(2.0 * s);
  const double z2 = (1.0 - s) * z1;
  const double dawson_part =
      Dawson(z1) - Dawson(z2) * std::exp(-0.5 * b * b * (2.0 - s));
  const double first = kSqrt2Pi / scaled_omega_ * std::sqrt(1.0 / s - 1.0) *
                       kTwoOverSqrtPi * dawson_part;
  const double second =
      2.0 * std::exp(log_r_ + LogStdNormalSf(std::sqrt(1.0 - s) * b));
  return first + second;
}

}  // namespace fhdp
