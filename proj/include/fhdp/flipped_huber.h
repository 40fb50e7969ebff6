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

// The flipped Huber distribution FH(alpha, gamma^2), with density
// proportional to exp(-rho_alpha(t) / gamma^2), where the loss rho_alpha is
// alpha|t| inside [-alpha, alpha] and (t^2 + alpha^2)/2 outside. alpha = 0 is
// the Gaussian N(0, gamma^2).
//
// Most quantities depend on alpha and gamma through b = alpha / gamma. For
// large b the normalizer omega grows like exp(b^2/2), so the class stores the
// scaled value omega * exp(-b^2/2) and works in log space where needed.

#ifndef FHDP_FLIPPED_HUBER_H_
#define FHDP_FLIPPED_HUBER_H_

#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace fhdp {

struct FHParams {
  double alpha = 0.0;
  double gamma = 1.0;
};

absl::Status ValidateParams(const FHParams& params);

// Below this value of alpha/gamma the distribution is treated as Gaussian.
inline constexpr double kGaussianLimitB = 1e-6;

double FlippedHuberLoss(double t, double alpha);

// Derivative of the loss, with 0 at t = 0.
double FlippedHuberLossDerivative(double t, double alpha);

// omega * exp(-b^2/2), finite for every b >= 0.
double ScaledOmega(double b);
double LogOmega(double b);
// omega itself; +inf once it leaves the double range (b > ~37.7).
double Omega(double b);

class FHDistribution {
 public:
  static absl::StatusOr<FHDistribution> Create(const FHParams& params);

  const FHParams& params() const { return params_; }
  double alpha() const { return params_.alpha; }
  double gamma() const { return params_.gamma; }
  double b() const { return b_; }
  bool is_gaussian() const { return gaussian_; }

  double omega() const;
  double log_omega() const { return log_omega_; }
  double scaled_omega() const { return scaled_omega_; }
  // Normalizer kappa = gamma * omega * exp(-b^2/2).
  double kappa() const { return kappa_; }
  // Mean of the Gaussian N(theta, gamma^2) that stochastically dominates the
  // distribution restricted to the positive half line.
  double theta() const { return theta_; }
  // P(T > alpha).
  double tail_mass() const { return tail_mass_; }
  // log(sqrt(2 pi) / omega), the log of the Gaussian tail weight.
  double log_r() const { return log_r_; }
  // Weight of the Laplace part, gamma exp(b^2/2) / (alpha omega). Zero in
  // Gaussian mode.
  double laplace_coef() const { return laplace_coef_; }

  double Pdf(double t) const;
  double LogPdf(double t) const;
  double Cdf(double t) const;
  double Survival(double t) const;
  double LogSurvival(double t) const;

  absl::StatusOr<double> Quantile(double u) const;
  // Quantile without the domain check; u must lie in (0, 1).
  double QuantileUnchecked(double u) const;

  // n draws by inverse transform of Philox uniforms with the given seed.
  // Draw i uses counter i, so the output does not depend on threading.
  std::vector<double> Sample(size_t n, uint64_t seed,
                             uint64_t stream = 0) const;
  void SampleInto(std::span<double> out, uint64_t seed, uint64_t stream = 0,
                  uint64_t first_index = 0) const;

  double Variance() const;
  double FisherInformation() const;
  double NormalizedFisherInformation() const {
    return FisherInformation() * Variance();
  }

  absl::StatusOr<double> Mgf(double s) const;
  // exp(gamma^2 s^2 / 2) - M(s) per grid point.
  std::vector<double> SubGaussianMargin(std::span<const double> s_grid) const;
  // E[exp(s T^2 / 2 gamma^2)] * sqrt(1 - s) for s in (0, 1), computed with
  // erfi. A value <= 1 is equivalent to sub-Gaussianity with proxy gamma^2.
  absl::StatusOr<double> OrliczFactor(double s) const;

 private:
  explicit FHDistribution(const FHParams& params);

  // Survival for t >= 0.
  double UpperTail(double t) const;
  double LogUpperTail(double t) const;
  // Mgf(s) * exp(-gamma^2 s^2 / 2).
  double ScaledMgf(double s) const;

  FHParams params_;
  bool gaussian_ = true;
  double b_ = 0.0;
  double scaled_omega_ = 0.0;
  double log_omega_ = 0.0;
  double kappa_ = 0.0;
  double log_kappa_ = 0.0;
  double log_r_ = 0.0;      // log(sqrt(2 pi) / omega)
  double tail_mass_ = 0.0;  // r * Q(b)
  double log_tail_mass_ = 0.0;
  double laplace_coef_ = 0.0;  // 1 / (b * scaled_omega)
  double theta_ = 0.0;
};

}  // namespace fhdp

#endif  // FHDP_FLIPPED_HUBER_H_
