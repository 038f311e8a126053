//
// Copyright 2026 The dpclip Authors.
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

#ifndef DPCLIP_PRIVACY_HPP_
#define DPCLIP_PRIVACY_HPP_

#include <cstddef>
#include <span>

#include "dpclip/common.hpp"

namespace dpclip {

// An (epsilon, delta) target together with the absolute constant nu of the
// moments-accountant noise calibration. nu defaults to 1.
struct PrivacyBudget {
  double epsilon = 1.0;
  double delta = 1e-5;
  double nu = 1.0;

  // Throws DomainError unless epsilon > 0, 0 < delta < 1 and nu > 0.
  void validate() const;
};

// Per-coordinate Gaussian noise for a d-dimensional gradient.
struct NoiseSpec {
  double sigma_sq = 0.0;
  Index dimension = 1;
};

struct Phi {
  double value = 0.0;
  // Set when phi >= 1; the risk bounds are only meaningful for phi < 1.
  bool warning = false;
};

// phi = sqrt(nu * d * ln(1/delta)) / (n * epsilon).
Phi compute_phi(std::size_t n, Index d, const PrivacyBudget& budget);

// Noise variance making T steps of DP-SGD with clip norm tau
// (epsilon, delta)-DP: nu * T * ln(1/delta) * tau^2 / (n^2 * epsilon^2).
NoiseSpec noise_variance(std::size_t T, double tau, std::size_t n, Index d,
                         const PrivacyBudget& budget);

// The calibration above holds for epsilon below a multiple of b^2 T / n^2
// with an unspecified constant. Returns false when epsilon exceeds
// b^2 T / n^2 (constant taken as 1); callers surface this as a warning only.
bool accountant_regime_ok(double epsilon, double b, std::size_t n,
                          std::size_t T);

// i.i.d. N(0, sigma_sq) coordinates.
Vector gaussian_noise(const NoiseSpec& spec, Rng& rng);

// Laplace(0, scale) draw by inverse CDF.
double laplace_sample(double scale, Rng& rng);

// Report Noisy Max: adds Laplace(2 * sensitivity / epsilon) noise to each
// score and returns the index of the largest noisy score (first occurrence on
// ties). epsilon == kInfinity returns the exact argmax without touching rng.
std::size_t report_noisy_max(std::span<const double> scores, double epsilon,
                             double sensitivity, Rng& rng);

}  // namespace dpclip

#endif  // DPCLIP_PRIVACY_HPP_
