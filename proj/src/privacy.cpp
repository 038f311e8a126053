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

#include "dpclip/privacy.hpp"

#include <cmath>
#include <string>

namespace dpclip {

void PrivacyBudget::validate() const {
  if (!(epsilon > 0.0)) {
    throw DomainError("privacy budget: epsilon must be positive, got " +
                      std::to_string(epsilon));
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw DomainError("privacy budget: delta must lie in (0, 1), got " +
                      std::to_string(delta));
  }
  if (!(nu > 0.0)) {
    throw DomainError("privacy budget: nu must be positive");
  }
}

Phi compute_phi(std::size_t n, Index d, const PrivacyBudget& budget) {
  budget.validate();
  if (n == 0 || d < 1) {
    throw DomainError("compute_phi: n and d must be at least 1");
  }
  const double log_inv_delta = -std::log(budget.delta);
  Phi phi;
  phi.value = std::sqrt(budget.nu * static_cast<double>(d) * log_inv_delta) /
              (static_cast<double>(n) * budget.epsilon);
  phi.warning = phi.value >= 1.0;
  return phi;
}

NoiseSpec noise_variance(std::size_t T, double tau, std::size_t n, Index d,
                         const PrivacyBudget& budget) {
  budget.validate();
  if (T == 0 || n == 0 || d < 1) {
    throw DomainError("noise_variance: T, n and d must be at least 1");
  }
  if (!(tau >= 0.0)) {
    throw DomainError("noise_variance: tau must be nonnegative");
  }
  const double nn = static_cast<double>(n);
  NoiseSpec spec;
  spec.dimension = d;
  spec.sigma_sq = budget.nu * static_cast<double>(T) * -std::log(budget.delta) *
                  tau * tau / (nn * nn * budget.epsilon * budget.epsilon);
  return spec;
}

bool accountant_regime_ok(double epsilon, double b, std::size_t n,
                          std::size_t T) {
  const double nn = static_cast<double>(n);
  return epsilon < b * b * static_cast<double>(T) / (nn * nn);
}

Vector gaussian_noise(const NoiseSpec& spec, Rng& rng) {
  if (spec.sigma_sq < 0.0) {
    throw DomainError("gaussian_noise: negative variance");
  }
  Vector out = Vector::Zero(spec.dimension);
  if (spec.sigma_sq == 0.0) return out;
  std::normal_distribution<double> normal(0.0, std::sqrt(spec.sigma_sq));
  for (Index j = 0; j < spec.dimension; ++j) out[j] = normal(rng);
  return out;
}

double laplace_sample(double scale, Rng& rng) {
  // u in (-1/2, 1/2); the open lower end keeps log(1 - 2|u|) finite.
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  double u = uniform(rng) - 0.5;
  while (u == -0.5) u = uniform(rng) - 0.5;
  const double sign = u < 0.0 ? -1.0 : 1.0;
  return -scale * sign * std::log1p(-2.0 * std::abs(u));
}

std::size_t report_noisy_max(std::span<const double> scores, double epsilon,
                             double sensitivity, Rng& rng) {
  if (scores.empty()) {
    throw std::invalid_argument("report_noisy_max: empty score vector");
  }
  if (!(epsilon > 0.0)) {
    throw DomainError("report_noisy_max: epsilon must be positive");
  }
  if (!(sensitivity > 0.0)) {
    throw DomainError("report_noisy_max: sensitivity must be positive");
  }
  const bool exact = std::isinf(epsilon);
  const double scale = 2.0 * sensitivity / epsilon;
  std::size_t best = 0;
  double best_value = -kInfinity;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const double noisy = exact ? scores[i] : scores[i] + laplace_sample(scale, rng);
    if (i == 0 || noisy > best_value) {
      best = i;
      best_value = noisy;
    }
  }
  return best;
}

}  // namespace dpclip
