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

#include "dpclip/lipschitz.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dpclip/privacy.hpp"

namespace dpclip {

LipschitzProfile build_profile(const Problem& problem) {
  LipschitzProfile profile;
  profile.g.reserve(problem.num_samples());
  for (std::size_t i = 0; i < problem.num_samples(); ++i) {
    const double g = problem.lipschitz(i);
    if (!(g > 0.0) || !std::isfinite(g)) {
      throw DomainError("build_profile: per-sample Lipschitz constant of sample " +
                        std::to_string(i) + " is not positive and finite");
    }
    profile.g.push_back(g);
  }
  if (profile.g.empty()) throw DomainError("build_profile: empty problem");
  std::stable_sort(profile.g.begin(), profile.g.end());
  return profile;
}

double percentile(const LipschitzProfile& profile, double q) {
  if (!(q >= 0.0 && q <= 100.0)) {
    throw std::out_of_range("percentile: q must lie in [0, 100]");
  }
  const std::size_t n = profile.size();
  auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(n) / 100.0));
  rank = std::clamp<std::size_t>(rank, 1, n);
  return profile.g[rank - 1];
}

namespace {

std::vector<double> per_sample_gaps(const Problem& problem, const Vector& w) {
  std::vector<double> gaps(problem.num_samples());
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    const auto f_min = problem.min_loss(i);
    if (!f_min) {
      throw std::invalid_argument("per-sample minimum f_i^* is not available");
    }
    gaps[i] = std::max(problem.loss(w, i) - *f_min, 0.0);
  }
  return gaps;
}

}  // namespace

double interpolation_gap(const Problem& problem, const Vector& w_star) {
  const auto gaps = per_sample_gaps(problem, w_star);
  double acc = 0.0;
  for (double g : gaps) acc += g;
  return acc / static_cast<double>(gaps.size());
}

std::optional<double> alpha_ratio(const Problem& problem,
                                  const LipschitzProfile& profile, double tau,
                                  const Vector& w) {
  // Both sums are scaled by G_n so that tau = G_n gives weights of exactly 1
  // and tau <= G_1 gives exactly the weights G_n / G_i.
  const auto gaps = per_sample_gaps(problem, w);
  const double g_max = profile.max();
  const double tau_weight = g_max / tau;
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    num += std::min(tau_weight, g_max / problem.lipschitz(i)) * gaps[i];
    den += gaps[i];
  }
  if (!(den > 0.0)) return std::nullopt;
  return num / den;
}

double alpha_estimate(const Problem& problem, const LipschitzProfile& profile,
                      double tau, const std::vector<Vector>& w_samples,
                      std::optional<double> f_star) {
  if (w_samples.empty()) {
    throw std::invalid_argument("alpha_estimate: no sample points");
  }
  if (!(tau > 0.0 && tau <= profile.max())) {
    throw DomainError("alpha_estimate: tau must lie in (0, G_n]");
  }
  double best = kInfinity;
  for (const Vector& w : w_samples) {
    double excess = 0.0;
    if (f_star) {
      excess = problem.objective(w) - *f_star;
    } else {
      excess = interpolation_gap(problem, w);
    }
    if (excess <= kMinimizerTolerance) continue;
    const auto r = alpha_ratio(problem, profile, tau, w);
    if (r) best = std::min(best, *r);
  }
  if (std::isinf(best)) {
    throw std::runtime_error("alpha_estimate: every sample point is a minimizer");
  }
  return best;
}

PrivateMinimum private_min_lipschitz(const Problem& problem, double epsilon,
                                     double clamp, Rng& rng) {
  if (!(clamp > 0.0)) {
    throw DomainError("private_min_lipschitz: clamp bound must be positive");
  }
  std::vector<double> scores(problem.num_samples());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    scores[i] = -std::min(problem.lipschitz(i), clamp);
  }
  PrivateMinimum out;
  out.index = report_noisy_max(scores, epsilon, clamp, rng);
  out.value = -scores[out.index];
  return out;
}

}  // namespace dpclip
