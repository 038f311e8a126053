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

#ifndef DPCLIP_LIPSCHITZ_HPP_
#define DPCLIP_LIPSCHITZ_HPP_

#include <cstddef>
#include <optional>
#include <vector>

#include "dpclip/problem.hpp"

namespace dpclip {

// Per-sample Lipschitz constants sorted ascending: g.front() = G_1 is the
// minimum, g.back() = G_n the maximum. Ties are kept (stable by index).
struct LipschitzProfile {
  std::vector<double> g;

  double min() const { return g.front(); }
  double max() const { return g.back(); }
  std::size_t size() const { return g.size(); }
};

// Throws DomainError if any G_i <= 0 or is not finite.
LipschitzProfile build_profile(const Problem& problem);

// Nearest-rank percentile: the ceil(q n / 100)-th order statistic, with q = 0
// mapped to G_1. Throws std::out_of_range unless 0 <= q <= 100.
double percentile(const LipschitzProfile& profile, double q);

// Delta(w*) = (1/n) sum_i (f_i(w*) - f_i^*). Throws std::invalid_argument if
// the problem does not expose f_i^*.
double interpolation_gap(const Problem& problem, const Vector& w_star);

// Sample points whose total suboptimality does not exceed this tolerance are
// treated as minimizers and skipped by alpha_estimate.
inline constexpr double kMinimizerTolerance = 1e-8;

// Ratio inside the infimum defining alpha(tau), evaluated at one point w:
//   [sum_i min(1/tau, 1/G_i) (f_i(w) - f_i^*)] / [sum_i (f_i(w) - f_i^*) / G_n].
// Returns std::nullopt when the denominator vanishes.
std::optional<double> alpha_ratio(const Problem& problem,
                                  const LipschitzProfile& profile, double tau,
                                  const Vector& w);

// Sampled upper bound on alpha(tau): the minimum of alpha_ratio over the
// supplied points that are not minimizers. A point is a minimizer when
// f(w) - f_star <= kMinimizerTolerance; without f_star the lower bound
// (1/n) sum_i f_i^* stands in for min f. Requires 0 < tau <= G_n.
// Throws std::invalid_argument on an empty sample list and std::runtime_error
// when every sample is a minimizer.
double alpha_estimate(const Problem& problem, const LipschitzProfile& profile,
                      double tau, const std::vector<Vector>& w_samples,
                      std::optional<double> f_star = std::nullopt);

struct PrivateMinimum {
  std::size_t index = 0;
  // min(G_index, clamp): the value the selection actually saw.
  double value = 0.0;
};

// Private estimate of G_1 by Report Noisy Max over the negated constants
// -min(G_i, clamp), with the clamp as the score sensitivity.
PrivateMinimum private_min_lipschitz(const Problem& problem, double epsilon,
                                     double clamp, Rng& rng);

}  // namespace dpclip

#endif  // DPCLIP_LIPSCHITZ_HPP_
