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

#ifndef DPCLIP_OPTIMIZER_HPP_
#define DPCLIP_OPTIMIZER_HPP_

#include <cstddef>
#include <cstdint>
#include <variant>
#include <vector>

#include "dpclip/problem.hpp"

namespace dpclip {

// Inputs of one DP-SGD run with a constant step size.
struct DpSgdConfig {
  std::size_t T = 1;
  double eta = 0.1;
  double tau = 1.0;
  // Expected batch size; every sample is included with probability b / n and
  // the clipped-gradient sum is always divided by b.
  double b = 1.0;
  double sigma_sq = 0.0;
  Domain domain = Unconstrained{};
  std::uint64_t seed = 0;
  Vector w0;
  // Record f(w_t) and ||grad f(w_t)|| for every iterate (costs two passes
  // over the data per step).
  bool record_trajectory = false;

  // Throws DomainError on T == 0, non-positive eta/tau/b, negative
  // sigma_sq, or b > n.
  void validate(std::size_t n) const;
};

struct TrajectoryPoint {
  double objective = 0.0;
  double grad_norm = 0.0;
};

struct RunResult {
  // w_t for the uniformly drawn t in {0, ..., T-1}.
  Vector w_priv;
  std::size_t selected_t = 0;
  // The last computed iterate w_T.
  Vector w_final;
  // Iterates w_0 .. w_{T-1} when requested.
  std::vector<TrajectoryPoint> trajectory;
};

// Poisson subsampling: each of 0..n-1 independently with probability b / n,
// returned in increasing order. Uses geometric gaps so the cost is O(b).
std::vector<std::size_t> poisson_sample(std::size_t n, double b, Rng& rng);

// One iteration: draw S, form g = (1/b) sum_{i in S} clip(grad f_i(w), tau)
// plus N(0, sigma_sq I), and return Proj(w - eta * g).
Vector dp_sgd_step(const Vector& w, const Problem& problem,
                   const DpSgdConfig& config, Rng& rng);

// T steps from w0. The returned iterate index is drawn from its own stream
// so it does not perturb the sampling and noise sequence. Deterministic in
// config.seed.
RunResult run_dp_sgd(const Problem& problem, const DpSgdConfig& config);

// ---------------------------------------------------------------------------
// Hyperparameter schedules. T values are rounded up to integers.
// ---------------------------------------------------------------------------

struct StepSchedule {
  std::size_t T = 0;
  double eta = 0.0;
};

struct ClipSchedule {
  double tau = 0.0;
  double eta = 0.0;
  // Set when gamma == 1 was passed; the guarantees need gamma < 1.
  bool gamma_sentinel = false;
};

// Interpolation regime: T = ceil(1 / (3 phi^2)), eta = 3 C phi / (2 tau).
// Throws DomainError unless 0 < phi < 1 and C, tau > 0.
StepSchedule schedule_interpolation(double C, double phi, double tau);

// Bounded domain of diameter D_W, k-th moment bound G:
//   tau = G gamma^(-1/k) (1/T + phi^2)^(-1/(2k)),
//   eta = D_W / (T tau) (1/T + phi^2)^(-1/2).
// k may be kInfinity.
ClipSchedule schedule_constrained_convex(double G, double gamma, double D_W,
                                         std::size_t T, double phi, double k);

//   tau = G gamma^(-1/k) (1/T + phi^2)^(-1/(k+1)),
//   eta = C / (T tau) (1/T + phi^2)^(-1/2).
ClipSchedule schedule_unconstrained_convex(double G, double gamma, double C,
                                           std::size_t T, double phi, double k);

// Sharp objectives: tau = G (1/T + phi^2)^(-1/(2k)) with the eta above.
// Throws DomainError when T < ceil(1 / phi^2).
ClipSchedule schedule_sharp_convex(double G, double C, std::size_t T,
                                   double phi, double k);

// Smooth nonconvex objectives with smoothness L:
//   tau = G (G / (gamma^2 C sqrt(L)))^(1/(2k-1)) (1/T + phi^2)^(-1/(2(2k-1))),
//   eta = C / (T tau sqrt(L)) (1/T + phi^2)^(-1/2).
ClipSchedule schedule_nonconvex(double G, double gamma, double C, double L,
                                std::size_t T, double phi, double k);

// ---------------------------------------------------------------------------
// Risk and reference solutions.
// ---------------------------------------------------------------------------

struct ConvexRisk {
  double f_star = 0.0;
};
struct NonconvexRisk {};
using RiskKind = std::variant<ConvexRisk, NonconvexRisk>;

// Convex: mean of f(w_priv) - f_star. Nonconvex: mean of ||grad f(w_priv)||^2.
// Throws std::invalid_argument on an empty result list.
double optimization_risk(const Problem& problem,
                         const std::vector<RunResult>& results,
                         const RiskKind& kind);

struct SolverOptions {
  std::size_t iterations = 1000;
  double step = 0.1;
  // Use step / sqrt(t + 1) and keep the best iterate (for nonsmooth losses).
  bool diminishing = false;
  // Nesterov momentum with a constant step (for smooth losses; step <= 1/L).
  bool accelerated = false;
};

struct SolverResult {
  Vector w;
  double value = 0.0;
};

// Non-private full-batch projected (sub)gradient descent; the reference
// optimum for risk computations.
SolverResult minimize_nonprivate(const Problem& problem, const Vector& w0,
                                 const SolverOptions& options);

}  // namespace dpclip

#endif  // DPCLIP_OPTIMIZER_HPP_
