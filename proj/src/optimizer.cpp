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

#include "dpclip/optimizer.hpp"

#include <cmath>
#include <stdexcept>

#include "dpclip/clipping.hpp"
#include "dpclip/privacy.hpp"

namespace dpclip {

void DpSgdConfig::validate(std::size_t n) const {
  if (T == 0) throw DomainError("dp-sgd: T must be at least 1");
  if (!(eta >= 0.0)) throw DomainError("dp-sgd: step size must be nonnegative");
  if (!(tau > 0.0)) throw DomainError("dp-sgd: clip norm must be positive");
  if (!(b > 0.0)) throw DomainError("dp-sgd: batch size must be positive");
  if (b > static_cast<double>(n)) {
    throw DomainError("dp-sgd: expected batch size exceeds n");
  }
  if (!(sigma_sq >= 0.0)) throw DomainError("dp-sgd: negative noise variance");
}

std::vector<std::size_t> poisson_sample(std::size_t n, double b, Rng& rng) {
  if (!(b > 0.0) || b > static_cast<double>(n)) {
    throw DomainError("poisson_sample: need 0 < b <= n");
  }
  std::vector<std::size_t> out;
  const double q = b / static_cast<double>(n);
  if (q >= 1.0) {
    out.resize(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = i;
    return out;
  }
  // The gap to the next included index is Geometric(q).
  std::geometric_distribution<std::size_t> gap(q);
  out.reserve(static_cast<std::size_t>(b * 1.5) + 8);
  std::size_t i = gap(rng);
  while (i < n) {
    out.push_back(i);
    const std::size_t step = gap(rng);
    if (step >= n - i) break;
    i += step + 1;
  }
  return out;
}

Vector dp_sgd_step(const Vector& w, const Problem& problem,
                   const DpSgdConfig& config, Rng& rng) {
  if (w.size() != problem.dimension()) {
    throw DimensionError("dp_sgd_step: iterate dimension mismatch");
  }
  const auto batch = poisson_sample(problem.num_samples(), config.b, rng);
  Vector sum = Vector::Zero(w.size());
  for (std::size_t i : batch) sum += clip(problem.grad(w, i), config.tau);
  Vector g = sum / config.b;
  if (config.sigma_sq > 0.0) {
    g += gaussian_noise(NoiseSpec{config.sigma_sq, w.size()}, rng);
  }
  return project(config.domain, w - config.eta * g);
}

RunResult run_dp_sgd(const Problem& problem, const DpSgdConfig& config) {
  config.validate(problem.num_samples());
  if (config.w0.size() != problem.dimension()) {
    throw DimensionError("run_dp_sgd: w0 dimension mismatch");
  }
  Rng rng = make_rng(config.seed, 0);
  Rng pick = make_rng(config.seed, 1);
  std::uniform_int_distribution<std::size_t> uniform_t(0, config.T - 1);

  RunResult result;
  result.selected_t = uniform_t(pick);
  if (config.record_trajectory) result.trajectory.reserve(config.T);

  Vector w = config.w0;
  for (std::size_t t = 0; t < config.T; ++t) {
    if (t == result.selected_t) result.w_priv = w;
    if (config.record_trajectory) {
      result.trajectory.push_back(
          {problem.objective(w), problem.full_gradient(w).norm()});
    }
    w = dp_sgd_step(w, problem, config, rng);
  }
  result.w_final = std::move(w);
  return result;
}

namespace {

void check_phi(double phi) {
  if (!(phi > 0.0 && phi < 1.0)) {
    throw DomainError("schedule: phi must lie in (0, 1)");
  }
}

// gamma == 1 is accepted as a non-private-analysis sentinel.
void check_gamma(double gamma) {
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw DomainError("schedule: gamma must lie in (0, 1]");
  }
}

void check_k(double k) {
  if (!(k > 1.0)) throw DomainError("schedule: moment order k must exceed 1");
}

// x^(1/k), with the k = infinity limit.
double inv_k_power(double x, double k) {
  return std::isinf(k) ? 1.0 : std::pow(x, 1.0 / k);
}

double horizon_term(std::size_t T, double phi) {
  if (T == 0) throw DomainError("schedule: T must be at least 1");
  return 1.0 / static_cast<double>(T) + phi * phi;
}

}  // namespace

StepSchedule schedule_interpolation(double C, double phi, double tau) {
  check_phi(phi);
  if (!(C > 0.0) || !(tau > 0.0)) {
    throw DomainError("schedule_interpolation: C and tau must be positive");
  }
  StepSchedule s;
  s.T = static_cast<std::size_t>(std::ceil(1.0 / (3.0 * phi * phi)));
  s.eta = 3.0 * C * phi / (2.0 * tau);
  return s;
}

ClipSchedule schedule_constrained_convex(double G, double gamma, double D_W,
                                         std::size_t T, double phi, double k) {
  check_phi(phi);
  check_gamma(gamma);
  check_k(k);
  if (!(G > 0.0) || !(D_W > 0.0)) {
    throw DomainError("schedule_constrained_convex: G and D_W must be positive");
  }
  const double h = horizon_term(T, phi);
  ClipSchedule s;
  s.tau = G / inv_k_power(gamma, k) * inv_k_power(h, -2.0 * k);
  s.eta = D_W / (static_cast<double>(T) * s.tau) / std::sqrt(h);
  s.gamma_sentinel = gamma == 1.0;
  return s;
}

ClipSchedule schedule_unconstrained_convex(double G, double gamma, double C,
                                           std::size_t T, double phi, double k) {
  check_phi(phi);
  check_gamma(gamma);
  check_k(k);
  if (!(G > 0.0) || !(C > 0.0)) {
    throw DomainError("schedule_unconstrained_convex: G and C must be positive");
  }
  const double h = horizon_term(T, phi);
  ClipSchedule s;
  s.tau = G / inv_k_power(gamma, k) * inv_k_power(h, -(k + 1.0));
  s.eta = C / (static_cast<double>(T) * s.tau) / std::sqrt(h);
  s.gamma_sentinel = gamma == 1.0;
  return s;
}

ClipSchedule schedule_sharp_convex(double G, double C, std::size_t T,
                                   double phi, double k) {
  check_phi(phi);
  check_k(k);
  if (!(G > 0.0) || !(C > 0.0)) {
    throw DomainError("schedule_sharp_convex: G and C must be positive");
  }
  const auto min_T = static_cast<std::size_t>(std::ceil(1.0 / (phi * phi)));
  if (T < min_T) {
    throw DomainError("schedule_sharp_convex: T must be at least ceil(1/phi^2) = " +
                      std::to_string(min_T));
  }
  const double h = horizon_term(T, phi);
  ClipSchedule s;
  s.tau = G * inv_k_power(h, -2.0 * k);
  s.eta = C / (static_cast<double>(T) * s.tau) / std::sqrt(h);
  return s;
}

ClipSchedule schedule_nonconvex(double G, double gamma, double C, double L,
                                std::size_t T, double phi, double k) {
  check_phi(phi);
  check_gamma(gamma);
  check_k(k);
  if (!(G > 0.0) || !(C > 0.0) || !(L > 0.0)) {
    throw DomainError("schedule_nonconvex: G, C and L must be positive");
  }
  const double h = horizon_term(T, phi);
  const double root_l = std::sqrt(L);
  // Exponents 1/(2k-1) and -1/(2(2k-1)) both vanish as k -> infinity.
  const double e = std::isinf(k) ? 0.0 : 1.0 / (2.0 * k - 1.0);
  ClipSchedule s;
  s.tau = G * std::pow(G / (gamma * gamma * C * root_l), e) * std::pow(h, -0.5 * e);
  s.eta = C / (static_cast<double>(T) * s.tau * root_l) / std::sqrt(h);
  s.gamma_sentinel = gamma == 1.0;
  return s;
}

double optimization_risk(const Problem& problem,
                         const std::vector<RunResult>& results,
                         const RiskKind& kind) {
  if (results.empty()) {
    throw std::invalid_argument("optimization_risk: no runs");
  }
  double acc = 0.0;
  for (const RunResult& r : results) {
    if (const auto* convex = std::get_if<ConvexRisk>(&kind)) {
      acc += problem.objective(r.w_priv) - convex->f_star;
    } else {
      acc += problem.full_gradient(r.w_priv).squaredNorm();
    }
  }
  return acc / static_cast<double>(results.size());
}

SolverResult minimize_nonprivate(const Problem& problem, const Vector& w0,
                                 const SolverOptions& options) {
  if (w0.size() != problem.dimension()) {
    throw DimensionError("minimize_nonprivate: w0 dimension mismatch");
  }
  if (options.diminishing && options.accelerated) {
    throw std::invalid_argument(
        "minimize_nonprivate: diminishing and accelerated are exclusive");
  }
  SolverResult best{project(problem.domain(), w0), 0.0};
  best.value = problem.objective(best.w);
  Vector w = best.w;
  Vector w_prev = w;
  for (std::size_t t = 0; t < options.iterations; ++t) {
    const double step = options.diminishing
                            ? options.step / std::sqrt(static_cast<double>(t) + 1.0)
                            : options.step;
    if (options.accelerated) {
      const double momentum = static_cast<double>(t) / (static_cast<double>(t) + 3.0);
      const Vector y = w + momentum * (w - w_prev);
      w_prev = w;
      w = project(problem.domain(), y - step * problem.full_gradient(y));
    } else {
      w = project(problem.domain(), w - step * problem.full_gradient(w));
    }
    if (options.diminishing) {
      const double value = problem.objective(w);
      if (value < best.value) best = {w, value};
    }
  }
  if (!options.diminishing) {
    const double value = problem.objective(w);
    if (value < best.value) best = {w, value};
  }
  return best;
}

}  // namespace dpclip
