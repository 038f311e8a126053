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

#include "dpclip/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <numeric>

#include "dpclip/clipping.hpp"
#include "dpclip/lipschitz.hpp"
#include "dpclip/losses.hpp"
#include "dpclip/optimizer.hpp"

namespace dpclip::harness {

namespace {

// Iteration cap for the non-private reference run that supplies f*.
constexpr std::size_t kMaxReferenceIterations = 20000;

// Stream ids for make_rng(master_seed, ...).
constexpr std::uint64_t kDataStream = 0x5eed;
constexpr std::uint64_t kRnmmStream = 0x7a11;

void require(bool ok, const std::string& message) {
  if (!ok) throw ValidationError(message);
}

double mean_of(const std::vector<double>& xs) {
  return std::accumulate(xs.begin(), xs.end(), 0.0) /
         static_cast<double>(xs.size());
}

// Sample standard deviation; 0 for fewer than two values.
double stddev_of(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean_of(xs);
  double acc = 0.0;
  for (double x : xs) acc += (x - m) * (x - m);
  return std::sqrt(acc / static_cast<double>(xs.size() - 1));
}

double median_of(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const std::size_t mid = xs.size() / 2;
  return xs.size() % 2 == 1 ? xs[mid] : 0.5 * (xs[mid - 1] + xs[mid]);
}

struct PreparedData {
  Dataset train;
  std::optional<Dataset> test;
};

PreparedData prepare_data(const ExperimentSpec& spec) {
  const DataSource& src = spec.data;
  PreparedData out;
  try {
    if (!src.csv_path.empty()) {
      out.train = load_csv(src.csv_path, src.append_bias);
    } else {
      Rng rng = make_rng(spec.master_seed, kDataStream);
      out.train = heavy_tailed_logistic_dataset(src.n, src.d, src.num_classes,
                                                src.tail_k, rng, src.append_bias);
    }
    if (!src.test_csv_path.empty()) {
      Dataset test = load_csv(src.test_csv_path, src.append_bias);
      require(test.feature_dim() == out.train.feature_dim(),
              "test CSV feature count differs from training CSV");
      const int classes = std::max(test.num_classes, out.train.num_classes);
      test.num_classes = classes;
      out.train.num_classes = classes;
      out.test = std::move(test);
    } else if (src.test_fraction > 0.0) {
      const auto held = static_cast<std::size_t>(
          std::round(src.test_fraction * static_cast<double>(out.train.size())));
      auto [train, test] = split_dataset(out.train, out.train.size() - held);
      out.train = std::move(train);
      out.test = std::move(test);
    }
  } catch (const CsvError& e) {
    throw IoError(e.what());
  }
  return out;
}

double reference_optimum(const LogisticProblem& problem, std::size_t budget) {
  SolverOptions options;
  options.iterations = std::min(budget, kMaxReferenceIterations);
  options.step = 1.0 / *problem.smoothness();
  options.accelerated = true;
  return minimize_nonprivate(problem, Vector::Zero(problem.dimension()), options)
      .value;
}

std::size_t resolve_T(const ExperimentSpec& spec, std::size_t n, Index dim,
                      const PrivacyBudget& budget, double b) {
  if (spec.T > 0) return spec.T;
  if (spec.epochs > 0.0) {
    return static_cast<std::size_t>(
        std::ceil(spec.epochs * static_cast<double>(n) / b));
  }
  const Phi phi = compute_phi(n, dim, budget);
  require(!phi.warning, "phi = " + format_number(phi.value) +
                            " >= 1; set T or epochs explicitly");
  return schedule_interpolation(1.0, phi.value, 1.0).T;
}

// One (tau) column of a sweep: every eta in the grid over every seed.
struct GridResult {
  double eta_best = 0.0;
  double mean = 0.0;
  double stddev = 0.0;
  std::vector<SweepCell> cells;
};

struct GridContext {
  const LogisticProblem* problem = nullptr;
  const Dataset* test = nullptr;
  double f_star = 0.0;
  std::size_t T = 0;
  double b = 1.0;
  PrivacyBudget budget;
  bool no_noise = false;
};

double run_metric(const GridContext& ctx, const DpSgdConfig& config) {
  const RunResult run = run_dp_sgd(*ctx.problem, config);
  if (ctx.test != nullptr) {
    return LogisticProblem::accuracy(run.w_final, *ctx.test);
  }
  return ctx.problem->objective(run.w_final) - ctx.f_star;
}

GridResult run_grid(const GridContext& ctx, double tau,
                    const ExperimentSpec& spec) {
  const bool higher_better = ctx.test != nullptr;
  DpSgdConfig config;
  config.T = ctx.T;
  config.tau = tau;
  config.b = ctx.b;
  config.domain = ctx.problem->domain();
  config.w0 = Vector::Zero(ctx.problem->dimension());
  if (ctx.no_noise) {
    config.sigma_sq = 0.0;
  } else {
    require(std::isfinite(tau), "tau = inf requires no_noise");
    config.sigma_sq = noise_variance(ctx.T, tau, ctx.problem->num_samples(),
                                     ctx.problem->dimension(), ctx.budget)
                          .sigma_sq;
  }

  GridResult out;
  bool have_best = false;
  for (double eta : spec.eta_grid) {
    std::vector<double> metrics;
    for (std::uint64_t seed : spec.seeds) {
      config.eta = eta;
      config.seed = seed;
      const double m = run_metric(ctx, config);
      metrics.push_back(m);
      out.cells.push_back({tau, eta, seed, m});
    }
    const double mean = mean_of(metrics);
    // NaN from a diverged run never wins.
    const bool better = std::isfinite(mean) &&
                        (!have_best || (higher_better ? mean > out.mean
                                                      : mean < out.mean));
    if (better) {
      have_best = true;
      out.eta_best = eta;
      out.mean = mean;
      out.stddev = stddev_of(metrics);
    }
  }
  if (!have_best) {
    out.eta_best = spec.eta_grid.front();
    out.mean = std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

void write_line(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) out << ',';
    out << cells[i];
  }
  out << '\n';
}

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  for (int precision = 6; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof(buf), "%.*g", precision, value);
    if (std::strtod(buf, nullptr) == value) break;
  }
  return buf;
}

double resolve_clip_token(const std::string& token,
                          const std::vector<double>& sorted_profile,
                          std::string& kind) {
  require(!token.empty(), "empty clip-norm token");
  if (token == "inf") {
    kind = "inf";
    return kInfinity;
  }
  if (token.front() == 'p') {
    char* end = nullptr;
    const double q = std::strtod(token.c_str() + 1, &end);
    require(end != token.c_str() + 1 && *end == '\0',
            "malformed percentile token '" + token + "'");
    require(q >= 0.0 && q <= 100.0, "percentile out of range in '" + token + "'");
    kind = token;
    return percentile(LipschitzProfile{sorted_profile}, q);
  }
  char* end = nullptr;
  const double value = std::strtod(token.c_str(), &end);
  require(end != token.c_str() && *end == '\0' && value > 0.0,
          "clip-norm token '" + token + "' is neither pQ, inf nor a positive number");
  kind = "abs";
  return value;
}

void ExperimentSpec::validate() const {
  try {
    budget.validate();
  } catch (const DomainError& e) {
    throw ValidationError(e.what());
  }
  require(!seeds.empty(), "seed list is empty");
  require(batch > 0.0, "batch must be positive");
  require(!eta_grid.empty(), "learning-rate grid is empty");
  for (double eta : eta_grid) require(eta > 0.0, "learning rates must be positive");
  require(!clip_candidates.empty(), "clip-norm candidate list is empty");
  require(data.test_fraction >= 0.0 && data.test_fraction < 1.0,
          "test_fraction must lie in [0, 1)");
  require(epsilon_rnmm > 0.0, "epsilon_rnmm must be positive");
  require(k > 1.0, "moment order k must exceed 1");
  require(gamma > 0.0 && gamma <= 1.0, "gamma must lie in (0, 1]");
  require(C > 0.0, "C must be positive");
  require(count >= 1, "count must be at least 1");
  for (double p : p_list) require(p > 1.0, "moment orders p must exceed 1");
}

// ---------------------------------------------------------------------------
// sweep-clip
// ---------------------------------------------------------------------------

void SweepReport::write_csv(std::ostream& out) const {
  write_line(out, {"tau", "tau_kind", "eta_best", "mean_metric", "std_metric"});
  for (const SweepRow& r : rows) {
    write_line(out, {format_number(r.tau), r.tau_kind, format_number(r.eta_best),
                     format_number(r.mean_metric), format_number(r.std_metric)});
  }
}

void SweepReport::write_cells_csv(std::ostream& out) const {
  write_line(out, {"tau", "eta", "seed", "metric"});
  for (const SweepCell& c : cells) {
    write_line(out, {format_number(c.tau), format_number(c.eta),
                     std::to_string(c.seed), format_number(c.metric)});
  }
}

SweepReport run_sweep_clip(const ExperimentSpec& spec) {
  spec.validate();
  const PreparedData data = prepare_data(spec);
  const LogisticProblem problem(data.train);
  const std::size_t n = problem.num_samples();
  require(spec.batch <= static_cast<double>(n), "batch exceeds dataset size");

  LipschitzProfile profile;
  try {
    profile = build_profile(problem);
  } catch (const DomainError& e) {
    throw ValidationError(e.what());
  }

  GridContext ctx;
  ctx.problem = &problem;
  ctx.test = data.test ? &*data.test : nullptr;
  ctx.b = spec.batch;
  ctx.budget = spec.budget;
  ctx.no_noise = spec.no_noise;
  ctx.T = resolve_T(spec, n, problem.dimension(), spec.budget, spec.batch);

  SweepReport report;
  report.T = ctx.T;
  report.metric_name = ctx.test ? "test_accuracy" : "train_suboptimality";
  if (!ctx.test) {
    ctx.f_star = reference_optimum(problem, 10 * ctx.T);
    report.f_star = ctx.f_star;
  }

  for (const std::string& token : spec.clip_candidates) {
    SweepRow row;
    row.tau = resolve_clip_token(token, profile.g, row.tau_kind);
    GridResult grid = run_grid(ctx, row.tau, spec);
    row.eta_best = grid.eta_best;
    row.mean_metric = grid.mean;
    row.std_metric = grid.stddev;
    report.rows.push_back(row);
    report.cells.insert(report.cells.end(), grid.cells.begin(), grid.cells.end());
  }
  return report;
}

// ---------------------------------------------------------------------------
// rnmm-pipeline
// ---------------------------------------------------------------------------

void RnmmReport::write_csv(std::ostream& out) const {
  write_line(out, {"tau_selected", "tau_oracle", "eps_rnmm", "eps_dpsgd",
                   "metric_with", "metric_without"});
  write_line(out, {format_number(tau_selected), format_number(tau_oracle),
                   format_number(epsilon_rnmm), format_number(epsilon_dpsgd),
                   format_number(metric_with), format_number(metric_without)});
}

RnmmReport run_rnmm_pipeline(const ExperimentSpec& spec) {
  spec.validate();
  const bool exact = std::isinf(spec.epsilon_rnmm);
  require(exact || spec.epsilon_rnmm < spec.budget.epsilon,
          "epsilon_rnmm must be smaller than the total epsilon");

  double clamp = 0.0;
  if (spec.rnmm_clamp) {
    clamp = *spec.rnmm_clamp;
  } else {
    require(!spec.public_prior.empty(),
            "rnmm-pipeline needs rnmm_clamp or a public_prior list");
    std::vector<double> prior = spec.public_prior;
    std::sort(prior.begin(), prior.end());
    require(prior.front() > 0.0, "public_prior values must be positive");
    clamp = percentile(LipschitzProfile{prior}, 99.9);
  }
  require(clamp > 0.0, "RNMM clamp bound must be positive");

  const PreparedData data = prepare_data(spec);
  const LogisticProblem problem(data.train);
  const std::size_t n = problem.num_samples();
  require(spec.batch <= static_cast<double>(n), "batch exceeds dataset size");
  LipschitzProfile profile;
  try {
    profile = build_profile(problem);
  } catch (const DomainError& e) {
    throw ValidationError(e.what());
  }

  RnmmReport report;
  report.tau_oracle = profile.min();
  report.epsilon_rnmm = spec.epsilon_rnmm;
  report.epsilon_dpsgd =
      exact ? spec.budget.epsilon : spec.budget.epsilon - spec.epsilon_rnmm;

  Rng rng = make_rng(spec.master_seed, kRnmmStream);
  report.tau_selected =
      private_min_lipschitz(problem, spec.epsilon_rnmm, clamp, rng).value;

  GridContext ctx;
  ctx.problem = &problem;
  ctx.test = data.test ? &*data.test : nullptr;
  ctx.b = spec.batch;
  ctx.no_noise = spec.no_noise;
  report.metric_name = ctx.test ? "test_accuracy" : "train_suboptimality";

  PrivacyBudget with_budget = spec.budget;
  with_budget.epsilon = report.epsilon_dpsgd;
  ctx.budget = with_budget;
  ctx.T = resolve_T(spec, n, problem.dimension(), with_budget, spec.batch);
  if (!ctx.test) ctx.f_star = reference_optimum(problem, 10 * ctx.T);
  report.metric_with = run_grid(ctx, report.tau_selected, spec).mean;

  ctx.budget = spec.budget;
  ctx.T = resolve_T(spec, n, problem.dimension(), spec.budget, spec.batch);
  if (!ctx.test) ctx.f_star = reference_optimum(problem, 10 * ctx.T);
  report.metric_without = run_grid(ctx, report.tau_oracle, spec).mean;
  return report;
}

// ---------------------------------------------------------------------------
// phi-scaling
// ---------------------------------------------------------------------------

void PhiScalingReport::write_csv(std::ostream& out) const {
  write_line(out, {"n", "phi", "k", "median_risk"});
  for (const PhiScalingRow& r : rows) {
    write_line(out, {std::to_string(r.n), format_number(r.phi), format_number(r.k),
                     format_number(r.median_risk)});
  }
}

PhiScalingReport run_phi_scaling(const ExperimentSpec& spec) {
  spec.validate();
  require(!spec.n_list.empty(), "n_list is empty");
  PhiScalingReport report;
  for (std::size_t j = 0; j < spec.n_list.size(); ++j) {
    const std::size_t n = spec.n_list[j];
    require(n >= 1, "n values must be positive");
    Rng data_rng = make_rng(spec.master_seed, kDataStream + 1 + j);
    const LogisticProblem problem(heavy_tailed_logistic_dataset(
        n, spec.data.d, spec.data.num_classes, spec.k, data_rng,
        spec.data.append_bias));
    const Index dim = problem.dimension();

    // Non-private estimate of the k-th moment bound G.
    double moment = 0.0;
    for (std::size_t i = 0; i < n; ++i) moment += std::pow(problem.lipschitz(i), spec.k);
    const double G = std::pow(moment / static_cast<double>(n), 1.0 / spec.k);

    const Phi phi = compute_phi(n, dim, spec.budget);
    require(!phi.warning, "phi >= 1 at n = " + std::to_string(n));
    const std::size_t T = spec.T > 0
                              ? spec.T
                              : static_cast<std::size_t>(
                                    std::ceil(1.0 / (phi.value * phi.value)));
    const ClipSchedule sched =
        schedule_unconstrained_convex(G, spec.gamma, spec.C, T, phi.value, spec.k);

    DpSgdConfig config;
    config.T = T;
    config.eta = sched.eta;
    config.tau = sched.tau;
    config.b = std::min(spec.batch, static_cast<double>(n));
    config.sigma_sq = spec.no_noise
                          ? 0.0
                          : noise_variance(T, sched.tau, n, dim, spec.budget).sigma_sq;
    config.w0 = Vector::Zero(dim);

    const double f_star = reference_optimum(problem, 10 * T);
    std::vector<double> risks;
    for (std::uint64_t seed : spec.seeds) {
      config.seed = seed;
      const RunResult run = run_dp_sgd(problem, config);
      risks.push_back(optimization_risk(problem, {run}, ConvexRisk{f_star}));
    }
    report.rows.push_back(
        {n, phi.value, spec.k, median_of(risks), T, sched.tau, sched.eta});
  }
  return report;
}

// ---------------------------------------------------------------------------
// bias-oracle
// ---------------------------------------------------------------------------

void BiasOracleReport::write_csv(std::ostream& out) const {
  write_line(out, {"instance", "tau", "p", "exact_bias", "lemma_bound",
                   "corollary_bound", "lemma_margin", "corollary_margin", "pass"});
  for (const BiasOracleRow& r : rows) {
    write_line(out, {std::to_string(r.instance), format_number(r.tau),
                     format_number(r.p), format_number(r.exact_bias),
                     format_number(r.lemma_bound), format_number(r.corollary_bound),
                     format_number(r.lemma_bound - r.exact_bias),
                     format_number(r.corollary_bound - r.lemma_bound),
                     r.pass ? "1" : "0"});
  }
}

BiasOracleReport run_bias_oracle(const ExperimentSpec& spec) {
  spec.validate();
  require(!spec.p_list.empty(), "p list is empty");
  Rng rng = make_rng(spec.master_seed, 0);
  std::uniform_int_distribution<int> num_atoms(1, 6);
  std::uniform_int_distribution<int> dimension(1, 4);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::exponential_distribution<double> weight(1.0);
  std::bernoulli_distribution zero_atom(0.2);
  constexpr double kTauFractions[] = {0.05, 0.2, 0.5, 0.9, 1.0, 1.5};

  BiasOracleReport report;
  for (std::size_t inst = 0; inst < spec.count; ++inst) {
    const int atoms = num_atoms(rng);
    const Index d = dimension(rng);
    std::vector<DiscreteVectorDistribution::Atom> support;
    double total = 0.0;
    for (int a = 0; a < atoms; ++a) {
      Vector v(d);
      for (Index j = 0; j < d; ++j) v[j] = normal(rng);
      // Log-normal radii give supports with very different atom norms.
      v *= zero_atom(rng) ? 0.0 : std::exp(1.5 * normal(rng));
      const double w = weight(rng);
      support.push_back({std::move(v), w});
      total += w;
    }
    double mass = 0.0;
    for (std::size_t a = 0; a + 1 < support.size(); ++a) {
      support[a].probability /= total;
      mass += support[a].probability;
    }
    support.back().probability = 1.0 - mass;
    const DiscreteVectorDistribution dist(std::move(support));

    const double scale = dist.max_norm() > 0.0 ? dist.max_norm() : 1.0;
    for (double fraction : kTauFractions) {
      const double tau = fraction * scale;
      const double exact = clipping_bias_exact(dist, tau);
      for (double p : spec.p_list) {
        BiasOracleRow row;
        row.instance = inst;
        row.tau = tau;
        row.p = p;
        row.exact_bias = exact;
        row.lemma_bound = bias_bound_lemma(dist, tau, p);
        row.corollary_bound = bias_bound_corollary(dist, tau, p);
        const double tol_lemma = 1e-9 * std::max(1.0, std::abs(row.lemma_bound));
        const double tol_cor = 1e-9 * std::max(1.0, std::abs(row.corollary_bound));
        row.pass = row.exact_bias <= row.lemma_bound + tol_lemma &&
                   row.lemma_bound <= row.corollary_bound + tol_cor;
        if (!row.pass) ++report.failures;
        report.rows.push_back(row);
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// lower-bound-demo
// ---------------------------------------------------------------------------

bool LowerBoundReport::all_pass() const {
  return std::all_of(rows.begin(), rows.end(),
                     [](const CheckRow& r) { return r.pass; });
}

void LowerBoundReport::write_csv(std::ostream& out) const {
  write_line(out, {"check", "value", "reference", "pass"});
  for (const CheckRow& r : rows) {
    write_line(out, {r.check, format_number(r.value), format_number(r.reference),
                     r.pass ? "1" : "0"});
  }
}

namespace {

// Average hard-instance loss written through the sample mean. Valid because
// every sample is a nonnegative multiple of the same v.
double hard_objective_closed_form(const Vector& w, const Vector& x_bar) {
  return -w.dot(x_bar) + 2.0 * x_bar.norm() * std::max(w.norm() - 1.0, 0.0);
}

Vector random_direction(Index d, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector u(d);
  do {
    for (Index j = 0; j < d; ++j) u[j] = normal(rng);
  } while (u.norm() == 0.0);
  return u.normalized();
}

// Point with radius q[0] and hyperspherical angles q[1..d-1].
Vector from_spherical(const Vector& q) {
  const Index d = q.size();
  Vector w(d);
  double scale = q[0];
  for (Index j = 0; j + 1 < d; ++j) {
    w[j] = scale * std::cos(q[j + 1]);
    scale *= std::sin(q[j + 1]);
  }
  w[d - 1] = scale;
  return w;
}

// Argmin of the closed-form objective: a 1e-3 grid on [-2, 2]^2 when d = 2,
// otherwise compass search from random starts.
Vector search_minimizer(const Vector& x_bar, Rng& rng) {
  const Index d = x_bar.size();
  Vector best = Vector::Zero(d);
  double best_value = hard_objective_closed_form(best, x_bar);
  if (d == 2) {
    constexpr int kSteps = 4000;
    Vector w(2);
    for (int a = 0; a <= kSteps; ++a) {
      w[0] = -2.0 + 4.0 * a / kSteps;
      for (int c = 0; c <= kSteps; ++c) {
        w[1] = -2.0 + 4.0 * c / kSteps;
        const double value = hard_objective_closed_form(w, x_bar);
        if (value < best_value) {
          best_value = value;
          best = w;
        }
      }
    }
    return best;
  }
  // Compass search in hyperspherical coordinates (r, theta_1..theta_{d-1}),
  // where the kink at ||w|| = 1 is the coordinate plane r = 1.
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int start = 0; start < 20; ++start) {
    Vector q(d);
    q[0] = 2.0 * unit(rng);
    for (Index j = 1; j < d; ++j) q[j] = (j + 1 < d ? std::numbers::pi : 2.0 * std::numbers::pi) * unit(rng);
    double value = hard_objective_closed_form(from_spherical(q), x_bar);
    for (double step = 0.5; step > 1e-10;) {
      bool moved = false;
      for (Index j = 0; j < d; ++j) {
        for (double sign : {1.0, -1.0}) {
          Vector trial = q;
          trial[j] += sign * step;
          if (trial[0] < 0.0) continue;
          const double v = hard_objective_closed_form(from_spherical(trial), x_bar);
          if (v < value) {
            value = v;
            q = trial;
            moved = true;
          }
        }
      }
      if (!moved) step *= 0.5;
    }
    if (value < best_value) {
      best_value = value;
      best = from_spherical(q);
    }
  }
  return best;
}

}  // namespace

LowerBoundReport run_lower_bound_demo(const ExperimentSpec& spec) {
  spec.validate();
  const Index d = spec.dim;
  require(d >= 2 && d % 2 == 0, "lower-bound-demo needs an even dimension");
  require(spec.n >= 1, "n must be positive");
  Rng rng = make_rng(spec.master_seed, 0);

  QvSpec qv;
  qv.v = random_packing_vector(d, rng);
  qv.k = spec.k;
  qv.p = spec.qv_p > 0.0
             ? spec.qv_p
             : 2.0 * std::sqrt(static_cast<double>(d) * -std::log(spec.budget.delta)) /
                   (static_cast<double>(spec.n) * spec.budget.epsilon);
  try {
    qv.validate();
  } catch (const std::exception& e) {
    throw ValidationError(std::string(e.what()) + " (p = " + format_number(qv.p) +
                          ")");
  }

  std::vector<Vector> samples;
  samples.reserve(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) samples.push_back(sample_qv(qv, rng));
  const HardInstanceProblem problem(samples);
  const Vector x_bar = problem.sample_mean();
  const double x_bar_norm = x_bar.norm();
  const Vector w_star = qv.v.normalized();
  const double v_norm = qv.v.norm();

  LowerBoundReport report;
  std::uniform_real_distribution<double> radius(0.0, 5.0);

  if (x_bar_norm == 0.0) {
    // Every draw was the zero atom: the objective vanishes identically.
    report.degenerate = true;
    double max_abs = 0.0;
    for (int t = 0; t < 100; ++t) {
      max_abs = std::max(max_abs,
                         std::abs(problem.objective(radius(rng) * random_direction(d, rng))));
    }
    report.rows.push_back({"degenerate", 1.0, 1.0, true});
    report.rows.push_back({"objective_max_abs", max_abs, 0.0, max_abs == 0.0});
    return report;
  }
  report.rows.push_back({"degenerate", 0.0, 0.0, true});

  // Closed form via the sample mean agrees with the per-sample average.
  double closed_form_err = 0.0;
  for (int t = 0; t < 50; ++t) {
    const Vector w = radius(rng) * random_direction(d, rng);
    const double direct = problem.objective(w);
    closed_form_err = std::max(
        closed_form_err, std::abs(direct - hard_objective_closed_form(w, x_bar)) /
                             std::max(1.0, std::abs(direct)));
  }
  report.rows.push_back({"closed_form_rel_error", closed_form_err, 1e-12,
                         closed_form_err <= 1e-12});

  const double tol = d == 2 ? 2e-3 : 1e-4;
  const double argmin_dist = (search_minimizer(x_bar, rng) - w_star).norm();
  report.rows.push_back({"argmin_distance", argmin_dist, tol, argmin_dist <= tol});

  // f(w) - f(w*) >= ||x_bar|| (||w|| - 1) outside the unit ball.
  const double f_star = hard_objective_closed_form(w_star, x_bar);
  double sharp_margin = kInfinity;
  std::uniform_real_distribution<double> outside(1.0, 5.0);
  for (int t = 0; t < 1000; ++t) {
    double r = outside(rng);
    if (r == 1.0) r = 1.5;
    const Vector w = r * random_direction(d, rng);
    const double gap = problem.objective(w) - f_star;
    sharp_margin = std::min(sharp_margin, gap - x_bar_norm * (w.norm() - 1.0));
  }
  const double sharp_tol = -1e-9 * std::max(1.0, x_bar_norm);
  report.rows.push_back({"sharpness_min_margin", sharp_margin, 0.0,
                         sharp_margin >= sharp_tol});

  // E ||grad l(w, x)||^k <= (3 ||v||)^k by enumeration over the two atoms.
  const Vector atom = qv.nonzero_atom();
  const double moment_cap = std::pow(3.0 * v_norm, qv.k);
  double worst_ratio = 0.0;
  for (int t = 0; t < 100; ++t) {
    const Vector w = radius(rng) * random_direction(d, rng);
    const double zero_term =
        std::pow(lower_bound_loss(w, Vector::Zero(d)).gradient.norm(), qv.k);
    const double atom_term = std::pow(lower_bound_loss(w, atom).gradient.norm(), qv.k);
    const double moment = (1.0 - qv.p) * zero_term + qv.p * atom_term;
    worst_ratio = std::max(worst_ratio, moment / moment_cap);
  }
  report.rows.push_back(
      {"grad_moment_ratio_max", worst_ratio, 1.0, worst_ratio <= 1.0 + 1e-12});

  // Monte-Carlo moments of Q_v against their closed forms, 4-sigma bands.
  constexpr std::size_t kDraws = 100000;
  const double draws = static_cast<double>(kDraws);
  Vector mean = Vector::Zero(d);
  double norm_k_mean = 0.0;
  for (std::size_t t = 0; t < kDraws; ++t) {
    const Vector x = sample_qv(qv, rng);
    mean += x;
    norm_k_mean += std::pow(x.norm(), qv.k);
  }
  mean /= draws;
  norm_k_mean /= draws;
  const double atom_scale = std::pow(qv.p, -1.0 / qv.k);
  const double coord_sd = atom_scale * std::sqrt(qv.p * (1.0 - qv.p));
  const double mean_dev =
      (mean - std::pow(qv.p, 1.0 - 1.0 / qv.k) * qv.v).cwiseAbs().maxCoeff();
  const double mean_band = 4.0 * coord_sd / std::sqrt(draws);
  report.rows.push_back({"qv_mean_max_deviation", mean_dev, mean_band,
                         mean_dev <= mean_band});
  const double vk = std::pow(v_norm, qv.k);
  const double moment_sd = (vk / qv.p) * std::sqrt(qv.p * (1.0 - qv.p));
  const double moment_dev = std::abs(norm_k_mean - vk);
  const double moment_band = 4.0 * moment_sd / std::sqrt(draws);
  report.rows.push_back({"qv_norm_moment_deviation", moment_dev, moment_band,
                         moment_dev <= moment_band});

  // DP-SGD on the instance; achieved risk against the phi^(1 - 1/k) scale.
  const Phi phi = compute_phi(spec.n, d, spec.budget);
  report.rows.push_back({"phi", phi.value, 1.0, true});
  if (!phi.warning) {
    const double G = 3.0 * v_norm;
    const std::size_t T =
        spec.T > 0 ? spec.T
                   : static_cast<std::size_t>(std::ceil(1.0 / (phi.value * phi.value)));
    const ClipSchedule sched =
        schedule_unconstrained_convex(G, spec.gamma, spec.C, T, phi.value, qv.k);
    DpSgdConfig config;
    config.T = T;
    config.eta = sched.eta;
    config.tau = sched.tau;
    config.b = std::min(spec.batch, static_cast<double>(spec.n));
    config.sigma_sq =
        spec.no_noise ? 0.0 : noise_variance(T, sched.tau, spec.n, d, spec.budget).sigma_sq;
    config.w0 = Vector::Zero(d);
    std::vector<RunResult> runs;
    for (std::uint64_t seed : spec.seeds) {
      config.seed = seed;
      runs.push_back(run_dp_sgd(problem, config));
    }
    const double risk = optimization_risk(problem, runs, ConvexRisk{f_star});
    report.rows.push_back({"dp_sgd_mean_risk", risk,
                           G * std::pow(phi.value, 1.0 - 1.0 / qv.k), true});
  }
  return report;
}

}  // namespace dpclip::harness
