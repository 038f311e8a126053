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

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "dpclip/lipschitz.hpp"
#include "dpclip/losses.hpp"
#include "dpclip/optimizer.hpp"

namespace dpclip {
namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

// Minimal problem with prescribed constants and no f_i^*.
class ConstantsProblem final : public Problem {
 public:
  explicit ConstantsProblem(std::vector<double> g) : g_(std::move(g)) {}
  std::size_t num_samples() const override { return g_.size(); }
  Index dimension() const override { return 1; }
  double loss(const Vector& w, std::size_t i) const override { return g_[i] * w[0]; }
  Vector grad(const Vector&, std::size_t i) const override { return vec({g_[i]}); }
  double lipschitz(std::size_t i) const override { return g_[i]; }

 private:
  std::vector<double> g_;
};

TEST(BuildProfile, SortsAscending) {
  const LipschitzProfile p = build_profile(ConstantsProblem({3.0, 1.0, 2.0}));
  EXPECT_EQ(p.g, (std::vector<double>{1.0, 2.0, 3.0}));
  EXPECT_EQ(p.min(), 1.0);
  EXPECT_EQ(p.max(), 3.0);
}

TEST(BuildProfile, SingleSample) {
  const LipschitzProfile p = build_profile(ConstantsProblem({2.5}));
  EXPECT_EQ(p.min(), p.max());
}

TEST(BuildProfile, RejectsNonPositiveConstants) {
  EXPECT_THROW(build_profile(ConstantsProblem({1.0, 0.0})), DomainError);
  EXPECT_THROW(build_profile(ConstantsProblem({-1.0})), DomainError);
}

TEST(BuildProfile, LogisticEntriesRecomputedIndependently) {
  Rng rng = make_rng(1);
  const Dataset raw = heavy_tailed_logistic_dataset(50, 3, 2, 3.0, rng, false);
  const LipschitzProfile p = build_profile(LogisticProblem(append_bias(raw)));
  std::vector<double> oracle;
  for (Index i = 0; i < raw.features.rows(); ++i) {
    oracle.push_back(std::sqrt(2.0) *
                     std::sqrt(raw.features.row(i).squaredNorm() + 1.0));
  }
  std::sort(oracle.begin(), oracle.end());
  ASSERT_EQ(p.size(), oracle.size());
  for (std::size_t i = 0; i < oracle.size(); ++i) {
    EXPECT_NEAR(p.g[i], oracle[i], 1e-12 * oracle[i]);
  }
}

TEST(Percentile, NearestRank) {
  const LipschitzProfile p{{1.0, 2.0, 3.0, 4.0}};
  EXPECT_EQ(percentile(p, 0), 1.0);
  EXPECT_EQ(percentile(p, 100), 4.0);
  EXPECT_EQ(percentile(p, 50), 2.0);
  EXPECT_EQ(percentile(p, 50.1), 3.0);
  EXPECT_EQ(percentile(p, 25), 1.0);
  EXPECT_THROW(percentile(p, -1), std::out_of_range);
  EXPECT_THROW(percentile(p, 100.5), std::out_of_range);
}

TEST(Percentile, NondecreasingInQ) {
  Rng rng = make_rng(2);
  std::vector<double> g(37);
  for (double& x : g) x = std::exponential_distribution<double>(1.0)(rng) + 0.1;
  std::sort(g.begin(), g.end());
  const LipschitzProfile p{g};
  double previous = 0.0;
  for (int q = 0; q <= 1000; ++q) {
    const double v = percentile(p, q / 10.0);
    EXPECT_GE(v, previous);
    previous = v;
  }
  EXPECT_EQ(percentile(p, 0), p.min());
  EXPECT_EQ(percentile(p, 100), p.max());
}

TEST(InterpolationGap, GeometricMedianCases) {
  const Vector a = vec({0.5, 0.5});
  EXPECT_EQ(interpolation_gap(GeometricMedianProblem({a, a}), a), 0.0);
  EXPECT_EQ(interpolation_gap(GeometricMedianProblem({vec({-1.0}), vec({1.0})}),
                              vec({0.0})),
            1.0);
}

TEST(InterpolationGap, RequiresPerSampleMinimum) {
  EXPECT_THROW(interpolation_gap(ConstantsProblem({1.0}), vec({0.0})),
               std::invalid_argument);
}

TEST(InterpolationGap, PlantedLogisticNearlyInterpolates) {
  Rng rng = make_rng(3);
  const LogisticProblem problem(heavy_tailed_logistic_dataset(400, 3, 3, 4.0, rng));
  SolverOptions options;
  options.iterations = 5000;
  options.step = 1.0 / *problem.smoothness();
  options.accelerated = true;
  const SolverResult opt =
      minimize_nonprivate(problem, Vector::Zero(problem.dimension()), options);
  EXPECT_LE(interpolation_gap(problem, opt.w), 0.01);
}

// Two 1-D anchors with weights (1, 2): G = (1, 2), minimizer at the heavier one.
GeometricMedianProblem weighted_pair() {
  return GeometricMedianProblem({vec({0.0}), vec({1.0})}, {1.0, 2.0});
}

std::vector<Vector> grid(double lo, double hi, int steps) {
  std::vector<Vector> out;
  for (int s = 0; s <= steps; ++s) out.push_back(vec({lo + (hi - lo) * s / steps}));
  return out;
}

// The ratio exactly as written in the definition, with 1/n normalizations.
double alpha_oracle(const Problem& problem, double tau, double g_max,
                    const std::vector<Vector>& ws, double f_star) {
  double best = kInfinity;
  const double n = static_cast<double>(problem.num_samples());
  for (const Vector& w : ws) {
    if (problem.objective(w) - f_star <= 1e-8) continue;
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < problem.num_samples(); ++i) {
      const double gap = problem.loss(w, i) - *problem.min_loss(i);
      num += std::min(1.0 / tau, 1.0 / problem.lipschitz(i)) * gap / n;
      den += gap / g_max / n;
    }
    best = std::min(best, num / den);
  }
  return best;
}

TEST(AlphaEstimate, MatchesBruteForceOracle) {
  const GeometricMedianProblem problem = weighted_pair();
  const LipschitzProfile profile = build_profile(problem);
  const auto ws = grid(-2.0, 3.0, 5000);
  const double f_star = problem.objective(vec({1.0}));
  for (double tau : {0.25, 1.0, 1.3, 1.7, 2.0}) {
    EXPECT_NEAR(alpha_estimate(problem, profile, tau, ws, f_star),
                alpha_oracle(problem, tau, 2.0, ws, f_star), 1e-6);
  }
}

TEST(AlphaEstimate, ExactlyOneAtLargestConstant) {
  Rng rng = make_rng(4);
  const LogisticProblem problem(heavy_tailed_logistic_dataset(60, 2, 3, 2.0, rng));
  const LipschitzProfile profile = build_profile(problem);
  std::vector<Vector> ws;
  std::normal_distribution<double> normal;
  for (int t = 0; t < 20; ++t) {
    Vector w(problem.dimension());
    for (Index j = 0; j < w.size(); ++j) w[j] = normal(rng);
    ws.push_back(w);
  }
  EXPECT_EQ(alpha_estimate(problem, profile, profile.max(), ws), 1.0);
  EXPECT_EQ(alpha_estimate(problem, profile, profile.min(), ws),
            alpha_estimate(problem, profile, profile.min() / 2.0, ws));
  double previous = kInfinity;
  for (int s = 1; s <= 10; ++s) {
    const double tau = profile.min() + (profile.max() - profile.min()) * s / 10.0;
    const double a = alpha_estimate(problem, profile, tau, ws);
    EXPECT_GE(a, 1.0 - 1e-9);
    EXPECT_LE(a, previous);
    // G_n / (tau alpha) >= 1 and nonincreasing in tau.
    EXPECT_GE(profile.max() / (tau * a), 1.0 - 1e-9);
    previous = a;
  }
}

TEST(AlphaEstimate, RejectsDegenerateInput) {
  const GeometricMedianProblem problem = weighted_pair();
  const LipschitzProfile profile = build_profile(problem);
  EXPECT_THROW(alpha_estimate(problem, profile, 1.0, {}), std::invalid_argument);
  EXPECT_THROW(alpha_estimate(problem, profile, 2.5, {vec({0.0})}), DomainError);
  EXPECT_THROW(alpha_estimate(problem, profile, 0.0, {vec({0.0})}), DomainError);
  const double f_star = problem.objective(vec({1.0}));
  EXPECT_THROW(alpha_estimate(problem, profile, 1.0, {vec({1.0})}, f_star),
               std::runtime_error);
}

TEST(PrivateMinLipschitz, ExactAtInfiniteEpsilon) {
  const ConstantsProblem problem({5.0, 1.0, 3.0, 1.0});
  Rng rng = make_rng(5);
  const PrivateMinimum out = private_min_lipschitz(problem, kInfinity, 10.0, rng);
  EXPECT_EQ(out.index, 1u);
  EXPECT_EQ(out.value, 1.0);
}

TEST(PrivateMinLipschitz, ClampCapsReportedValue) {
  const ConstantsProblem problem({50.0, 40.0});
  Rng rng = make_rng(6);
  EXPECT_EQ(private_min_lipschitz(problem, kInfinity, 10.0, rng).value, 10.0);
  EXPECT_THROW(private_min_lipschitz(problem, 1.0, 0.0, rng), DomainError);
}

TEST(PrivateMinLipschitz, ClampedOutliersStillSelectMinimum) {
  // Every non-minimal constant is clamped to 10, so the margin is 9.
  const ConstantsProblem problem({30.0, 1.0, 80.0});
  Rng rng = make_rng(7);
  int hits = 0;
  for (int t = 0; t < 2000; ++t) {
    if (private_min_lipschitz(problem, 20.0, 10.0, rng).index == 1) ++hits;
  }
  EXPECT_GE(hits, 1900);
}

}  // namespace
}  // namespace dpclip
