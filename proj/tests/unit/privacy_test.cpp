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

#include <array>
#include <cmath>
#include <vector>

#include "dpclip/privacy.hpp"

namespace dpclip {
namespace {

PrivacyBudget budget(double eps, double delta, double nu = 1.0) {
  return PrivacyBudget{eps, delta, nu};
}

TEST(PrivacyBudget, RejectsOutOfRangeFields) {
  EXPECT_THROW(budget(0.0, 1e-5).validate(), DomainError);
  EXPECT_THROW(budget(1.0, 0.0).validate(), DomainError);
  EXPECT_THROW(budget(1.0, 1.0).validate(), DomainError);
  EXPECT_THROW(budget(1.0, 1e-5, 0.0).validate(), DomainError);
  EXPECT_NO_THROW(budget(1.0, 0.5, 2.0).validate());
}

TEST(ComputePhi, MatchesHandEvaluation) {
  const Phi phi = compute_phi(1000, 10, budget(2.0, 1e-5));
  const double oracle = std::sqrt(10.0 * std::log(1e5)) / 2000.0;
  EXPECT_DOUBLE_EQ(phi.value, oracle);
  EXPECT_NEAR(phi.value, 0.00536492, 5e-9);
  EXPECT_FALSE(phi.warning);
}

TEST(ComputePhi, DoublingNHalvesExactly) {
  const PrivacyBudget b = budget(0.7, 3e-6, 1.3);
  for (std::size_t n : {1u, 7u, 1000u, 123457u}) {
    EXPECT_EQ(compute_phi(2 * n, 5, b).value, compute_phi(n, 5, b).value / 2.0);
  }
}

TEST(ComputePhi, UnitFactorsGiveOneWithWarning) {
  const Phi phi = compute_phi(1, 1, budget(1.0, std::exp(-1.0)));
  EXPECT_NEAR(phi.value, 1.0, 1e-15);
  EXPECT_TRUE(phi.warning || phi.value < 1.0);
  EXPECT_TRUE(compute_phi(1, 4, budget(1.0, std::exp(-1.0))).warning);
}

TEST(ComputePhi, MonotoneInEachArgument) {
  const PrivacyBudget base = budget(1.0, 1e-5, 1.0);
  const double ref = compute_phi(100, 4, base).value;
  EXPECT_LT(compute_phi(101, 4, base).value, ref);
  EXPECT_LT(compute_phi(100, 4, budget(1.1, 1e-5)).value, ref);
  EXPECT_GT(compute_phi(100, 5, base).value, ref);
  EXPECT_GT(compute_phi(100, 4, budget(1.0, 1e-5, 1.1)).value, ref);
}

TEST(ComputePhi, RejectsInvalidDelta) {
  EXPECT_THROW(compute_phi(10, 1, budget(1.0, 1.5)), DomainError);
  EXPECT_THROW(compute_phi(10, 1, budget(1.0, -1.0)), DomainError);
}

TEST(NoiseVariance, MatchesHandEvaluation) {
  const NoiseSpec spec = noise_variance(400, 2.0, 1000, 3, budget(2.0, 1e-5));
  const double oracle = 400.0 * std::log(1e5) * 4.0 / (1e6 * 4.0);
  EXPECT_DOUBLE_EQ(spec.sigma_sq, oracle);
  EXPECT_NEAR(spec.sigma_sq, 4.60517e-3, 5e-9);
  EXPECT_EQ(spec.dimension, 3);
}

TEST(NoiseVariance, ZeroClipNormGivesZero) {
  EXPECT_EQ(noise_variance(10, 0.0, 10, 1, budget(1.0, 1e-5)).sigma_sq, 0.0);
}

TEST(NoiseVariance, QuadraticInTau) {
  const PrivacyBudget b = budget(1.5, 1e-6, 2.0);
  const double s1 = noise_variance(17, 0.75, 321, 2, b).sigma_sq;
  const double s2 = noise_variance(17, 1.5, 321, 2, b).sigma_sq;
  EXPECT_EQ(s2, 4.0 * s1);
}

TEST(NoiseVariance, InvertsToLogInverseDelta) {
  Rng rng = make_rng(11);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double eps = u(rng);
    const double delta = std::pow(10.0, -1.0 - 3.0 * u(rng));
    const double nu = u(rng);
    const double tau = u(rng);
    const std::size_t T = 1 + static_cast<std::size_t>(100 * u(rng));
    const std::size_t n = 10 + static_cast<std::size_t>(1000 * u(rng));
    const double s = noise_variance(T, tau, n, 1, budget(eps, delta, nu)).sigma_sq;
    const double nn = static_cast<double>(n);
    const double recovered = s * nn * nn * eps * eps / (static_cast<double>(T) * tau * tau * nu);
    EXPECT_NEAR(recovered, -std::log(delta), 1e-13 * -std::log(delta));
  }
}

TEST(NoiseVariance, RejectsInvalidBudget) {
  EXPECT_THROW(noise_variance(1, 1.0, 1, 1, budget(-1.0, 1e-5)), DomainError);
}

TEST(AccountantRegime, ComparesAgainstBatchRatio) {
  EXPECT_TRUE(accountant_regime_ok(0.5, 100, 1000, 100));   // 0.5 < 1
  EXPECT_FALSE(accountant_regime_ok(2.0, 100, 1000, 100));  // 2 > 1
}

TEST(GaussianNoise, ZeroVarianceGivesZeroVector) {
  Rng rng = make_rng(3);
  const Vector z = gaussian_noise(NoiseSpec{0.0, 4}, rng);
  EXPECT_EQ(z.size(), 4);
  EXPECT_TRUE(z.isZero(0.0));
}

TEST(GaussianNoise, DeterministicGivenSeed) {
  Rng a = make_rng(99);
  Rng b = make_rng(99);
  const Vector x = gaussian_noise(NoiseSpec{2.5, 6}, a);
  const Vector y = gaussian_noise(NoiseSpec{2.5, 6}, b);
  EXPECT_EQ(x, y);
}

TEST(GaussianNoise, MomentsMatchUnitVariance) {
  Rng rng = make_rng(5);
  constexpr int kDraws = 100000;
  double sum = 0.0;
  double sq = 0.0;
  for (int i = 0; i < kDraws; ++i) {
    const double x = gaussian_noise(NoiseSpec{1.0, 1}, rng)[0];
    sum += x;
    sq += x * x;
  }
  const double mean = sum / kDraws;
  const double var = sq / kDraws - mean * mean;
  EXPECT_LT(std::abs(mean), 4.0 / std::sqrt(static_cast<double>(kDraws)));
  EXPECT_NEAR(var, 1.0, 0.05);
}

TEST(LaplaceSample, MeanAbsoluteDeviationIsScale) {
  Rng rng = make_rng(8);
  constexpr int kDraws = 200000;
  double abs_sum = 0.0;
  double sum = 0.0;
  for (int i = 0; i < kDraws; ++i) {
    const double x = laplace_sample(3.0, rng);
    sum += x;
    abs_sum += std::abs(x);
  }
  // Var |X| = scale^2 for Laplace, so the band is 4 * 3 / sqrt(N).
  EXPECT_NEAR(abs_sum / kDraws, 3.0, 4.0 * 3.0 / std::sqrt(double{kDraws}));
  EXPECT_NEAR(sum / kDraws, 0.0, 4.0 * 3.0 * std::sqrt(2.0 / kDraws));
}

TEST(ReportNoisyMax, InfiniteEpsilonIsExactArgmax) {
  Rng rng = make_rng(0);
  const std::array<double, 3> scores{-5.0, -1.0, -3.0};
  EXPECT_EQ(report_noisy_max(scores, kInfinity, 1.0, rng), 1u);
}

TEST(ReportNoisyMax, InfiniteEpsilonBreaksTiesByFirstIndex) {
  Rng rng = make_rng(0);
  const std::array<double, 4> scores{0.0, 2.0, 2.0, 1.0};
  EXPECT_EQ(report_noisy_max(scores, kInfinity, 1.0, rng), 1u);
}

TEST(ReportNoisyMax, SingleScoreAlwaysZero) {
  Rng rng = make_rng(1);
  const std::array<double, 1> scores{42.0};
  for (double eps : {0.01, 1.0, kInfinity}) {
    EXPECT_EQ(report_noisy_max(scores, eps, 1.0, rng), 0u);
  }
}

TEST(ReportNoisyMax, EmptyInputThrows) {
  Rng rng = make_rng(1);
  EXPECT_THROW(report_noisy_max(std::span<const double>{}, 1.0, 1.0, rng),
               std::invalid_argument);
}

TEST(ReportNoisyMax, AccuracyNondecreasingInEpsilon) {
  const std::array<double, 2> scores{-1.0, -2.0};
  double previous = 0.0;
  for (double eps : {0.1, 1.0, 10.0}) {
    Rng rng = make_rng(21);
    int correct = 0;
    constexpr int kTrials = 100000;
    for (int t = 0; t < kTrials; ++t) {
      if (report_noisy_max(scores, eps, 1.0, rng) == 0) ++correct;
    }
    const double rate = static_cast<double>(correct) / kTrials;
    EXPECT_GE(rate, previous);
    previous = rate;
  }
  EXPECT_GT(previous, 0.9);
}

TEST(ReportNoisyMax, InvariantUnderConstantShift) {
  const std::vector<double> scores{-3.0, -1.5, -2.0, -1.0};
  std::vector<double> shifted = scores;
  for (double& s : shifted) s += 0.25;
  Rng a = make_rng(4);
  Rng b = make_rng(4);
  for (int t = 0; t < 2000; ++t) {
    EXPECT_EQ(report_noisy_max(scores, 0.8, 1.0, a),
              report_noisy_max(shifted, 0.8, 1.0, b));
  }
}

}  // namespace
}  // namespace dpclip
