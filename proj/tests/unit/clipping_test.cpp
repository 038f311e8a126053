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

#include "dpclip/clipping.hpp"

namespace dpclip {
namespace {

using Atom = DiscreteVectorDistribution::Atom;

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

DiscreteVectorDistribution two_atom() {
  return DiscreteVectorDistribution({{vec({0.0}), 0.5}, {vec({10.0}), 0.5}});
}

// Independent oracle: enumerate clip over the support by hand.
double bias_oracle(const std::vector<Atom>& atoms, double tau) {
  const Index d = atoms.front().value.size();
  Vector mean = Vector::Zero(d);
  Vector clipped = Vector::Zero(d);
  for (const Atom& a : atoms) {
    mean += a.probability * a.value;
    const double norm = a.value.norm();
    const double scale = norm > tau ? tau / norm : 1.0;
    clipped += a.probability * scale * a.value;
  }
  return (mean - clipped).norm();
}

std::vector<Atom> random_atoms(Rng& rng) {
  std::uniform_int_distribution<int> count(1, 6);
  std::uniform_int_distribution<int> dim(1, 4);
  std::normal_distribution<double> normal;
  std::exponential_distribution<double> weight(1.0);
  const int m = count(rng);
  const Index d = dim(rng);
  std::vector<Atom> atoms;
  double total = 0.0;
  for (int a = 0; a < m; ++a) {
    Vector v(d);
    for (Index j = 0; j < d; ++j) v[j] = normal(rng);
    v *= std::exp(normal(rng));
    const double w = weight(rng);
    atoms.push_back({v, w});
    total += w;
  }
  double mass = 0.0;
  for (std::size_t a = 0; a + 1 < atoms.size(); ++a) {
    atoms[a].probability /= total;
    mass += atoms[a].probability;
  }
  atoms.back().probability = 1.0 - mass;
  return atoms;
}

TEST(Clip, ScalesDownToNorm) {
  const Vector out = clip(vec({3.0, 4.0}), 1.0);
  EXPECT_EQ(out[0], 0.6);
  EXPECT_EQ(out[1], 0.8);
}

TEST(Clip, IdentityInsideBall) {
  const Vector z = vec({1.0, 0.0});
  EXPECT_EQ(clip(z, 2.0), z);
}

TEST(Clip, ZeroVectorStaysZero) {
  EXPECT_TRUE(clip(Vector::Zero(3).eval(), 1.0).isZero(0.0));
}

TEST(Clip, RejectsNonPositiveNorm) {
  EXPECT_THROW(clip(vec({1.0}), 0.0), DomainError);
  EXPECT_THROW(clip(vec({1.0}), -2.0), DomainError);
}

TEST(Clip, WorksOnFixedSizeAndFloat) {
  const Eigen::Vector2f z(3.0f, 4.0f);
  const Eigen::VectorXf out = clip(z, 2.5f);
  EXPECT_FLOAT_EQ(out.norm(), 2.5f);
}

TEST(Clip, NormIsMinAndDirectionPreserved) {
  Rng rng = make_rng(17);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> c_dist(0.01, 5.0);
  for (int t = 0; t < 1000; ++t) {
    Vector z(1 + t % 5);
    for (Index j = 0; j < z.size(); ++j) z[j] = 3.0 * normal(rng);
    const double c = c_dist(rng);
    const Vector out = clip(z, c);
    EXPECT_NEAR(out.norm(), std::min(z.norm(), c), 1e-12 * std::max(1.0, c));
    EXPECT_NEAR(out.dot(z), out.norm() * z.norm(), 1e-10 * z.squaredNorm());
  }
}

TEST(Clip, PositivelyHomogeneous) {
  Rng rng = make_rng(23);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> pos(0.05, 20.0);
  for (int t = 0; t < 1000; ++t) {
    Vector z(1 + t % 4);
    for (Index j = 0; j < z.size(); ++j) z[j] = normal(rng);
    const double c = pos(rng);
    const double lambda = pos(rng);
    const Vector lhs = clip((lambda * z).eval(), lambda * c);
    const Vector rhs = lambda * clip(z, c);
    EXPECT_LE((lhs - rhs).norm(), 1e-12 * std::max(1.0, rhs.norm()));
  }
}

TEST(ClippedMean, ClipsEachThenDividesByB) {
  const Vector m = clipped_mean({vec({2.0, 0.0}), vec({0.0, 2.0})}, 1.0, 2.0, 2);
  EXPECT_DOUBLE_EQ(m[0], 0.5);
  EXPECT_DOUBLE_EQ(m[1], 0.5);
}

TEST(ClippedMean, EmptyListIsZero) {
  const Vector m = clipped_mean({}, 1.0, 5.0, 3);
  EXPECT_EQ(m.size(), 3);
  EXPECT_TRUE(m.isZero(0.0));
}

TEST(ClippedMean, NoClippingIsIdentityMean) {
  EXPECT_EQ(clipped_mean({vec({3.0, 4.0})}, 10.0, 1.0, 2), vec({3.0, 4.0}));
}

TEST(ClippedMean, UsesExpectedBatchSizeAsDivisor) {
  const Vector m = clipped_mean({vec({1.0}), vec({1.0})}, 5.0, 4.0, 1);
  EXPECT_DOUBLE_EQ(m[0], 0.5);
}

TEST(DiscreteDistribution, ValidatesInput) {
  EXPECT_THROW(DiscreteVectorDistribution({{vec({1.0}), 0.7}}), DomainError);
  EXPECT_THROW(
      DiscreteVectorDistribution({{vec({1.0}), 1.2}, {vec({1.0}), -0.2}}),
      DomainError);
  EXPECT_THROW(
      DiscreteVectorDistribution({{vec({1.0}), 0.5}, {vec({1.0, 2.0}), 0.5}}),
      std::exception);
}

TEST(DiscreteDistribution, Moments) {
  const auto dist = two_atom();
  EXPECT_DOUBLE_EQ(dist.mean()[0], 5.0);
  EXPECT_DOUBLE_EQ(dist.norm_moment(2.0), 50.0);
  EXPECT_DOUBLE_EQ(dist.tail_probability(1.0), 0.5);
  EXPECT_DOUBLE_EQ(dist.tail_probability(10.0), 0.5);
  EXPECT_DOUBLE_EQ(dist.max_norm(), 10.0);
}

TEST(ClippingBias, TwoAtomInstance) {
  const auto dist = two_atom();
  EXPECT_EQ(clipping_bias_exact(dist, 1.0), 4.5);
  EXPECT_EQ(bias_bound_lemma(dist, 1.0, 2.0), 4.5);
  EXPECT_EQ(bias_bound_corollary(dist, 1.0, 2.0), 50.0);
}

TEST(ClippingBias, VanishesAboveSupport) {
  const auto dist = two_atom();
  EXPECT_EQ(clipping_bias_exact(dist, 10.0), 0.0);
  EXPECT_EQ(clipping_bias_exact(dist, 25.0), 0.0);
  EXPECT_EQ(bias_bound_lemma(dist, 10.5, 2.0), 0.0);
}

TEST(ClippingBias, SingleAtomClosedForm) {
  const Vector v = vec({1.0, -2.0, 2.0});
  const DiscreteVectorDistribution dist({{v, 1.0}});
  for (double tau : {0.5, 1.0, 2.9, 3.0, 4.0}) {
    EXPECT_NEAR(clipping_bias_exact(dist, tau),
                v.norm() * std::max(0.0, 1.0 - tau / v.norm()), 1e-14);
  }
}

TEST(ClippingBias, CorollaryVanishesAsTauGrows) {
  const auto dist = two_atom();
  EXPECT_LT(bias_bound_corollary(dist, 1e8, 2.0), 1e-6);
  const DiscreteVectorDistribution zeros({{Vector::Zero(2), 1.0}});
  EXPECT_EQ(bias_bound_corollary(zeros, 1.0, 1.5), 0.0);
  EXPECT_EQ(clipping_bias_exact(zeros, 1.0), 0.0);
}

TEST(ClippingBias, LemmaBoundApproachesSupremumTermForLargeP) {
  // (E||v||^p)^(1/p) P^(1-1/p) -> max_norm * P on a bounded support.
  Rng rng = make_rng(31);
  for (int t = 0; t < 100; ++t) {
    auto atoms = random_atoms(rng);
    double top = 0.0;
    for (const Atom& a : atoms) top = std::max(top, a.value.norm());
    for (Atom& a : atoms) a.value /= top;
    const DiscreteVectorDistribution dist(atoms);
    const double tau = 0.3 * dist.max_norm();
    const double tail = dist.tail_probability(tau);
    const double limit = (dist.max_norm() - tau) * tail;
    EXPECT_NEAR(bias_bound_lemma(dist, tau, 2000.0), limit,
                0.01 * dist.max_norm() * tail + 1e-12);
  }
}

TEST(ClippingBias, MatchesEnumerationOracle) {
  Rng rng = make_rng(37);
  for (int t = 0; t < 300; ++t) {
    const auto atoms = random_atoms(rng);
    const DiscreteVectorDistribution dist(atoms);
    for (double f : {0.1, 0.5, 0.99, 1.2}) {
      const double tau = f * dist.max_norm() + 1e-12;
      EXPECT_NEAR(clipping_bias_exact(dist, tau), bias_oracle(atoms, tau),
                  1e-12 * std::max(1.0, dist.max_norm()));
    }
  }
}

TEST(ClippingBias, ChainHoldsOnRandomInstances) {
  Rng rng = make_rng(41);
  for (int t = 0; t < 250; ++t) {
    const DiscreteVectorDistribution dist(random_atoms(rng));
    for (double f : {0.05, 0.2, 0.5, 0.9, 1.0, 1.5}) {
      const double tau = f * std::max(dist.max_norm(), 1e-3);
      const double exact = clipping_bias_exact(dist, tau);
      for (double p : {1.5, 2.0, 3.0}) {
        const double lemma = bias_bound_lemma(dist, tau, p);
        const double corollary = bias_bound_corollary(dist, tau, p);
        EXPECT_LE(exact, lemma + 1e-9 * std::max(1.0, lemma));
        EXPECT_LE(lemma, corollary + 1e-9 * std::max(1.0, corollary));
      }
    }
  }
}

TEST(ClippingBias, NonincreasingInTauForAlignedAtoms) {
  // Every clipped contribution shrinks toward the same direction.
  Rng rng = make_rng(43);
  for (int t = 0; t < 100; ++t) {
    auto atoms = random_atoms(rng);
    Vector u = atoms.front().value;
    if (u.norm() == 0.0) u = Vector::Ones(u.size());
    u.normalize();
    for (Atom& a : atoms) a.value = a.value.norm() * u;
    const DiscreteVectorDistribution dist(atoms);
    double previous = kInfinity;
    for (int g = 1; g <= 40; ++g) {
      const double tau = dist.max_norm() * g / 30.0 + 1e-9;
      const double b = clipping_bias_exact(dist, tau);
      EXPECT_LE(b, previous + 1e-12);
      previous = b;
    }
  }
}

TEST(ClippingBias, CanGrowWithTauForOpposingAtoms) {
  // Clipping both atoms cancels their bias; once the short one stops being
  // clipped only the long one contributes.
  const DiscreteVectorDistribution dist({{vec({4.0}), 0.25}, {vec({-2.0}), 0.75}});
  EXPECT_EQ(clipping_bias_exact(dist, 1.0), 0.0);
  EXPECT_EQ(clipping_bias_exact(dist, 2.0), 0.5);
}

}  // namespace
}  // namespace dpclip
