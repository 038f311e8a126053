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

#ifndef DPCLIP_CLIPPING_HPP_
#define DPCLIP_CLIPPING_HPP_

#include <utility>
#include <vector>

#include "dpclip/common.hpp"

namespace dpclip {

// Rescales z onto the ball of radius c when it lies outside:
// clip(z, c) = z * min(1, c / ||z||). The zero vector maps to itself, and
// vectors already inside the ball are returned bit-for-bit unchanged.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> clip(
    const Eigen::MatrixBase<Derived>& z, typename Derived::Scalar c) {
  using Scalar = typename Derived::Scalar;
  if (!(c > Scalar(0))) {
    throw DomainError("clip: clip norm must be positive");
  }
  const Scalar norm = z.norm();
  if (norm <= c) return z;
  return z / (norm / c);
}

// (1/b) * sum_i clip(g_i, tau). The divisor is the expected batch size b,
// not grads.size(); an empty batch yields the zero vector of length `dim`.
Vector clipped_mean(const std::vector<Vector>& grads, double tau, double b,
                    Index dim);

// Finite-support random vector used by the clipping-bias oracles.
class DiscreteVectorDistribution {
 public:
  struct Atom {
    Vector value;
    double probability;
  };

  // Throws DomainError on negative probabilities, a total mass differing
  // from 1 by more than 1e-12, or atoms of mixed dimension.
  explicit DiscreteVectorDistribution(std::vector<Atom> atoms);

  const std::vector<Atom>& atoms() const { return atoms_; }
  Index dimension() const { return atoms_.front().value.size(); }

  Vector mean() const;
  // E ||v||^p.
  double norm_moment(double p) const;
  // P(||v|| >= tau).
  double tail_probability(double tau) const;
  double max_norm() const;

 private:
  std::vector<Atom> atoms_;
};

// ||E[v] - E[clip(v, tau)]|| by enumeration over the atoms.
double clipping_bias_exact(const DiscreteVectorDistribution& dist, double tau);

// Hoelder-type bound on the clipping bias:
// (E||v||^p)^(1/p) * P(||v|| >= tau)^(1 - 1/p) - tau * P(||v|| >= tau).
double bias_bound_lemma(const DiscreteVectorDistribution& dist, double tau,
                        double p);

// Markov-type relaxation of the bound above: E||v||^p / tau^(p - 1).
double bias_bound_corollary(const DiscreteVectorDistribution& dist, double tau,
                            double p);

}  // namespace dpclip

#endif  // DPCLIP_CLIPPING_HPP_
