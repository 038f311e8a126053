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

#include "dpclip/clipping.hpp"

#include <algorithm>
#include <cmath>

namespace dpclip {

Vector clipped_mean(const std::vector<Vector>& grads, double tau, double b,
                    Index dim) {
  if (!(b > 0.0)) {
    throw DomainError("clipped_mean: expected batch size must be positive");
  }
  Vector sum = Vector::Zero(dim);
  for (const Vector& g : grads) {
    if (g.size() != dim) {
      throw DimensionError("clipped_mean: gradient dimension mismatch");
    }
    sum += clip(g, tau);
  }
  return sum / b;
}

DiscreteVectorDistribution::DiscreteVectorDistribution(std::vector<Atom> atoms)
    : atoms_(std::move(atoms)) {
  if (atoms_.empty()) {
    throw DomainError("discrete distribution: no atoms");
  }
  double total = 0.0;
  for (const Atom& a : atoms_) {
    if (!(a.probability >= 0.0)) {
      throw DomainError("discrete distribution: negative probability");
    }
    if (a.value.size() != atoms_.front().value.size()) {
      throw DimensionError("discrete distribution: atoms of mixed dimension");
    }
    total += a.probability;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw DomainError("discrete distribution: probabilities do not sum to 1");
  }
}

Vector DiscreteVectorDistribution::mean() const {
  Vector m = Vector::Zero(dimension());
  for (const Atom& a : atoms_) m += a.probability * a.value;
  return m;
}

double DiscreteVectorDistribution::norm_moment(double p) const {
  double acc = 0.0;
  for (const Atom& a : atoms_) acc += a.probability * std::pow(a.value.norm(), p);
  return acc;
}

double DiscreteVectorDistribution::tail_probability(double tau) const {
  double acc = 0.0;
  for (const Atom& a : atoms_) {
    if (a.value.norm() >= tau) acc += a.probability;
  }
  return acc;
}

double DiscreteVectorDistribution::max_norm() const {
  double m = 0.0;
  for (const Atom& a : atoms_) m = std::max(m, a.value.norm());
  return m;
}

double clipping_bias_exact(const DiscreteVectorDistribution& dist, double tau) {
  // Accumulate E[v - clip(v)] directly; atoms inside the ball contribute
  // exactly zero, which keeps the tau >= max-norm case at exactly 0.
  Vector diff = Vector::Zero(dist.dimension());
  for (const auto& a : dist.atoms()) {
    const double norm = a.value.norm();
    if (norm > tau) diff += a.probability * (1.0 - tau / norm) * a.value;
  }
  return diff.norm();
}

double bias_bound_lemma(const DiscreteVectorDistribution& dist, double tau,
                        double p) {
  if (!(p > 1.0)) throw DomainError("bias_bound_lemma: p must exceed 1");
  if (!(tau > 0.0)) throw DomainError("bias_bound_lemma: tau must be positive");
  const double tail = dist.tail_probability(tau);
  if (tail == 0.0) return 0.0;
  // (E||v||^p)^(1/p) P^(1-1/p); a single p-th root when the product is
  // representable, which keeps equality cases exact.
  const double moment = dist.norm_moment(p);
  const double product = moment * std::pow(tail, p - 1.0);
  const double head = std::isnormal(product)
                          ? std::pow(product, 1.0 / p)
                          : std::pow(moment, 1.0 / p) * std::pow(tail, 1.0 - 1.0 / p);
  const double bound = head - tau * tail;
  return std::max(bound, 0.0);
}

double bias_bound_corollary(const DiscreteVectorDistribution& dist, double tau,
                            double p) {
  if (!(p > 1.0)) throw DomainError("bias_bound_corollary: p must exceed 1");
  if (!(tau > 0.0)) {
    throw DomainError("bias_bound_corollary: tau must be positive");
  }
  return dist.norm_moment(p) / std::pow(tau, p - 1.0);
}

}  // namespace dpclip
