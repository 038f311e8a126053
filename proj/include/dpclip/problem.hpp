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

#ifndef DPCLIP_PROBLEM_HPP_
#define DPCLIP_PROBLEM_HPP_

#include <cstddef>
#include <optional>
#include <variant>

#include "dpclip/common.hpp"

namespace dpclip {

struct Unconstrained {};

// Closed Euclidean ball {w : ||w - center|| <= radius}.
struct Ball {
  Vector center;
  double radius = 1.0;
};

using Domain = std::variant<Unconstrained, Ball>;

// Euclidean projection onto the domain; the identity when unconstrained.
Vector project(const Domain& domain, const Vector& z);

// Finite-sum objective f(w) = (1/n) sum_i f_i(w) together with the per-sample
// quantities DP-SGD and its analysis need. Implementations are immutable
// after construction, so concurrent evaluation is safe.
class Problem {
 public:
  virtual ~Problem() = default;

  virtual std::size_t num_samples() const = 0;
  virtual Index dimension() const = 0;

  virtual double loss(const Vector& w, std::size_t i) const = 0;
  // A (sub)gradient of f_i at w.
  virtual Vector grad(const Vector& w, std::size_t i) const = 0;
  // G_i with ||grad(w, i)|| <= G_i for every w in the domain.
  virtual double lipschitz(std::size_t i) const = 0;
  // f_i^* = min_w f_i(w), when known in closed form.
  virtual std::optional<double> min_loss(std::size_t /*i*/) const {
    return std::nullopt;
  }
  virtual std::optional<double> smoothness() const { return std::nullopt; }

  const Domain& domain() const { return domain_; }
  void set_domain(Domain domain) { domain_ = std::move(domain); }

  // Mean loss. Overridable by vectorized implementations.
  virtual double objective(const Vector& w) const;
  // Mean (sub)gradient; the default sums per-sample gradients in index order
  // and divides by n.
  virtual Vector full_gradient(const Vector& w) const;

 private:
  Domain domain_ = Unconstrained{};
};

}  // namespace dpclip

#endif  // DPCLIP_PROBLEM_HPP_
