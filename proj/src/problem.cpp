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

#include "dpclip/problem.hpp"

namespace dpclip {

Vector project(const Domain& domain, const Vector& z) {
  if (const auto* ball = std::get_if<Ball>(&domain)) {
    if (ball->center.size() != z.size()) {
      throw DimensionError("project: ball center dimension mismatch");
    }
    const Vector offset = z - ball->center;
    const double dist = offset.norm();
    if (dist <= ball->radius) return z;
    return ball->center + offset * (ball->radius / dist);
  }
  return z;
}

double Problem::objective(const Vector& w) const {
  const std::size_t n = num_samples();
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += loss(w, i);
  return acc / static_cast<double>(n);
}

Vector Problem::full_gradient(const Vector& w) const {
  const std::size_t n = num_samples();
  Vector sum = Vector::Zero(dimension());
  for (std::size_t i = 0; i < n; ++i) sum += grad(w, i);
  return sum / static_cast<double>(n);
}

}  // namespace dpclip
