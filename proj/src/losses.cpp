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

#include "dpclip/losses.hpp"

#include <algorithm>
#include <numeric>

namespace dpclip {

LogisticProblem::LogisticProblem(Dataset data) : data_(std::move(data)) {
  data_.validate();
  lipschitz_.resize(data_.size());
  for (std::size_t i = 0; i < data_.size(); ++i) {
    lipschitz_[i] = std::sqrt(2.0) * data_.features.row(static_cast<Index>(i)).norm();
  }
  const Matrix gram = data_.features.transpose() * data_.features /
                      static_cast<double>(data_.size());
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
  smoothness_ = 0.5 * eig.eigenvalues().maxCoeff();
}

double LogisticProblem::loss(const Vector& w, std::size_t i) const {
  return logistic_loss(w, data_.features.row(static_cast<Index>(i)).transpose(),
                       data_.labels[i]);
}

Vector LogisticProblem::grad(const Vector& w, std::size_t i) const {
  return logistic_grad(w, data_.features.row(static_cast<Index>(i)).transpose(),
                       data_.labels[i]);
}

namespace {

// Row-major class weights: W(j, :) = w_j.
Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                               Eigen::RowMajor>>
class_weights(const Vector& w, Index m, Index d) {
  if (w.size() != m * d) {
    throw DimensionError("logistic: parameter size must be m * d");
  }
  return {w.data(), m, d};
}

}  // namespace

double LogisticProblem::objective(const Vector& w) const {
  const Index m = data_.num_classes;
  const Matrix logits =
      data_.features * class_weights(w, m, data_.feature_dim()).transpose();
  double acc = 0.0;
  for (Index i = 0; i < logits.rows(); ++i) {
    const double top = logits.row(i).maxCoeff();
    acc += top + std::log((logits.row(i).array() - top).exp().sum()) -
           logits(i, data_.labels[static_cast<std::size_t>(i)]);
  }
  return acc / static_cast<double>(data_.size());
}

Vector LogisticProblem::full_gradient(const Vector& w) const {
  const Index m = data_.num_classes;
  const Index d = data_.feature_dim();
  Matrix residual = data_.features * class_weights(w, m, d).transpose();
  for (Index i = 0; i < residual.rows(); ++i) {
    residual.row(i).array() -= residual.row(i).maxCoeff();
    residual.row(i) = residual.row(i).array().exp().matrix();
    residual.row(i) /= residual.row(i).sum();
    residual(i, data_.labels[static_cast<std::size_t>(i)]) -= 1.0;
  }
  // (m x d) row-major flattening matches the block layout of w.
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>
      grad = residual.transpose() * data_.features /
             static_cast<double>(data_.size());
  return Eigen::Map<const Vector>(grad.data(), m * d);
}

int LogisticProblem::predict(const Vector& w, std::size_t i) const {
  Index best = 0;
  internal::logits(w, data_.features.row(static_cast<Index>(i)).transpose())
      .maxCoeff(&best);
  return static_cast<int>(best);
}

double LogisticProblem::accuracy(const Vector& w, const Dataset& eval) {
  std::size_t hits = 0;
  for (std::size_t i = 0; i < eval.size(); ++i) {
    Index best = 0;
    internal::logits(w, eval.features.row(static_cast<Index>(i)).transpose())
        .maxCoeff(&best);
    if (best == eval.labels[i]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(eval.size());
}

GeometricMedianProblem::GeometricMedianProblem(std::vector<Vector> anchors,
                                               std::vector<double> weights)
    : anchors_(std::move(anchors)), weights_(std::move(weights)) {
  if (anchors_.empty()) {
    throw DomainError("geometric median: need at least one anchor");
  }
  for (const Vector& a : anchors_) {
    if (a.size() != anchors_.front().size() || a.size() == 0) {
      throw DimensionError("geometric median: anchors of mixed dimension");
    }
  }
  if (weights_.empty()) weights_.assign(anchors_.size(), 1.0);
  if (weights_.size() != anchors_.size()) {
    throw DimensionError("geometric median: one weight per anchor required");
  }
  for (double s : weights_) {
    if (!(s > 0.0)) throw DomainError("geometric median: weights must be positive");
  }
}

double GeometricMedianProblem::loss(const Vector& w, std::size_t i) const {
  return weights_[i] * (w - anchors_[i]).norm();
}

Vector GeometricMedianProblem::grad(const Vector& w, std::size_t i) const {
  Vector diff = w - anchors_[i];
  const double dist = diff.norm();
  if (dist == 0.0) return Vector::Zero(w.size());
  return diff * (weights_[i] / dist);
}

double GeometricMedianProblem::sharpness_radius(const Vector& w_star) const {
  Vector mean = Vector::Zero(dimension());
  for (const Vector& a : anchors_) mean += a;
  mean /= static_cast<double>(anchors_.size());
  double spread = 0.0;
  for (const Vector& a : anchors_) spread += (mean - a).norm();
  spread *= 4.0 / static_cast<double>(anchors_.size());
  return std::max(2.0 * (mean - w_star).norm(), spread);
}

ValueAndGradient lower_bound_loss(const Vector& w, const Vector& x) {
  if (w.size() != x.size()) {
    throw DimensionError("lower_bound_loss: dimension mismatch");
  }
  const double w_norm = w.norm();
  const double x_norm = x.norm();
  ValueAndGradient out;
  out.value = -w.dot(x) + 2.0 * x_norm * std::max(w_norm - 1.0, 0.0);
  out.gradient = -x;
  if (w_norm > 1.0) out.gradient += (2.0 * x_norm / w_norm) * w;
  return out;
}

void QvSpec::validate() const {
  if (!(p > 0.0 && p < 0.5)) throw DomainError("Q_v: p must lie in (0, 1/2)");
  if (!(k > 1.0)) throw DomainError("Q_v: k must exceed 1");
  const Index d = v.size();
  if (d == 0 || d % 2 != 0) throw DimensionError("Q_v: dimension must be even");
  Index ones = 0;
  for (Index j = 0; j < d; ++j) {
    if (v[j] == 1.0) {
      ++ones;
    } else if (v[j] != 0.0) {
      throw DomainError("Q_v: v must be binary");
    }
  }
  if (ones != d / 2) throw DomainError("Q_v: v must have exactly d/2 ones");
}

Vector sample_qv(const QvSpec& spec, Rng& rng) {
  std::bernoulli_distribution heads(spec.p);
  if (heads(rng)) return spec.nonzero_atom();
  return Vector::Zero(spec.v.size());
}

Vector random_packing_vector(Index d, Rng& rng) {
  if (d < 2 || d % 2 != 0) {
    throw DimensionError("random_packing_vector: d must be even and positive");
  }
  std::vector<Index> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), Index{0});
  std::shuffle(order.begin(), order.end(), rng);
  Vector v = Vector::Zero(d);
  for (Index j = 0; j < d / 2; ++j) v[order[static_cast<std::size_t>(j)]] = 1.0;
  return v;
}

HardInstanceProblem::HardInstanceProblem(std::vector<Vector> samples)
    : samples_(std::move(samples)) {
  if (samples_.empty()) throw DomainError("hard instance: no samples");
  for (const Vector& x : samples_) {
    if (x.size() != samples_.front().size() || x.size() == 0) {
      throw DimensionError("hard instance: samples of mixed dimension");
    }
  }
}

double HardInstanceProblem::loss(const Vector& w, std::size_t i) const {
  return lower_bound_loss(w, samples_[i]).value;
}

Vector HardInstanceProblem::grad(const Vector& w, std::size_t i) const {
  return lower_bound_loss(w, samples_[i]).gradient;
}

Vector HardInstanceProblem::sample_mean() const {
  Vector mean = Vector::Zero(dimension());
  for (const Vector& x : samples_) mean += x;
  return mean / static_cast<double>(samples_.size());
}

}  // namespace dpclip
