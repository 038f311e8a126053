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

#ifndef DPCLIP_LOSSES_HPP_
#define DPCLIP_LOSSES_HPP_

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "dpclip/dataset.hpp"
#include "dpclip/problem.hpp"

namespace dpclip {

// ---------------------------------------------------------------------------
// Multinomial logistic regression.
//
// The parameter vector w has m * d entries; block j (w.segment(j * d, d)) is
// the weight vector of class j, so logit_j = <w_j, x>.
// ---------------------------------------------------------------------------

namespace internal {

template <typename DerivedW, typename DerivedX>
Eigen::Matrix<typename DerivedW::Scalar, Eigen::Dynamic, 1> logits(
    const Eigen::MatrixBase<DerivedW>& w, const Eigen::MatrixBase<DerivedX>& x) {
  const Index d = x.size();
  if (d == 0 || w.size() % d != 0 || w.size() / d < 2) {
    throw DimensionError("logistic: parameter size must be m * d with m >= 2");
  }
  const Index m = w.size() / d;
  Eigen::Matrix<typename DerivedW::Scalar, Eigen::Dynamic, 1> z(m);
  for (Index j = 0; j < m; ++j) z[j] = w.segment(j * d, d).dot(x);
  return z;
}

inline void check_label(Index m, int y) {
  if (y < 0 || y >= m) throw DimensionError("logistic: label out of range");
}

}  // namespace internal

// Softmax probabilities, stabilized by subtracting the largest logit.
template <typename DerivedW, typename DerivedX>
Eigen::Matrix<typename DerivedW::Scalar, Eigen::Dynamic, 1> softmax_probabilities(
    const Eigen::MatrixBase<DerivedW>& w, const Eigen::MatrixBase<DerivedX>& x) {
  auto z = internal::logits(w, x);
  z.array() -= z.maxCoeff();
  z = z.array().exp().matrix();
  return z / z.sum();
}

// Cross-entropy -log p_y of the softmax predictor via log-sum-exp.
template <typename DerivedW, typename DerivedX>
typename DerivedW::Scalar logistic_loss(const Eigen::MatrixBase<DerivedW>& w,
                                        const Eigen::MatrixBase<DerivedX>& x,
                                        int y) {
  const auto z = internal::logits(w, x);
  internal::check_label(z.size(), y);
  const auto top = z.maxCoeff();
  return top + std::log((z.array() - top).exp().sum()) - z[y];
}

// Block j of the gradient is (p_j - 1{j = y}) * x.
template <typename DerivedW, typename DerivedX>
Eigen::Matrix<typename DerivedW::Scalar, Eigen::Dynamic, 1> logistic_grad(
    const Eigen::MatrixBase<DerivedW>& w, const Eigen::MatrixBase<DerivedX>& x,
    int y) {
  auto p = softmax_probabilities(w, x);
  internal::check_label(p.size(), y);
  p[y] -= 1;
  const Index d = x.size();
  Eigen::Matrix<typename DerivedW::Scalar, Eigen::Dynamic, 1> g(w.size());
  for (Index j = 0; j < p.size(); ++j) g.segment(j * d, d) = p[j] * x;
  return g;
}

// Closed-form gradient norm sqrt(sum_{j != y} p_j^2 + (1 - p_y)^2) * ||x||.
// Never exceeds sqrt(2) * ||x||.
template <typename DerivedP>
typename DerivedP::Scalar logistic_grad_norm_exact(
    const Eigen::MatrixBase<DerivedP>& p, int y,
    typename DerivedP::Scalar x_norm) {
  internal::check_label(p.size(), y);
  using Scalar = typename DerivedP::Scalar;
  const Scalar miss = Scalar(1) - p[y];
  Scalar acc = miss * miss;
  for (Index j = 0; j < p.size(); ++j) {
    if (j != y) acc += p[j] * p[j];
  }
  return std::sqrt(acc) * x_norm;
}

// sqrt(2) * ||(x, 1)|| for a raw feature vector x (bias not yet appended).
template <typename Derived>
typename Derived::Scalar per_sample_lipschitz_logistic(
    const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  return std::sqrt(Scalar(2) * (x.squaredNorm() + Scalar(1)));
}

// Cross-entropy ERM over a dataset. G_i = sqrt(2) * ||x_i|| with x_i the
// stored row (including the bias coordinate when appended); f_i^* = 0.
class LogisticProblem final : public Problem {
 public:
  explicit LogisticProblem(Dataset data);

  std::size_t num_samples() const override { return data_.size(); }
  Index dimension() const override {
    return data_.num_classes * data_.feature_dim();
  }
  double loss(const Vector& w, std::size_t i) const override;
  Vector grad(const Vector& w, std::size_t i) const override;
  double lipschitz(std::size_t i) const override { return lipschitz_[i]; }
  std::optional<double> min_loss(std::size_t) const override { return 0.0; }
  // The softmax Hessian block is bounded by I/2, so f is L-smooth with
  // L = (1/2) * lambda_max(X^T X / n).
  std::optional<double> smoothness() const override { return smoothness_; }

  // Batched over the whole design matrix.
  double objective(const Vector& w) const override;
  Vector full_gradient(const Vector& w) const override;

  const Dataset& data() const { return data_; }
  int predict(const Vector& w, std::size_t i) const;
  // Fraction of samples of `eval` classified correctly by w.
  static double accuracy(const Vector& w, const Dataset& eval);

 private:
  Dataset data_;
  std::vector<double> lipschitz_;
  double smoothness_ = 0.0;
};

// ---------------------------------------------------------------------------
// Weighted distances to anchors: f_i(w) = s_i * ||w - a_i||.
//
// With unit weights this is the geometric-median objective, which is sharp:
// for ||w - w*|| >= D the suboptimality grows at least like ||w - w*|| / 4.
// The weights only rescale G_i = s_i; f_i^* = 0.
// ---------------------------------------------------------------------------
class GeometricMedianProblem final : public Problem {
 public:
  explicit GeometricMedianProblem(std::vector<Vector> anchors,
                                  std::vector<double> weights = {});

  std::size_t num_samples() const override { return anchors_.size(); }
  Index dimension() const override { return anchors_.front().size(); }
  double loss(const Vector& w, std::size_t i) const override;
  // (w - a_i) / ||w - a_i|| scaled by s_i; zero at the anchor.
  Vector grad(const Vector& w, std::size_t i) const override;
  double lipschitz(std::size_t i) const override { return weights_[i]; }
  std::optional<double> min_loss(std::size_t) const override { return 0.0; }

  const std::vector<Vector>& anchors() const { return anchors_; }

  // D = max(2 ||abar - w*||, (4/n) sum_i ||abar - a_i||) where abar is the
  // anchor mean and w* a supplied minimizer estimate.
  double sharpness_radius(const Vector& w_star) const;

 private:
  std::vector<Vector> anchors_;
  std::vector<double> weights_;
};

// ---------------------------------------------------------------------------
// Lower-bound hard instance: l(w, x) = -<w, x> + 2 ||x|| max(||w|| - 1, 0).
// ---------------------------------------------------------------------------

struct ValueAndGradient {
  double value = 0.0;
  Vector gradient;
};

// Value and the subgradient -x + 2 ||x|| 1{||w|| > 1} w / ||w||; the hinge
// term contributes nothing on the unit sphere.
ValueAndGradient lower_bound_loss(const Vector& w, const Vector& x);

// Two-atom distribution Q_v: 0 with probability 1 - p, p^(-1/k) v with
// probability p. v is binary with exactly d/2 ones.
struct QvSpec {
  Vector v;
  double p = 0.25;
  double k = 2.0;

  void validate() const;
  Vector nonzero_atom() const { return std::pow(p, -1.0 / k) * v; }
};

Vector sample_qv(const QvSpec& spec, Rng& rng);

// Uniformly random binary vector with exactly d/2 ones (d even).
Vector random_packing_vector(Index d, Rng& rng);

// f_i(w) = l(w, x_i). G_i = 3 ||x_i||, f_i^* = -||x_i||.
class HardInstanceProblem final : public Problem {
 public:
  explicit HardInstanceProblem(std::vector<Vector> samples);

  std::size_t num_samples() const override { return samples_.size(); }
  Index dimension() const override { return samples_.front().size(); }
  double loss(const Vector& w, std::size_t i) const override;
  Vector grad(const Vector& w, std::size_t i) const override;
  double lipschitz(std::size_t i) const override {
    return 3.0 * samples_[i].norm();
  }
  std::optional<double> min_loss(std::size_t i) const override {
    return -samples_[i].norm();
  }

  const std::vector<Vector>& samples() const { return samples_; }
  Vector sample_mean() const;

 private:
  std::vector<Vector> samples_;
};

}  // namespace dpclip

#endif  // DPCLIP_LOSSES_HPP_
