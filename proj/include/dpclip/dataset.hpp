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

#ifndef DPCLIP_DATASET_HPP_
#define DPCLIP_DATASET_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "dpclip/common.hpp"

namespace dpclip {

// n labelled feature vectors, one per row of `features`. When
// `bias_appended` is set the last feature column is the constant 1.
struct Dataset {
  Matrix features;
  std::vector<int> labels;
  int num_classes = 2;
  bool bias_appended = false;

  std::size_t size() const { return labels.size(); }
  Index feature_dim() const { return features.cols(); }

  // Throws DimensionError on row/label count mismatch or labels outside
  // [0, num_classes), DomainError when empty.
  void validate() const;
};

// Returns a copy with a trailing column of ones.
Dataset append_bias(const Dataset& data);

// First `count` rows and the remainder, in order.
std::pair<Dataset, Dataset> split_dataset(const Dataset& data,
                                          std::size_t count);

class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Rows of d floats followed by an integer label. A first line that does not
// parse as numbers is treated as a header. num_classes is max label + 1.
// Throws CsvError on I/O failure or malformed rows.
Dataset load_csv(const std::string& path, bool add_bias);

// Synthetic multiclass data with heavy-tailed feature norms: x = r * u with u
// uniform on the unit sphere and r ~ Pareto(scale 1, shape tail_k + 1), so
// E[r^tail_k] = tail_k + 1 while r is unbounded. tail_k = kInfinity gives
// r = 1. Labels follow a planted noiseless linear rule argmax_j <W*_j, x>,
// which makes the data linearly separable.
Dataset heavy_tailed_logistic_dataset(std::size_t n, Index d, int num_classes,
                                      double tail_k, Rng& rng,
                                      bool add_bias = true);

}  // namespace dpclip

#endif  // DPCLIP_DATASET_HPP_
