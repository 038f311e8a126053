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

#include "dpclip/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace dpclip {

void Dataset::validate() const {
  if (labels.empty()) throw DomainError("dataset: no samples");
  if (static_cast<std::size_t>(features.rows()) != labels.size()) {
    throw DimensionError("dataset: feature rows and labels differ in count");
  }
  for (int y : labels) {
    if (y < 0 || y >= num_classes) {
      throw DimensionError("dataset: label " + std::to_string(y) +
                           " outside [0, " + std::to_string(num_classes) + ")");
    }
  }
}

Dataset append_bias(const Dataset& data) {
  Dataset out = data;
  out.features.conservativeResize(Eigen::NoChange, data.features.cols() + 1);
  out.features.col(data.features.cols()).setOnes();
  out.bias_appended = true;
  return out;
}

std::pair<Dataset, Dataset> split_dataset(const Dataset& data,
                                          std::size_t count) {
  if (count == 0 || count >= data.size()) {
    throw DomainError("split_dataset: split point must leave both parts nonempty");
  }
  const Index head = static_cast<Index>(count);
  const Index tail = static_cast<Index>(data.size() - count);
  Dataset first = data;
  Dataset second = data;
  first.features = data.features.topRows(head);
  first.labels.assign(data.labels.begin(), data.labels.begin() + head);
  second.features = data.features.bottomRows(tail);
  second.labels.assign(data.labels.begin() + head, data.labels.end());
  return {std::move(first), std::move(second)};
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) {
    const auto b = field.find_first_not_of(" \t\r");
    const auto e = field.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
  }
  return out;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size() && std::isfinite(out);
}

bool parse_int(const std::string& s, int& out) {
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

Dataset load_csv(const std::string& path, bool add_bias) {
  std::ifstream in(path);
  if (!in) throw CsvError("cannot open " + path);

  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto fields = split_fields(line);
    if (fields.size() < 2) {
      throw CsvError(path + ":" + std::to_string(line_no) +
                     ": need at least one feature and a label");
    }
    std::vector<double> row(fields.size() - 1);
    bool ok = true;
    for (std::size_t j = 0; j + 1 < fields.size() && ok; ++j) {
      ok = parse_double(fields[j], row[j]);
    }
    int label = 0;
    ok = ok && parse_int(fields.back(), label);
    if (!ok) {
      if (rows.empty() && labels.empty() && line_no == 1) continue;  // header
      throw CsvError(path + ":" + std::to_string(line_no) + ": malformed row");
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw CsvError(path + ":" + std::to_string(line_no) +
                     ": inconsistent number of columns");
    }
    if (label < 0) {
      throw CsvError(path + ":" + std::to_string(line_no) + ": negative label");
    }
    rows.push_back(std::move(row));
    labels.push_back(label);
  }
  if (rows.empty()) throw CsvError(path + ": no data rows");

  Dataset data;
  data.features.resize(static_cast<Index>(rows.size()),
                       static_cast<Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      data.features(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    }
  }
  data.labels = std::move(labels);
  data.num_classes = std::max(2, *std::max_element(data.labels.begin(),
                                                   data.labels.end()) + 1);
  data.validate();
  return add_bias ? append_bias(data) : data;
}

Dataset heavy_tailed_logistic_dataset(std::size_t n, Index d, int num_classes,
                                      double tail_k, Rng& rng, bool add_bias) {
  if (!(tail_k > 1.0)) {
    throw DomainError("heavy_tailed_logistic_dataset: tail_k must exceed 1");
  }
  if (n == 0 || d < 1 || num_classes < 2) {
    throw DomainError("heavy_tailed_logistic_dataset: need n, d >= 1 and m >= 2");
  }
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  Matrix planted(num_classes, d);
  for (Index j = 0; j < planted.size(); ++j) planted.data()[j] = normal(rng);

  const double shape = tail_k + 1.0;
  Dataset data;
  data.num_classes = num_classes;
  data.features.resize(static_cast<Index>(n), d);
  data.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    Vector u(d);
    do {
      for (Index j = 0; j < d; ++j) u[j] = normal(rng);
    } while (u.norm() == 0.0);
    u.normalize();
    double r = 1.0;
    if (!std::isinf(tail_k)) {
      // Inverse CDF of Pareto(1, shape); 1 - U lies in (0, 1].
      r = std::pow(1.0 - uniform(rng), -1.0 / shape);
    }
    const Vector x = r * u;
    data.features.row(static_cast<Index>(i)) = x.transpose();
    Index best = 0;
    (planted * x).maxCoeff(&best);
    data.labels[i] = static_cast<int>(best);
  }
  return add_bias ? append_bias(data) : data;
}

}  // namespace dpclip
