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

#ifndef DPCLIP_HARNESS_HPP_
#define DPCLIP_HARNESS_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dpclip/dataset.hpp"
#include "dpclip/privacy.hpp"

namespace dpclip::harness {

// Process exit codes of the command-line driver.
enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 1,
  kExitOracle = 2,
  kExitIo = 3,
};

class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Where the training data comes from: a CSV file, or the heavy-tailed
// planted generator when csv_path is empty.
struct DataSource {
  std::string csv_path;
  std::string test_csv_path;
  bool append_bias = true;
  // Held-out fraction carved from the end of the training data when no test
  // file is given. 0 disables the split.
  double test_fraction = 0.0;

  std::size_t n = 2000;
  Index d = 20;
  int num_classes = 3;
  double tail_k = 4.0;
};

// Every knob of every command. Each command reads the fields it needs.
struct ExperimentSpec {
  std::string command;
  DataSource data;
  PrivacyBudget budget{2.0, 1e-5, 1.0};

  // Seeds for repeated runs; master_seed drives data generation and any
  // one-off randomness.
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4};
  std::uint64_t master_seed = 42;

  // sweep-clip / rnmm-pipeline
  // Tokens: "pQ" (Q-th percentile of the Lipschitz profile), "inf"
  // (no clipping, needs no_noise), or a positive number.
  std::vector<std::string> clip_candidates{"p0", "p10", "p20", "p40", "p80",
                                           "p100"};
  std::vector<double> eta_grid{0.001, 0.003, 0.01, 0.03, 0.1, 0.3, 1.0};
  // T resolution order: T > 0, else epochs > 0 (T = ceil(epochs n / b)),
  // else T = ceil(1 / (3 phi^2)).
  std::size_t T = 0;
  double epochs = 0.0;
  double batch = 100.0;
  bool no_noise = false;

  // rnmm-pipeline: epsilon spent on the private G_1 estimate; the rest of
  // budget.epsilon goes to DP-SGD. kInfinity selects G_1 exactly.
  double epsilon_rnmm = 0.3;
  std::optional<double> rnmm_clamp;
  // Public guesses of Lipschitz constants; their 99.9th percentile is the
  // clamp when rnmm_clamp is unset.
  std::vector<double> public_prior;

  // phi-scaling / lower-bound-demo
  std::vector<std::size_t> n_list{500, 2000, 8000};
  double k = 2.0;
  double gamma = 0.5;
  double C = 1.0;

  // bias-oracle
  std::size_t count = 200;
  std::vector<double> p_list{1.5, 2.0, 3.0};

  // lower-bound-demo
  Index dim = 2;
  // Q_v atom probability; 0 derives 2 sqrt(d ln(1/delta)) / (n epsilon).
  double qv_p = 0.0;
  std::size_t n = 1000;

  std::string output;

  // Throws ValidationError describing the first invalid field.
  void validate() const;
};

// ---------------------------------------------------------------------------
// sweep-clip
// ---------------------------------------------------------------------------

struct SweepCell {
  double tau = 0.0;
  double eta = 0.0;
  std::uint64_t seed = 0;
  double metric = 0.0;
};

struct SweepRow {
  double tau = 0.0;
  std::string tau_kind;
  double eta_best = 0.0;
  double mean_metric = 0.0;
  double std_metric = 0.0;
};

struct SweepReport {
  // "test_accuracy" (higher is better) or "train_suboptimality" (lower).
  std::string metric_name;
  std::size_t T = 0;
  double f_star = 0.0;
  std::vector<SweepCell> cells;
  std::vector<SweepRow> rows;

  // Header: tau,tau_kind,eta_best,mean_metric,std_metric
  void write_csv(std::ostream& out) const;
  // One record per (tau, eta, seed). Header: tau,eta,seed,metric
  void write_cells_csv(std::ostream& out) const;
};

SweepReport run_sweep_clip(const ExperimentSpec& spec);

// ---------------------------------------------------------------------------
// rnmm-pipeline
// ---------------------------------------------------------------------------

struct RnmmReport {
  double tau_selected = 0.0;
  double tau_oracle = 0.0;
  double epsilon_rnmm = 0.0;
  double epsilon_dpsgd = 0.0;
  double metric_with = 0.0;
  double metric_without = 0.0;
  std::string metric_name;

  // Header: tau_selected,tau_oracle,eps_rnmm,eps_dpsgd,metric_with,
  // metric_without
  void write_csv(std::ostream& out) const;
};

RnmmReport run_rnmm_pipeline(const ExperimentSpec& spec);

// ---------------------------------------------------------------------------
// phi-scaling
// ---------------------------------------------------------------------------

struct PhiScalingRow {
  std::size_t n = 0;
  double phi = 0.0;
  double k = 0.0;
  double median_risk = 0.0;
  std::size_t T = 0;
  double tau = 0.0;
  double eta = 0.0;
};

struct PhiScalingReport {
  std::vector<PhiScalingRow> rows;

  // Header: n,phi,k,median_risk
  void write_csv(std::ostream& out) const;
};

PhiScalingReport run_phi_scaling(const ExperimentSpec& spec);

// ---------------------------------------------------------------------------
// bias-oracle
// ---------------------------------------------------------------------------

struct BiasOracleRow {
  std::size_t instance = 0;
  double tau = 0.0;
  double p = 0.0;
  double exact_bias = 0.0;
  double lemma_bound = 0.0;
  double corollary_bound = 0.0;
  bool pass = true;
};

struct BiasOracleReport {
  std::vector<BiasOracleRow> rows;
  std::size_t failures = 0;

  // Header: instance,tau,p,exact_bias,lemma_bound,corollary_bound,
  // lemma_margin,corollary_margin,pass
  void write_csv(std::ostream& out) const;
};

BiasOracleReport run_bias_oracle(const ExperimentSpec& spec);

// ---------------------------------------------------------------------------
// lower-bound-demo
// ---------------------------------------------------------------------------

struct CheckRow {
  std::string check;
  double value = 0.0;
  double reference = 0.0;
  // Informational rows always pass.
  bool pass = true;
};

struct LowerBoundReport {
  bool degenerate = false;
  std::vector<CheckRow> rows;

  bool all_pass() const;
  // Header: check,value,reference,pass
  void write_csv(std::ostream& out) const;
};

LowerBoundReport run_lower_bound_demo(const ExperimentSpec& spec);

// ---------------------------------------------------------------------------
// Shared helpers.
// ---------------------------------------------------------------------------

// Parses a clip-norm token against a sorted Lipschitz profile. Returns the
// value and writes its kind ("pQ", "abs" or "inf").
double resolve_clip_token(const std::string& token,
                          const std::vector<double>& sorted_profile,
                          std::string& kind);

// Shortest round-trippable decimal for CSV cells.
std::string format_number(double value);

}  // namespace dpclip::harness

#endif  // DPCLIP_HARNESS_HPP_
