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

// Command-line driver. Every subcommand accepts --config FILE.json whose keys
// are the long flag names (dashes or underscores); flags given on the command
// line take precedence over the file.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "dpclip/harness.hpp"
#include "json.hpp"

namespace {

using dpclip::harness::ExperimentSpec;
namespace h = dpclip::harness;

// Keys apply to whichever subcommand was selected.
class JsonConfig : public CLI::Config {
 public:
  explicit JsonConfig(const CLI::App* app) : app_(app) {}

  std::string to_config(const CLI::App*, bool, bool, std::string) const override {
    return {};
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    nlohmann::json doc;
    try {
      input >> doc;
    } catch (const nlohmann::json::exception& e) {
      throw CLI::ConversionError(std::string("config: ") + e.what());
    }
    if (!doc.is_object()) throw CLI::ConversionError("config: top level must be an object");
    std::vector<std::string> parents;
    for (const CLI::App* sub : app_->get_subcommands()) parents.push_back(sub->get_name());
    std::vector<CLI::ConfigItem> items;
    for (const auto& [key, value] : doc.items()) {
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = key;
      std::replace(item.name.begin(), item.name.end(), '_', '-');
      if (value.is_array()) {
        for (const auto& element : value) item.inputs.push_back(scalar(element));
      } else {
        item.inputs.push_back(scalar(value));
      }
      items.push_back(std::move(item));
    }
    return items;
  }

 private:
  const CLI::App* app_;

  static std::string scalar(const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number()) return v.dump();
    throw CLI::ConversionError("config: unsupported value " + v.dump());
  }
};

// Parses doubles, accepting "inf".
CLI::Option* add_real(CLI::App* app, const std::string& name, double& target,
                      const std::string& help) {
  return app
      ->add_option_function<std::string>(
          name,
          [&target, name](const std::string& text) {
            if (text == "inf" || text == "Infinity") {
              target = dpclip::kInfinity;
              return;
            }
            std::size_t used = 0;
            try {
              target = std::stod(text, &used);
            } catch (const std::exception&) {
              used = 0;
            }
            if (used == 0 || used != text.size()) {
              throw CLI::ValidationError(name, "not a number: " + text);
            }
          },
          help)
      ->capture_default_str();
}

void add_common(CLI::App* app, ExperimentSpec& spec) {
  app->add_option("--output,-o", spec.output, "CSV output path (stdout when empty)");
  app->add_option("--seeds", spec.seeds, "seed list for repeated runs")
      ->capture_default_str();
  app->add_option("--master-seed", spec.master_seed,
                  "seed for data generation and one-off randomness")
      ->capture_default_str();
  add_real(app, "--epsilon", spec.budget.epsilon, "total privacy epsilon");
  add_real(app, "--delta", spec.budget.delta, "privacy delta");
  add_real(app, "--nu", spec.budget.nu, "accountant constant in the noise variance");
}

void add_data(CLI::App* app, ExperimentSpec& spec) {
  app->add_option("--csv", spec.data.csv_path,
                  "training CSV (features..., label); synthetic data when empty");
  app->add_option("--test-csv", spec.data.test_csv_path, "held-out CSV");
  app->add_flag("--append-bias,!--no-append-bias", spec.data.append_bias,
                "append a constant-1 bias coordinate (default on)");
  add_real(app, "--test-fraction", spec.data.test_fraction,
           "fraction of the training data held out when no test CSV is given");
  app->add_option("--n", spec.data.n, "synthetic sample count")->capture_default_str();
  app->add_option("--d", spec.data.d, "synthetic feature dimension")
      ->capture_default_str();
  app->add_option("--classes", spec.data.num_classes, "synthetic class count")
      ->capture_default_str();
  add_real(app, "--tail-k", spec.data.tail_k,
           "feature-norm tail index of the synthetic generator (inf: unit norms)");
}

void add_training(CLI::App* app, ExperimentSpec& spec) {
  app->add_option("--eta", spec.eta_grid, "learning-rate grid")->capture_default_str();
  app->add_option("--T", spec.T, "iterations (0: derive from epochs or phi)")
      ->capture_default_str();
  add_real(app, "--epochs", spec.epochs, "epochs (T = ceil(epochs n / batch))");
  add_real(app, "--batch", spec.batch, "expected batch size b");
  app->add_flag("--no-noise", spec.no_noise, "disable Gaussian noise");
}

void add_schedule(CLI::App* app, ExperimentSpec& spec) {
  add_real(app, "--k", spec.k, "moment order k");
  add_real(app, "--gamma", spec.gamma, "failure probability gamma in (0, 1]");
  add_real(app, "--C", spec.C, "initial distance bound C");
  app->add_option("--T", spec.T, "iterations (0: ceil(1 / phi^2))")->capture_default_str();
  add_real(app, "--batch", spec.batch, "expected batch size b");
  app->add_flag("--no-noise", spec.no_noise, "disable Gaussian noise");
}

std::ostream& open_output(const std::string& path, std::ofstream& file) {
  if (path.empty()) return std::cout;
  file.open(path, std::ios::binary);
  if (!file) throw h::IoError("cannot open output file " + path);
  return file;
}

void finish(std::ofstream& file, const std::string& path) {
  if (file.is_open()) {
    file.close();
    if (!file) throw h::IoError("failed writing " + path);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differentially private ERM with per-sample clipping"};
  app.require_subcommand(1);
  app.config_formatter(std::make_shared<JsonConfig>(&app));
  app.set_config("--config", "", "JSON file with flag values");
  app.fallthrough();
  app.allow_config_extras(CLI::config_extras_mode::error);

  ExperimentSpec spec;
  std::string cells_output;
  double rnmm_clamp = 0.0;

  auto* sweep = app.add_subcommand("sweep-clip", "clip-norm sweep over an eta grid");
  add_common(sweep, spec);
  add_data(sweep, spec);
  add_training(sweep, spec);
  sweep->add_option("--clip", spec.clip_candidates,
                    "clip-norm candidates: pQ percentiles, positive numbers, inf")
      ->capture_default_str();
  sweep->add_option("--cells-output", cells_output,
                    "CSV of every (tau, eta, seed) metric");

  auto* rnmm = app.add_subcommand("rnmm-pipeline",
                                  "private G_1 estimate, then DP-SGD at tau = G_1");
  add_common(rnmm, spec);
  add_data(rnmm, spec);
  add_training(rnmm, spec);
  add_real(rnmm, "--epsilon-rnmm", spec.epsilon_rnmm,
           "epsilon spent on Report Noisy Max (inf: exact G_1)");
  auto* clamp_opt =
      add_real(rnmm, "--rnmm-clamp", rnmm_clamp, "clamp bound and sensitivity");
  rnmm->add_option("--public-prior", spec.public_prior,
                   "public Lipschitz guesses; 99.9th percentile is the default clamp");

  auto* phi = app.add_subcommand("phi-scaling", "median risk against n");
  add_common(phi, spec);
  add_schedule(phi, spec);
  phi->add_option("--n-list", spec.n_list, "sample counts")->capture_default_str();
  phi->add_option("--d", spec.data.d, "feature dimension")->capture_default_str();
  phi->add_option("--classes", spec.data.num_classes, "class count")
      ->capture_default_str();
  phi->add_flag("--append-bias,!--no-append-bias", spec.data.append_bias,
                "append a bias coordinate (default on)");

  auto* bias = app.add_subcommand("bias-oracle", "clipping-bias bound chain check");
  add_common(bias, spec);
  bias->add_option("--count", spec.count, "random distributions")->capture_default_str();
  bias->add_option("--p", spec.p_list, "moment orders p > 1")->capture_default_str();

  auto* lower = app.add_subcommand("lower-bound-demo", "hard-instance checks");
  add_common(lower, spec);
  add_schedule(lower, spec);
  lower->add_option("--dim", spec.dim, "even dimension")->capture_default_str();
  add_real(lower, "--qv-p", spec.qv_p,
           "atom probability (0: 2 sqrt(d ln(1/delta)) / (n epsilon))");
  lower->add_option("--n", spec.n, "sample count")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::FileError& e) {
    app.exit(e);
    return h::kExitIo;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? h::kExitOk : h::kExitValidation;
  }
  if (clamp_opt->count() > 0) spec.rnmm_clamp = rnmm_clamp;

  try {
    std::ofstream file;
    if (sweep->parsed()) {
      spec.command = "sweep-clip";
      const h::SweepReport report = h::run_sweep_clip(spec);
      report.write_csv(open_output(spec.output, file));
      finish(file, spec.output);
      if (!cells_output.empty()) {
        std::ofstream cells;
        report.write_cells_csv(open_output(cells_output, cells));
        finish(cells, cells_output);
      }
    } else if (rnmm->parsed()) {
      spec.command = "rnmm-pipeline";
      h::run_rnmm_pipeline(spec).write_csv(open_output(spec.output, file));
      finish(file, spec.output);
    } else if (phi->parsed()) {
      spec.command = "phi-scaling";
      h::run_phi_scaling(spec).write_csv(open_output(spec.output, file));
      finish(file, spec.output);
    } else if (bias->parsed()) {
      spec.command = "bias-oracle";
      const h::BiasOracleReport report = h::run_bias_oracle(spec);
      report.write_csv(open_output(spec.output, file));
      finish(file, spec.output);
      if (report.failures > 0) {
        std::cerr << "bias-oracle: " << report.failures << " inequality failures\n";
        return h::kExitOracle;
      }
    } else if (lower->parsed()) {
      spec.command = "lower-bound-demo";
      const h::LowerBoundReport report = h::run_lower_bound_demo(spec);
      report.write_csv(open_output(spec.output, file));
      finish(file, spec.output);
      if (!report.all_pass()) {
        std::cerr << "lower-bound-demo: a numerical check failed\n";
        return h::kExitOracle;
      }
    }
  } catch (const h::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return h::kExitIo;
  } catch (const dpclip::CsvError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return h::kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return h::kExitValidation;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return h::kExitValidation;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << '\n';
    return h::kExitValidation;
  }
  return h::kExitOk;
}
