// Copyright 2026 The d2d-ee Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Monte-Carlo driver: runs a seeded sweep and writes one CSV row per trial.
//
//   d2d_ee_sim --experiment distance --trials 500 --out distance.csv
//   d2d_ee_sim --config my.cfg --mode cu-loss
//   d2d_ee_sim summarize distance.csv

#include <cstdio>
#include <iostream>

#include "CLI11.hpp"
#include "d2dee/experiment.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

void print_summary(const std::vector<d2dee::SummaryRow>& rows, std::ostream& out) {
  out << "sweep_param,sweep_value,count,ee_per_hz_mean,ee_per_hz_std,iterations_mean,iterations_std\n";
  for (const auto& r : rows) {
    char line[256];
    std::snprintf(line, sizeof line, "%s,%.12g,%d,%.12g,%.12g,%.12g,%.12g\n", r.sweep_param.c_str(), r.sweep_value,
                  r.count, r.ee_mean, r.ee_std, r.iterations_mean, r.iterations_std);
    out << line;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy-efficient D2D power control and RB assignment simulator"};
  app.require_subcommand(0, 1);

  std::string config_path;
  std::string experiment = "distance";
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
  std::string mode;
  std::string out_path;
  std::optional<int> threads;
  bool timing = false;
  app.add_option("--config", config_path, "Key-value config file");
  app.add_option("--experiment", experiment, "Preset sweep")
      ->check(CLI::IsMember({"pb_sweep", "iterations", "distance", "gamma"}));
  app.add_option("--trials", trials, "Trials per sweep value");
  app.add_option("--seed", seed, "Master seed");
  app.add_option("--mode", mode, "Rate mode")->check(CLI::IsMember({"no-cu-loss", "cu-loss"}));
  app.add_option("--out", out_path, "CSV output path (stdout when omitted)");
  app.add_option("--threads", threads, "Worker threads (capped by D2D_EE_THREADS)");
  app.add_flag("--timing", timing, "Record wall-clock runtime_ms (output no longer reproducible)");

  auto* summarize_cmd = app.add_subcommand("summarize", "Aggregate a result CSV per sweep value");
  std::string csv_path;
  summarize_cmd->add_option("csv", csv_path, "Result CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*summarize_cmd) {
      print_summary(d2dee::summarize(csv_path), std::cout);
      return 0;
    }

    auto config = d2dee::make_preset(experiment);
    if (!config_path.empty()) d2dee::apply_key_values(d2dee::read_key_values_file(config_path), config);
    if (trials) config.trials = *trials;
    if (seed) config.master_seed = *seed;
    if (!mode.empty()) d2dee::apply_key_values({{"mode", mode}}, config);
    if (!out_path.empty()) config.output_path = out_path;
    if (threads) config.threads = *threads;
    if (timing) config.record_runtime = true;

    const auto result = d2dee::run_experiment(config);
    if (config.output_path.empty()) d2dee::write_csv(std::cout, result.rows);

    int unconverged = 0, infeasible = 0;
    for (const auto& row : result.rows) {
      unconverged += !row.converged && !row.infeasible;
      infeasible += row.infeasible;
    }
    for (std::size_t v = 0; v < config.sweep.values.size(); ++v)
      std::fprintf(stderr, "%s=%g: fraction of (pair, RB) entries filtered by tau = %.4f\n",
                   d2dee::to_string(config.sweep.param).c_str(), config.sweep.values[v], result.filtered_fraction[v]);
    std::fprintf(stderr, "%zu rows, %d not converged, %d infeasible\n", result.rows.size(), unconverged, infeasible);
    return 0;
  } catch (const d2dee::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const d2dee::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
