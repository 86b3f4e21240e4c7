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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "d2dee/channel.hpp"
#include "d2dee/dinkelbach.hpp"

namespace d2dee {

enum class SweepParam { p_b_over_n0_db, n_d2d, d2d_distance_m, gamma_bps };

std::string to_string(SweepParam param);
SweepParam parse_sweep_param(const std::string& name);

struct Sweep {
  SweepParam param = SweepParam::d2d_distance_m;
  std::vector<double> values;
};

struct ExperimentConfig {
  CellConfig base;
  Sweep sweep;
  int trials = 500;
  std::uint64_t master_seed = 1;
  SolverConfig solver{.policy = AssignmentPolicy::drop_infeasible};
  std::string output_path;
  // Seed depends on the trial only, so every sweep value sees the same drops.
  bool common_random_numbers = true;
  // runtime_ms is wall-clock and breaks byte-identical output; off by default.
  bool record_runtime = false;
  int threads = 0;  // 0: D2D_EE_THREADS or hardware concurrency
};

void validate(const ExperimentConfig& config);

/// Applies one sweep value to a copy of the base cell.
CellConfig apply_sweep_value(const CellConfig& base, SweepParam param, double value);

/// Seed of one trial at one sweep point.
std::uint64_t trial_seed(const ExperimentConfig& config, int sweep_index, int trial);

struct ResultRow {
  SweepParam sweep_param = SweepParam::d2d_distance_m;
  double sweep_value = 0;
  int trial = 0;
  std::uint64_t seed = 0;
  double ee_per_hz = 0;
  int iterations = 0;
  int feasible_pairs = 0;
  double runtime_ms = 0;
  // Not part of the CSV.
  bool converged = false;
  bool infeasible = false;
  int filtered_by_tau = 0;
  int candidate_entries = 0;
};

struct ExperimentResult {
  std::vector<ResultRow> rows;  // ordered by (sweep index, trial)
  std::vector<double> filtered_fraction;  // per sweep value, share of (pair, RB) removed by tau
};

inline constexpr const char* kCsvHeader =
    "sweep_param,sweep_value,trial,seed,ee_per_hz,iterations,feasible_pairs,runtime_ms";

/// Runs every (sweep value, trial); writes the CSV when output_path is set.
ExperimentResult run_experiment(const ExperimentConfig& config);

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows);
void write_csv(const std::string& path, const std::vector<ResultRow>& rows);

struct SummaryRow {
  std::string sweep_param;
  double sweep_value = 0;
  int count = 0;
  double ee_mean = 0;
  double ee_std = 0;
  double iterations_mean = 0;
  double iterations_std = 0;
};

/// Per sweep value mean/std of ee_per_hz and iterations, in first-seen order.
std::vector<SummaryRow> summarize(std::istream& csv);
std::vector<SummaryRow> summarize(const std::string& csv_path);

/// Presets: pb_sweep, iterations, distance, gamma.
ExperimentConfig make_preset(const std::string& name);

/// Flat `key = value` text; `#` starts a comment.
std::map<std::string, std::string> read_key_values(std::istream& in);
std::map<std::string, std::string> read_key_values_file(const std::string& path);
/// Overlays known keys onto `config`; unknown keys or malformed values throw ConfigError.
void apply_key_values(const std::map<std::string, std::string>& kv, ExperimentConfig& config);

/// Thrown on file open/read/write failures.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace d2dee
