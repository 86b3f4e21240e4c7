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

#include "d2dee/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

namespace d2dee {

std::string to_string(SweepParam param) {
  switch (param) {
    case SweepParam::p_b_over_n0_db: return "p_b_over_n0_db";
    case SweepParam::n_d2d: return "n_d2d";
    case SweepParam::d2d_distance_m: return "d2d_distance_m";
    case SweepParam::gamma_bps: return "gamma_bps";
  }
  return "unknown";
}

SweepParam parse_sweep_param(const std::string& name) {
  for (auto p : {SweepParam::p_b_over_n0_db, SweepParam::n_d2d, SweepParam::d2d_distance_m, SweepParam::gamma_bps})
    if (to_string(p) == name) return p;
  throw ConfigError("unknown sweep parameter '" + name + "'");
}

CellConfig apply_sweep_value(const CellConfig& base, SweepParam param, double value) {
  CellConfig cell = base;
  switch (param) {
    case SweepParam::p_b_over_n0_db: cell.p_b_over_n0_db = value; break;
    case SweepParam::n_d2d:
      if (value != std::floor(value)) throw ConfigError("n_d2d sweep values must be integers");
      cell.n_d2d = static_cast<int>(value);
      break;
    case SweepParam::d2d_distance_m: cell.d2d_distance_m = value; break;
    case SweepParam::gamma_bps: cell.gamma_bps = value; break;
  }
  return cell;
}

void validate(const ExperimentConfig& config) {
  if (config.trials < 1) throw ConfigError("trials must be at least 1");
  if (config.sweep.values.empty()) throw ConfigError("sweep needs at least one value");
  if (config.threads < 0) throw ConfigError("threads must be non-negative");
  validate(config.solver);
  for (double v : config.sweep.values) validate(apply_sweep_value(config.base, config.sweep.param, v));
}

std::uint64_t trial_seed(const ExperimentConfig& config, int sweep_index, int trial) {
  const auto sweep = config.common_random_numbers ? 0u : static_cast<std::uint64_t>(sweep_index) + 1;
  return mix_seed(config.master_seed, sweep, static_cast<std::uint64_t>(trial));
}

namespace {

int worker_count(const ExperimentConfig& config, std::size_t jobs) {
  int n = config.threads;
  if (n == 0) n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* env = std::getenv("D2D_EE_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) n = std::min(n, cap);
  }
  return std::max(1, std::min<int>(n, static_cast<int>(jobs)));
}

ResultRow run_trial(const ExperimentConfig& config, int sweep_index, int trial) {
  const double value = config.sweep.values[sweep_index];
  ResultRow row;
  row.sweep_param = config.sweep.param;
  row.sweep_value = value;
  row.trial = trial;
  row.seed = trial_seed(config, sweep_index, trial);

  const auto start = std::chrono::steady_clock::now();
  const auto cell = apply_sweep_value(config.base, config.sweep.param, value);
  const auto scenario = generate_scenario(cell, row.seed);
  row.candidate_entries = scenario.n_pairs() * scenario.n_rbs();

  const auto record = [&](const SolveResult& r) {
    row.ee_per_hz = r.ee / cell.rb_bandwidth_hz;
    row.iterations = r.iterations();
    row.feasible_pairs = r.assignment.assigned_count();
    row.converged = r.converged;
    row.filtered_by_tau = r.filtered_by_tau;
  };
  try {
    record(solve(scenario, config.solver));
  } catch (const NonConvergenceError& e) {
    record(e.last());
  } catch (const InfeasibleError&) {
    row.infeasible = true;
    row.filtered_by_tau = build_utility_matrix(scenario, 0.0, config.solver.mode, scenario.tau_w()).filtered_by_tau;
  }
  if (config.record_runtime)
    row.runtime_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return row;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
  validate(config);
  const int n_values = static_cast<int>(config.sweep.values.size());
  const std::size_t jobs = static_cast<std::size_t>(n_values) * config.trials;

  ExperimentResult result;
  result.rows.resize(jobs);
  std::atomic<std::size_t> next{0};
  const auto work = [&] {
    for (std::size_t job = next++; job < jobs; job = next++) {
      const int sweep_index = static_cast<int>(job / config.trials);
      const int trial = static_cast<int>(job % config.trials);
      result.rows[job] = run_trial(config, sweep_index, trial);
    }
  };
  const int workers = worker_count(config, jobs);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(work);
  }

  result.filtered_fraction.assign(n_values, 0.0);
  for (int v = 0; v < n_values; ++v) {
    long filtered = 0, total = 0;
    for (int t = 0; t < config.trials; ++t) {
      const auto& row = result.rows[static_cast<std::size_t>(v) * config.trials + t];
      filtered += row.filtered_by_tau;
      total += row.candidate_entries;
    }
    result.filtered_fraction[v] = total > 0 ? static_cast<double>(filtered) / total : 0.0;
  }
  if (!config.output_path.empty()) write_csv(config.output_path, result.rows);
  return result;
}

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << kCsvHeader << '\n';
  for (const auto& r : rows) {
    out << to_string(r.sweep_param) << ',' << format_double(r.sweep_value) << ',' << r.trial << ',' << r.seed << ','
        << format_double(r.ee_per_hz) << ',' << r.iterations << ',' << r.feasible_pairs << ','
        << format_double(r.runtime_ms) << '\n';
  }
}

void write_csv(const std::string& path, const std::vector<ResultRow>& rows) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_csv(out, rows);
  out.flush();
  if (!out) throw IoError("failed writing '" + path + "'");
}

std::vector<SummaryRow> summarize(std::istream& csv) {
  std::string line;
  if (!std::getline(csv, line)) throw ConfigError("summarize: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) throw ConfigError("summarize: unexpected header '" + line + "'");

  struct Acc {
    std::string param;
    double value;
    std::vector<double> ee, iterations;
  };
  std::vector<Acc> groups;
  int line_no = 1;
  while (std::getline(csv, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    for (std::string f; std::getline(ss, f, ',');) fields.push_back(f);
    if (fields.size() != 8) throw ConfigError("summarize: line " + std::to_string(line_no) + " has wrong field count");
    double value, ee, iterations;
    try {
      std::size_t used = 0;
      value = std::stod(fields[1], &used);
      if (used != fields[1].size()) throw std::invalid_argument("trailing");
      ee = std::stod(fields[4], &used);
      if (used != fields[4].size()) throw std::invalid_argument("trailing");
      iterations = std::stod(fields[5], &used);
      if (used != fields[5].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ConfigError("summarize: malformed number on line " + std::to_string(line_no));
    }
    auto it = std::find_if(groups.begin(), groups.end(),
                           [&](const Acc& a) { return a.param == fields[0] && a.value == value; });
    if (it == groups.end()) {
      groups.push_back({fields[0], value, {}, {}});
      it = std::prev(groups.end());
    }
    it->ee.push_back(ee);
    it->iterations.push_back(iterations);
  }

  const auto mean_std = [](const std::vector<double>& xs) {
    double mean = 0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double ss = 0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    const double sd = xs.size() > 1 ? std::sqrt(ss / static_cast<double>(xs.size() - 1)) : 0.0;
    return std::pair{mean, sd};
  };
  std::vector<SummaryRow> out;
  for (const auto& g : groups) {
    SummaryRow s;
    s.sweep_param = g.param;
    s.sweep_value = g.value;
    s.count = static_cast<int>(g.ee.size());
    std::tie(s.ee_mean, s.ee_std) = mean_std(g.ee);
    std::tie(s.iterations_mean, s.iterations_std) = mean_std(g.iterations);
    out.push_back(s);
  }
  return out;
}

std::vector<SummaryRow> summarize(const std::string& csv_path) {
  std::ifstream in(csv_path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + csv_path + "'");
  return summarize(in);
}

}  // namespace d2dee
