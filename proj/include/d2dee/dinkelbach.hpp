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

#include <span>
#include <stdexcept>
#include <vector>

#include "d2dee/assignment.hpp"
#include "d2dee/channel.hpp"
#include "d2dee/power.hpp"

namespace d2dee {

struct SolverConfig {
  double epsilon = 1e-4;
  int max_iterations = 50;
  RateMode mode = RateMode::no_cu_loss;
  AssignmentPolicy policy = AssignmentPolicy::strict;
  // Compare |F| / W against epsilon (per-Hz units) instead of |F| itself.
  bool per_hz_tolerance = true;
};

void validate(const SolverConfig& config);

/// Sum rate over total (radiated + circuit) power.
double compute_ee(std::span<const double> rates_bps, std::span<const double> powers_w, double p_c_w);

/// Solution of the subtractive-form problem for one EE ratio.
struct InnerSolution {
  double q_s = 0;
  double f_value = 0;
  Assignment assignment;
  std::vector<double> powers_w;  // per pair, 0 when unassigned
  std::vector<double> rates_bps; // per pair under the solver's rate mode
  double sum_rate_bps = 0;
  double sum_power_w = 0;
  int filtered_by_tau = 0;
};

InnerSolution evaluate_f(const Scenario& scenario, double q_s, const SolverConfig& config);

struct IterationRecord {
  double q_s = 0;
  double f_value = 0;
  Assignment assignment;
  std::vector<double> powers_w;
  double sum_rate_bps = 0;
  double sum_power_w = 0;
  bool negative_net_rate = false;  // some pair's net rate fell below zero
};

struct DinkelbachTrace {
  std::vector<IterationRecord> iterations;
};

struct SolveResult {
  double ee = 0;  // bits/s per watt
  Assignment assignment;
  std::vector<double> powers_w;
  std::vector<double> rates_bps;
  DinkelbachTrace trace;
  bool converged = false;
  int filtered_by_tau = 0;

  int iterations() const { return static_cast<int>(trace.iterations.size()); }
};

/// Thrown when max_iterations is reached; carries the last iterate.
class NonConvergenceError : public std::runtime_error {
 public:
  explicit NonConvergenceError(SolveResult last)
      : std::runtime_error("dinkelbach: iteration cap reached before |F| < epsilon"), last_(std::move(last)) {}
  const SolveResult& last() const { return last_; }

 private:
  SolveResult last_;
};

/// Dinkelbach iteration from q = 0 until |F(q)| < epsilon.
SolveResult solve(const Scenario& scenario, const SolverConfig& config = {});

struct BruteForceResult {
  double ee = 0;              // best EE over the power grid
  double ee_upper_bound = 0;  // no feasible point can exceed this
  Assignment assignment;
  std::vector<double> powers_w;
};

/// Exhaustive search over injective assignments and per-pair power grids on
/// [p_min, p_max]. Also bounds the continuous optimum from above by
/// evaluating, per grid cell, the best rate at the cell's upper end against
/// the power at its lower end. Limited to N_d <= 3, M <= 4, grid <= 200.
BruteForceResult joint_brute_force(const Scenario& scenario, const SolverConfig& config, int power_grid_points);

}  // namespace d2dee
