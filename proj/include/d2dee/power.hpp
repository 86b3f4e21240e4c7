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

#include <vector>

#include <Eigen/Dense>

#include "d2dee/channel.hpp"
#include "d2dee/cubic.hpp"

namespace d2dee {

/// Rate definition used by the optimiser: plain D2D rate, or D2D rate minus the CU rate it destroys.
enum class RateMode { no_cu_loss, cu_loss };

/// Finite stand-in for minus infinity; keeps assignment arithmetic finite.
inline constexpr double kInfeasibleUtility = -1e30;

/// Everything the per-(pair, RB) power problem depends on, for a fixed EE ratio `q_s`.
struct PairRbContext {
  double h_dd = 0;  // pair tx -> pair rx
  double h_cd = 0;  // CU tx -> pair rx
  double h_cb = 0;  // CU tx -> BS
  double h_db = 0;  // pair tx -> BS
  double p_cu_w = 0;
  double n0_w = 0;
  double w_hz = 0;
  double gamma_bps = 0;
  double p_max_w = 0;
  double q_s = 0;  // bits/s per watt

  double interference_w() const { return p_cu_w * h_cd + n0_w; }
  PairGains<double> pair() const { return {h_dd, h_cd, h_db}; }
  CuLink<double> cu() const { return {p_cu_w, h_cb}; }
};

enum class Boundary { interior, clamped_min, clamped_max, infeasible };

struct PowerDecision {
  double power_w = 0;
  double utility = kInfeasibleUtility;  // rate - q_s * power, bits/s
  double rate_bps = 0;                  // rate under the active RateMode
  bool feasible = false;
  Boundary boundary = Boundary::infeasible;
};

/// Penalty weights on the rate floor and the power cap.
struct PenaltyFactors {
  double rate = 1e9;
  double power = 1e9;
};

/// Power at which the D2D rate equals the pair's minimum rate.
double p_min(const PairRbContext& ctx);

/// Penalised objective with the plain D2D rate.
double utility_no_cu_loss(double p_w, const PairRbContext& ctx, const PenaltyFactors& phi = {});
/// Penalised objective with the CU-loss-adjusted rate.
double utility_with_cu_loss(double p_w, const PairRbContext& ctx, const PenaltyFactors& phi = {});
double utility(double p_w, const PairRbContext& ctx, RateMode mode, const PenaltyFactors& phi = {});

/// Rate of the pair at `p_w` under `mode` (no penalties, no power cost).
double mode_rate(double p_w, const PairRbContext& ctx, RateMode mode);

/// Closed-form clamp of the stationary point W/(q ln 2) - I/h_dd onto [p_min, p_max].
PowerDecision optimal_power_no_cu_loss(const PairRbContext& ctx);

/// Derivative of the CU-loss objective (penalties inactive).
double theta_derivative(double p_w, const PairRbContext& ctx);

/// Cubic whose value equals -theta'(p) * (ln 2 / W) * A(p) B(p) C(p), where A, B, C are the
/// three (positive) denominators of theta'. Its real roots are the stationary points.
/// Requires q_s > 0.
CubicCoefficients<double> cubic_coefficients(const PairRbContext& ctx);

/// Best of {stationary points inside [p_min, p_max], p_min, p_max} for the CU-loss objective.
PowerDecision optimal_power_with_cu_loss(const PairRbContext& ctx);

PowerDecision optimal_power(const PairRbContext& ctx, RateMode mode);

PairRbContext make_context(const Scenario& scenario, int pair, int rb, double q_s);

/// RBs whose CU interference at the pair's receiver is at most `tau_w`.
std::vector<int> feasible_rbs(const Scenario& scenario, int pair, double tau_w);

/// Per-(pair, RB) optimal utilities for one EE ratio.
struct UtilityMatrix {
  Eigen::MatrixXd utility;  // N_d x M, kInfeasibleUtility where forbidden
  std::vector<PowerDecision> decisions;  // row-major N_d x M
  int filtered_by_tau = 0;  // entries removed by the interference threshold

  const PowerDecision& decision(int pair, int rb) const {
    return decisions[static_cast<std::size_t>(pair) * utility.cols() + rb];
  }
};

UtilityMatrix build_utility_matrix(const Scenario& scenario, double q_s, RateMode mode, double tau_w);

}  // namespace d2dee
