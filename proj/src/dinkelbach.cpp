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

#include "d2dee/dinkelbach.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

namespace d2dee {

void validate(const SolverConfig& config) {
  if (!(config.epsilon > 0)) throw ConfigError("solver epsilon must be positive");
  if (config.max_iterations < 1) throw ConfigError("solver max_iterations must be at least 1");
}

double compute_ee(std::span<const double> rates_bps, std::span<const double> powers_w, double p_c_w) {
  const double rate = std::accumulate(rates_bps.begin(), rates_bps.end(), 0.0);
  const double power = std::accumulate(powers_w.begin(), powers_w.end(), 0.0) + p_c_w;
  if (!(power > 0)) throw DomainError("compute_ee: total power must be positive");
  return rate / power;
}

InnerSolution evaluate_f(const Scenario& scenario, double q_s, const SolverConfig& config) {
  const auto matrix = build_utility_matrix(scenario, q_s, config.mode, scenario.tau_w());
  InnerSolution out;
  out.q_s = q_s;
  out.filtered_by_tau = matrix.filtered_by_tau;
  out.assignment = max_weight_assignment(matrix.utility, config.policy);

  const int n = scenario.n_pairs();
  out.powers_w.assign(n, 0.0);
  out.rates_bps.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    const int rb = out.assignment.rb_of_pair[i];
    if (rb == kUnassigned) continue;
    const auto& decision = matrix.decision(i, rb);
    out.powers_w[i] = decision.power_w;
    out.rates_bps[i] = decision.rate_bps;
  }
  out.sum_rate_bps = std::accumulate(out.rates_bps.begin(), out.rates_bps.end(), 0.0);
  out.sum_power_w = std::accumulate(out.powers_w.begin(), out.powers_w.end(), 0.0);
  out.f_value = out.assignment.total_utility - q_s * scenario.config.p_c_w;
  return out;
}

SolveResult solve(const Scenario& scenario, const SolverConfig& config) {
  validate(config);
  const double norm = config.per_hz_tolerance ? scenario.config.rb_bandwidth_hz : 1.0;
  const double p_c = scenario.config.p_c_w;

  SolveResult result;
  double q = 0.0;
  for (int s = 1; s <= config.max_iterations; ++s) {
    auto inner = evaluate_f(scenario, q, config);
    const double next_q = compute_ee(inner.rates_bps, inner.powers_w, p_c);

    IterationRecord record;
    record.q_s = q;
    record.f_value = inner.f_value;
    record.assignment = inner.assignment;
    record.powers_w = inner.powers_w;
    record.sum_rate_bps = inner.sum_rate_bps;
    record.sum_power_w = inner.sum_power_w;
    for (double r : inner.rates_bps) record.negative_net_rate = record.negative_net_rate || r < 0.0;
    result.trace.iterations.push_back(std::move(record));

    result.ee = next_q;
    result.assignment = std::move(inner.assignment);
    result.powers_w = std::move(inner.powers_w);
    result.rates_bps = std::move(inner.rates_bps);
    result.filtered_by_tau = inner.filtered_by_tau;
    if (std::abs(inner.f_value) / norm < config.epsilon) {
      result.converged = true;
      return result;
    }
    q = next_q;
  }
  throw NonConvergenceError(std::move(result));
}

namespace {

struct PowerGrid {
  std::vector<double> power;     // grid points
  std::vector<double> rate;      // rate at each point
  std::vector<double> rate_top;  // per cell: rate upper bound over [p_g, p_g+1]
};

PowerGrid make_grid(const PairRbContext& ctx, RateMode mode, int points) {
  const double lo = p_min(ctx);
  const double hi = ctx.p_max_w;
  PowerGrid g;
  for (int k = 0; k < points; ++k) {
    const double p = points == 1 ? lo : lo + (hi - lo) * k / (points - 1);
    g.power.push_back(p);
    g.rate.push_back(mode_rate(p, ctx, mode));
  }
  for (int k = 0; k + 1 < points; ++k) {
    const double lower = g.power[k], upper = g.power[k + 1];
    double top = d2d_rate(upper, ctx.h_dd, ctx.p_cu_w, ctx.h_cd, ctx.n0_w, ctx.w_hz);
    if (mode == RateMode::cu_loss) top -= cu_rate_loss(lower, ctx.h_db, ctx.cu(), ctx.n0_w, ctx.w_hz);
    g.rate_top.push_back(top);
  }
  return g;
}

}  // namespace

BruteForceResult joint_brute_force(const Scenario& scenario, const SolverConfig& config, int power_grid_points) {
  const int n = scenario.n_pairs();
  const int m = scenario.n_rbs();
  if (n > 3 || m > 4) throw SizeError("joint_brute_force: at most 3 pairs and 4 RBs");
  if (power_grid_points < 1 || power_grid_points > 200) throw SizeError("joint_brute_force: grid must have 1..200 points");
  if (n > m) throw SizeError("joint_brute_force: more pairs than RBs");

  const double p_c = scenario.config.p_c_w;
  const double tau = scenario.tau_w();
  std::vector<std::vector<std::optional<PowerGrid>>> grids(n, std::vector<std::optional<PowerGrid>>(m));
  for (int i = 0; i < n; ++i) {
    for (int rb : feasible_rbs(scenario, i, tau)) {
      const auto ctx = make_context(scenario, i, rb, 0.0);
      if (p_min(ctx) <= ctx.p_max_w) grids[i][rb] = make_grid(ctx, config.mode, power_grid_points);
    }
  }

  BruteForceResult best;
  best.ee = -std::numeric_limits<double>::infinity();
  best.ee_upper_bound = -std::numeric_limits<double>::infinity();
  bool any = false;

  std::vector<int> rbs(n, 0);
  std::vector<char> taken(m, 0);
  std::vector<int> point(n, 0);
  std::vector<const PowerGrid*> chosen(n, nullptr);

  // Enumerates power indices for the current assignment.
  const auto powers_lb = [&](auto&& self, int i, double rate, double power) -> void {
    if (i == n) {
      const double ee = rate / (power + p_c);
      if (ee > best.ee) {
        best.ee = ee;
        best.assignment.rb_of_pair = rbs;
        best.powers_w.assign(n, 0.0);
        for (int k = 0; k < n; ++k) best.powers_w[k] = chosen[k]->power[point[k]];
      }
      return;
    }
    const auto& g = *chosen[i];
    for (std::size_t k = 0; k < g.power.size(); ++k) {
      point[i] = static_cast<int>(k);
      self(self, i + 1, rate + g.rate[k], power + g.power[k]);
    }
  };
  // A negative numerator bound is divided by the largest denominator in the box.
  const auto powers_ub = [&](auto&& self, int i, double rate, double power_lo, double power_hi) -> void {
    if (i == n) {
      const double bound = rate >= 0.0 ? rate / (power_lo + p_c) : rate / (power_hi + p_c);
      best.ee_upper_bound = std::max(best.ee_upper_bound, bound);
      return;
    }
    const auto& g = *chosen[i];
    if (g.rate_top.empty()) {  // single point: the bound is the point itself
      self(self, i + 1, rate + g.rate[0], power_lo + g.power[0], power_hi + g.power[0]);
      return;
    }
    for (std::size_t k = 0; k < g.rate_top.size(); ++k)
      self(self, i + 1, rate + g.rate_top[k], power_lo + g.power[k], power_hi + g.power[k + 1]);
  };
  const auto assign = [&](auto&& self, int i) -> void {
    if (i == n) {
      any = true;
      powers_lb(powers_lb, 0, 0.0, 0.0);
      powers_ub(powers_ub, 0, 0.0, 0.0, 0.0);
      return;
    }
    for (int rb = 0; rb < m; ++rb) {
      if (taken[rb] || !grids[i][rb]) continue;
      taken[rb] = 1;
      rbs[i] = rb;
      chosen[i] = &*grids[i][rb];
      self(self, i + 1);
      taken[rb] = 0;
    }
  };
  assign(assign, 0);
  if (!any) throw InfeasibleError("joint_brute_force: no feasible assignment");

  std::vector<double> rates(n);
  for (int i = 0; i < n; ++i)
    rates[i] = mode_rate(best.powers_w[i], make_context(scenario, i, best.assignment.rb_of_pair[i], 0.0), config.mode);
  best.assignment.total_utility = std::accumulate(rates.begin(), rates.end(), 0.0);
  return best;
}

}  // namespace d2dee
