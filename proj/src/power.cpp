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

#include "d2dee/power.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace d2dee {

namespace {

constexpr double kLn2 = std::numbers::ln2;

PowerDecision infeasible_decision() { return {}; }

PowerDecision decide(double p, Boundary boundary, const PairRbContext& ctx, RateMode mode) {
  PowerDecision out;
  out.power_w = p;
  out.rate_bps = mode_rate(p, ctx, mode);
  out.utility = out.rate_bps - ctx.q_s * p;
  out.feasible = true;
  out.boundary = boundary;
  return out;
}

double penalties(double p_w, const PairRbContext& ctx, const PenaltyFactors& phi) {
  const double sinr = p_w * ctx.h_dd / ctx.interference_w();
  const double rate_slack = 1.0 + sinr - std::exp2(ctx.gamma_bps / ctx.w_hz);
  return phi.rate * std::min(0.0, rate_slack) + phi.power * std::min(0.0, ctx.p_max_w - p_w);
}

// Same polynomial as cubic_coefficients without the q_s > 0 guard; at q_s = 0 it
// degenerates to a quadratic, which real_roots handles.
CubicCoefficients<double> stationarity_polynomial(const PairRbContext& ctx) {
  const double k = ctx.q_s * kLn2 / ctx.w_hz;
  const double n0 = ctx.n0_w;
  const double interference = ctx.interference_w();
  const double cu_signal = ctx.p_cu_w * ctx.h_cb;
  const double hd = ctx.h_dd;
  const double hb = ctx.h_db;
  // A = hd p + I, B = hb p + S + N0, C = hb p + N0;
  // polynomial = k A B C - hd B C + S hb A.
  CubicCoefficients<double> poly;
  poly.a = k * hd * hb * hb;
  poly.b = k * (hd * hb * (cu_signal + 2.0 * n0) + interference * hb * hb) - hd * hb * hb;
  poly.c = k * (hd * n0 * (cu_signal + n0) + interference * hb * (cu_signal + 2.0 * n0)) -
           2.0 * hd * hb * n0;
  poly.d = k * interference * n0 * (cu_signal + n0) - hd * n0 * (cu_signal + n0) +
           cu_signal * hb * interference;
  return poly;
}

double theta_second_derivative(double p_w, const PairRbContext& ctx) {
  const double cu_signal = ctx.p_cu_w * ctx.h_cb;
  const double a = p_w * ctx.h_dd + ctx.interference_w();
  const double b = p_w * ctx.h_db + cu_signal + ctx.n0_w;
  const double c = p_w * ctx.h_db + ctx.n0_w;
  return ctx.w_hz / kLn2 *
         (-ctx.h_dd * ctx.h_dd / (a * a) + cu_signal * ctx.h_db * ctx.h_db * (b + c) / (b * b * c * c));
}

// Newton refinement on theta' itself; the polynomial root can be ill-conditioned
// when the coefficients span many decades.
double refine_stationary_point(double p, const PairRbContext& ctx) {
  double slope = theta_derivative(p, ctx);
  for (int it = 0; it < 4 && slope != 0.0; ++it) {
    const double curvature = theta_second_derivative(p, ctx);
    if (curvature == 0.0) break;
    const double next = p - slope / curvature;
    if (!(next > 0.0)) break;
    const double next_slope = theta_derivative(next, ctx);
    if (!(std::abs(next_slope) < std::abs(slope))) break;
    p = next;
    slope = next_slope;
  }
  return p;
}

}  // namespace

double p_min(const PairRbContext& ctx) {
  return std::expm1(ctx.gamma_bps / ctx.w_hz * kLn2) * ctx.interference_w() / ctx.h_dd;
}

double mode_rate(double p_w, const PairRbContext& ctx, RateMode mode) {
  if (mode == RateMode::no_cu_loss)
    return d2d_rate(p_w, ctx.h_dd, ctx.p_cu_w, ctx.h_cd, ctx.n0_w, ctx.w_hz);
  return net_rate_with_cu_loss(p_w, ctx.pair(), ctx.cu(), ctx.n0_w, ctx.w_hz);
}

double utility_no_cu_loss(double p_w, const PairRbContext& ctx, const PenaltyFactors& phi) {
  return mode_rate(p_w, ctx, RateMode::no_cu_loss) - ctx.q_s * p_w + penalties(p_w, ctx, phi);
}

double utility_with_cu_loss(double p_w, const PairRbContext& ctx, const PenaltyFactors& phi) {
  return mode_rate(p_w, ctx, RateMode::cu_loss) - ctx.q_s * p_w + penalties(p_w, ctx, phi);
}

double utility(double p_w, const PairRbContext& ctx, RateMode mode, const PenaltyFactors& phi) {
  return mode == RateMode::no_cu_loss ? utility_no_cu_loss(p_w, ctx, phi)
                                      : utility_with_cu_loss(p_w, ctx, phi);
}

PowerDecision optimal_power_no_cu_loss(const PairRbContext& ctx) {
  const double lo = p_min(ctx);
  const double hi = ctx.p_max_w;
  if (lo > hi) return infeasible_decision();
  // q_s = 0: the objective is the rate itself, increasing in p.
  if (ctx.q_s <= 0.0) return decide(hi, Boundary::clamped_max, ctx, RateMode::no_cu_loss);

  const double stationary = ctx.w_hz / (ctx.q_s * kLn2) - ctx.interference_w() / ctx.h_dd;
  if (stationary <= lo) return decide(lo, Boundary::clamped_min, ctx, RateMode::no_cu_loss);
  if (stationary >= hi) return decide(hi, Boundary::clamped_max, ctx, RateMode::no_cu_loss);
  return decide(stationary, Boundary::interior, ctx, RateMode::no_cu_loss);
}

double theta_derivative(double p_w, const PairRbContext& ctx) {
  const double cu_signal = ctx.p_cu_w * ctx.h_cb;
  const double a = p_w * ctx.h_dd + ctx.interference_w();
  const double b = p_w * ctx.h_db + cu_signal + ctx.n0_w;
  const double c = p_w * ctx.h_db + ctx.n0_w;
  if (!(a > 0.0) || !(b > 0.0) || !(c > 0.0)) throw DomainError("theta_derivative: non-positive denominator");
  return ctx.w_hz * ctx.h_dd / (kLn2 * a) - ctx.w_hz * cu_signal * ctx.h_db / (kLn2 * b * c) - ctx.q_s;
}

CubicCoefficients<double> cubic_coefficients(const PairRbContext& ctx) {
  if (!(ctx.q_s > 0.0)) throw DomainError("cubic_coefficients: q_s must be positive");
  return stationarity_polynomial(ctx);
}

PowerDecision optimal_power_with_cu_loss(const PairRbContext& ctx) {
  const double lo = p_min(ctx);
  const double hi = ctx.p_max_w;
  if (lo > hi) return infeasible_decision();

  std::vector<double> interior;
  const auto poly = stationarity_polynomial(ctx);
  if (poly.max_abs() > 0.0) {
    for (double r : real_roots(poly))
      if (r > lo && r < hi) interior.push_back(std::clamp(refine_stationary_point(r, ctx), lo, hi));
  }

  PowerDecision best = decide(lo, Boundary::clamped_min, ctx, RateMode::cu_loss);
  for (double r : interior) {
    auto candidate = decide(r, Boundary::interior, ctx, RateMode::cu_loss);
    if (candidate.utility > best.utility) best = candidate;
  }
  auto top = decide(hi, Boundary::clamped_max, ctx, RateMode::cu_loss);
  if (top.utility > best.utility) best = top;
  return best;
}

PowerDecision optimal_power(const PairRbContext& ctx, RateMode mode) {
  return mode == RateMode::no_cu_loss ? optimal_power_no_cu_loss(ctx) : optimal_power_with_cu_loss(ctx);
}

PairRbContext make_context(const Scenario& s, int pair, int rb, double q_s) {
  const int cu = s.cu_of_rb[rb];
  PairRbContext ctx;
  ctx.h_dd = s.gain_dd(pair);
  ctx.h_cd = s.gain_cd(cu, pair);
  ctx.h_cb = s.gain_cb(cu);
  ctx.h_db = s.gain_db(pair);
  ctx.p_cu_w = s.cu_tx_power_w(cu);
  ctx.n0_w = s.noise_w();
  ctx.w_hz = s.config.rb_bandwidth_hz;
  ctx.gamma_bps = s.config.gamma_bps;
  ctx.p_max_w = s.config.p_max_w;
  ctx.q_s = q_s;
  return ctx;
}

std::vector<int> feasible_rbs(const Scenario& s, int pair, double tau_w) {
  std::vector<int> out;
  for (int rb = 0; rb < s.n_rbs(); ++rb) {
    const int cu = s.cu_of_rb[rb];
    if (s.cu_tx_power_w(cu) * s.gain_cd(cu, pair) <= tau_w) out.push_back(rb);
  }
  return out;
}

UtilityMatrix build_utility_matrix(const Scenario& s, double q_s, RateMode mode, double tau_w) {
  const int n = s.n_pairs();
  const int m = s.n_rbs();
  UtilityMatrix out;
  out.utility = Eigen::MatrixXd::Constant(n, m, kInfeasibleUtility);
  out.decisions.assign(static_cast<std::size_t>(n) * m, PowerDecision{});
  for (int i = 0; i < n; ++i) {
    std::vector<bool> allowed(m, false);
    for (int rb : feasible_rbs(s, i, tau_w)) allowed[rb] = true;
    for (int j = 0; j < m; ++j) {
      if (!allowed[j]) {
        ++out.filtered_by_tau;
        continue;
      }
      const auto decision = optimal_power(make_context(s, i, j, q_s), mode);
      out.decisions[static_cast<std::size_t>(i) * m + j] = decision;
      if (decision.feasible) out.utility(i, j) = decision.utility;
    }
  }
  return out;
}

}  // namespace d2dee
