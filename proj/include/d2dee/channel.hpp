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

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "d2dee/errors.hpp"

namespace d2dee {

// ---------------------------------------------------------------------------
// Link budget primitives. All quantities are linear (watts, linear gains) and
// templated on the scalar so they compose with Eigen expressions and with
// long double oracles in the tests.
// ---------------------------------------------------------------------------

/// Distance-based pathloss gain kappa * d^-chi.
template <typename Scalar>
Scalar pathloss_gain(Scalar distance_m, Scalar kappa, Scalar chi) {
  if (!(distance_m > Scalar(0))) throw DomainError("pathloss_gain: distance must be positive");
  return kappa * std::pow(distance_m, -chi);
}

/// Transmit power that makes a CU at `distance_m` arrive at the BS with `target_w`
/// under pathloss alone.
template <typename Scalar>
Scalar cu_power_from_target(Scalar target_w, Scalar distance_m, Scalar kappa, Scalar chi) {
  if (!(target_w > Scalar(0)) || !(kappa > Scalar(0)))
    throw DomainError("cu_power_from_target: target power and kappa must be positive");
  return target_w / pathloss_gain(distance_m, kappa, chi);
}

/// Noise power over `bandwidth_hz` for a PSD given in dBm/Hz.
inline double noise_power_w(double psd_dbm_per_hz, double bandwidth_hz) {
  return std::pow(10.0, (psd_dbm_per_hz + 10.0 * std::log10(bandwidth_hz) - 30.0) / 10.0);
}

/// Shannon rate of a D2D link, W log2(1 + p h_dd / (p_cu h_cd + n0)).
template <typename Scalar>
Scalar d2d_rate(Scalar p_w, Scalar h_dd, Scalar p_cu_w, Scalar h_cd, Scalar n0_w, Scalar w_hz) {
  const Scalar interference = p_cu_w * h_cd + n0_w;
  if (!(interference > Scalar(0))) throw DomainError("d2d_rate: zero interference-plus-noise");
  return w_hz * std::log1p(p_w * h_dd / interference) / std::numbers::ln2_v<Scalar>;
}

/// Gains seen by one D2D pair when it reuses the RB of one CU.
template <typename Scalar>
struct PairGains {
  Scalar direct;   // tx -> rx of the pair
  Scalar from_cu;  // CU tx -> pair rx
  Scalar to_bs;    // pair tx -> BS
};

/// The CU whose RB is reused.
template <typename Scalar>
struct CuLink {
  Scalar power_w;
  Scalar to_bs;
};

/// Rate the CU loses at the BS because the pair transmits with `p_w` on its RB.
template <typename Scalar>
Scalar cu_rate_loss(Scalar p_w, Scalar h_db, const CuLink<Scalar>& cu, Scalar n0_w, Scalar w_hz) {
  if (!(n0_w > Scalar(0))) throw DomainError("cu_rate_loss: noise power must be positive");
  const Scalar signal = cu.power_w * cu.to_bs;
  return w_hz / std::numbers::ln2_v<Scalar> *
         (std::log1p(signal / n0_w) - std::log1p(signal / (p_w * h_db + n0_w)));
}

/// D2D rate net of the CU rate it destroys.
template <typename Scalar>
Scalar net_rate_with_cu_loss(Scalar p_w, const PairGains<Scalar>& pair, const CuLink<Scalar>& cu,
                             Scalar n0_w, Scalar w_hz) {
  return d2d_rate(p_w, pair.direct, cu.power_w, pair.from_cu, n0_w, w_hz) -
         cu_rate_loss(p_w, pair.to_bs, cu, n0_w, w_hz);
}

// ---------------------------------------------------------------------------
// Cell drops
// ---------------------------------------------------------------------------

struct CellConfig {
  double cell_radius_m = 500.0;
  double kappa = 1e-2;
  double chi = 4.0;
  double shadowing_sigma_db = 8.0;
  double noise_psd_dbm_per_hz = -174.0;
  double rb_bandwidth_hz = 180'000.0;
  int n_cu = 16;
  int n_rb = 16;
  int n_d2d = 8;
  double p_max_w = 0.1;
  double p_b_over_n0_db = 30.0;
  std::optional<double> tau_w;  // unset: 100 x noise power
  double gamma_bps = 0.0;
  double p_c_w = 20.0;
  double d2d_distance_m = 20.0;
  // Near-field guard: sampled link distances are floored here.
  double min_distance_m = 1.0;
};

/// Throws ConfigError naming the first violated invariant.
void validate(const CellConfig& config);

double noise_power_w(const CellConfig& config);
double effective_tau_w(const CellConfig& config);
/// Common received power of every CU at the BS.
double target_cu_power_at_bs_w(const CellConfig& config);

/// One random drop. Index conventions: CU k owns RB k; gain_cd(k, i) is CU k -> rx of pair i.
struct Scenario {
  CellConfig config;
  std::uint64_t seed = 0;

  Eigen::Matrix2Xd cu_positions;
  Eigen::Matrix2Xd d2d_tx_positions;
  Eigen::Matrix2Xd d2d_rx_positions;

  Eigen::VectorXd cu_tx_power_w;  // N_c
  Eigen::VectorXd gain_dd;        // N_d
  Eigen::MatrixXd gain_cd;        // N_c x N_d
  Eigen::VectorXd gain_cb;        // N_c
  Eigen::VectorXd gain_db;        // N_d
  std::vector<int> rb_of_cu;      // identity
  std::vector<int> cu_of_rb;

  int n_pairs() const { return static_cast<int>(gain_dd.size()); }
  int n_rbs() const { return static_cast<int>(cu_of_rb.size()); }
  double noise_w() const { return noise_power_w(config); }
  double tau_w() const { return effective_tau_w(config); }

  PairGains<double> pair_gains(int pair, int rb) const {
    const int cu = cu_of_rb[rb];
    return {gain_dd(pair), gain_cd(cu, pair), gain_db(pair)};
  }
  CuLink<double> cu_link(int rb) const {
    const int cu = cu_of_rb[rb];
    return {cu_tx_power_w(cu), gain_cb(cu)};
  }
};

/// Deterministic in (config, seed): identical inputs give bit-identical scenarios.
Scenario generate_scenario(const CellConfig& config, std::uint64_t seed);

/// SplitMix64-style mixing of a master seed with stream indices.
std::uint64_t mix_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0);

}  // namespace d2dee
