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

#include "d2dee/channel.hpp"

#include <random>
#include <string>

namespace d2dee {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw ConfigError(std::string("invalid cell config: ") + what);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

class DropSampler {
 public:
  explicit DropSampler(std::uint64_t seed) : engine_(seed) {}

  Eigen::Vector2d uniform_in_disc(double radius) {
    const double r = radius * std::sqrt(unit_(engine_));
    const double phi = 2.0 * std::numbers::pi * unit_(engine_);
    return {r * std::cos(phi), r * std::sin(phi)};
  }

  double angle() { return 2.0 * std::numbers::pi * unit_(engine_); }

  /// Multiplicative lognormal shadowing factor.
  double shadowing(double sigma_db) { return std::pow(10.0, sigma_db * normal_(engine_) / 10.0); }

 private:
  std::mt19937_64 engine_;
  std::uniform_real_distribution<double> unit_{0.0, 1.0};
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace

void validate(const CellConfig& c) {
  require(c.cell_radius_m > 0, "cell_radius_m must be positive");
  require(c.kappa > 0, "kappa must be positive");
  require(c.chi >= 2, "chi must be at least 2");
  require(c.shadowing_sigma_db >= 0, "shadowing_sigma_db must be non-negative");
  require(std::isfinite(c.noise_psd_dbm_per_hz), "noise_psd_dbm_per_hz must be finite");
  require(c.rb_bandwidth_hz > 0, "rb_bandwidth_hz must be positive");
  require(c.n_cu >= 1 && c.n_rb >= 1 && c.n_d2d >= 1, "counts must be at least 1");
  require(c.n_cu == c.n_rb, "n_cu must equal n_rb");
  require(c.n_d2d <= c.n_cu, "n_d2d must not exceed n_cu");
  require(c.p_max_w > 0, "p_max_w must be positive");
  require(std::isfinite(c.p_b_over_n0_db), "p_b_over_n0_db must be finite");
  require(!c.tau_w || *c.tau_w >= 0, "tau_w must be non-negative");
  require(c.gamma_bps >= 0, "gamma_bps must be non-negative");
  require(c.p_c_w > 0, "p_c_w must be positive");
  require(c.d2d_distance_m > 0, "d2d_distance_m must be positive");
  require(c.d2d_distance_m < 2.0 * c.cell_radius_m, "d2d_distance_m must fit in the cell");
  require(c.min_distance_m > 0, "min_distance_m must be positive");
}

double noise_power_w(const CellConfig& config) {
  return noise_power_w(config.noise_psd_dbm_per_hz, config.rb_bandwidth_hz);
}

double effective_tau_w(const CellConfig& config) {
  return config.tau_w.value_or(100.0 * noise_power_w(config));
}

double target_cu_power_at_bs_w(const CellConfig& config) {
  return noise_power_w(config) * std::pow(10.0, config.p_b_over_n0_db / 10.0);
}

std::uint64_t mix_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
  std::uint64_t x = splitmix64(master);
  x = splitmix64(x ^ (a * 0xD1B54A32D192ED03ULL));
  x = splitmix64(x ^ (b * 0xABC98388FB8FAC03ULL));
  return x;
}

Scenario generate_scenario(const CellConfig& config, std::uint64_t seed) {
  validate(config);
  const int n_cu = config.n_cu;
  const int n_d2d = config.n_d2d;
  const double radius = config.cell_radius_m;

  Scenario s;
  s.config = config;
  s.seed = seed;
  DropSampler rng(seed);

  s.cu_positions.resize(2, n_cu);
  for (int k = 0; k < n_cu; ++k) s.cu_positions.col(k) = rng.uniform_in_disc(radius);

  s.d2d_tx_positions.resize(2, n_d2d);
  s.d2d_rx_positions.resize(2, n_d2d);
  for (int i = 0; i < n_d2d; ++i) {
    const Eigen::Vector2d tx = rng.uniform_in_disc(radius);
    Eigen::Vector2d rx = tx;
    bool inside = false;
    for (int attempt = 0; attempt < 100 && !inside; ++attempt) {
      const double phi = rng.angle();
      rx = tx + config.d2d_distance_m * Eigen::Vector2d(std::cos(phi), std::sin(phi));
      inside = rx.norm() <= radius;
    }
    if (!inside) rx *= radius / rx.norm();
    s.d2d_tx_positions.col(i) = tx;
    s.d2d_rx_positions.col(i) = rx;
  }

  const auto link = [&](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    const double d = std::max((a - b).norm(), config.min_distance_m);
    return pathloss_gain(d, config.kappa, config.chi);
  };
  const Eigen::Vector2d bs = Eigen::Vector2d::Zero();
  const double sigma = config.shadowing_sigma_db;

  s.gain_dd.resize(n_d2d);
  for (int i = 0; i < n_d2d; ++i)
    s.gain_dd(i) = link(s.d2d_tx_positions.col(i), s.d2d_rx_positions.col(i)) * rng.shadowing(sigma);

  s.gain_cd.resize(n_cu, n_d2d);
  for (int k = 0; k < n_cu; ++k)
    for (int i = 0; i < n_d2d; ++i)
      s.gain_cd(k, i) = link(s.cu_positions.col(k), s.d2d_rx_positions.col(i)) * rng.shadowing(sigma);

  s.gain_cb.resize(n_cu);
  for (int k = 0; k < n_cu; ++k) s.gain_cb(k) = link(s.cu_positions.col(k), bs) * rng.shadowing(sigma);

  s.gain_db.resize(n_d2d);
  for (int i = 0; i < n_d2d; ++i) s.gain_db(i) = link(s.d2d_tx_positions.col(i), bs) * rng.shadowing(sigma);

  // CU power control inverts pathloss only; shadowing is not compensated.
  const double target = target_cu_power_at_bs_w(config);
  s.cu_tx_power_w.resize(n_cu);
  for (int k = 0; k < n_cu; ++k) {
    const double d = std::max(s.cu_positions.col(k).norm(), config.min_distance_m);
    s.cu_tx_power_w(k) = cu_power_from_target(target, d, config.kappa, config.chi);
  }

  s.rb_of_cu.resize(n_cu);
  s.cu_of_rb.resize(config.n_rb);
  for (int k = 0; k < n_cu; ++k) s.rb_of_cu[k] = s.cu_of_rb[k] = k;
  return s;
}

}  // namespace d2dee
