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

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include "d2dee/experiment.hpp"

namespace d2dee {

namespace {

std::string trim(const std::string& s) {
  const auto first = std::find_if_not(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
  const auto last = std::find_if_not(s.rbegin(), s.rend(), [](unsigned char c) { return std::isspace(c); }).base();
  return first < last ? std::string(first, last) : std::string();
}

double to_double(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError("key '" + key + "': expected a number, got '" + text + "'");
}

long long to_integer(const std::string& key, const std::string& text) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw ConfigError("key '" + key + "': expected an integer, got '" + text + "'");
  return v;
}

std::uint64_t to_seed(const std::string& key, const std::string& text) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw ConfigError("key '" + key + "': expected an unsigned integer, got '" + text + "'");
  return v;
}

bool to_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError("key '" + key + "': expected true/false, got '" + text + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) values.push_back(to_double(key, trim(item)));
  if (values.empty()) throw ConfigError("key '" + key + "': empty list");
  return values;
}

RateMode to_mode(const std::string& text) {
  if (text == "no-cu-loss" || text == "no_cu_loss") return RateMode::no_cu_loss;
  if (text == "cu-loss" || text == "cu_loss") return RateMode::cu_loss;
  throw ConfigError("mode must be no-cu-loss or cu-loss, got '" + text + "'");
}

AssignmentPolicy to_policy(const std::string& text) {
  if (text == "strict") return AssignmentPolicy::strict;
  if (text == "drop_infeasible" || text == "drop-infeasible") return AssignmentPolicy::drop_infeasible;
  throw ConfigError("policy must be strict or drop_infeasible, got '" + text + "'");
}

using Setter = std::function<void(ExperimentConfig&, const std::string& key, const std::string& value)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"cell_radius_m", [](auto& c, auto& k, auto& v) { c.base.cell_radius_m = to_double(k, v); }},
      {"kappa", [](auto& c, auto& k, auto& v) { c.base.kappa = to_double(k, v); }},
      {"chi", [](auto& c, auto& k, auto& v) { c.base.chi = to_double(k, v); }},
      {"shadowing_sigma_db", [](auto& c, auto& k, auto& v) { c.base.shadowing_sigma_db = to_double(k, v); }},
      {"noise_psd_dbm_per_hz", [](auto& c, auto& k, auto& v) { c.base.noise_psd_dbm_per_hz = to_double(k, v); }},
      {"rb_bandwidth_hz", [](auto& c, auto& k, auto& v) { c.base.rb_bandwidth_hz = to_double(k, v); }},
      {"n_cu", [](auto& c, auto& k, auto& v) { c.base.n_cu = static_cast<int>(to_integer(k, v)); }},
      {"n_rb", [](auto& c, auto& k, auto& v) { c.base.n_rb = static_cast<int>(to_integer(k, v)); }},
      {"n_d2d", [](auto& c, auto& k, auto& v) { c.base.n_d2d = static_cast<int>(to_integer(k, v)); }},
      {"p_max_w", [](auto& c, auto& k, auto& v) { c.base.p_max_w = to_double(k, v); }},
      {"p_b_over_n0_db", [](auto& c, auto& k, auto& v) { c.base.p_b_over_n0_db = to_double(k, v); }},
      {"tau_w", [](auto& c, auto& k, auto& v) {
         if (v == "auto") c.base.tau_w.reset();
         else c.base.tau_w = to_double(k, v);
       }},
      {"gamma_bps", [](auto& c, auto& k, auto& v) { c.base.gamma_bps = to_double(k, v); }},
      {"p_c_w", [](auto& c, auto& k, auto& v) { c.base.p_c_w = to_double(k, v); }},
      {"d2d_distance_m", [](auto& c, auto& k, auto& v) { c.base.d2d_distance_m = to_double(k, v); }},
      {"min_distance_m", [](auto& c, auto& k, auto& v) { c.base.min_distance_m = to_double(k, v); }},
      {"sweep_param", [](auto& c, auto&, auto& v) { c.sweep.param = parse_sweep_param(v); }},
      {"sweep_values", [](auto& c, auto& k, auto& v) { c.sweep.values = to_list(k, v); }},
      {"trials", [](auto& c, auto& k, auto& v) { c.trials = static_cast<int>(to_integer(k, v)); }},
      {"master_seed", [](auto& c, auto& k, auto& v) { c.master_seed = to_seed(k, v); }},
      {"mode", [](auto& c, auto&, auto& v) { c.solver.mode = to_mode(v); }},
      {"policy", [](auto& c, auto&, auto& v) { c.solver.policy = to_policy(v); }},
      {"epsilon", [](auto& c, auto& k, auto& v) { c.solver.epsilon = to_double(k, v); }},
      {"max_iterations", [](auto& c, auto& k, auto& v) { c.solver.max_iterations = static_cast<int>(to_integer(k, v)); }},
      {"output_path", [](auto& c, auto&, auto& v) { c.output_path = v; }},
      {"common_random_numbers", [](auto& c, auto& k, auto& v) { c.common_random_numbers = to_bool(k, v); }},
      {"record_runtime", [](auto& c, auto& k, auto& v) { c.record_runtime = to_bool(k, v); }},
      {"threads", [](auto& c, auto& k, auto& v) { c.threads = static_cast<int>(to_integer(k, v)); }},
  };
  return table;
}

}  // namespace

std::map<std::string, std::string> read_key_values(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    kv[key] = trim(line.substr(eq + 1));
  }
  return kv;
}

std::map<std::string, std::string> read_key_values_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path + "'");
  return read_key_values(in);
}

void apply_key_values(const std::map<std::string, std::string>& kv, ExperimentConfig& config) {
  const auto& table = setters();
  for (const auto& [key, value] : kv) {
    const auto it = table.find(key);
    if (it == table.end()) throw ConfigError("unknown config key '" + key + "'");
    it->second(config, key, value);
  }
}

ExperimentConfig make_preset(const std::string& name) {
  ExperimentConfig config;
  if (name == "pb_sweep") {
    config.sweep = {SweepParam::p_b_over_n0_db, {0, 2, 4, 6, 8, 10}};
  } else if (name == "iterations") {
    config.sweep = {SweepParam::n_d2d, {4, 8, 12}};
  } else if (name == "distance") {
    config.sweep = {SweepParam::d2d_distance_m, {10, 20, 30, 40, 50, 60, 70, 80, 90, 100}};
  } else if (name == "gamma") {
    config.sweep = {SweepParam::gamma_bps, {0, 1e6, 2e6, 2.5e6, 3e6, 3.5e6, 4e6, 4.5e6, 5e6}};
  } else {
    throw ConfigError("unknown experiment '" + name + "' (pb_sweep, iterations, distance, gamma)");
  }
  return config;
}

}  // namespace d2dee
