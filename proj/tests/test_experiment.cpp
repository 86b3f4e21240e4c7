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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "d2dee/errors.hpp"
#include "d2dee/experiment.hpp"
#include "doctest.h"

using namespace d2dee;

namespace {

ExperimentConfig small_config(int trials) {
  auto c = make_preset("distance");
  c.sweep.values = {10, 60};
  c.trials = trials;
  c.master_seed = 42;
  return c;
}

std::string csv_of(const std::vector<ResultRow>& rows) {
  std::ostringstream out;
  write_csv(out, rows);
  return out.str();
}

}  // namespace

TEST_CASE("run_experiment shape") {
  auto c = small_config(1);
  c.sweep.values = {30};
  const auto result = run_experiment(c);
  REQUIRE(result.rows.size() == 1);
  const auto& row = result.rows[0];
  CHECK(row.sweep_value == 30.0);
  CHECK(row.trial == 0);
  CHECK(row.seed == trial_seed(c, 0, 0));
  CHECK(row.ee_per_hz > 0.0);
  CHECK(row.iterations >= 1);
  CHECK(row.iterations <= c.solver.max_iterations);
  CHECK(row.feasible_pairs <= c.base.n_d2d);
  CHECK(row.runtime_ms == 0.0);
  CHECK(result.filtered_fraction.size() == 1);

  const auto csv = csv_of(result.rows);
  CHECK(csv.rfind(std::string(kCsvHeader) + "\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
}

TEST_CASE("run_experiment is deterministic") {
  auto c = small_config(6);
  const auto a = csv_of(run_experiment(c).rows);
  const auto b = csv_of(run_experiment(c).rows);
  CHECK(a == b);
  for (int threads : {1, 2, 5}) {
    c.threads = threads;
    CHECK(csv_of(run_experiment(c).rows) == a);
  }
}

TEST_CASE("seeds") {
  auto c = small_config(3);
  CHECK(trial_seed(c, 0, 1) == trial_seed(c, 1, 1));
  CHECK(trial_seed(c, 0, 1) != trial_seed(c, 0, 2));
  c.common_random_numbers = false;
  CHECK(trial_seed(c, 0, 1) != trial_seed(c, 1, 1));
  auto d = c;
  d.master_seed = 43;
  CHECK(trial_seed(c, 0, 1) != trial_seed(d, 0, 1));
}

TEST_CASE("apply_sweep_value") {
  const CellConfig base;
  CHECK(apply_sweep_value(base, SweepParam::p_b_over_n0_db, 4).p_b_over_n0_db == 4.0);
  CHECK(apply_sweep_value(base, SweepParam::n_d2d, 12).n_d2d == 12);
  CHECK(apply_sweep_value(base, SweepParam::d2d_distance_m, 70).d2d_distance_m == 70.0);
  CHECK(apply_sweep_value(base, SweepParam::gamma_bps, 2e6).gamma_bps == 2e6);
  CHECK_THROWS_AS(apply_sweep_value(base, SweepParam::n_d2d, 2.5), ConfigError);
  CHECK(parse_sweep_param("gamma_bps") == SweepParam::gamma_bps);
  CHECK_THROWS_AS(parse_sweep_param("bogus"), ConfigError);
}

TEST_CASE("per-trial infeasibility does not abort a sweep") {
  auto c = small_config(3);
  c.base.gamma_bps = 1e9;
  c.solver.policy = AssignmentPolicy::strict;
  const auto result = run_experiment(c);
  CHECK(result.rows.size() == 6);
  for (const auto& row : result.rows) {
    CHECK(row.infeasible);
    CHECK(row.ee_per_hz == 0.0);
    CHECK(row.feasible_pairs == 0);
  }
}

TEST_CASE("summarize") {
  const std::string header = std::string(kCsvHeader) + "\n";
  SUBCASE("single row") {
    std::istringstream in(header + "gamma_bps,0,0,1,2.5,3,8,0\n");
    const auto s = summarize(in);
    REQUIRE(s.size() == 1);
    CHECK(s[0].count == 1);
    CHECK(s[0].ee_mean == 2.5);
    CHECK(s[0].ee_std == 0.0);
    CHECK(s[0].iterations_mean == 3.0);
  }
  SUBCASE("two rows") {
    std::istringstream in(header + "gamma_bps,0,0,1,1,2,8,0\ngamma_bps,0,1,2,3,2,8,0\n");
    const auto s = summarize(in);
    REQUIRE(s.size() == 1);
    CHECK(s[0].ee_mean == 2.0);
    CHECK(s[0].ee_std == doctest::Approx(std::sqrt(2.0)));
  }
  SUBCASE("groups keep file order") {
    std::istringstream in(header + "n_d2d,8,0,1,1,2,8,0\nn_d2d,4,0,1,5,2,4,0\nn_d2d,8,1,1,3,4,8,0\n");
    const auto s = summarize(in);
    REQUIRE(s.size() == 2);
    CHECK(s[0].sweep_value == 8.0);
    CHECK(s[0].count == 2);
    CHECK(s[0].iterations_mean == 3.0);
    CHECK(s[1].ee_mean == 5.0);
  }
  SUBCASE("matches a direct recomputation") {
    auto c = small_config(40);
    const auto rows = run_experiment(c).rows;
    std::istringstream in(csv_of(rows));
    const auto s = summarize(in);
    REQUIRE(s.size() == 2);
    for (int v = 0; v < 2; ++v) {
      double sum = 0;
      for (int t = 0; t < 40; ++t) sum += rows[v * 40 + t].ee_per_hz;
      CHECK(s[v].ee_mean == doctest::Approx(sum / 40).epsilon(1e-10));
    }
  }
  SUBCASE("malformed input") {
    std::istringstream empty("");
    CHECK_THROWS_AS(summarize(empty), ConfigError);
    std::istringstream wrong_header("a,b\n");
    CHECK_THROWS_AS(summarize(wrong_header), ConfigError);
    std::istringstream short_row(header + "gamma_bps,0,0\n");
    CHECK_THROWS_AS(summarize(short_row), ConfigError);
    std::istringstream bad_number(header + "gamma_bps,0,0,1,x,2,8,0\n");
    CHECK_THROWS_AS(summarize(bad_number), ConfigError);
    CHECK_THROWS_AS(summarize(std::string("/nonexistent/dir/file.csv")), IoError);
  }
}

TEST_CASE("write_csv to a path") {
  const auto dir = std::filesystem::temp_directory_path() / "d2dee_test_csv";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "rows.csv").string();
  const auto rows = run_experiment(small_config(2)).rows;
  write_csv(path, rows);
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str() == csv_of(rows));
  CHECK_THROWS_AS(write_csv((dir / "missing" / "rows.csv").string(), rows), IoError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("key-value config") {
  std::istringstream in(
      "# comment\n"
      "trials = 7\n"
      "master_seed=99\n"
      "mode = cu-loss\n"
      "tau_w = 1e-12  # inline\n"
      "sweep_param = gamma_bps\n"
      "sweep_values = 0, 1e6\n"
      "\n");
  ExperimentConfig c;
  apply_key_values(read_key_values(in), c);
  CHECK(c.trials == 7);
  CHECK(c.master_seed == 99u);
  CHECK(c.solver.mode == RateMode::cu_loss);
  REQUIRE(c.base.tau_w.has_value());
  CHECK(*c.base.tau_w == 1e-12);
  CHECK(c.sweep.param == SweepParam::gamma_bps);
  CHECK(c.sweep.values == std::vector<double>{0, 1e6});

  std::istringstream reset("tau_w = auto\n");
  apply_key_values(read_key_values(reset), c);
  CHECK_FALSE(c.base.tau_w.has_value());

  const auto fails = [](const std::string& text) {
    std::istringstream s(text);
    ExperimentConfig cfg;
    apply_key_values(read_key_values(s), cfg);
  };
  CHECK_THROWS_AS(fails("no equals sign\n"), ConfigError);
  CHECK_THROWS_AS(fails("= 3\n"), ConfigError);
  CHECK_THROWS_AS(fails("unknown_key = 1\n"), ConfigError);
  CHECK_THROWS_AS(fails("trials = many\n"), ConfigError);
  CHECK_THROWS_AS(fails("trials = 2.5\n"), ConfigError);
  CHECK_THROWS_AS(fails("mode = fast\n"), ConfigError);
  CHECK_THROWS_AS(fails("sweep_values = \n"), ConfigError);
  CHECK_THROWS_AS(read_key_values_file("/nonexistent/config.txt"), IoError);

  ExperimentConfig bad;
  bad.trials = 0;
  CHECK_THROWS_AS(validate(bad), ConfigError);
}

TEST_CASE("presets") {
  CHECK(make_preset("pb_sweep").sweep.param == SweepParam::p_b_over_n0_db);
  CHECK(make_preset("iterations").sweep.values == std::vector<double>{4, 8, 12});
  CHECK(make_preset("distance").sweep.values.size() == 10);
  CHECK(make_preset("gamma").sweep.param == SweepParam::gamma_bps);
  CHECK(make_preset("gamma").trials == 500);
  CHECK(make_preset("gamma").solver.policy == AssignmentPolicy::drop_infeasible);
  CHECK_THROWS_AS(make_preset("fig9"), ConfigError);
}

TEST_CASE("iteration count does not grow with the number of pairs") {
  auto c = make_preset("iterations");
  c.trials = 40;
  const auto rows = run_experiment(c).rows;
  std::vector<double> means(3, 0.0);
  for (int v = 0; v < 3; ++v) {
    for (int t = 0; t < 40; ++t) means[v] += rows[v * 40 + t].iterations;
    means[v] /= 40;
    CHECK(means[v] <= 3.0);
  }
  CHECK(means[2] <= means[0] + 0.25);
  CHECK(means[1] <= means[0] + 0.25);
}
