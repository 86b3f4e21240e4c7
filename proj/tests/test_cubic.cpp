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
#include <random>

#include "d2dee/cubic.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace d2dee;
using Cubic = CubicCoefficients<double>;

namespace {

void check_roots(const Cubic& k, std::vector<double> expected) {
  const auto roots = real_roots(k);
  REQUIRE(roots.size() == expected.size());
  for (std::size_t i = 0; i < roots.size(); ++i) CHECK(std::abs(roots[i] - expected[i]) <= 1e-12);
}

Cubic normalised(const Cubic& k) {
  const double s = k.max_abs();
  return {k.a / s, k.b / s, k.c / s, k.d / s};
}

}  // namespace

TEST_CASE("nickalls_params") {
  const auto three = nickalls_params(Cubic{1, -6, 11, -6});
  CHECK(three.p_n == doctest::Approx(2.0));
  CHECK(three.delta == doctest::Approx(std::sqrt(1.0 / 3.0)));  // (36 - 33) / 9
  CHECK(three.y_n == doctest::Approx(0.0));
  CHECK(three.h == doctest::Approx(-2.0 * std::pow(1.0 / 3.0, 1.5)));
  CHECK(three.lambda_sq == doctest::Approx(1.0));

  const auto triple = nickalls_params(Cubic{1, -3, 3, -1});
  CHECK(triple.p_n == doctest::Approx(1.0));
  CHECK(triple.delta == 0.0);
  CHECK(triple.h == 0.0);
  CHECK(triple.y_n == doctest::Approx(0.0));

  const auto depressed = nickalls_params(Cubic{1, 0, 0, -8});
  CHECK(depressed.p_n == 0.0);
  CHECK(depressed.delta == 0.0);
  CHECK(depressed.h == 0.0);
  CHECK(depressed.y_n == -8.0);

  const auto negative = nickalls_params(Cubic{1, 0, 3, 0});  // b^2 - 3ac < 0
  CHECK(negative.delta == 0.0);
  CHECK(negative.delta_sq == doctest::Approx(-1.0));

  CHECK_THROWS_AS(nickalls_params(Cubic{0, 1, 2, 3}), DomainError);
  CHECK_THROWS_AS(nickalls_params(Cubic{1e-20, 1, 2, 3}), DomainError);
}

TEST_CASE("real_roots on factored cubics") {
  check_roots({1, -6, 11, -6}, {1, 2, 3});
  check_roots({1, 0, 0, -8}, {2});
  check_roots({1, -3, 3, -1}, {1});
  check_roots({2, -2, -2, 2}, {-1, 1});  // 2 (x - 1)^2 (x + 1)
  check_roots({1, 0, 3, 0}, {0});        // x (x^2 + 3)
  check_roots({-1, 6, -11, 6}, {1, 2, 3});
}

TEST_CASE("real_roots degenerate leading coefficient") {
  check_roots({0, 1, -3, 2}, {1, 2});
  check_roots({0, 0, 2, -1}, {0.5});
  CHECK(real_roots(Cubic{0, 1, 0, 1}).empty());
  CHECK(real_roots(Cubic{0, 0, 0, 5}).empty());
  check_roots({1e-18, 1, -3, 2}, {1, 2});
  CHECK_THROWS_AS(real_roots(Cubic{0, 0, 0, 0}), DomainError);
  CHECK_THROWS_AS(real_roots(Cubic{NAN, 1, 1, 1}), DomainError);
}

TEST_CASE("real_roots against the bisection oracle") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  int three_root_cases = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    Cubic k;
    if (trial % 2 == 0) {
      k = {u(rng), u(rng), u(rng), u(rng)};
    } else {  // planted roots
      const double a = u(rng), r1 = u(rng), r2 = u(rng), r3 = u(rng);
      k = {a, -a * (r1 + r2 + r3), a * (r1 * r2 + r1 * r3 + r2 * r3), -a * r1 * r2 * r3};
    }
    const auto roots = real_roots(k);
    const auto expected = oracle::bisection_roots(k.a, k.b, k.c, k.d);
    three_root_cases += roots.size() == 3;
    CHECK(roots.size() >= 1);
    CHECK(roots.size() <= 3);
    CHECK(oracle::roots_covered(roots, expected, 1e-7));
    CHECK(oracle::roots_covered(expected, roots, 1e-7));
    const auto n = normalised(k);
    for (double r : roots) CHECK(relative_residual(n, r) <= 1e-9);
  }
  CHECK(three_root_cases > 300);
}

TEST_CASE("root count follows the y_N^2 vs h^2 test") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int trial = 0; trial < 500; ++trial) {
    const Cubic k{u(rng), u(rng), u(rng), u(rng)};
    const auto n = nickalls_params(normalised(k));
    const double a = normalised(k).a;
    const double h_sq = 4 * a * a * n.delta_sq * n.delta_sq * n.delta_sq;
    const auto roots = real_roots(k);
    if (n.y_n * n.y_n > h_sq * (1 + 1e-6)) CHECK(roots.size() == 1);
    if (n.y_n * n.y_n < h_sq * (1 - 1e-6)) CHECK(roots.size() == 3);
  }
}

TEST_CASE("real_roots is scale invariant") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 300; ++trial) {
    const Cubic k{u(rng), u(rng), u(rng), u(rng)};
    const auto base = real_roots(k);
    for (double s : {-1.0, 1e-30, 7.5, -2e25}) {
      const auto scaled = real_roots(Cubic{s * k.a, s * k.b, s * k.c, s * k.d});
      REQUIRE(scaled.size() == base.size());
      for (std::size_t i = 0; i < base.size(); ++i)
        CHECK(std::abs(scaled[i] - base[i]) <= 1e-9 * std::max(1.0, std::abs(base[i])));
    }
  }
}

TEST_CASE("real_roots in long double") {
  const auto roots = real_roots(CubicCoefficients<long double>{1, -6, 11, -6});
  REQUIRE(roots.size() == 3);
  CHECK(std::abs(roots[1] - 2.0L) < 1e-15L);
}
