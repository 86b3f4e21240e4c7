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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "d2dee/errors.hpp"

namespace d2dee {

/// a x^3 + b x^2 + c x + d.
template <typename Scalar>
struct CubicCoefficients {
  Scalar a{}, b{}, c{}, d{};

  Scalar operator()(Scalar x) const { return ((a * x + b) * x + c) * x + d; }
  Scalar derivative(Scalar x) const { return (Scalar(3) * a * x + Scalar(2) * b) * x + c; }
  Scalar max_abs() const { return std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)}); }
};

/// Nickalls' parameterisation of a cubic about its point of inflection.
///
/// `delta` is the non-negative square root of (b^2 - 3ac) / 9a^2, clamped to 0 when
/// that quantity is negative; `delta_sq` keeps the signed value, which the
/// one-real-root branch needs. `h` follows the -2 a delta^3 convention, so the
/// trigonometric branch uses cos(3 rho) = y_n / h.
template <typename Scalar>
struct NickallsParams {
  Scalar p_n{};
  Scalar delta{};
  Scalar delta_sq{};
  Scalar h{};
  Scalar y_n{};
  Scalar lambda_sq{};  // 3 delta^2, reported for diagnostics only
};

namespace cubic_detail {

template <typename Scalar>
constexpr Scalar kLeadingTol = Scalar(1e-14);
template <typename Scalar>
constexpr Scalar kCaseTol = Scalar(1e-12);
template <typename Scalar>
constexpr Scalar kTripleTol = Scalar(64) * std::numeric_limits<Scalar>::epsilon();

template <typename Scalar>
bool leading_degenerate(const CubicCoefficients<Scalar>& k) {
  const Scalar rest = std::max({std::abs(k.b), std::abs(k.c), std::abs(k.d)});
  return k.a == Scalar(0) || std::abs(k.a) < kLeadingTol<Scalar> * rest;
}

template <typename Scalar>
void polish(const CubicCoefficients<Scalar>& k, Scalar& root) {
  Scalar best = std::abs(k(root));
  for (int it = 0; it < 6 && best > Scalar(0); ++it) {
    const Scalar slope = k.derivative(root);
    if (slope == Scalar(0)) break;
    const Scalar next = root - k(root) / slope;
    const Scalar r = std::abs(k(next));
    if (!(r < best)) break;
    root = next;
    best = r;
  }
}

template <typename Scalar>
std::vector<Scalar> collapse(std::vector<Scalar> roots) {
  std::sort(roots.begin(), roots.end());
  std::vector<Scalar> out;
  for (Scalar r : roots) {
    if (!out.empty() && std::abs(r - out.back()) <= Scalar(1e-10) * std::max(Scalar(1), std::abs(r)))
      continue;
    out.push_back(r);
  }
  return out;
}

// Roots of b x^2 + c x + d, falling back to linear.
template <typename Scalar>
std::vector<Scalar> quadratic_roots(Scalar b, Scalar c, Scalar d) {
  if (b == Scalar(0) || std::abs(b) < kLeadingTol<Scalar> * std::max(std::abs(c), std::abs(d))) {
    if (c == Scalar(0)) return {};
    return {-d / c};
  }
  const Scalar disc = c * c - Scalar(4) * b * d;
  const Scalar scale = std::max(c * c, std::abs(Scalar(4) * b * d));
  if (std::abs(disc) <= kCaseTol<Scalar> * scale) return {-c / (Scalar(2) * b)};
  if (disc < Scalar(0)) return {};
  const Scalar q = Scalar(-0.5) * (c + std::copysign(std::sqrt(disc), c));
  std::vector<Scalar> roots{q / b};
  if (q != Scalar(0)) roots.push_back(d / q);
  return roots;
}

}  // namespace cubic_detail

/// Throws DomainError when the leading coefficient is negligible relative to the others.
template <typename Scalar>
NickallsParams<Scalar> nickalls_params(const CubicCoefficients<Scalar>& k) {
  if (cubic_detail::leading_degenerate(k))
    throw DomainError("nickalls_params: degenerate leading coefficient, use the quadratic fallback");
  const Scalar a = k.a, b = k.b, c = k.c, d = k.d;
  NickallsParams<Scalar> n;
  n.p_n = -b / (Scalar(3) * a);
  n.delta_sq = (b * b - Scalar(3) * a * c) / (Scalar(9) * a * a);
  n.delta = std::sqrt(std::max(Scalar(0), n.delta_sq));
  n.h = Scalar(-2) * a * n.delta * n.delta * n.delta;
  n.y_n = Scalar(2) * b * b * b / (Scalar(27) * a * a) - b * c / (Scalar(3) * a) + d;
  n.lambda_sq = Scalar(3) * n.delta * n.delta;
  return n;
}

/// All real roots of the cubic, ascending, repeated roots reported once.
///
/// The coefficients are first normalised by their largest magnitude. A cubic
/// whose leading term is negligible is solved as a quadratic (or linear)
/// polynomial. Every root is refined with a few guarded Newton steps.
template <typename Scalar>
std::vector<Scalar> real_roots(const CubicCoefficients<Scalar>& raw) {
  using std::abs;
  using std::sqrt;
  if (!std::isfinite(raw.a) || !std::isfinite(raw.b) || !std::isfinite(raw.c) || !std::isfinite(raw.d))
    throw DomainError("real_roots: coefficients must be finite");
  const Scalar scale = raw.max_abs();
  if (scale == Scalar(0)) throw DomainError("real_roots: zero polynomial");
  const CubicCoefficients<Scalar> k{raw.a / scale, raw.b / scale, raw.c / scale, raw.d / scale};

  std::vector<Scalar> roots;
  if (cubic_detail::leading_degenerate(k)) {
    roots = cubic_detail::quadratic_roots(k.b, k.c, k.d);
  } else {
    const auto n = nickalls_params(k);
    const Scalar two_a = Scalar(2) * k.a;
    // h^2 = 4 a^2 delta^6 evaluated with the signed delta^2.
    const Scalar h_sq = Scalar(4) * k.a * k.a * n.delta_sq * n.delta_sq * n.delta_sq;
    const Scalar y_sq = n.y_n * n.y_n;
    const Scalar gap = y_sq - h_sq;

    // Triple root: delta^2 and y_N both sit at rounding level, where the cube
    // roots below would amplify noise by eps^(-2/3).
    const Scalar p = abs(n.p_n);
    const Scalar y_scale = abs(k.a) * p * p * p + abs(k.b) * p * p + abs(k.c) * p + abs(k.d);
    const bool triple = abs(n.delta_sq) <= cubic_detail::kTripleTol<Scalar> * (n.p_n * n.p_n + abs(k.c / k.a)) &&
                        abs(n.y_n) <= cubic_detail::kTripleTol<Scalar> * y_scale;

    if (triple) {
      roots = {n.p_n};
    } else if (abs(gap) <= cubic_detail::kCaseTol<Scalar> * std::max(y_sq, abs(h_sq))) {
      const Scalar shift = std::cbrt(n.y_n / two_a);
      roots = {n.p_n + shift, n.p_n - Scalar(2) * shift};
    } else if (gap > Scalar(0)) {
      // Take the cube root without cancellation, recover the partner from
      // t1 * t2 = delta^2.
      const Scalar s = sqrt(gap);
      const Scalar big = std::cbrt((-n.y_n - std::copysign(s, n.y_n)) / two_a);
      const Scalar partner = big == Scalar(0) ? Scalar(0) : n.delta_sq / big;
      roots = {n.p_n + big + partner};
    } else {
      const Scalar cos3 = std::clamp(n.y_n / n.h, Scalar(-1), Scalar(1));
      const Scalar rho = std::acos(cos3) / Scalar(3);
      const Scalar third = Scalar(2) * std::numbers::pi_v<Scalar> / Scalar(3);
      const Scalar twice = Scalar(2) * n.delta;
      roots = {n.p_n + twice * std::cos(rho), n.p_n + twice * std::cos(third - rho),
               n.p_n + twice * std::cos(third + rho)};
    }
  }
  for (Scalar& r : roots) cubic_detail::polish(k, r);
  return cubic_detail::collapse(std::move(roots));
}

/// Relative residual |f(x)| / max(|a x^3|, |b x^2|, |c x|, |d|, 1) on the given coefficients.
template <typename Scalar>
Scalar relative_residual(const CubicCoefficients<Scalar>& k, Scalar x) {
  const Scalar x2 = x * x;
  const Scalar denom = std::max({std::abs(k.a * x2 * x), std::abs(k.b * x2), std::abs(k.c * x),
                                 std::abs(k.d), Scalar(1)});
  return std::abs(k(x)) / denom;
}

}  // namespace d2dee
