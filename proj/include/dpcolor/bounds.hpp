// Copyright 2026 The dpcolor Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Bound pairs (L,U) on [0,1] that encode how the probability assigned to one
// dataset constrains the probabilities of others. The (epsilon,delta)-DP
// instantiation is
//
//   U(a) = min(e^eps a + delta, (e^eps + delta - 1 + a)/e^eps, 1)
//   L(a) = max(e^eps a - delta - e^eps + 1, (a - delta)/e^eps, 0)
//
// and the d-fold composition U^d has a closed form (induced_bound below) that
// switches from an exponential-growth branch to a damped branch at
// switch_distance. Composition by iteration (compose_upper/compose_lower) is
// kept as an independent route; the two must agree to within tolerance.

#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dpcolor {

inline constexpr double kDefaultTol = 1e-9;

namespace detail {

// Uniform double in [0,1) from the top 53 bits of the generator; identical
// across platforms, unlike the standard distributions.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace detail

// A probability in [0,1]. Values within tol of the interval are clamped to
// it; values farther outside are rejected.
class Probability {
 public:
  explicit Probability(double value, double tol = kDefaultTol) {
    if (!(value >= -tol && value <= 1.0 + tol))
      throw std::invalid_argument("probability out of [0,1]: " + std::to_string(value));
    value_ = std::clamp(value, 0.0, 1.0);
  }
  double value() const { return value_; }

 private:
  double value_;
};

// Privacy parameters. e^epsilon is computed once and cached so that the
// closed form and the iterated composition stay bit-consistent.
struct DpParams {
  double epsilon;
  double delta;
  double lambda;  // e^epsilon

  DpParams(double eps, double del) : DpParams(eps, del, std::exp(eps)) {}

  // Builds the parameters from e^epsilon directly, so rationals like 2 can be
  // represented without a round trip through log/exp.
  static DpParams from_lambda(double lambda, double delta) {
    if (!(lambda >= 1.0)) throw std::invalid_argument("e^epsilon must be >= 1");
    return DpParams(std::log(lambda), delta, lambda);
  }

 private:
  DpParams(double eps, double del, double lam) : epsilon(eps), delta(del), lambda(lam) {
    if (!(epsilon >= 0.0)) throw std::invalid_argument("epsilon must be >= 0");
    if (!(delta >= 0.0 && delta < 1.0)) throw std::invalid_argument("delta must be in [0,1)");
  }
};

inline double dp_upper(double alpha, const DpParams& dp) {
  return std::min({dp.lambda * alpha + dp.delta,
                   (dp.lambda + dp.delta - 1.0 + alpha) / dp.lambda, 1.0});
}

inline double dp_lower(double alpha, const DpParams& dp) {
  return std::max({dp.lambda * alpha - dp.delta - dp.lambda + 1.0,
                   (alpha - dp.delta) / dp.lambda, 0.0});
}

// Number of composition steps for which the exponential-growth branch of the
// upper bound stays active, clamped to be nonnegative. Returns nullopt (the
// branch never ends) when delta = 0 and alpha = 0. Requires epsilon > 0.
inline std::optional<long> switch_distance(double alpha, const DpParams& dp) {
  if (dp.epsilon <= 0.0)
    throw std::invalid_argument("switch_distance requires epsilon > 0");
  const double scaled = (dp.lambda - 1.0) * alpha + dp.delta;
  if (scaled <= 0.0) return std::nullopt;
  const double arg = (dp.lambda + 2.0 * dp.delta - 1.0) / ((dp.lambda + 1.0) * scaled);
  const double raw = std::ceil(std::log(arg) / dp.epsilon);
  if (raw <= 0.0) return 0;
  return static_cast<long>(raw);
}

enum class BoundRegime { kLinear, kDamped, kSaturated, kEpsilonZero };

inline const char* to_string(BoundRegime r) {
  switch (r) {
    case BoundRegime::kLinear: return "linear";
    case BoundRegime::kDamped: return "damped";
    case BoundRegime::kSaturated: return "saturated";
    case BoundRegime::kEpsilonZero: return "epsilon-zero";
  }
  return "?";
}

// The evaluated closed form for U^d together with the regime that produced it.
struct ClosedFormBound {
  long distance = 0;
  double alpha = 0.0;
  std::optional<long> switch_distance;  // nullopt: growth branch for every d
  BoundRegime regime = BoundRegime::kLinear;
  double value = 0.0;
};

// Tightest upper bound that a vertex carrying probability alpha imposes at
// graph distance d >= 1. Equals the d-fold composition of dp_upper.
inline ClosedFormBound induced_bound(long d, double alpha, const DpParams& dp) {
  if (d < 1) throw std::invalid_argument("induced_bound requires d >= 1");
  ClosedFormBound out;
  out.distance = d;
  out.alpha = alpha;
  if (dp.epsilon == 0.0) {
    out.regime = BoundRegime::kEpsilonZero;
    out.value = std::min(alpha + static_cast<double>(d) * dp.delta, 1.0);
    return out;
  }
  const double lam = dp.lambda;
  out.switch_distance = switch_distance(alpha, dp);
  if (!out.switch_distance) {
    // alpha = 0 and delta = 0: the growth branch maps 0 to 0 forever.
    out.regime = BoundRegime::kLinear;
    out.value = 0.0;
    return out;
  }
  const long tau = *out.switch_distance;
  if (d <= tau) {
    out.regime = BoundRegime::kLinear;
    const double growth = std::pow(lam, static_cast<double>(d));
    out.value = std::clamp(growth * alpha + dp.delta * (growth - 1.0) / (lam - 1.0), 0.0, 1.0);
    return out;
  }
  const double dd = static_cast<double>(d - tau);
  const double raw = std::pow(lam, static_cast<double>(2 * tau - d)) * alpha + 1.0 -
                     std::pow(lam, -dd) +
                     dp.delta * (std::pow(lam, static_cast<double>(tau)) + std::pow(lam, dd) - 2.0) /
                         (std::pow(lam, dd) * (lam - 1.0));
  out.regime = raw >= 1.0 ? BoundRegime::kSaturated : BoundRegime::kDamped;
  out.value = std::clamp(raw, 0.0, 1.0);
  return out;
}

template <typename P>
concept BoundPairLike = requires(const P& pair, double alpha) {
  { pair.upper(alpha) } -> std::convertible_to<double>;
  { pair.lower(alpha) } -> std::convertible_to<double>;
};

// d-fold composition by plain iteration; d = 0 is the identity.
template <BoundPairLike P>
double compose_upper(const P& pair, long d, double alpha) {
  if (d < 0) throw std::invalid_argument("compose_upper requires d >= 0");
  double x = alpha;
  for (long i = 0; i < d; ++i) x = pair.upper(x);
  return x;
}

template <BoundPairLike P>
double compose_lower(const P& pair, long d, double alpha) {
  if (d < 0) throw std::invalid_argument("compose_lower requires d >= 0");
  double x = alpha;
  for (long i = 0; i < d; ++i) x = pair.lower(x);
  return x;
}

// The (epsilon,delta)-DP bound pair. upper_power/lower_power use the closed
// form, so distance-d checks cost O(1) instead of O(d).
struct DpBoundPair {
  DpParams params;

  explicit DpBoundPair(DpParams p) : params(p) {}

  double upper(double alpha) const { return dp_upper(alpha, params); }
  double lower(double alpha) const { return dp_lower(alpha, params); }

  double upper_power(long d, double alpha) const {
    if (d < 0) throw std::invalid_argument("upper_power requires d >= 0");
    if (d == 0) return alpha;
    return induced_bound(d, alpha, params).value;
  }

  double lower_power(long d, double alpha) const {
    return 1.0 - upper_power(d, 1.0 - alpha);
  }
};

// U^d for an arbitrary pair: the closed form when the pair provides one,
// iterated composition otherwise.
template <BoundPairLike P>
double upper_power(const P& pair, long d, double alpha) {
  if constexpr (requires { pair.upper_power(d, alpha); })
    return pair.upper_power(d, alpha);
  else
    return compose_upper(pair, d, alpha);
}

template <BoundPairLike P>
double lower_power(const P& pair, long d, double alpha) {
  if constexpr (requires { pair.lower_power(d, alpha); })
    return pair.lower_power(d, alpha);
  else
    return compose_lower(pair, d, alpha);
}

// Grid check of the suitable-pair requirements. Reports the first violation:
//   upper-nondecreasing / lower-nondecreasing : monotonicity of U and L
//   bounds-straddle      : L(a) <= a <= U(a)
//   inverse-consistency  : L(U(a)) <= a <= U(L(a))
//   complement-bound     : U(a) <= 1 - L(1-a)
//   complement-identity  : U(a) = 1 - L(1-a)
struct SuitablePairReport {
  bool pass = true;
  std::string property;
  double alpha = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;

  std::string summary() const {
    if (pass) return "pass";
    char buf[160];
    std::snprintf(buf, sizeof buf, "fail %s at alpha=%.12g (lhs=%.12g rhs=%.12g)",
                  property.c_str(), alpha, lhs, rhs);
    return buf;
  }
};

template <BoundPairLike P>
SuitablePairReport check_suitable_pair(const P& pair, int grid_size, double tol = kDefaultTol) {
  if (grid_size < 2) throw std::invalid_argument("check_suitable_pair requires grid_size >= 2");
  SuitablePairReport report;
  const auto fail = [&](const char* property, double alpha, double lhs, double rhs) {
    report.pass = false;
    report.property = property;
    report.alpha = alpha;
    report.lhs = lhs;
    report.rhs = rhs;
  };
  double prev_u = 0.0, prev_l = 0.0;
  for (int i = 0; i < grid_size; ++i) {
    const double a = static_cast<double>(i) / (grid_size - 1);
    const double u = pair.upper(a);
    const double l = pair.lower(a);
    if (i > 0 && u < prev_u - tol) {
      fail("upper-nondecreasing", a, u, prev_u);
      return report;
    }
    if (i > 0 && l < prev_l - tol) {
      fail("lower-nondecreasing", a, l, prev_l);
      return report;
    }
    prev_u = u;
    prev_l = l;
    if (l > a + tol) {
      fail("bounds-straddle", a, l, a);
      return report;
    }
    if (u < a - tol) {
      fail("bounds-straddle", a, a, u);
      return report;
    }
    const double lu = pair.lower(u);
    const double ul = pair.upper(l);
    if (lu > a + tol) {
      fail("inverse-consistency", a, lu, a);
      return report;
    }
    if (ul < a - tol) {
      fail("inverse-consistency", a, a, ul);
      return report;
    }
    const double complement = 1.0 - pair.lower(1.0 - a);
    if (u > complement + tol) {
      fail("complement-bound", a, u, complement);
      return report;
    }
    if (std::abs(u - complement) > tol) {
      fail("complement-identity", a, u, complement);
      return report;
    }
  }
  return report;
}

}  // namespace dpcolor
