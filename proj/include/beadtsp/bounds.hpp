#pragma once

// Closed-form quantities behind the phase-occupancy and length bounds. All
// lower-order remainder terms are dropped; comparisons against measured
// tours multiply by an explicit slack factor.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "beadtsp/bead.hpp"
#include "beadtsp/geometry.hpp"
#include "beadtsp/tiling.hpp"

namespace beadtsp {

inline constexpr double kDefaultSlack = 1.25;

/// Nonnegative rational in lowest terms.
struct Rational {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  Rational() = default;
  Rational(std::uint64_t n, std::uint64_t d) : num(n), den(d) {
    if (d == 0) throw Error("rational with zero denominator");
    const std::uint64_t g = std::gcd(n, d);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  [[nodiscard]] double value() const noexcept {
    return static_cast<double>(num) / static_cast<double>(den);
  }

  friend bool operator==(const Rational&, const Rational&) = default;
};

[[nodiscard]] inline Rational operator*(const Rational& a, const Rational& b) {
  const Rational x(a.num, b.den);
  const Rational y(b.num, a.den);
  const unsigned __int128 n = static_cast<unsigned __int128>(x.num) * y.num;
  const unsigned __int128 d = static_cast<unsigned __int128>(x.den) * y.den;
  if (n > UINT64_MAX || d > UINT64_MAX) throw Error("rational overflow");
  return {static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(d)};
}

/// 2^k for integer k, as a rational.
[[nodiscard]] inline Rational power_of_two(int k) {
  if (k > 63 || k < -63) throw Error("power of two out of range: " + std::to_string(k));
  return k >= 0 ? Rational(std::uint64_t{1} << k, 1) : Rational(1, std::uint64_t{1} << -k);
}

/// beta_i = 2^(1-i).
[[nodiscard]] inline Rational beta(int i) {
  if (i < 1) throw Error("beta needs i >= 1");
  return power_of_two(1 - i);
}

/// floor(log2 n - log2 log2 n - log2 6), evaluated in extended precision.
[[nodiscard]] inline int istar(std::uint64_t n) {
  if (n < 2) throw Error("istar needs n >= 2");
  const long double ln = std::log2(static_cast<long double>(n));
  return static_cast<int>(std::floor(ln - std::log2(ln) - std::log2(6.0L)));
}

struct BoundInputs {
  double W = 1.0;
  double H = 1.0;
  double rho = 1.0;
  std::uint64_t n = 1;
  double l_n = 0.1;
  int j = 1;  // odd phase 2j - 1

  /// W / cbrt(rho W H).
  [[nodiscard]] double c1() const { return W / std::cbrt(rho * W * H); }
};

namespace detail {
inline void check_inputs(const BoundInputs& in) {
  if (!(in.W > 0.0) || !(in.H > 0.0) || !(in.rho > 0.0) || in.n < 1 || !(in.l_n > 0.0) ||
      in.j < 1) {
    throw Error("bound inputs must be positive with j >= 1");
  }
}
inline double pow2(int k) { return std::ldexp(1.0, k); }
}  // namespace detail

/// Inputs for odd phase 2j - 1 using the tiling's half-length.
[[nodiscard]] inline BoundInputs make_bound_inputs(Environment env, std::uint64_t n, Rho rho, int j) {
  const BeadGrid grid = build_tiling(env, n, rho);
  BoundInputs in{env.width, env.height, rho.value(), n, grid.half_length(), j};
  detail::check_inputs(in);
  return in;
}

/// ceil(W / (2^j l_n)).
[[nodiscard]] inline std::uint64_t beads_per_pass(const BoundInputs& in) {
  detail::check_inputs(in);
  return static_cast<std::uint64_t>(std::ceil(in.W / (detail::pow2(in.j) * in.l_n)));
}

/// 2^(j-1) (2 l_n) ((c1 / 2^j) n^(1/3) + 1).
[[nodiscard]] inline double pass_length_bound(const BoundInputs& in) {
  detail::check_inputs(in);
  const double cube = std::cbrt(static_cast<double>(in.n));
  return detail::pow2(in.j - 1) * (2.0 * in.l_n) * (in.c1() / detail::pow2(in.j) * cube + 1.0);
}

/// 7 pi rho / 3 + 2^(j-2) w(l_n).
[[nodiscard]] inline double uturn_bound(const BoundInputs& in) {
  detail::check_inputs(in);
  return 7.0 * kPi * in.rho / 3.0 + detail::pow2(in.j - 2) * bead_width(in.l_n, Rho(in.rho));
}

struct PassCount {
  std::uint64_t exact = 0;  // ceil(H / (2^(j-2) w(l_n)))
  double relaxed = 0.0;     // rho H / (2^(j-3) l_n^2) + 1
};

[[nodiscard]] inline PassCount num_passes_bound(const BoundInputs& in) {
  detail::check_inputs(in);
  const double w = bead_width(in.l_n, Rho(in.rho));
  PassCount out;
  out.exact = static_cast<std::uint64_t>(std::ceil(in.H / (detail::pow2(in.j - 2) * w)));
  out.relaxed = in.rho * in.H / (detail::pow2(in.j - 3) * in.l_n * in.l_n) + 1.0;
  return out;
}

/// 4 (W + H pi rho).
[[nodiscard]] inline double closure_bound(double W, double H, double rho) {
  return 4.0 * (W + H * kPi * rho);
}

struct PhaseBound {
  int j = 1;
  std::uint64_t beads_per_pass = 0;
  double pass_length = 0.0;
  double uturn = 0.0;
  PassCount passes;
  double closure = 0.0;
  double total = 0.0;  // relaxed passes * (pass + uturn) + closure
};

[[nodiscard]] inline PhaseBound phase_bound(const BoundInputs& in) {
  PhaseBound b;
  b.j = in.j;
  b.beads_per_pass = beads_per_pass(in);
  b.pass_length = pass_length_bound(in);
  b.uturn = uturn_bound(in);
  b.passes = num_passes_bound(in);
  b.closure = closure_bound(in.W, in.H, in.rho);
  b.total = b.passes.relaxed * (b.pass_length + b.uturn) + b.closure;
  return b;
}

/// Leading-order bound on the length of phase 2j - 1.
[[nodiscard]] inline double phase_length_bound(const BoundInputs& in) { return phase_bound(in).total; }

struct OddPhaseTable {
  double l_n = 0.0;
  std::vector<PhaseBound> rows;  // j = 1 .. ceil(phases / 2)
  double odd_sum = 0.0;          // sum of L_{2j-1}
  double total = 0.0;            // 3 * odd_sum
};

/// Bounds for every odd phase of a run with the given phase count
/// (default floor(log2 n) + 1).
[[nodiscard]] inline OddPhaseTable odd_phase_bounds(Environment env, std::uint64_t n, Rho rho,
                                                    int phases = 0) {
  if (n < 1) throw Error("bounds need n >= 1");
  if (phases <= 0) {
    phases = 1;
    while ((std::uint64_t{1} << phases) <= n && phases < 63) ++phases;
  }
  const BeadGrid grid = build_tiling(env, n, rho);
  OddPhaseTable t;
  t.l_n = grid.half_length();
  for (int j = 1; 2 * j - 1 <= phases; ++j) {
    const BoundInputs in{env.width, env.height, rho.value(), n, t.l_n, j};
    t.rows.push_back(phase_bound(in));
    t.odd_sum += t.rows.back().total;
  }
  t.total = 3.0 * t.odd_sum;
  return t;
}

}  // namespace beadtsp
