#pragma once

// Independent reference computations for tests. Nothing here calls the
// library's closed forms.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "beadtsp/geometry.hpp"

namespace oracle {

using beadtsp::kPi;
using beadtsp::kTwoPi;
using beadtsp::Point;
using beadtsp::Pose;

inline double wrap(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0) r += kTwoPi;
  return r >= kTwoPi ? 0.0 : r;
}

struct State {
  double x, y, th;
};

// Center of the turning circle on side sigma (+1 left, -1 right).
inline Point turn_center(const State& s, double sigma, double rho) {
  return {s.x - sigma * rho * std::sin(s.th), s.y + sigma * rho * std::cos(s.th)};
}

// Rotate around the turning circle by sweep t (>= 0) in direction sigma.
inline State turn(const State& s, double sigma, double t, double rho) {
  const Point c = turn_center(s, sigma, rho);
  const double a0 = std::atan2(s.y - c.y, s.x - c.x);
  const double a1 = a0 + sigma * t;
  return {c.x + rho * std::cos(a1), c.y + rho * std::sin(a1), s.th + sigma * t};
}

template <class F>
double bisect(F&& f, double lo, double hi) {
  double flo = f(lo);
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Roots of f on [0, 2pi] located by a uniform scan then refined by bisection.
template <class F>
std::vector<double> scan_roots(F&& f, int steps) {
  std::vector<double> roots;
  double prev_t = 0.0;
  double prev = f(0.0);
  if (prev == 0.0) roots.push_back(0.0);
  for (int k = 1; k <= steps; ++k) {
    const double t = kTwoPi * k / steps;
    const double v = f(t);
    if (v == 0.0) {
      roots.push_back(t);
    } else if ((prev < 0 && v > 0) || (prev > 0 && v < 0)) {
      roots.push_back(bisect(f, prev_t, t));
    }
    prev_t = t;
    prev = v;
  }
  return roots;
}

// Shortest bounded-curvature length from a to b found by searching the
// first-turn sweep and solving the remaining tangency geometrically.
inline double dubins_length(const Pose& a, const Pose& b, double rho, int steps = 4096) {
  const State s0{a.x, a.y, a.theta};
  double best = std::numeric_limits<double>::infinity();
  for (double s1 : {1.0, -1.0}) {
    // turn-straight-turn
    for (double s3 : {1.0, -1.0}) {
      const State sb{b.x, b.y, b.theta};
      const Point c3 = turn_center(sb, s3, rho);
      auto lateral = [&](double t) {
        const State q = turn(s0, s1, t, rho);
        const Point u{std::cos(q.th), std::sin(q.th)};
        const Point d{c3.x - q.x, c3.y - q.y};
        return (u.x * d.y - u.y * d.x) - s3 * rho;
      };
      for (double t : scan_roots(lateral, steps)) {
        const State q = turn(s0, s1, t, rho);
        const Point u{std::cos(q.th), std::sin(q.th)};
        const double straight = u.x * (c3.x - q.x) + u.y * (c3.y - q.y);
        if (straight < -1e-9) continue;
        const double t3 = wrap(s3 * (b.theta - q.th));
        best = std::min(best, rho * t + std::max(0.0, straight) + rho * t3);
      }
    }
    // turn-turn-turn
    {
      const State sb{b.x, b.y, b.theta};
      const Point c3 = turn_center(sb, s1, rho);
      auto gap = [&](double t) {
        const State q = turn(s0, s1, t, rho);
        const Point c2 = turn_center(q, -s1, rho);
        return std::hypot(c2.x - c3.x, c2.y - c3.y) - 2.0 * rho;
      };
      for (double t : scan_roots(gap, steps)) {
        const State q = turn(s0, s1, t, rho);
        const Point c2 = turn_center(q, -s1, rho);
        const Point m{(c2.x + c3.x) / 2, (c2.y + c3.y) / 2};
        const double hm = std::atan2(m.y - c2.y, m.x - c2.x) + (-s1) * kPi / 2;
        const double t2 = wrap(-s1 * (hm - q.th));
        const double t3 = wrap(s1 * (b.theta - hm));
        best = std::min(best, rho * (t + t2 + t3));
      }
    }
  }
  return best;
}

// Bead membership written straight from its boundary circles: outer arcs
// centered (+-l, +-rho), middle arcs centered (0, +-(w/2 - rho)).
struct BeadShape {
  double l;
  double rho;
  [[nodiscard]] double width() const { return 4.0 * rho * (1.0 - std::sqrt(1.0 - l * l / (4.0 * rho * rho))); }

  [[nodiscard]] bool contains(double x, double y, double tol = 0.0) const {
    const double u = std::abs(x);
    const double v = std::abs(y);
    if (u > l + tol) return false;
    const double uu = std::min(u, l);
    if (uu >= l / 2.0) {
      return v <= rho + tol && std::hypot(uu - l, v - rho) >= rho - tol;
    }
    // Below the upper arc of the middle circle; its center may sit above the axis.
    const double c = width() / 2.0 - rho;
    return v <= c + tol || std::hypot(uu, v - c) <= rho + tol;
  }
};

struct Estimate {
  double mean;
  double stderr_;
};

// Hit-or-miss area of a bead from uniform samples in its bounding box.
inline Estimate mc_bead_area(const BeadShape& b, std::size_t samples, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> ux(-b.l, b.l);
  const double h = b.width() / 2.0;
  std::uniform_real_distribution<double> uy(-h, h);
  std::size_t hits = 0;
  for (std::size_t k = 0; k < samples; ++k) {
    const double x = ux(gen);
    const double y = uy(gen);
    if (b.contains(x, y)) ++hits;
  }
  const double box = 2.0 * b.l * 2.0 * h;
  const double f = static_cast<double>(hits) / static_cast<double>(samples);
  return {box * f, box * std::sqrt(f * (1.0 - f) / static_cast<double>(samples))};
}

}  // namespace oracle
