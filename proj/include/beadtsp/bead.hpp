#pragma once

// The bead B_rho(l): the region between p- = (-l, 0) and p+ = (l, 0) swept
// by the symmetric left-right-left curves of radius R >= rho that leave p-
// and arrive at p+ tangent to the axis. Its upper boundary is the R = rho
// curve: an arc centered (-l, rho) up to (-l/2, w/4), an arc centered
// (0, w/2 - rho) over the apex (0, w/2), then the mirror image down to p+.
// The lower half is the reflection across the axis.

#include <algorithm>
#include <cmath>
#include <string>

#include "beadtsp/dubins.hpp"
#include "beadtsp/geometry.hpp"

namespace beadtsp {

namespace detail {

inline void check_half_length(double l, double rho) {
  if (!(l > 0.0) || l > 2.0 * rho || !std::isfinite(l)) {
    throw Error("bead half-length must lie in (0, 2*rho], got l=" + std::to_string(l) +
                " rho=" + std::to_string(rho));
  }
}

// w(l)/2 for radius r, written without the cancellation in 1 - sqrt(1 - x).
inline double half_width(double l, double r) noexcept {
  const double x = l * l / (4.0 * r * r);
  return l * l / (2.0 * r * (1.0 + std::sqrt(std::max(0.0, 1.0 - x))));
}

// Height of the symmetric radius-r LRL curve from (-l,0) to (l,0) at |x| = u.
inline double lrl_height(double l, double r, double u) noexcept {
  u = std::clamp(std::abs(u), 0.0, l);
  if (u <= l / 2.0) {
    const double drop = u * u / (r + std::sqrt(std::max(0.0, r * r - u * u)));
    return half_width(l, r) - drop;
  }
  const double v = l - u;
  return v * v / (r + std::sqrt(std::max(0.0, r * r - v * v)));
}

}  // namespace detail

/// Maximum thickness w(l) = 4 rho (1 - sqrt(1 - l^2 / 4 rho^2)).
[[nodiscard]] inline double bead_width(double l, Rho rho) {
  detail::check_half_length(l, rho.value());
  return 2.0 * detail::half_width(l, rho.value());
}

/// Area l * w(l).
[[nodiscard]] inline double bead_area(double l, Rho rho) { return l * bead_width(l, rho); }

/// The l in (0, 2 rho] whose bead has the requested area.
[[nodiscard]] inline double solve_bead_half_length(double area_target, Rho rho) {
  const double r = rho.value();
  const double max_area = 8.0 * r * r;
  if (!(area_target > 0.0) || area_target > max_area) {
    throw Error("bead area " + std::to_string(area_target) + " outside (0, 8 rho^2] = (0, " +
                std::to_string(max_area) + "]");
  }
  if (area_target == max_area) return 2.0 * r;
  double lo = 0.0;
  double hi = 2.0 * r;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (mid * 2.0 * detail::half_width(mid, r) < area_target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

class Bead {
 public:
  /// axis_angle is the direction of p- -> p+.
  Bead(Point center, double half_length, Rho rho, double axis_angle = 0.0)
      : center_(center), l_(half_length), rho_(rho), axis_(normalize_angle(axis_angle)) {
    detail::check_half_length(l_, rho_.value());
  }

  [[nodiscard]] Point center() const noexcept { return center_; }
  [[nodiscard]] double half_length() const noexcept { return l_; }
  [[nodiscard]] Rho rho() const noexcept { return rho_; }
  [[nodiscard]] double axis_angle() const noexcept { return axis_; }
  [[nodiscard]] Point axis() const noexcept { return unit_vector(axis_); }
  [[nodiscard]] double width() const { return bead_width(l_, rho_); }
  [[nodiscard]] double area() const { return bead_area(l_, rho_); }
  [[nodiscard]] Point p_minus() const noexcept { return center_ - l_ * axis(); }
  [[nodiscard]] Point p_plus() const noexcept { return center_ + l_ * axis(); }

  /// Coordinates with the axis along +x and the center at the origin.
  [[nodiscard]] Point to_local(Point p) const noexcept {
    const Point a = axis();
    const Point d = p - center_;
    return {dot(d, a), cross(a, d)};
  }
  [[nodiscard]] Point to_world(Point q) const noexcept {
    const Point a = axis();
    return center_ + Point{a.x * q.x - a.y * q.y, a.y * q.x + a.x * q.y};
  }

  /// Boundary height above the axis at local |x| = u.
  [[nodiscard]] double boundary_height(double u) const noexcept {
    return detail::lrl_height(l_, rho_.value(), u);
  }

 private:
  Point center_;
  double l_;
  Rho rho_;
  double axis_;
};

/// Signed membership: >= 0 inside the closed bead, < 0 outside. Not a
/// distance, only the sign and the ordering near the boundary matter.
[[nodiscard]] inline double membership_margin(const Bead& bead, Point p) noexcept {
  const Point q = bead.to_local(p);
  const double u = std::abs(q.x);
  const double over = u - bead.half_length();
  if (over > 0.0) return -over;
  return std::min(bead.half_length() - u, bead.boundary_height(u) - std::abs(q.y));
}

/// Closed-set membership, optionally inflated outward by tol.
[[nodiscard]] inline bool contains(const Bead& bead, Point p, double tol = 0.0) noexcept {
  const Point q = bead.to_local(p);
  const double u = std::abs(q.x);
  if (u > bead.half_length() + tol) return false;
  return std::abs(q.y) <= bead.boundary_height(u) + tol;
}

/// A curvature-bounded path from the trailing endpoint to the leading one
/// (p- to p+ for direction +1, reversed for -1) that passes through target,
/// stays in the bead and is no longer than 4 rho asin(l / 2 rho).
///
/// The path is the symmetric LRL (RLR) curve whose radius R >= rho places it
/// through the target; R comes from bisection on s = l / 2R, along which the
/// curve height at fixed |x| is strictly increasing.
[[nodiscard]] inline DubinsPath traversal_path(const Bead& bead, Point target, int direction) {
  if (direction != 1 && direction != -1) throw Error("traversal direction must be +1 or -1");
  const double l = bead.half_length();
  const double r = bead.rho().value();
  if (!contains(bead, target, 1e-12 * std::max(l, r))) {
    throw Error("traversal target lies outside the bead");
  }
  const Point q = bead.to_local(target);
  const double u = std::min(std::abs(q.x), l);
  const double h = std::abs(q.y);
  const Pose start = direction > 0 ? Pose(bead.p_minus(), bead.axis_angle())
                                   : Pose(bead.p_plus(), bead.axis_angle() + kPi);
  if (h == 0.0) return straight_path(start, 2.0 * l, r);

  const double s_max = l / (2.0 * r);
  double lo = 0.0;
  double hi = s_max;
  if (detail::lrl_height(l, r, u) > h) {
    for (int it = 0; it < 300; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (detail::lrl_height(l, l / (2.0 * mid), u) < h) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
  }
  const double s = hi;
  const double radius = std::max(r, l / (2.0 * s));
  const double alpha = std::asin(std::min(1.0, l / (2.0 * radius)));
  const bool left_side = q.y > 0.0;
  const bool first_left = direction > 0 ? left_side : !left_side;
  return DubinsPath{start, radius, first_left ? Word::LRL : Word::RLR, {alpha, 2.0 * alpha, alpha}};
}

}  // namespace beadtsp
