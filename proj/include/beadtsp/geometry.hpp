#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace beadtsp {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Maps an angle into [0, 2π). Values that round to 2π are snapped to 0.
[[nodiscard]] inline double normalize_angle(double a) noexcept {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

/// Smallest absolute difference between two headings, in [0, π].
[[nodiscard]] inline double angle_distance(double a, double b) noexcept {
  const double d = normalize_angle(a - b);
  return d > kPi ? kTwoPi - d : d;
}

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

[[nodiscard]] inline Point operator+(Point a, Point b) noexcept { return {a.x + b.x, a.y + b.y}; }
[[nodiscard]] inline Point operator-(Point a, Point b) noexcept { return {a.x - b.x, a.y - b.y}; }
[[nodiscard]] inline Point operator*(double s, Point a) noexcept { return {s * a.x, s * a.y}; }
[[nodiscard]] inline double dot(Point a, Point b) noexcept { return a.x * b.x + a.y * b.y; }
[[nodiscard]] inline double cross(Point a, Point b) noexcept { return a.x * b.y - a.y * b.x; }
[[nodiscard]] inline double norm(Point a) noexcept { return std::hypot(a.x, a.y); }
[[nodiscard]] inline double distance(Point a, Point b) noexcept { return norm(b - a); }
[[nodiscard]] inline Point unit_vector(double heading) noexcept {
  return {std::cos(heading), std::sin(heading)};
}

/// Planar position plus heading. The heading is kept in [0, 2π).
struct Pose {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;

  Pose() = default;
  Pose(double x_, double y_, double theta_) : x(x_), y(y_), theta(normalize_angle(theta_)) {
    if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(theta_)) {
      throw Error("pose components must be finite");
    }
  }
  Pose(Point p, double theta_) : Pose(p.x, p.y, theta_) {}

  [[nodiscard]] Point position() const noexcept { return {x, y}; }

  friend bool operator==(const Pose&, const Pose&) = default;
};

/// Position distance and heading difference both within tol.
[[nodiscard]] inline bool poses_match(const Pose& a, const Pose& b, double tol) noexcept {
  return distance(a.position(), b.position()) <= tol && angle_distance(a.theta, b.theta) <= tol;
}

/// Minimum turning radius of the vehicle.
class Rho {
 public:
  explicit Rho(double value) : value_(value) {
    if (!(value > 0.0) || !std::isfinite(value)) {
      throw Error("turn radius must be positive and finite, got " + std::to_string(value));
    }
  }
  [[nodiscard]] double value() const noexcept { return value_; }

  friend bool operator==(const Rho&, const Rho&) = default;

 private:
  double value_;
};

}  // namespace beadtsp
