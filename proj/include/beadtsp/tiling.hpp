#pragma once

// Periodic bead tiling of a rectangle [0, W] x [0, H].
//
// Row r has its axis at y = H - r * w/2; bead (r, c) is centered at
// x = l * (2c - 1 + (r mod 2)), so consecutive rows are offset by l and the
// lower arcs of one row close exactly onto the upper arcs of the next. Row 0
// lies on the top edge of the rectangle. Rows and columns extend one bead
// past the rectangle; beads that miss it are skipped by sweeps and counts.
//
// A phase-i meta-bead groups 2^ceil((i-1)/2) columns by 2^floor((i-1)/2)
// rows, so the grouping doubles horizontally on even phases and vertically
// on odd ones.

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "beadtsp/bead.hpp"
#include "beadtsp/geometry.hpp"

namespace beadtsp {

/// Raised when a tiling with bead area W*H/(2n) would need l >= 2 rho.
class TilingError : public Error {
 public:
  using Error::Error;
};

struct Environment {
  double width = 1.0;
  double height = 1.0;

  Environment() = default;
  Environment(double w, double h) : width(w), height(h) {
    if (!(w > 0.0) || !(h > 0.0) || !std::isfinite(w) || !std::isfinite(h)) {
      throw Error("environment sides must be positive and finite");
    }
  }

  [[nodiscard]] double area() const noexcept { return width * height; }
  [[nodiscard]] bool contains(Point p) const noexcept {
    return p.x >= 0.0 && p.x <= width && p.y >= 0.0 && p.y <= height;
  }
};

struct BeadId {
  int row = 0;
  int col = 0;
  friend auto operator<=>(const BeadId&, const BeadId&) = default;
};

struct MetaBeadId {
  int row = 0;
  int col = 0;
  int phase = 1;
  friend auto operator<=>(const MetaBeadId&, const MetaBeadId&) = default;
};

class BeadGrid {
 public:
  BeadGrid(Environment env, std::size_t n, Rho rho, double half_length)
      : env_(env), n_(n), rho_(rho), l_(half_length), w_(bead_width(half_length, rho)) {
    row_count_ = static_cast<int>(std::ceil(env_.height / (w_ / 2.0))) + 1;
    col_count_ = static_cast<int>(std::floor(env_.width / (2.0 * l_))) + 2;
    for (int r = 0; r < row_count_; ++r) {
      for (int c = 0; c < col_count_; ++c) {
        if (compute_intersects({r, c})) intersecting_.push_back({r, c});
      }
    }
  }

  [[nodiscard]] const Environment& env() const noexcept { return env_; }
  [[nodiscard]] std::size_t target_count() const noexcept { return n_; }
  [[nodiscard]] Rho rho() const noexcept { return rho_; }
  [[nodiscard]] double half_length() const noexcept { return l_; }
  [[nodiscard]] double width() const noexcept { return w_; }
  [[nodiscard]] double bead_area() const noexcept { return l_ * w_; }
  /// Probability that one uniform point falls in a given interior bead.
  [[nodiscard]] double mu() const noexcept { return bead_area() / env_.area(); }
  /// Expected points per interior bead.
  [[nodiscard]] double nu() const noexcept { return static_cast<double>(n_) * mu(); }
  [[nodiscard]] int row_count() const noexcept { return row_count_; }
  [[nodiscard]] int col_count() const noexcept { return col_count_; }

  [[nodiscard]] double row_axis_y(int row) const noexcept {
    return env_.height - static_cast<double>(row) * (w_ / 2.0);
  }
  [[nodiscard]] Point center(BeadId id) const noexcept {
    return {l_ * static_cast<double>(2 * id.col - 1 + (id.row & 1)), row_axis_y(id.row)};
  }
  [[nodiscard]] Bead bead(BeadId id) const { return Bead(center(id), l_, rho_, 0.0); }

  [[nodiscard]] bool in_lattice(BeadId id) const noexcept {
    return id.row >= 0 && id.row < row_count_ && id.col >= 0 && id.col < col_count_;
  }

  /// The bead shares positive area with the rectangle.
  [[nodiscard]] bool intersects_region(BeadId id) const noexcept {
    return in_lattice(id) &&
           std::binary_search(intersecting_.begin(), intersecting_.end(), id);
  }

  /// The whole bead lies inside the closed rectangle.
  [[nodiscard]] bool inside_region(BeadId id) const noexcept {
    const Point c = center(id);
    return c.x - l_ >= 0.0 && c.x + l_ <= env_.width && c.y - w_ / 2.0 >= 0.0 &&
           c.y + w_ / 2.0 <= env_.height;
  }

  /// Beads intersecting the rectangle, in (row, col) order.
  [[nodiscard]] std::span<const BeadId> intersecting_beads() const noexcept { return intersecting_; }

 private:
  [[nodiscard]] bool compute_intersects(BeadId id) const noexcept {
    const Point c = center(id);
    const double lo = std::max(0.0, c.x - l_);
    const double hi = std::min(env_.width, c.x + l_);
    if (!(lo < hi)) return false;
    const double nearest = std::clamp(c.x, lo, hi);
    const double h = detail::lrl_height(l_, rho_.value(), nearest - c.x);
    return h > 0.0 && c.y - h < env_.height && c.y + h > 0.0;
  }

  Environment env_;
  std::size_t n_;
  Rho rho_;
  double l_;
  double w_;
  int row_count_ = 0;
  int col_count_ = 0;
  std::vector<BeadId> intersecting_;
};

/// Tiling whose beads have area W*H/(2n), i.e. mu = 1/(2n) and nu = 1/2.
[[nodiscard]] inline BeadGrid build_tiling(Environment env, std::size_t n, Rho rho) {
  if (n < 1) throw Error("tiling needs n >= 1");
  const double area = env.area() / (2.0 * static_cast<double>(n));
  const double max_area = 8.0 * rho.value() * rho.value();
  if (area >= max_area) {
    throw TilingError("n too small: bead area W*H/(2n) = " + std::to_string(area) +
                      " requires l >= 2*rho (limit 8*rho^2 = " + std::to_string(max_area) + ")");
  }
  return BeadGrid(env, n, rho, solve_bead_half_length(area, rho));
}

/// The bead containing p. Points on a shared boundary go to the lower row
/// (larger row index), then the lower column.
[[nodiscard]] inline BeadId locate(const BeadGrid& grid, Point p) {
  if (!grid.env().contains(p)) throw Error("locate: point outside the environment");
  const double l = grid.half_length();
  const double pitch = grid.width() / 2.0;
  const int r0 = static_cast<int>(std::floor((grid.env().height - p.y) / pitch));
  BeadId best{-1, -1};
  double best_margin = -INFINITY;
  const double tie = 1e-12 * std::max(l, grid.width());
  // One extra row each side absorbs rounding of points on a row axis.
  for (int r = r0 - 1; r <= r0 + 2; ++r) {
    if (r < 0 || r >= grid.row_count()) continue;
    const double c_real = (p.x / l + 1.0 - static_cast<double>(r & 1)) / 2.0;
    const int c0 = static_cast<int>(std::floor(c_real));
    for (int c = c0; c <= c0 + 1; ++c) {
      const BeadId id{r, c};
      if (!grid.in_lattice(id)) continue;
      const double m = membership_margin(grid.bead(id), p);
      const bool better = m > best_margin + tie;
      const bool tied = std::abs(m - best_margin) <= tie &&
                        (id.row > best.row || (id.row == best.row && id.col < best.col));
      if (better || tied) {
        best_margin = std::max(best_margin, m);
        best = id;
      }
    }
  }
  if (best.row < 0) throw Error("locate: no candidate bead");  // unreachable inside Q
  return best;
}

namespace detail {
inline int meta_col_shift(int phase) noexcept { return std::min(phase / 2, 30); }
inline int meta_row_shift(int phase) noexcept { return std::min((phase - 1) / 2, 30); }

inline void check_phase(int phase) {
  if (phase < 1) throw Error("phase must be >= 1");
}
}  // namespace detail

/// Number of beads grouped per meta-bead at a phase, as (columns, rows).
[[nodiscard]] inline std::pair<int, int> meta_bead_shape(int phase) {
  detail::check_phase(phase);
  return {1 << detail::meta_col_shift(phase), 1 << detail::meta_row_shift(phase)};
}

[[nodiscard]] inline MetaBeadId meta_bead_of(const BeadGrid&, BeadId id, int phase) {
  detail::check_phase(phase);
  return {id.row >> detail::meta_row_shift(phase), id.col >> detail::meta_col_shift(phase), phase};
}

[[nodiscard]] inline int meta_row_count(const BeadGrid& grid, int phase) {
  const int g = meta_bead_shape(phase).second;
  return (grid.row_count() + g - 1) / g;
}

[[nodiscard]] inline int meta_col_count(const BeadGrid& grid, int phase) {
  const int g = meta_bead_shape(phase).first;
  return (grid.col_count() + g - 1) / g;
}

namespace detail {

/// Sorts ids by row, ascending columns on even rows and descending on odd.
inline std::vector<MetaBeadId> boustrophedon(std::vector<MetaBeadId> ids) {
  std::sort(ids.begin(), ids.end(), [](const MetaBeadId& a, const MetaBeadId& b) {
    if (a.row != b.row) return a.row < b.row;
    return (a.row % 2 == 0) ? a.col < b.col : a.col > b.col;
  });
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

}  // namespace detail

/// Meta-beads intersecting the rectangle in sweep order: meta-rows top to
/// bottom, left-to-right on even meta-rows and right-to-left on odd ones.
[[nodiscard]] inline std::vector<MetaBeadId> row_sweep_order(const BeadGrid& grid, int phase) {
  std::vector<MetaBeadId> ids;
  ids.reserve(grid.intersecting_beads().size());
  for (const BeadId& b : grid.intersecting_beads()) ids.push_back(meta_bead_of(grid, b, phase));
  return detail::boustrophedon(std::move(ids));
}

/// m_i: number of phase-i meta-beads intersecting the rectangle.
[[nodiscard]] inline std::size_t meta_bead_count(const BeadGrid& grid, int phase) {
  return row_sweep_order(grid, phase).size();
}

/// Sweep direction of a meta-row: +1 left-to-right, -1 right-to-left.
[[nodiscard]] inline int sweep_direction(const MetaBeadId& id) noexcept {
  return id.row % 2 == 0 ? 1 : -1;
}

/// Entry and exit poses on the meta-bead's mid-height axis. The horizontal
/// span runs from p- of its first column to p+ of its last column, measured
/// in its top row, so spans of neighbouring meta-beads in a meta-row abut.
[[nodiscard]] inline std::pair<Pose, Pose> meta_bead_entry_exit(const BeadGrid& grid,
                                                                 const MetaBeadId& id,
                                                                 int direction) {
  if (direction != 1 && direction != -1) throw Error("direction must be +1 or -1");
  const auto [gc, gr] = meta_bead_shape(id.phase);
  const double l = grid.half_length();
  const int top_row = id.row * gr;
  const double left = l * static_cast<double>(2 * id.col * gc - 2 + (top_row & 1));
  const double right = left + 2.0 * l * static_cast<double>(gc);
  const double y = grid.env().height -
                   (static_cast<double>(top_row) + static_cast<double>(gr - 1) / 2.0) *
                       (grid.width() / 2.0);
  if (direction > 0) return {Pose(left, y, 0.0), Pose(right, y, 0.0)};
  return {Pose(right, y, kPi), Pose(left, y, kPi)};
}

/// Map k -> number of beads fully inside the rectangle holding exactly k of
/// the points.
[[nodiscard]] inline std::map<std::size_t, std::size_t> occupancy_histogram(
    const BeadGrid& grid, std::span<const Point> points) {
  std::map<BeadId, std::size_t> counts;
  for (const Point& p : points) {
    const BeadId id = locate(grid, p);
    if (grid.inside_region(id)) ++counts[id];
  }
  std::map<std::size_t, std::size_t> hist;
  for (const BeadId& id : grid.intersecting_beads()) {
    if (!grid.inside_region(id)) continue;
    const auto it = counts.find(id);
    ++hist[it == counts.end() ? 0 : it->second];
  }
  return hist;
}

}  // namespace beadtsp
