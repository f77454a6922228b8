#pragma once

// Minimum-length bounded-curvature paths between two poses.
//
// The six candidate words are solved in the usual normalized frame: the
// start is moved to the origin, the chord is rotated onto the x axis and all
// lengths are divided by the turn radius. Arc parameters are stored as swept
// angles in radians; the straight parameter is stored in length units.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "beadtsp/geometry.hpp"

namespace beadtsp {

enum class Word { LSL, RSR, RSL, LSR, RLR, LRL };

inline constexpr std::array<Word, 6> kAllWords = {Word::LSL, Word::RSR, Word::RSL,
                                                  Word::LSR, Word::RLR, Word::LRL};

enum class SegmentKind { Left, Straight, Right };

[[nodiscard]] constexpr std::array<SegmentKind, 3> segment_kinds(Word w) noexcept {
  using enum SegmentKind;
  switch (w) {
    case Word::LSL: return {Left, Straight, Left};
    case Word::RSR: return {Right, Straight, Right};
    case Word::RSL: return {Right, Straight, Left};
    case Word::LSR: return {Left, Straight, Right};
    case Word::RLR: return {Right, Left, Right};
    case Word::LRL: return {Left, Right, Left};
  }
  return {Left, Straight, Left};
}

[[nodiscard]] constexpr std::string_view word_name(Word w) noexcept {
  switch (w) {
    case Word::LSL: return "LSL";
    case Word::RSR: return "RSR";
    case Word::RSL: return "RSL";
    case Word::LSR: return "LSR";
    case Word::RLR: return "RLR";
    case Word::LRL: return "LRL";
  }
  return "LSL";
}

[[nodiscard]] inline std::optional<Word> parse_word(std::string_view s) noexcept {
  for (Word w : kAllWords) {
    if (word_name(w) == s) return w;
  }
  return std::nullopt;
}

/// A three-segment bounded-curvature curve. `rho` is the radius used by the
/// arc segments, which may exceed the vehicle's minimum radius.
struct DubinsPath {
  Pose start;
  double rho = 1.0;
  Word word = Word::LSL;
  std::array<double, 3> params{};

  [[nodiscard]] double segment_length(std::size_t i) const noexcept {
    return segment_kinds(word)[i] == SegmentKind::Straight ? params[i] : params[i] * rho;
  }
  [[nodiscard]] double length() const noexcept {
    return segment_length(0) + segment_length(1) + segment_length(2);
  }
};

/// A path of one straight segment.
[[nodiscard]] inline DubinsPath straight_path(const Pose& start, double length, double rho) {
  return DubinsPath{start, rho, Word::LSL, {0.0, length, 0.0}};
}

[[nodiscard]] inline double path_length(const DubinsPath& path) noexcept { return path.length(); }

namespace detail {

// Sweeps this close to a full turn are taken as no turn at all.
inline constexpr double kFullTurnSnap = 1e-11;
// Squared-length slack for near-degenerate CSC words.
inline constexpr double kSquareSlack = 1e-12;

inline double mod2pi(double a) noexcept {
  double r = normalize_angle(a);
  if (kTwoPi - r < kFullTurnSnap) r = 0.0;
  return r;
}

using Normalized = std::array<double, 3>;

inline std::optional<Normalized> solve_word(Word w, double alpha, double beta, double d) noexcept {
  const double sa = std::sin(alpha), sb = std::sin(beta);
  const double ca = std::cos(alpha), cb = std::cos(beta);
  const double cab = std::cos(alpha - beta);
  auto root = [](double sq) -> std::optional<double> {
    if (sq < 0.0) {
      if (sq < -kSquareSlack) return std::nullopt;
      sq = 0.0;
    }
    return std::sqrt(sq);
  };
  auto clamp_unit = [](double v) -> std::optional<double> {
    if (std::abs(v) > 1.0) {
      if (std::abs(v) > 1.0 + kSquareSlack) return std::nullopt;
      v = std::clamp(v, -1.0, 1.0);
    }
    return v;
  };

  switch (w) {
    case Word::LSL: {
      auto p = root(2.0 + d * d - 2.0 * cab + 2.0 * d * (sa - sb));
      if (!p) return std::nullopt;
      const double th = std::atan2(cb - ca, d + sa - sb);
      return Normalized{mod2pi(th - alpha), *p, mod2pi(beta - th)};
    }
    case Word::RSR: {
      auto p = root(2.0 + d * d - 2.0 * cab + 2.0 * d * (sb - sa));
      if (!p) return std::nullopt;
      const double th = std::atan2(ca - cb, d - sa + sb);
      return Normalized{mod2pi(alpha - th), *p, mod2pi(th - beta)};
    }
    case Word::LSR: {
      auto p = root(-2.0 + d * d + 2.0 * cab + 2.0 * d * (sa + sb));
      if (!p) return std::nullopt;
      const double th = std::atan2(-ca - cb, d + sa + sb) - std::atan2(-2.0, *p);
      return Normalized{mod2pi(th - alpha), *p, mod2pi(th - beta)};
    }
    case Word::RSL: {
      auto p = root(-2.0 + d * d + 2.0 * cab - 2.0 * d * (sa + sb));
      if (!p) return std::nullopt;
      const double th = std::atan2(ca + cb, d - sa - sb) - std::atan2(2.0, *p);
      return Normalized{mod2pi(alpha - th), *p, mod2pi(beta - th)};
    }
    case Word::RLR: {
      auto c = clamp_unit((6.0 - d * d + 2.0 * cab + 2.0 * d * (sa - sb)) / 8.0);
      if (!c) return std::nullopt;
      const double phi = std::atan2(ca - cb, d - sa + sb);
      const double p = mod2pi(kTwoPi - std::acos(*c));
      const double t = mod2pi(alpha - phi + p / 2.0);
      return Normalized{t, p, mod2pi(alpha - beta - t + p)};
    }
    case Word::LRL: {
      auto c = clamp_unit((6.0 - d * d + 2.0 * cab + 2.0 * d * (sb - sa)) / 8.0);
      if (!c) return std::nullopt;
      const double phi = std::atan2(ca - cb, d + sa - sb);
      const double p = mod2pi(kTwoPi - std::acos(*c));
      const double t = mod2pi(-alpha - phi + p / 2.0);
      return Normalized{t, p, mod2pi(beta - alpha - t + p)};
    }
  }
  return std::nullopt;
}

struct Frame {
  double alpha;
  double beta;
  double d;
};

inline Frame normalize_frame(const Pose& start, const Pose& end, double rho) noexcept {
  const double dx = end.x - start.x;
  const double dy = end.y - start.y;
  const double dist = std::hypot(dx, dy);
  const double th = dist > 0.0 ? normalize_angle(std::atan2(dy, dx)) : 0.0;
  return {normalize_angle(start.theta - th), normalize_angle(end.theta - th), dist / rho};
}

}  // namespace detail

/// Moves `amount` along one segment: radians for arcs, length for straights.
/// Arcs are integrated through their chord so that very large radii stay
/// accurate.
[[nodiscard]] inline Pose advance(const Pose& q, SegmentKind kind, double amount, double rho) {
  switch (kind) {
    case SegmentKind::Straight:
      return Pose(q.x + amount * std::cos(q.theta), q.y + amount * std::sin(q.theta), q.theta);
    case SegmentKind::Left: {
      const double chord = 2.0 * rho * std::sin(amount / 2.0);
      const double dir = q.theta + amount / 2.0;
      return Pose(q.x + chord * std::cos(dir), q.y + chord * std::sin(dir), q.theta + amount);
    }
    case SegmentKind::Right: {
      const double chord = 2.0 * rho * std::sin(amount / 2.0);
      const double dir = q.theta - amount / 2.0;
      return Pose(q.x + chord * std::cos(dir), q.y + chord * std::sin(dir), q.theta - amount);
    }
  }
  return q;
}

/// Segment parameters of `word` from start to end, or nullopt when the word
/// has no realization for this pose pair.
[[nodiscard]] inline std::optional<std::array<double, 3>> word_params(Word word, const Pose& start,
                                                                     const Pose& end, Rho rho) {
  const auto f = detail::normalize_frame(start, end, rho.value());
  auto n = detail::solve_word(word, f.alpha, f.beta, f.d);
  if (!n) return std::nullopt;
  (*n)[1] = segment_kinds(word)[1] == SegmentKind::Straight ? (*n)[1] * rho.value() : (*n)[1];
  return *n;
}

[[nodiscard]] inline std::optional<double> word_length(Word word, const Pose& start, const Pose& end,
                                                       Rho rho) {
  auto p = word_params(word, start, end, rho);
  if (!p) return std::nullopt;
  return DubinsPath{start, rho.value(), word, *p}.length();
}

/// Globally shortest path among the six words. Ties keep the earlier word in
/// kAllWords order.
[[nodiscard]] inline DubinsPath shortest_path(const Pose& start, const Pose& end, Rho rho) {
  std::optional<DubinsPath> best;
  for (Word w : kAllWords) {
    auto p = word_params(w, start, end, rho);
    if (!p) continue;
    DubinsPath cand{start, rho.value(), w, *p};
    if (!best || cand.length() < best->length()) best = cand;
  }
  if (!best) throw Error("no Dubins word admits a solution");  // unreachable for finite input
  return *best;
}

[[nodiscard]] inline double shortest_length(const Pose& start, const Pose& end, Rho rho) {
  return shortest_path(start, end, rho).length();
}

/// Pose at arc length s from the start (clamped to [0, length]).
[[nodiscard]] inline Pose pose_at(const DubinsPath& path, double s) {
  const auto kinds = segment_kinds(path.word);
  Pose q = path.start;
  s = std::max(0.0, s);
  for (std::size_t i = 0; i < 3; ++i) {
    const double seg_len = path.segment_length(i);
    if (s < seg_len) {
      const double amount = kinds[i] == SegmentKind::Straight ? s : s / path.rho;
      return advance(q, kinds[i], amount, path.rho);
    }
    q = advance(q, kinds[i], path.params[i], path.rho);
    s -= seg_len;
  }
  return q;
}

[[nodiscard]] inline Pose endpoint(const DubinsPath& path) {
  const auto kinds = segment_kinds(path.word);
  Pose q = path.start;
  for (std::size_t i = 0; i < 3; ++i) q = advance(q, kinds[i], path.params[i], path.rho);
  return q;
}

/// Poses at equal arc-length steps no longer than `spacing`, first and last
/// included.
[[nodiscard]] inline std::vector<Pose> sample_path(const DubinsPath& path, double spacing) {
  if (!(spacing > 0.0)) throw Error("sample spacing must be positive");
  const double len = path.length();
  const auto steps = static_cast<std::size_t>(std::max(1.0, std::ceil(len / spacing - 1e-12)));
  std::vector<Pose> out;
  out.reserve(steps + 1);
  for (std::size_t k = 0; k < steps; ++k) {
    out.push_back(pose_at(path, len * static_cast<double>(k) / static_cast<double>(steps)));
  }
  out.push_back(endpoint(path));
  return out;
}

/// One constant-curvature piece of a path.
struct Piece {
  SegmentKind kind;
  Pose start;
  double length;  // arc length
  double rho;
};

[[nodiscard]] inline std::vector<Piece> pieces(const DubinsPath& path) {
  const auto kinds = segment_kinds(path.word);
  std::vector<Piece> out;
  Pose q = path.start;
  for (std::size_t i = 0; i < 3; ++i) {
    out.push_back({kinds[i], q, path.segment_length(i), path.rho});
    q = advance(q, kinds[i], path.params[i], path.rho);
  }
  return out;
}

struct Projection {
  double distance;
  double arclength;  // from the start of the piece or path
};

[[nodiscard]] inline Projection project(const Piece& piece, Point p) {
  const Point a = piece.start.position();
  const Point dir = unit_vector(piece.start.theta);
  if (piece.kind == SegmentKind::Straight || piece.length == 0.0) {
    const double s = std::clamp(dot(p - a, dir), 0.0, piece.length);
    return {distance(p, a + s * dir), s};
  }
  // Local frame: x along the start heading, y toward the arc center.
  const double sigma = piece.kind == SegmentKind::Left ? 1.0 : -1.0;
  const Point normal{-sigma * dir.y, sigma * dir.x};
  const Point d = p - a;
  const double px = dot(d, dir);
  const double py = dot(d, normal);
  const double big_r = piece.rho;
  const double r = std::hypot(px, py - big_r);
  const double sweep = piece.length / piece.rho;
  if (r > 0.0) {
    const double offset = normalize_angle(std::atan2(px, big_r - py));
    if (offset <= sweep) {
      const double gap = (px * px + py * py - 2.0 * py * big_r) / (r + big_r);
      return {std::abs(gap), offset * piece.rho};
    }
  }
  const Pose end = advance(piece.start, piece.kind, sweep, piece.rho);
  const double d0 = distance(p, a);
  const double d1 = distance(p, end.position());
  return d0 <= d1 ? Projection{d0, 0.0} : Projection{d1, piece.length};
}

/// Closest point of the whole path to p.
[[nodiscard]] inline Projection project(const DubinsPath& path, Point p) {
  Projection best{INFINITY, 0.0};
  double offset = 0.0;
  for (const Piece& pc : pieces(path)) {
    const Projection pr = project(pc, p);
    if (pr.distance < best.distance) best = {pr.distance, offset + pr.arclength};
    offset += pc.length;
  }
  return best;
}

}  // namespace beadtsp
