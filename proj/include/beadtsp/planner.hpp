#pragma once

// Recursive bead-tiling tour construction, the alternating-algorithm
// baseline, a greedy fallback and a tour validator.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "beadtsp/bead.hpp"
#include "beadtsp/dubins.hpp"
#include "beadtsp/geometry.hpp"
#include "beadtsp/tiling.hpp"

namespace beadtsp {

/// Targets inside a rectangular environment.
class TargetSet {
 public:
  TargetSet(Environment env, std::vector<Point> points) : env_(env), points_(std::move(points)) {
    for (std::size_t i = 0; i < points_.size(); ++i) {
      const Point& p = points_[i];
      if (!std::isfinite(p.x) || !std::isfinite(p.y) || !env_.contains(p)) {
        throw Error("target " + std::to_string(i) + " lies outside the environment");
      }
    }
  }

  [[nodiscard]] const Environment& env() const noexcept { return env_; }
  [[nodiscard]] std::span<const Point> points() const noexcept { return points_; }
  [[nodiscard]] std::size_t size() const noexcept { return points_.size(); }
  [[nodiscard]] const Point& operator[](std::size_t i) const { return points_.at(i); }

 private:
  Environment env_;
  std::vector<Point> points_;
};

/// When a target was visited. phase 0 means no record.
struct VisitRecord {
  int phase = 0;
  double position = 0.0;  // arc length along the tour
};

struct Tour {
  std::vector<DubinsPath> segments;
  std::vector<VisitRecord> visits;  // indexed by target
  bool closed = false;

  [[nodiscard]] double length() const noexcept {
    double s = 0.0;
    for (const auto& seg : segments) s += seg.length();
    return s;
  }
};

struct PhaseRecord {
  int phase = 0;
  std::size_t occupied_meta_beads = 0;  // v_i
  std::size_t meta_beads = 0;           // m_i
  std::size_t targets_served = 0;
  std::size_t passes = 0;  // meta-rows containing a serviced target
  double length = 0.0;
  double service_length = 0.0;
  double row_travel_length = 0.0;   // connections inside a meta-row
  double transition_length = 0.0;   // row changes and the entry of the phase
};

struct PhaseStats {
  std::vector<PhaseRecord> phases;
  std::size_t leftover = 0;  // unvisited after the last phase
  double fallback_length = 0.0;
  double closure_length = 0.0;
  bool degenerate = false;  // tiling impossible, whole instance went to the fallback
  double half_length = 0.0;  // l_n, 0 when degenerate
};

enum class Fallback { Alternating, Greedy };

struct PlannerOptions {
  Fallback fallback = Fallback::Alternating;
  int phases = 0;  // 0 selects floor(log2 n) + 1
};

struct PlanResult {
  Tour tour;
  PhaseStats stats;
};

namespace detail {

inline constexpr double kJoinTol = 1e-12;

/// Accumulates segments and visit positions while tracking the current pose.
class TourBuilder {
 public:
  TourBuilder(std::size_t n, Rho rho) : rho_(rho) { tour_.visits.resize(n); }

  [[nodiscard]] bool started() const noexcept { return current_.has_value(); }
  [[nodiscard]] const Pose& current() const { return *current_; }
  [[nodiscard]] double length() const noexcept { return length_; }
  [[nodiscard]] Rho rho() const noexcept { return rho_; }

  /// First pose of the tour.
  [[nodiscard]] const Pose& origin() const { return *origin_; }

  void start_at(const Pose& q) {
    current_ = q;
    if (!origin_) origin_ = q;
  }

  /// Appends a path; returns its length.
  double append(const DubinsPath& path) {
    if (!origin_) origin_ = path.start;
    const double len = path.length();
    current_ = endpoint(path);
    if (len > 0.0) {
      tour_.segments.push_back(path);
      length_ += len;
    }
    return len;
  }

  /// Shortest connection to q unless already there.
  double connect(const Pose& q) {
    if (!current_) {
      start_at(q);
      return 0.0;
    }
    if (poses_match(*current_, q, kJoinTol)) return 0.0;
    return append(shortest_path(*current_, q, rho_));
  }

  void visit(std::size_t target, int phase, double position) {
    tour_.visits.at(target) = VisitRecord{phase, position};
  }

  Tour finish(bool closed) {
    tour_.closed = closed;
    return std::move(tour_);
  }

 private:
  Rho rho_;
  Tour tour_;
  std::optional<Pose> current_;
  std::optional<Pose> origin_;
  double length_ = 0.0;
};

/// Closed Euclidean tour over nodes starting at node 0: nearest neighbour
/// then 2-opt with first improvement in a fixed scan order.
inline std::vector<std::size_t> euclidean_order(std::span<const Point> nodes) {
  const std::size_t m = nodes.size();
  std::vector<std::size_t> order;
  if (m == 0) return order;
  order.reserve(m);
  std::vector<bool> used(m, false);
  order.push_back(0);
  used[0] = true;
  for (std::size_t k = 1; k < m; ++k) {
    const Point here = nodes[order.back()];
    std::size_t best = m;
    double best_d = INFINITY;
    for (std::size_t j = 0; j < m; ++j) {
      if (used[j]) continue;
      const double d = distance(here, nodes[j]);
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    used[best] = true;
    order.push_back(best);
  }
  if (m < 4) return order;
  bool improved = true;
  while (improved) {
    improved = false;
    for (std::size_t i = 1; i + 1 < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) {
        const Point a = nodes[order[i - 1]];
        const Point b = nodes[order[i]];
        const Point c = nodes[order[j]];
        const Point d = nodes[order[(j + 1) % m]];
        const double delta = distance(a, c) + distance(b, d) - distance(a, b) - distance(c, d);
        if (delta < -1e-12) {
          std::reverse(order.begin() + static_cast<std::ptrdiff_t>(i),
                       order.begin() + static_cast<std::ptrdiff_t>(j) + 1);
          improved = true;
        }
      }
    }
  }
  return order;
}

inline double heading_between(Point a, Point b) { return std::atan2(b.y - a.y, b.x - a.x); }

/// Alternating-algorithm route over the listed targets. With a start pose
/// the route begins there and ends at the last target; without one it is a
/// closed cycle through the targets.
inline void alternating_route(TourBuilder& builder, std::span<const Point> all,
                              std::span<const std::size_t> ids, std::optional<Pose> start,
                              int phase) {
  if (ids.empty()) return;
  std::vector<Point> nodes;
  nodes.reserve(ids.size() + 1);
  if (start) nodes.push_back(start->position());
  for (std::size_t id : ids) nodes.push_back(all[id]);
  const std::vector<std::size_t> order = euclidean_order(nodes);

  std::vector<std::size_t> seq;  // positions in ids, in visiting order
  for (std::size_t k : order) {
    if (start && k == 0) continue;
    seq.push_back(start ? k - 1 : k);
  }
  const std::size_t m = seq.size();
  auto at = [&](std::size_t k) { return all[ids[seq[k]]]; };

  if (m == 1 && !start) {
    const Pose q(at(0), 0.0);
    builder.start_at(q);
    builder.visit(ids[seq[0]], phase, builder.length());
    builder.append(DubinsPath{q, builder.rho().value(), Word::LSL, {kTwoPi, 0.0, 0.0}});
    return;
  }

  // Odd edges (1st-2nd, 3rd-4th, ...) are straight; an unpaired last target
  // keeps the heading of its incoming chord.
  std::vector<double> heading(m);
  for (std::size_t k = 0; k + 1 < m; k += 2) {
    heading[k] = heading[k + 1] = heading_between(at(k), at(k + 1));
  }
  if (m % 2 == 1) {
    const Point prev = m >= 2 ? at(m - 2) : start->position();
    heading[m - 1] = heading_between(prev, at(m - 1));
  }

  for (std::size_t k = 0; k < m; ++k) {
    const Pose q(at(k), heading[k]);
    builder.connect(q);
    builder.visit(ids[seq[k]], phase, builder.length());
  }
  if (!start) builder.connect(Pose(at(0), heading[0]));
}

/// Candidate headings at a target for greedy and two-leg connections.
inline std::array<double, 16> candidate_headings(double base) {
  std::array<double, 16> h{};
  for (std::size_t k = 0; k < h.size(); ++k) {
    h[k] = base + kTwoPi * static_cast<double>(k) / static_cast<double>(h.size());
  }
  return h;
}

/// Repeatedly moves to the unvisited target with the shortest Dubins
/// connection over 16 arrival headings.
inline void greedy_route(TourBuilder& builder, std::span<const Point> all,
                         std::span<const std::size_t> ids, int phase) {
  std::vector<bool> done(ids.size(), false);
  for (std::size_t step = 0; step < ids.size(); ++step) {
    std::size_t best = ids.size();
    double best_len = INFINITY;
    DubinsPath best_path;
    for (std::size_t k = 0; k < ids.size(); ++k) {
      if (done[k]) continue;
      for (double h : candidate_headings(0.0)) {
        const DubinsPath p = shortest_path(builder.current(), Pose(all[ids[k]], h), builder.rho());
        if (p.length() < best_len) {
          best_len = p.length();
          best = k;
          best_path = p;
        }
      }
    }
    done[best] = true;
    builder.append(best_path);
    builder.visit(ids[best], phase, builder.length());
  }
}

struct ServicePlan {
  std::vector<DubinsPath> segments;
  double visit_offset = 0.0;
  double length = INFINITY;
};

/// Shortest path found from entry to exit through target. Candidates are
/// bead traversals embedded in the entry-exit axis and two-leg Dubins
/// connections through the target at 16 headings, the sweep heading first.
inline ServicePlan plan_service(const Pose& entry, const Pose& exit, Point target, Rho rho) {
  const double r = rho.value();
  const Point u = unit_vector(entry.theta);
  const Point rel = target - entry.position();
  const double total = dot(exit.position() - entry.position(), u);
  const double a = dot(rel, u);
  const double b = cross(u, rel);
  ServicePlan best;

  std::vector<double> halves{std::min(total / 2.0, 2.0 * r)};
  if (std::abs(b) < 2.0 * r) {
    const double t = 1.0 - std::abs(b) / (2.0 * r);
    halves.push_back(2.0 * r * std::sqrt(std::max(0.0, 1.0 - t * t)));
  }
  for (double half : halves) {
    if (!(half > 0.0) || half > total / 2.0 * (1.0 + 1e-12) || half > 2.0 * r) continue;
    half = std::min(half, total / 2.0);
    const double c = std::clamp(a, half, total - half);
    const Bead bead(entry.position() + c * u, half, rho, entry.theta);
    if (!contains(bead, target, 1e-12 * std::max(half, r))) continue;
    ServicePlan plan;
    const double before = c - half;
    const double after = total - c - half;
    if (before > 0.0) plan.segments.push_back(straight_path(entry, before, r));
    const DubinsPath through = traversal_path(bead, target, 1);
    plan.visit_offset = std::max(0.0, before) + project(through, target).arclength;
    plan.segments.push_back(through);
    if (after > 0.0) plan.segments.push_back(straight_path(Pose(bead.p_plus(), entry.theta), after, r));
    plan.length = std::max(0.0, before) + through.length() + std::max(0.0, after);
    if (plan.length < best.length) best = std::move(plan);
  }

  for (double h : candidate_headings(entry.theta)) {
    const Pose mid(target, h);
    const DubinsPath first = shortest_path(entry, mid, rho);
    const DubinsPath second = shortest_path(mid, exit, rho);
    const double len = first.length() + second.length();
    if (len < best.length) {
      best.segments = {first, second};
      best.visit_offset = first.length();
      best.length = len;
    }
  }
  return best;
}

}  // namespace detail

/// Closed tour by the alternating algorithm. With a start pose the tour
/// begins and ends there; otherwise it is a cycle through the targets.
[[nodiscard]] inline Tour alternating_algorithm(const TargetSet& targets, Rho rho,
                                                std::optional<Pose> start = std::nullopt) {
  detail::TourBuilder builder(targets.size(), rho);
  std::vector<std::size_t> ids(targets.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i;
  if (start) builder.start_at(*start);
  detail::alternating_route(builder, targets.points(), ids, start, 1);
  if (start) builder.connect(*start);
  return builder.finish(true);
}

/// Closed tour from start by greedy nearest-target selection.
[[nodiscard]] inline Tour greedy_fallback(const TargetSet& targets, const Pose& start, Rho rho) {
  detail::TourBuilder builder(targets.size(), rho);
  builder.start_at(start);
  std::vector<std::size_t> ids(targets.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i;
  detail::greedy_route(builder, targets.points(), ids, 1);
  builder.connect(start);
  return builder.finish(true);
}

/// Default phase count floor(log2 n) + 1.
[[nodiscard]] inline int default_phase_count(std::size_t n) {
  if (n < 1) throw Error("phase count needs n >= 1");
  int p = 0;
  while ((std::size_t{1} << (p + 1)) <= n && p < 62) ++p;
  return p + 1;
}

[[nodiscard]] inline PlanResult recursive_bead_tiling(const TargetSet& targets, Rho rho,
                                                      const PlannerOptions& options = {}) {
  const std::size_t n = targets.size();
  if (n == 0) throw Error("recursive bead tiling needs at least one target");
  if (options.phases < 0) throw Error("phase count must be non-negative");
  const auto pts = targets.points();
  PlanResult result;
  detail::TourBuilder builder(n, rho);

  std::optional<BeadGrid> grid;
  try {
    grid.emplace(build_tiling(targets.env(), n, rho));
  } catch (const TilingError&) {
    result.stats.degenerate = true;
  }

  auto run_fallback = [&](std::span<const std::size_t> ids, int phase) {
    if (!builder.started()) {
      const Pose start(pts[ids.front()], 0.0);
      if (options.fallback == Fallback::Alternating) {
        detail::alternating_route(builder, pts, ids, std::nullopt, phase);
      } else {
        builder.start_at(start);
        detail::greedy_route(builder, pts, ids, phase);
      }
      return;
    }
    if (options.fallback == Fallback::Alternating) {
      detail::alternating_route(builder, pts, ids, builder.current(), phase);
    } else {
      detail::greedy_route(builder, pts, ids, phase);
    }
  };

  if (!grid) {
    std::vector<std::size_t> ids(n);
    for (std::size_t i = 0; i < n; ++i) ids[i] = i;
    result.stats.leftover = n;
    run_fallback(ids, 1);
    result.stats.fallback_length = builder.length();
    if (options.fallback == Fallback::Greedy) {
      const double before = builder.length();
      builder.connect(Pose(pts[0], 0.0));
      result.stats.closure_length = builder.length() - before;
      result.stats.fallback_length = before;
    }
    result.tour = builder.finish(true);
    return result;
  }

  result.stats.half_length = grid->half_length();
  const int phase_count = options.phases > 0 ? options.phases : default_phase_count(n);
  std::vector<BeadId> home(n);
  for (std::size_t t = 0; t < n; ++t) home[t] = locate(*grid, pts[t]);
  std::vector<bool> visited(n, false);

  for (int phase = 1; phase <= phase_count; ++phase) {
    PhaseRecord rec;
    rec.phase = phase;
    const double phase_begin = builder.length();

    std::map<MetaBeadId, std::size_t> pick;  // smallest unvisited index per meta-bead
    for (std::size_t t = 0; t < n; ++t) {
      if (visited[t]) continue;
      pick.try_emplace(meta_bead_of(*grid, home[t], phase), t);
    }
    const std::vector<MetaBeadId> sweep = row_sweep_order(*grid, phase);
    rec.meta_beads = sweep.size();
    rec.occupied_meta_beads = pick.size();

    int last_row = -1;
    for (const MetaBeadId& id : sweep) {
      const auto it = pick.find(id);
      if (it == pick.end()) continue;
      const std::size_t t = it->second;
      const auto [entry, exit] = meta_bead_entry_exit(*grid, id, sweep_direction(id));
      const double joined = builder.connect(entry);
      if (id.row == last_row) {
        rec.row_travel_length += joined;
      } else {
        rec.transition_length += joined;
        ++rec.passes;
        last_row = id.row;
      }
      const detail::ServicePlan plan = detail::plan_service(entry, exit, pts[t], rho);
      const double base = builder.length();
      for (const DubinsPath& seg : plan.segments) builder.append(seg);
      builder.visit(t, phase, base + plan.visit_offset);
      rec.service_length += plan.length;
      visited[t] = true;
      ++rec.targets_served;
    }
    rec.length = builder.length() - phase_begin;
    result.stats.phases.push_back(rec);
  }

  std::vector<std::size_t> rest;
  for (std::size_t t = 0; t < n; ++t) {
    if (!visited[t]) rest.push_back(t);
  }
  result.stats.leftover = rest.size();
  if (!rest.empty()) {
    const double before = builder.length();
    run_fallback(rest, phase_count + 1);
    result.stats.fallback_length = builder.length() - before;
  }
  const double before = builder.length();
  builder.connect(builder.origin());
  result.stats.closure_length = builder.length() - before;
  result.tour = builder.finish(true);
  return result;
}

struct ValidationReport {
  std::vector<std::size_t> discontinuities;  // k: segment k does not end where k+1 starts
  std::vector<std::size_t> curvature_violations;
  std::vector<std::size_t> unvisited;
  double closure_gap = 0.0;
  bool open = false;

  [[nodiscard]] bool ok() const noexcept {
    return discontinuities.empty() && curvature_violations.empty() && unvisited.empty() && !open;
  }
};

/// Checks continuity, curvature and closure to within tol and that every
/// target lies within visit_tol of the tour.
[[nodiscard]] inline ValidationReport validate_tour(const Tour& tour, const TargetSet& targets,
                                                    Rho rho, double tol = 1e-9,
                                                    double visit_tol = 1e-6) {
  ValidationReport rep;
  const auto& segs = tour.segments;
  std::vector<Pose> ends;
  ends.reserve(segs.size());
  for (std::size_t k = 0; k < segs.size(); ++k) {
    ends.push_back(endpoint(segs[k]));
    const auto kinds = segment_kinds(segs[k].word);
    for (std::size_t i = 0; i < 3; ++i) {
      if (kinds[i] != SegmentKind::Straight && segs[k].params[i] != 0.0 &&
          segs[k].rho < rho.value() - tol) {
        rep.curvature_violations.push_back(k);
        break;
      }
    }
    if (k > 0 && !poses_match(ends[k - 1], segs[k].start, tol)) rep.discontinuities.push_back(k - 1);
  }
  if (!segs.empty()) {
    const Pose& first = segs.front().start;
    rep.closure_gap = std::max(distance(ends.back().position(), first.position()),
                               angle_distance(ends.back().theta, first.theta));
    rep.open = !tour.closed || rep.closure_gap > tol;
  } else {
    rep.open = !tour.closed;
  }

  std::vector<double> offsets(segs.size() + 1, 0.0);
  for (std::size_t k = 0; k < segs.size(); ++k) offsets[k + 1] = offsets[k] + segs[k].length();
  const auto pts = targets.points();
  for (std::size_t t = 0; t < pts.size(); ++t) {
    bool seen = false;
    if (t < tour.visits.size() && tour.visits[t].phase > 0 && !segs.empty()) {
      const double s = tour.visits[t].position;
      const auto up = std::upper_bound(offsets.begin() + 1, offsets.end(), s);
      const std::size_t k = std::min<std::size_t>(
          static_cast<std::size_t>(up - offsets.begin()) - 1, segs.size() - 1);
      for (std::size_t j = k == 0 ? 0 : k - 1; j <= std::min(k + 1, segs.size() - 1) && !seen; ++j) {
        seen = project(segs[j], pts[t]).distance <= visit_tol;
      }
    }
    for (std::size_t j = 0; j < segs.size() && !seen; ++j) {
      seen = project(segs[j], pts[t]).distance <= visit_tol;
    }
    if (!seen) rep.unvisited.push_back(t);
  }
  return rep;
}

}  // namespace beadtsp
