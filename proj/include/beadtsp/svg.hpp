#pragma once

// SVG rendering of tours, targets and bead outlines. Drawing happens in
// world coordinates under a y-flip, so left turns use sweep-flag 1.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>

#include "beadtsp/bead.hpp"
#include "beadtsp/dubins.hpp"
#include "beadtsp/planner.hpp"
#include "beadtsp/tiling.hpp"

namespace beadtsp {

struct SvgOptions {
  double pixels_per_unit = 800.0;
  double stroke = 0.0;         // 0 picks 0.0015 * min(W, H)
  double marker_radius = 0.0;  // 0 picks 0.004 * min(W, H)
};

namespace svg_detail {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v == 0.0 ? 0.0 : v);
  return buf;
}

inline constexpr std::array<const char*, 10> kPalette = {
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
    "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f"};

inline const char* phase_color(int phase) {
  if (phase <= 0) return "#000000";
  return kPalette[static_cast<std::size_t>(phase - 1) % kPalette.size()];
}

/// Path data for one Dubins path, arcs split into quarter turns at most.
inline std::string path_data(const DubinsPath& path) {
  std::string d = "M" + num(path.start.x) + " " + num(path.start.y);
  for (const Piece& pc : pieces(path)) {
    if (pc.length <= 0.0) continue;
    if (pc.kind == SegmentKind::Straight) {
      const Pose e = advance(pc.start, pc.kind, pc.length, pc.rho);
      d += " L" + num(e.x) + " " + num(e.y);
      continue;
    }
    const double sweep = pc.length / pc.rho;
    const int chunks = std::max(1, static_cast<int>(std::ceil(sweep / (kPi / 2.0))));
    Pose q = pc.start;
    for (int k = 0; k < chunks; ++k) {
      q = advance(q, pc.kind, sweep / chunks, pc.rho);
      d += " A" + num(pc.rho) + " " + num(pc.rho) + " 0 0 " +
           (pc.kind == SegmentKind::Left ? "1 " : "0 ") + num(q.x) + " " + num(q.y);
    }
  }
  return d;
}

}  // namespace svg_detail

/// Deterministic SVG of the environment, optional bead outlines, the tour
/// and the targets colored by the phase that visited them.
[[nodiscard]] inline std::string render_svg(const Tour& tour, const TargetSet& targets,
                                            const BeadGrid* grid = nullptr,
                                            const SvgOptions& opt = {}) {
  using svg_detail::num;
  const double W = targets.env().width;
  const double H = targets.env().height;
  const double unit = std::min(W, H);
  const double stroke = opt.stroke > 0.0 ? opt.stroke : 0.0015 * unit;
  const double marker = opt.marker_radius > 0.0 ? opt.marker_radius : 0.004 * unit;
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(W * opt.pixels_per_unit)
    << "\" height=\"" << num(H * opt.pixels_per_unit) << "\" viewBox=\"0 0 " << num(W) << ' '
    << num(H) << "\">\n";
  s << "<g transform=\"matrix(1 0 0 -1 0 " << num(H) << ")\">\n";
  s << "<rect x=\"0\" y=\"0\" width=\"" << num(W) << "\" height=\"" << num(H)
    << "\" fill=\"white\" stroke=\"black\" stroke-width=\"" << num(stroke) << "\"/>\n";
  if (grid) {
    s << "<g class=\"beads\" fill=\"none\" stroke=\"#bbbbbb\" stroke-width=\"" << num(stroke / 2)
      << "\">\n";
    const double l = grid->half_length();
    const double a = std::asin(std::min(1.0, l / (2.0 * grid->rho().value())));
    for (const BeadId& id : grid->intersecting_beads()) {
      const Bead b = grid->bead(id);
      const Pose start(b.p_minus(), 0.0);
      const DubinsPath upper{start, grid->rho().value(), Word::LRL, {a, 2 * a, a}};
      const DubinsPath lower{start, grid->rho().value(), Word::RLR, {a, 2 * a, a}};
      s << "<path d=\"" << svg_detail::path_data(upper) << ' ' << svg_detail::path_data(lower)
        << "\"/>\n";
    }
    s << "</g>\n";
  }
  s << "<g class=\"tour\" fill=\"none\" stroke=\"#333333\" stroke-width=\"" << num(stroke) << "\">\n";
  for (const auto& seg : tour.segments) s << "<path d=\"" << svg_detail::path_data(seg) << "\"/>\n";
  s << "</g>\n<g class=\"targets\">\n";
  const auto pts = targets.points();
  for (std::size_t t = 0; t < pts.size(); ++t) {
    const int phase = t < tour.visits.size() ? tour.visits[t].phase : 0;
    s << "<circle cx=\"" << num(pts[t].x) << "\" cy=\"" << num(pts[t].y) << "\" r=\"" << num(marker)
      << "\" fill=\"" << svg_detail::phase_color(phase) << "\"/>\n";
  }
  s << "</g>\n</g>\n</svg>\n";
  return s.str();
}

}  // namespace beadtsp
