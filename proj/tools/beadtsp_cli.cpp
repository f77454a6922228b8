// beadtsp: generate instances, plan tours, run sweeps, fit exponents,
// tabulate bounds and render SVG.
//
// Exit status: 0 success, 1 usage error, 2 runtime or validation error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "beadtsp/beadtsp.hpp"

namespace {

using namespace beadtsp;

struct Common {
  double width = 1.0;
  double height = 1.0;
  double rho = 1.0;
};

void add_env(CLI::App* cmd, Common& c) {
  cmd->add_option("--width", c.width, "environment width W")->capture_default_str();
  cmd->add_option("--height", c.height, "environment height H")->capture_default_str();
}

void add_rho(CLI::App* cmd, Common& c) {
  cmd->add_option("--rho", c.rho, "minimum turning radius")->capture_default_str();
}

// Writes through `emit` to path, or to stdout when path is empty.
template <class F>
void write_to(const std::string& path, F&& emit) {
  if (path.empty()) {
    emit(std::cout);
    std::cout.flush();
    return;
  }
  auto out = open_output(path);
  emit(out);
  finish_output(out, path);
}

TargetSet load_targets(const std::string& path, Environment env) {
  auto in = open_input(path);
  return TargetSet(env, read_points(in, path));
}

int cmd_gen(std::size_t n, const Common& c, std::uint64_t seed, const std::string& out) {
  const TargetSet t = generate_points(n, Environment(c.width, c.height), seed);
  write_to(out, [&](std::ostream& o) { write_points(o, t.points()); });
  return 0;
}

struct TourArgs {
  std::string points;
  std::string out;
  std::string svg;
  std::string fallback = "alternating";
  int phases = 0;
  bool beads = false;
};

int cmd_tour(const TourArgs& a, const Common& c) {
  const Environment env(c.width, c.height);
  const Rho rho(c.rho);
  const TargetSet targets = load_targets(a.points, env);
  const PlanResult plan =
      recursive_bead_tiling(targets, rho, PlannerOptions{parse_fallback(a.fallback), a.phases});
  const ValidationReport rep = validate_tour(plan.tour, targets, rho);
  write_to(a.out, [&](std::ostream& o) { write_tour(o, plan.tour, summarize(plan.tour, plan.stats)); });
  if (!a.svg.empty()) {
    std::optional<BeadGrid> grid;
    if (a.beads && !plan.stats.degenerate) grid.emplace(build_tiling(env, targets.size(), rho));
    const std::string svg = render_svg(plan.tour, targets, grid ? &*grid : nullptr);
    write_to(a.svg, [&](std::ostream& o) { o << svg; });
  }
  std::fprintf(stderr, "length %.12g, %zu phases, leftover %zu, validation %s\n", plan.tour.length(),
               plan.stats.phases.size(), plan.stats.leftover, rep.ok() ? "clean" : "FAILED");
  return rep.ok() ? 0 : 2;
}

int cmd_sweep(const std::string& config_path, const std::string& out) {
  auto in = open_input(config_path);
  const SweepConfig cfg = read_sweep_config(in, config_path);
  const auto results = sweep(cfg);
  write_to(out, [&](std::ostream& o) { write_results(o, std::span<const TrialResult>(results)); });
  return 0;
}

int cmd_fit(const std::string& path, double lo, double hi) {
  auto in = open_input(path);
  const auto rows = read_results(in, path);
  const ExponentFit fit = fit_exponent(std::span<const ResultRow>(rows));
  for (const auto& m : fit.means) std::printf("n %.17g mean_length %.17g\n", m.n, m.length);
  std::printf("slope %.12g\nintercept %.12g\nresidual %.12g\n", fit.slope, fit.intercept, fit.residual);
  const bool pass = fit.slope >= lo && fit.slope <= hi;
  std::printf("window [%g, %g] %s\n", lo, hi, pass ? "PASS" : "FAIL");
  return 0;
}

int cmd_bounds(const Common& c, std::uint64_t n, int phases) {
  const OddPhaseTable t = odd_phase_bounds(Environment(c.width, c.height), n, Rho(c.rho), phases);
  std::printf("l_n %.12g\n", t.l_n);
  std::printf("%4s %14s %14s %14s %10s %16s %14s %16s\n", "j", "beads_per_pass", "pass_length",
              "uturn", "passes", "passes_relaxed", "closure", "L_2j-1");
  for (const auto& r : t.rows) {
    std::printf("%4d %14llu %14.8g %14.8g %10llu %16.10g %14.8g %16.10g\n", r.j,
                static_cast<unsigned long long>(r.beads_per_pass), r.pass_length, r.uturn,
                static_cast<unsigned long long>(r.passes.exact), r.passes.relaxed, r.closure, r.total);
  }
  std::printf("sum_odd %.12g\ntotal_3x %.12g\n", t.odd_sum, t.total);
  return 0;
}

int cmd_render(const std::string& points, const std::string& tour_path, const std::string& out,
               const Common& c, bool beads) {
  const Environment env(c.width, c.height);
  const TargetSet targets = load_targets(points, env);
  Tour tour;
  if (!tour_path.empty()) {
    auto in = open_input(tour_path);
    tour = read_tour(in, tour_path).tour;
  }
  std::optional<BeadGrid> grid;
  if (beads) grid.emplace(build_tiling(env, targets.size(), Rho(c.rho)));
  const std::string svg = render_svg(tour, targets, grid ? &*grid : nullptr);
  write_to(out, [&](std::ostream& o) { o << svg; });
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dubins TSP tours by recursive bead tiling"};
  app.require_subcommand(1);
  Common common;

  auto* gen = app.add_subcommand("gen", "write n uniform random points");
  std::size_t gen_n = 0;
  std::uint64_t seed = 0;
  std::string out;
  gen->add_option("--n", gen_n, "number of points")->required()->check(CLI::PositiveNumber);
  gen->add_option("--seed", seed, "generator seed")->capture_default_str();
  gen->add_option("--out", out, "output file (default stdout)");
  add_env(gen, common);

  auto* tour = app.add_subcommand("tour", "plan and validate a tour over a point file");
  TourArgs targs;
  tour->add_option("--points", targs.points, "point file")->required();
  tour->add_option("--out", targs.out, "tour file (default stdout)");
  tour->add_option("--svg", targs.svg, "also render to this SVG file");
  tour->add_option("--fallback", targs.fallback, "leftover handler")
      ->check(CLI::IsMember({"alternating", "greedy"}))
      ->capture_default_str();
  tour->add_option("--phases", targs.phases, "phase count override (0 = floor(log2 n) + 1)")
      ->check(CLI::NonNegativeNumber);
  tour->add_flag("--beads", targs.beads, "draw bead outlines in the SVG");
  add_env(tour, common);
  add_rho(tour, common);

  auto* sw = app.add_subcommand("sweep", "run a sweep described by a config file");
  std::string config;
  sw->add_option("--config", config, "key = value config file")->required();
  sw->add_option("--out", out, "results table (default stdout)");

  auto* fit = app.add_subcommand("fit", "fit the log-log exponent of a results table");
  std::string results;
  double lo = 0.55;
  double hi = 0.80;
  fit->add_option("--results", results, "results table")->required();
  fit->add_option("--min-slope", lo, "lower end of the slope window")->capture_default_str();
  fit->add_option("--max-slope", hi, "upper end of the slope window")->capture_default_str();

  auto* bounds = app.add_subcommand("bounds", "tabulate the per-phase length bounds");
  std::uint64_t bn = 0;
  int bphases = 0;
  bounds->add_option("--n", bn, "number of targets")->required()->check(CLI::PositiveNumber);
  bounds->add_option("--phases", bphases, "phase count (0 = floor(log2 n) + 1)")
      ->check(CLI::NonNegativeNumber);
  add_env(bounds, common);
  add_rho(bounds, common);

  auto* render = app.add_subcommand("render", "render points and an optional tour to SVG");
  std::string rpoints;
  std::string rtour;
  bool rbeads = false;
  render->add_option("--points", rpoints, "point file")->required();
  render->add_option("--tour", rtour, "tour file");
  render->add_option("--out,--svg", out, "SVG file (default stdout)");
  render->add_flag("--beads", rbeads, "draw bead outlines");
  add_env(render, common);
  add_rho(render, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*gen) return cmd_gen(gen_n, common, seed, out);
    if (*tour) return cmd_tour(targs, common);
    if (*sw) return cmd_sweep(config, out);
    if (*fit) return cmd_fit(results, lo, hi);
    if (*bounds) return cmd_bounds(common, bn, bphases);
    if (*render) return cmd_render(rpoints, rtour, out, common, rbeads);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 1;
}
