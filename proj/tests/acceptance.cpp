// Acceptance harness: one PASS/FAIL line per criterion, with the measured
// quantities behind each verdict logged above it.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "beadtsp/beadtsp.hpp"
#include "oracles.hpp"

using namespace beadtsp;

namespace {

struct Verdict {
  bool pass = true;
  std::string note;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!note.empty()) note += "; ";
      note += what;
    }
  }
};

const Environment kUnit(1, 1);
const Rho kRho(0.05);

// Shared by criteria 1, 2, 4 and 9.
struct MainSweep {
  std::vector<TrialResult> results;
  std::vector<TrialFailure> failures;
  bool ran = false;
};

MainSweep& main_sweep() {
  static MainSweep s = [] {
    MainSweep m;
    SweepConfig cfg;
    cfg.n_values = {250, 500, 1000, 2000, 4000, 8000};
    cfg.trials = 10;
    cfg.rho = kRho.value();
    cfg.base_seed = 20240601;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      m.results = sweep(cfg);
    } catch (const SweepError& e) {
      m.failures = e.failures();
    }
    m.ran = true;
    std::printf("  sweep: %zu trials in %.1f s, %zu failed\n", m.results.size(),
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(),
                m.failures.size());
    return m;
  }();
  return s;
}

Verdict c1_scaling() {
  Verdict v;
  const auto& s = main_sweep();
  v.require(s.failures.empty(), "sweep had failing trials");
  if (s.results.empty()) return v;
  const ExponentFit fit = fit_exponent(std::span<const TrialResult>(s.results));
  for (const auto& m : fit.means) std::printf("  n=%-6.0f mean length %.4f\n", m.n, m.length);
  std::printf("  slope %.4f intercept %.4f rms residual %.4f\n", fit.slope, fit.intercept, fit.residual);
  v.require(fit.slope >= 0.55 && fit.slope <= 0.80, "slope " + std::to_string(fit.slope) + " outside [0.55, 0.80]");
  return v;
}

Verdict c2_leftover() {
  Verdict v;
  const auto& s = main_sweep();
  v.require(s.failures.empty(), "sweep had failing trials");
  if (s.results.empty()) return v;
  std::size_t ok = 0;
  for (const auto& r : s.results) ok += static_cast<double>(r.leftover) <= leftover_allowance(r.n) ? 1 : 0;
  const double frac = static_cast<double>(ok) / static_cast<double>(s.results.size());
  double m1000 = 0, m8000 = 0;
  for (const auto& c : leftover_curve(s.results)) {
    std::printf("  n=%-6zu mean leftover %.2f max %zu allowance %.1f within %.2f\n", c.n, c.mean, c.max,
                leftover_allowance(c.n), c.within_allowance);
    if (c.n == 1000) m1000 = c.mean;
    if (c.n == 8000) m8000 = c.mean;
  }
  const double factor = 2.0 * std::log2(8000.0) / std::log2(1000.0);
  std::printf("  within-allowance fraction %.3f; mean(8000) %.3f vs %.3f x mean(1000) = %.3f\n", frac, m8000,
              factor, factor * m1000);
  v.require(frac >= 0.95, "only " + std::to_string(frac) + " of trials within 24 log2 n");
  v.require(m8000 <= factor * m1000, "mean leftover growth exceeds the log factor");
  return v;
}

Verdict c3_occupancy() {
  Verdict v;
  SweepConfig cfg;
  cfg.n_values = {4096, 8192};
  cfg.trials = 10;
  cfg.rho = kRho.value();
  cfg.base_seed = 777;
  const auto res = sweep(cfg);
  const OccupancyReport rep = phase_occupancy_report(res);
  for (const auto& r : rep.rows) {
    std::printf("  n=%-5zu phase %d: beta*n %.1f mean v %.1f max v %zu within %.2f\n", r.n, r.phase, r.beta_n,
                r.mean_v, r.max_v, r.within);
  }
  for (const auto& [n, f] : rep.all_within) {
    std::printf("  n=%-5zu trials meeting every phase: %.2f\n", n, f);
    v.require(f >= 0.90, "n=" + std::to_string(n) + " occupancy fraction " + std::to_string(f));
  }
  return v;
}

Verdict c4_bounds() {
  Verdict v;
  const auto& s = main_sweep();
  v.require(s.failures.empty(), "sweep had failing trials");
  // Worst ratios per (n, j), logged.
  std::map<std::pair<std::size_t, int>, double> worst_phase;
  std::map<std::size_t, double> worst_total;
  for (const auto& r : s.results) {
    const int phases = static_cast<int>(r.stats.phases.size());
    if (phases == 0) continue;
    const OddPhaseTable t = odd_phase_bounds(kUnit, r.n, kRho, phases);
    for (std::size_t j = 1; j <= t.rows.size(); ++j) {
      const double measured = r.stats.phases[2 * j - 2].length;
      const double ratio = measured / t.rows[j - 1].total;
      auto& w = worst_phase[{r.n, static_cast<int>(j)}];
      w = std::max(w, ratio);
      if (measured > kDefaultSlack * t.rows[j - 1].total) {
        v.require(false, "n=" + std::to_string(r.n) + " seed=" + std::to_string(r.seed) + " phase " +
                             std::to_string(2 * j - 1) + " exceeds slack");
      }
    }
    const double allowance = r.fallback_length + r.stats.closure_length;
    const double limit = t.total + allowance;
    auto& wt = worst_total[r.n];
    wt = std::max(wt, r.total_length / limit);
    if (r.total_length > limit) {
      v.require(false, "n=" + std::to_string(r.n) + " seed=" + std::to_string(r.seed) + " total exceeds 3 sum");
    }
  }
  for (const auto& [key, ratio] : worst_phase) {
    const auto t = odd_phase_bounds(kUnit, key.first, kRho);
    const auto& row = t.rows[key.second - 1];
    std::printf("  n=%-5zu phase %-2d worst measured/bound %.3f (bound %.2f = %.1f passes x (%.3f + %.3f) + %.3f)\n",
                key.first, 2 * key.second - 1, ratio, row.total, row.passes.relaxed, row.pass_length, row.uturn,
                row.closure);
  }
  for (const auto& [n, ratio] : worst_total) std::printf("  n=%-5zu worst total/(3 sum + fallback) %.3f\n", n, ratio);
  return v;
}

Verdict c5_bead() {
  Verdict v;
  const Rho rho(1.0);
  for (double l : {0.1, 0.5, 1.0}) {
    const double w = bead_width(l, rho);
    const double closed = 4.0 * (1.0 - std::sqrt(1.0 - l * l / 4.0));
    v.require(std::abs(w - closed) <= 1e-12, "width closed form l=" + std::to_string(l));
    v.require(std::abs(bead_area(l, rho) - l * closed) <= 1e-12, "area closed form l=" + std::to_string(l));

    const oracle::BeadShape shape{l, 1.0};
    const auto est = oracle::mc_bead_area(shape, 1000000, 1234 + static_cast<std::uint64_t>(l * 1000));
    const double z = std::abs(est.mean - l * w) / est.stderr_;
    std::printf("  l=%.1f MC area %.6f +- %.6f vs %.6f (z = %.2f)\n", l, est.mean, est.stderr_, l * w, z);
    v.require(z <= 3.0, "MC area off by " + std::to_string(z) + " sigma at l=" + std::to_string(l));

    const Bead bead({0, 0}, l, rho);
    const double bound = 4.0 * std::asin(l / 2.0) + 1e-9;
    std::mt19937_64 g(55 + static_cast<std::uint64_t>(l * 10));
    std::uniform_real_distribution<double> ux(-l, l);
    std::uniform_real_distribution<double> uy(-w / 2, w / 2);
    std::size_t outside = 0, too_long = 0, missed = 0;
    double longest = 0;
    for (int k = 0; k < 10000; ++k) {
      Point t;
      do t = {ux(g), uy(g)};
      while (!shape.contains(t.x, t.y));
      const DubinsPath p = traversal_path(bead, t, k % 2 ? 1 : -1);
      longest = std::max(longest, p.length());
      if (p.length() > bound) ++too_long;
      if (project(p, t).distance > 1e-9) ++missed;
      for (const Pose& q : sample_path(p, l / 100)) {
        if (!shape.contains(q.x, q.y, 1e-9)) {
          ++outside;
          break;
        }
      }
    }
    std::printf("  l=%.1f traversal: longest %.9f bound %.9f; outside %zu, too long %zu, missed %zu\n", l, longest,
                bound, outside, too_long, missed);
    v.require(outside == 0 && too_long == 0 && missed == 0, "traversal property at l=" + std::to_string(l));
  }
  return v;
}

Verdict c6_dubins() {
  Verdict v;
  std::mt19937_64 g(6060);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> a(0.0, kTwoPi);
  const Rho rho(0.3);
  auto mirror = [](const Pose& p) { return Pose(p.x, -p.y, kPi - p.theta); };
  auto reflect = [](const Pose& p) { return Pose(p.x, -p.y, -p.theta); };
  std::size_t not_min = 0, oracle_off = 0, sym_off = 0, scale_off = 0;
  double worst_oracle = 0;
  for (int k = 0; k < 1000; ++k) {
    const Pose s(u(g), u(g), a(g));
    const Pose e(u(g), u(g), a(g));
    const DubinsPath p = shortest_path(s, e, rho);
    double best = INFINITY;
    for (Word w : kAllWords) {
      if (const auto len = word_length(w, s, e, rho)) best = std::min(best, *len);
    }
    if (p.length() != best) ++not_min;
    const double diff = std::abs(p.length() - oracle::dubins_length(s, e, rho.value()));
    worst_oracle = std::max(worst_oracle, diff);
    if (diff > 1e-6) ++oracle_off;
    const double d = p.length();
    if (std::abs(d - shortest_length(mirror(e), mirror(s), rho)) > 1e-9 ||
        std::abs(d - shortest_length(reflect(s), reflect(e), rho)) > 1e-9)
      ++sym_off;
    const double c = 2.5;
    const double ds = shortest_length(Pose(c * s.x, c * s.y, s.theta), Pose(c * e.x, c * e.y, e.theta), Rho(c * 0.3));
    if (std::abs(ds - c * d) > 1e-9 * std::max(1.0, c * d)) ++scale_off;
  }
  std::printf("  not six-word min %zu; oracle > 1e-6: %zu (worst %.2e); symmetry %zu; scale %zu\n", not_min,
              oracle_off, worst_oracle, sym_off, scale_off);
  v.require(not_min == 0, "shortest_path differs from the six-word minimum");
  v.require(oracle_off == 0, "oracle disagreement");
  v.require(sym_off == 0, "symmetry violated");
  v.require(scale_off == 0, "scale covariance violated");
  return v;
}

Verdict c7_tiling() {
  Verdict v;
  const std::size_t n = 100000;
  const BeadGrid grid = build_tiling(kUnit, n, kRho);
  const oracle::BeadShape shape{grid.half_length(), kRho.value()};
  const double l = grid.half_length();
  const double half_w = grid.width() / 2;
  std::mt19937_64 g(7007);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::size_t gaps = 0, overlaps = 0, disagree = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const Point p{u(g), u(g)};
    // Oracle scan over every lattice bead whose bounding box can hold p.
    const int r0 = static_cast<int>(std::floor((1.0 - p.y) / half_w)) - 2;
    std::vector<BeadId> holders;
    std::size_t strict = 0;
    for (int r = std::max(0, r0); r <= std::min(grid.row_count() - 1, r0 + 4); ++r) {
      const double axis = 1.0 - r * half_w;
      const double shift = (r & 1) ? l : 0.0;
      const int c0 = static_cast<int>(std::floor((p.x - shift) / (2 * l))) - 1;
      for (int c = std::max(0, c0); c <= std::min(grid.col_count() - 1, c0 + 3); ++c) {
        const double cx = l * (2 * c - 1) + shift;
        if (shape.contains(p.x - cx, p.y - axis, 1e-12)) holders.push_back({r, c});
        if (shape.contains(p.x - cx, p.y - axis, -1e-12)) ++strict;
      }
    }
    if (holders.empty()) ++gaps;
    if (strict > 1) ++overlaps;
    const BeadId id = locate(grid, p);
    if (std::find(holders.begin(), holders.end(), id) == holders.end()) ++disagree;
  }
  const auto hist = occupancy_histogram(grid, generate_points(n, kUnit, 4242).points());
  std::size_t total = 0;
  for (auto [k, c] : hist) total += c;
  const double frac = static_cast<double>(hist.count(0) ? hist.at(0) : 0) / static_cast<double>(total);
  std::printf("  gaps %zu, overlaps %zu, locate disagreements %zu over %zu points\n", gaps, overlaps, disagree, n);
  std::printf("  nu %.6f; empty interior fraction %.4f vs e^-1/2 = %.4f over %zu beads\n", grid.nu(), frac,
              std::exp(-0.5), total);
  v.require(gaps == 0 && overlaps == 0 && disagree == 0, "partition or locate disagreement");
  v.require(std::abs(frac - std::exp(-0.5)) <= 0.01, "empty fraction " + std::to_string(frac));
  return v;
}

Verdict c8_exact() {
  Verdict v;
  for (int i = 1; i <= 40; ++i) {
    v.require(beta(i) == Rational(1, std::uint64_t{1} << (i - 1)), "beta(" + std::to_string(i) + ")");
    if (i < 40) v.require(beta(i + 1) == power_of_two(i - 2) * beta(i) * beta(i), "recursion at " + std::to_string(i));
  }
  v.require(power_of_two(1) * Rational(1, 4) * Rational(1, 4) == beta(4), "recursion example");
  v.require(istar(1024) == 4, "istar(1024)");
  for (std::size_t n : {1000u, 10000u, 100000u}) {
    const BeadGrid grid = build_tiling(kUnit, n, kRho);
    for (int i = 1; i < default_phase_count(n); ++i) {
      if (meta_bead_count(grid, i) > 2 * meta_bead_count(grid, i + 1)) {
        v.require(false, "m_i > 2 m_{i+1} at n=" + std::to_string(n) + " i=" + std::to_string(i));
      }
    }
  }
  const Rho one(1.0);
  v.require(shortest_length(Pose(0, 0, 0), Pose(4, 0, 0), one) == 4.0, "straight example");
  v.require(std::abs(shortest_length(Pose(0, 0, 0), Pose(0, 2, kPi), one) - kPi) <= 1e-12, "semicircle example");
  v.require(word_length(Word::LSL, Pose(0, 0, 0), Pose(4, 0, 0), one) == 4.0, "LSL straight");
  v.require(std::abs(*word_length(Word::LSL, Pose(0, 0, 0), Pose(0, 2, kPi), one) - kPi) <= 1e-12, "LSL semicircle");
  v.require(path_length(DubinsPath{Pose(0, 0, 0), 1.0, Word::LSL, {0, 4, 0}}) == 4.0, "path_length straight");
  v.require(path_length(DubinsPath{Pose(0, 0, 0), 1.0, Word::LSL, {kPi, 0, 0}}) == kPi, "path_length arc");
  v.require(std::abs(path_length(DubinsPath{Pose(0, 0, 0), 2.0, Word::LSL, {kPi / 2, 1, kPi / 2}}) - (1 + kTwoPi)) <=
                1e-12,
            "path_length mixed");
  v.require(sample_path(straight_path(Pose(0, 0, 0), 4, 1), 1.0).size() == 5, "sample count");
  v.require(bead_width(2.0, one) == 4.0, "w(2 rho)");
  v.require(bead_area(2.0, one) == 8.0, "area(2 rho)");
  v.require(solve_bead_half_length(8.0, one) == 2.0, "solve at 8 rho^2");
  const Bead b({0, 0}, 1.0, one);
  v.require(contains(b, {0, 0}) && contains(b, {0, bead_width(1.0, one) / 2}) &&
                !contains(b, {0, bead_width(1.0, one) / 2 + 1e-6}),
            "contains examples");
  v.require(std::abs(traversal_path(b, {0, 0}, 1).length() - 2.0) <= 1e-12, "axis traversal");
  bool threw = false;
  try {
    (void)build_tiling(kUnit, 1, Rho(0.1));
  } catch (const TilingError&) {
    threw = true;
  }
  v.require(threw, "n too small");
  const BeadGrid grid = build_tiling(kUnit, 400, Rho(0.1));
  v.require(meta_bead_of(grid, {5, 7}, 3) == MetaBeadId{2, 3, 3}, "meta index");
  v.require(meta_bead_of(grid, {5, 7}, 1) == MetaBeadId{5, 7, 1}, "meta identity");
  const auto order = detail::boustrophedon({{0, 0, 1}, {0, 1, 1}, {0, 2, 1}, {1, 0, 1}, {1, 1, 1}, {1, 2, 1}});
  const std::vector<MetaBeadId> expect{{0, 0, 1}, {0, 1, 1}, {0, 2, 1}, {1, 2, 1}, {1, 1, 1}, {1, 0, 1}};
  v.require(order == expect, "boustrophedon 2x3");
  BoundInputs in{1, 1, 1, 1000, 0.1, 1};
  v.require(beads_per_pass(in) == 5, "beads per pass");
  v.require(num_passes_bound(in).exact == 400, "exact passes");
  v.require(std::abs(closure_bound(1, 1, 1) - 4 * (1 + kPi)) <= 1e-12, "closure");
  std::printf("  checked beta/recursion to i=40, istar, m_i doubling, and the core closed-form examples\n");
  return v;
}

Verdict c9_validity() {
  Verdict v;
  const auto& s = main_sweep();
  std::printf("  %zu trials validated clean, %zu rejected\n", s.results.size(), s.failures.size());
  for (const auto& f : s.failures) std::printf("    n=%zu seed=%llu: %s\n", f.n, static_cast<unsigned long long>(f.seed), f.message.c_str());
  v.require(s.failures.empty() && s.results.size() == 60, "invalid tours in the sweep");
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
      {"C1 scaling exponent", c1_scaling},   {"C2 leftover bound", c2_leftover},
      {"C3 phase occupancy", c3_occupancy},  {"C4 bound domination", c4_bounds},
      {"C5 bead properties", c5_bead},       {"C6 dubins oracle", c6_dubins},
      {"C7 tiling partition", c7_tiling},    {"C8 exact arithmetic", c8_exact},
      {"C9 tour validity", c9_validity}};
  std::vector<std::string> lines;
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    std::printf("[%s]\n", name);
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v.pass = false;
      v.note = std::string("exception: ") + e.what();
    }
    failed += v.pass ? 0 : 1;
    lines.push_back(std::string(v.pass ? "PASS " : "FAIL ") + name + (v.note.empty() ? "" : " (" + v.note + ")"));
    std::printf("%s\n", lines.back().c_str());
    std::fflush(stdout);
  }
  std::printf("\nsummary\n");
  for (const auto& l : lines) std::printf("%s\n", l.c_str());
  return failed == 0 ? 0 : 1;
}
