#pragma once

// Seeded instances, single trials, concurrent sweeps and the statistics
// computed over them.
//
// Points come from std::mt19937_64 seeded with the trial seed; each
// coordinate takes the top 53 bits of one draw scaled to [0, 1). Trial
// seeds are base_seed XOR splitmix64(n * 0x9E3779B97F4A7C15 + trial).

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "beadtsp/bounds.hpp"
#include "beadtsp/geometry.hpp"
#include "beadtsp/planner.hpp"
#include "beadtsp/tiling.hpp"

namespace beadtsp {

[[nodiscard]] constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

[[nodiscard]] constexpr std::uint64_t trial_seed(std::uint64_t base, std::uint64_t n,
                                                 std::uint64_t trial) noexcept {
  return base ^ splitmix64(n * 0x9E3779B97F4A7C15ULL + trial);
}

[[nodiscard]] inline double unit_draw(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

/// n uniform points in the environment.
[[nodiscard]] inline TargetSet generate_points(std::size_t n, Environment env, std::uint64_t seed) {
  if (n < 1) throw Error("generate_points needs n >= 1");
  std::mt19937_64 gen(seed);
  std::vector<Point> pts;
  pts.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = env.width * unit_draw(gen);
    const double y = env.height * unit_draw(gen);
    pts.push_back({x, y});
  }
  return TargetSet(env, std::move(pts));
}

struct TrialResult {
  std::size_t n = 0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  double total_length = 0.0;
  PhaseStats stats;
  std::size_t leftover = 0;
  double fallback_length = 0.0;
  double runtime = 0.0;  // seconds

  [[nodiscard]] std::vector<double> phase_lengths() const {
    std::vector<double> out;
    for (const auto& p : stats.phases) out.push_back(p.length);
    return out;
  }
};

class ValidationFailure : public Error {
 public:
  using Error::Error;
};

/// Plans, validates and summarizes one instance.
[[nodiscard]] inline TrialResult run_trial(std::size_t n, Environment env, Rho rho, std::uint64_t seed,
                                           Fallback fallback = Fallback::Alternating,
                                           int phases = 0) {
  const auto t0 = std::chrono::steady_clock::now();
  const TargetSet targets = generate_points(n, env, seed);
  PlanResult plan = recursive_bead_tiling(targets, rho, PlannerOptions{fallback, phases});
  const ValidationReport rep = validate_tour(plan.tour, targets, rho);
  if (!rep.ok()) {
    throw ValidationFailure(
        "tour validation failed: " + std::to_string(rep.discontinuities.size()) +
        " discontinuities, " + std::to_string(rep.curvature_violations.size()) +
        " curvature violations, " + std::to_string(rep.unvisited.size()) +
        " unvisited targets, closure gap " + std::to_string(rep.closure_gap));
  }
  TrialResult r;
  r.n = n;
  r.seed = seed;
  r.total_length = plan.tour.length();
  r.stats = std::move(plan.stats);
  r.leftover = r.stats.leftover;
  r.fallback_length = r.stats.fallback_length;
  r.runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

struct SweepConfig {
  std::vector<std::size_t> n_values;
  std::size_t trials = 1;
  double width = 1.0;
  double height = 1.0;
  double rho = 1.0;
  std::uint64_t base_seed = 0;
  Fallback fallback = Fallback::Alternating;
  unsigned threads = 0;  // 0 uses the hardware concurrency

  void validate() const {
    if (trials < 1) throw Error("sweep needs trials >= 1");
    for (std::size_t n : n_values) {
      if (n < 1) throw Error("sweep n values must be >= 1");
    }
    (void)Environment(width, height);
    (void)Rho(rho);
  }
};

struct TrialFailure {
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::string message;
};

class SweepError : public Error {
 public:
  explicit SweepError(std::vector<TrialFailure> failures)
      : Error(describe(failures)), failures_(std::move(failures)) {}
  [[nodiscard]] const std::vector<TrialFailure>& failures() const noexcept { return failures_; }

 private:
  static std::string describe(const std::vector<TrialFailure>& f) {
    std::string s = std::to_string(f.size()) + " trial(s) failed";
    for (const auto& t : f) {
      s += "; n=" + std::to_string(t.n) + " seed=" + std::to_string(t.seed) + ": " + t.message;
    }
    return s;
  }
  std::vector<TrialFailure> failures_;
};

/// One result per (n, trial), ordered by n-value position then trial.
[[nodiscard]] inline std::vector<TrialResult> sweep(const SweepConfig& config) {
  config.validate();
  const Environment env(config.width, config.height);
  const Rho rho(config.rho);
  const std::size_t total = config.n_values.size() * config.trials;
  std::vector<TrialResult> results(total);
  std::vector<std::optional<TrialFailure>> failures(total);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t k = next++; k < total; k = next++) {
      const std::size_t n = config.n_values[k / config.trials];
      const std::size_t trial = k % config.trials;
      const std::uint64_t seed = trial_seed(config.base_seed, n, trial);
      try {
        results[k] = run_trial(n, env, rho, seed, config.fallback);
        results[k].trial = trial;
      } catch (const std::exception& e) {
        failures[k] = TrialFailure{n, seed, e.what()};
      }
    }
  };
  unsigned threads = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(total, 1)));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }
  std::vector<TrialFailure> failed;
  for (auto& f : failures) {
    if (f) failed.push_back(std::move(*f));
  }
  if (!failed.empty()) throw SweepError(std::move(failed));
  return results;
}

struct LengthSample {
  double n = 0.0;
  double length = 0.0;
};

struct ExponentFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // RMS of the log-space residuals
  std::vector<LengthSample> means;  // per-n mean lengths used in the fit
};

/// Least squares of log(mean length per n) against log n.
[[nodiscard]] inline ExponentFit fit_exponent(std::span<const LengthSample> samples) {
  std::map<double, std::pair<double, std::size_t>> acc;
  for (const auto& s : samples) {
    if (!(s.n > 0.0) || !(s.length > 0.0)) throw Error("fit needs positive n and lengths");
    auto& a = acc[s.n];
    a.first += s.length;
    ++a.second;
  }
  if (acc.size() < 2) throw Error("fit needs at least two distinct n values");
  ExponentFit fit;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [n, a] : acc) {
    const double mean = a.first / static_cast<double>(a.second);
    fit.means.push_back({n, mean});
    const double x = std::log(n);
    const double y = std::log(mean);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double k = static_cast<double>(acc.size());
  fit.slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  fit.intercept = (sy - fit.slope * sx) / k;
  double ss = 0;
  for (const auto& m : fit.means) {
    const double e = std::log(m.length) - (fit.intercept + fit.slope * std::log(m.n));
    ss += e * e;
  }
  fit.residual = std::sqrt(ss / k);
  return fit;
}

[[nodiscard]] inline ExponentFit fit_exponent(std::span<const TrialResult> results) {
  std::vector<LengthSample> s;
  s.reserve(results.size());
  for (const auto& r : results) s.push_back({static_cast<double>(r.n), r.total_length});
  return fit_exponent(std::span<const LengthSample>(s));
}

/// 24 log2 n.
[[nodiscard]] inline double leftover_allowance(std::size_t n) {
  return 24.0 * std::log2(static_cast<double>(n));
}

struct LeftoverSummary {
  std::size_t n = 0;
  std::size_t trials = 0;
  double mean = 0.0;
  std::size_t max = 0;
  double within_allowance = 0.0;  // fraction of trials with leftover <= 24 log2 n
};

[[nodiscard]] inline std::vector<LeftoverSummary> leftover_curve(std::span<const TrialResult> results) {
  std::map<std::size_t, std::vector<std::size_t>> by_n;
  for (const auto& r : results) by_n[r.n].push_back(r.leftover);
  std::vector<LeftoverSummary> out;
  for (const auto& [n, v] : by_n) {
    LeftoverSummary s;
    s.n = n;
    s.trials = v.size();
    std::size_t ok = 0;
    double sum = 0;
    for (std::size_t x : v) {
      sum += static_cast<double>(x);
      s.max = std::max(s.max, x);
      if (static_cast<double>(x) <= leftover_allowance(n)) ++ok;
    }
    s.mean = sum / static_cast<double>(v.size());
    s.within_allowance = static_cast<double>(ok) / static_cast<double>(v.size());
    out.push_back(s);
  }
  return out;
}

struct OccupancySummary {
  std::size_t n = 0;
  int phase = 0;
  double beta_n = 0.0;
  double mean_v = 0.0;
  std::size_t max_v = 0;
  double within = 0.0;  // fraction of trials with v_i <= beta_i n
};

struct OccupancyReport {
  std::vector<OccupancySummary> rows;  // phases 1 .. istar(n)
  std::map<std::size_t, double> all_within;  // per n: fraction of trials meeting every row
};

/// Measured v_i against beta_i n for i <= istar(n).
[[nodiscard]] inline OccupancyReport phase_occupancy_report(std::span<const TrialResult> results) {
  std::map<std::size_t, std::vector<const TrialResult*>> by_n;
  for (const auto& r : results) by_n[r.n].push_back(&r);
  OccupancyReport rep;
  for (const auto& [n, trials] : by_n) {
    const int top = n >= 2 ? istar(n) : 0;
    std::size_t all_ok = 0;
    for (const TrialResult* t : trials) {
      bool ok = true;
      for (int i = 1; i <= top && i <= static_cast<int>(t->stats.phases.size()); ++i) {
        const double limit = beta(i).value() * static_cast<double>(n);
        if (static_cast<double>(t->stats.phases[i - 1].occupied_meta_beads) > limit) ok = false;
      }
      if (ok) ++all_ok;
    }
    rep.all_within[n] = static_cast<double>(all_ok) / static_cast<double>(trials.size());
    for (int i = 1; i <= top; ++i) {
      OccupancySummary s;
      s.n = n;
      s.phase = i;
      s.beta_n = beta(i).value() * static_cast<double>(n);
      std::size_t ok = 0;
      std::size_t counted = 0;
      double sum = 0;
      for (const TrialResult* t : trials) {
        if (i > static_cast<int>(t->stats.phases.size())) continue;
        const std::size_t v = t->stats.phases[i - 1].occupied_meta_beads;
        ++counted;
        sum += static_cast<double>(v);
        s.max_v = std::max(s.max_v, v);
        if (static_cast<double>(v) <= s.beta_n) ++ok;
      }
      if (counted > 0) {
        s.mean_v = sum / static_cast<double>(counted);
        s.within = static_cast<double>(ok) / static_cast<double>(counted);
      }
      rep.rows.push_back(s);
    }
  }
  return rep;
}

}  // namespace beadtsp
