#pragma once

// Text formats: point files, tour files, sweep configs and result tables.
// Floating-point values are written with 17 significant digits so every
// round trip is exact.

#include <cerrno>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "beadtsp/dubins.hpp"
#include "beadtsp/experiments.hpp"
#include "beadtsp/geometry.hpp"
#include "beadtsp/planner.hpp"

namespace beadtsp {

class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : Error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}
  [[nodiscard]] std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

namespace io_detail {

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const auto k = s.find(sep, pos);
    out.push_back(trim(s.substr(pos, k == std::string_view::npos ? k : k - pos)));
    if (k == std::string_view::npos) break;
    pos = k + 1;
  }
  return out;
}

inline std::vector<std::string_view> words(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

template <class T>
std::optional<T> parse_number(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

template <class T>
T require_number(std::string_view s, const std::string& source, std::size_t line,
                 std::string_view what) {
  auto v = parse_number<T>(s);
  if (!v) {
    throw ParseError(source, line, "invalid " + std::string(what) + " '" + std::string(s) + "'");
  }
  return *v;
}

}  // namespace io_detail

/// Opens a file or throws with the path and the system's reason.
inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "' for reading: " + std::strerror(errno));
  return in;
}

inline std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing: " + std::strerror(errno));
  return out;
}

inline void finish_output(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw Error("write to '" + path + "' failed: " + std::strerror(errno));
}

// Points: header "x,y" then one "x,y" line per target.

inline void write_points(std::ostream& out, std::span<const Point> points) {
  out << "x,y\n";
  for (const Point& p : points) out << io_detail::fmt(p.x) << ',' << io_detail::fmt(p.y) << '\n';
}

[[nodiscard]] inline std::vector<Point> read_points(std::istream& in,
                                                    const std::string& source = "<points>") {
  std::string line;
  std::size_t no = 0;
  bool header = false;
  std::vector<Point> pts;
  while (std::getline(in, line)) {
    ++no;
    const auto t = io_detail::trim(line);
    if (t.empty() || t.front() == '#') continue;
    if (!header) {
      if (t != "x,y") throw ParseError(source, no, "expected header 'x,y'");
      header = true;
      continue;
    }
    const auto f = io_detail::split(t, ',');
    if (f.size() != 2) throw ParseError(source, no, "expected two comma-separated values");
    pts.push_back({io_detail::require_number<double>(f[0], source, no, "x"),
                   io_detail::require_number<double>(f[1], source, no, "y")});
  }
  if (!header) throw ParseError(source, no, "missing header 'x,y'");
  return pts;
}

// Tours:
//   beadtsp-tour 1
//   closed <0|1>
//   segment <word> <x> <y> <theta> <rho> <p0> <p1> <p2>
//   visit <target> <phase> <position>
//   summary <key> [<index>] <value>

struct TourSummary {
  double total_length = 0.0;
  std::vector<double> phase_lengths;
  std::size_t leftover = 0;
  double fallback_length = 0.0;
  double closure_length = 0.0;
};

struct TourDocument {
  Tour tour;
  std::optional<TourSummary> summary;
};

[[nodiscard]] inline TourSummary summarize(const Tour& tour, const PhaseStats& stats) {
  TourSummary s;
  s.total_length = tour.length();
  for (const auto& p : stats.phases) s.phase_lengths.push_back(p.length);
  s.leftover = stats.leftover;
  s.fallback_length = stats.fallback_length;
  s.closure_length = stats.closure_length;
  return s;
}

inline void write_tour(std::ostream& out, const Tour& tour,
                       const std::optional<TourSummary>& summary = std::nullopt) {
  using io_detail::fmt;
  out << "beadtsp-tour 1\n";
  out << "closed " << (tour.closed ? 1 : 0) << '\n';
  for (const auto& s : tour.segments) {
    out << "segment " << word_name(s.word) << ' ' << fmt(s.start.x) << ' ' << fmt(s.start.y) << ' '
        << fmt(s.start.theta) << ' ' << fmt(s.rho) << ' ' << fmt(s.params[0]) << ' '
        << fmt(s.params[1]) << ' ' << fmt(s.params[2]) << '\n';
  }
  for (std::size_t t = 0; t < tour.visits.size(); ++t) {
    out << "visit " << t << ' ' << tour.visits[t].phase << ' ' << fmt(tour.visits[t].position) << '\n';
  }
  if (summary) {
    out << "summary total_length " << fmt(summary->total_length) << '\n';
    for (std::size_t i = 0; i < summary->phase_lengths.size(); ++i) {
      out << "summary phase " << i + 1 << ' ' << fmt(summary->phase_lengths[i]) << '\n';
    }
    out << "summary leftover " << summary->leftover << '\n';
    out << "summary fallback_length " << fmt(summary->fallback_length) << '\n';
    out << "summary closure_length " << fmt(summary->closure_length) << '\n';
  }
}

[[nodiscard]] inline TourDocument read_tour(std::istream& in, const std::string& source = "<tour>") {
  using io_detail::require_number;
  TourDocument doc;
  std::string line;
  std::size_t no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++no;
    const auto w = io_detail::words(line);
    if (w.empty() || w[0].front() == '#') continue;
    if (!header) {
      if (w.size() != 2 || w[0] != "beadtsp-tour" || w[1] != "1") {
        throw ParseError(source, no, "expected header 'beadtsp-tour 1'");
      }
      header = true;
      continue;
    }
    if (w[0] == "closed") {
      if (w.size() != 2) throw ParseError(source, no, "closed takes one value");
      doc.tour.closed = require_number<int>(w[1], source, no, "closed flag") != 0;
    } else if (w[0] == "segment") {
      if (w.size() != 9) throw ParseError(source, no, "segment needs 8 fields");
      const auto word = parse_word(w[1]);
      if (!word) throw ParseError(source, no, "unknown word '" + std::string(w[1]) + "'");
      double v[7];
      for (int k = 0; k < 7; ++k) v[k] = require_number<double>(w[2 + k], source, no, "segment field");
      try {
        doc.tour.segments.push_back(DubinsPath{Pose(v[0], v[1], v[2]), v[3], *word, {v[4], v[5], v[6]}});
      } catch (const Error& e) {
        throw ParseError(source, no, e.what());
      }
    } else if (w[0] == "visit") {
      if (w.size() != 4) throw ParseError(source, no, "visit needs 3 fields");
      const auto t = require_number<std::size_t>(w[1], source, no, "target index");
      if (t >= doc.tour.visits.size()) doc.tour.visits.resize(t + 1);
      doc.tour.visits[t] = VisitRecord{require_number<int>(w[2], source, no, "phase"),
                                       require_number<double>(w[3], source, no, "position")};
    } else if (w[0] == "summary") {
      if (!doc.summary) doc.summary.emplace();
      auto& s = *doc.summary;
      if (w.size() == 4 && w[1] == "phase") {
        const auto i = require_number<std::size_t>(w[2], source, no, "phase index");
        if (i < 1) throw ParseError(source, no, "phase index starts at 1");
        if (s.phase_lengths.size() < i) s.phase_lengths.resize(i);
        s.phase_lengths[i - 1] = require_number<double>(w[3], source, no, "phase length");
      } else if (w.size() == 3 && w[1] == "total_length") {
        s.total_length = require_number<double>(w[2], source, no, "total length");
      } else if (w.size() == 3 && w[1] == "leftover") {
        s.leftover = require_number<std::size_t>(w[2], source, no, "leftover");
      } else if (w.size() == 3 && w[1] == "fallback_length") {
        s.fallback_length = require_number<double>(w[2], source, no, "fallback length");
      } else if (w.size() == 3 && w[1] == "closure_length") {
        s.closure_length = require_number<double>(w[2], source, no, "closure length");
      } else {
        throw ParseError(source, no, "unknown summary entry");
      }
    } else {
      throw ParseError(source, no, "unknown record '" + std::string(w[0]) + "'");
    }
  }
  if (!header) throw ParseError(source, no, "missing header 'beadtsp-tour 1'");
  return doc;
}

// Sweep configs: "key = value" per line, '#' starts a comment.
//   n_values = 250, 500, 1000     (required)
//   trials = 10                   (required)
//   width, height, rho            (required)
//   base_seed = 42                (required)
//   fallback = alternating|greedy (optional, default alternating)
//   threads = 0                   (optional, 0 = hardware concurrency)

[[nodiscard]] inline Fallback parse_fallback(std::string_view s) {
  if (s == "alternating") return Fallback::Alternating;
  if (s == "greedy") return Fallback::Greedy;
  throw Error("unknown fallback '" + std::string(s) + "' (expected alternating or greedy)");
}

[[nodiscard]] inline std::string_view fallback_name(Fallback f) {
  return f == Fallback::Greedy ? "greedy" : "alternating";
}

[[nodiscard]] inline SweepConfig read_sweep_config(std::istream& in,
                                                   const std::string& source = "<config>") {
  using io_detail::require_number;
  static const std::set<std::string, std::less<>> required{"n_values", "trials", "width",
                                                           "height",   "rho",    "base_seed"};
  SweepConfig cfg;
  std::set<std::string, std::less<>> seen;
  std::string line;
  std::size_t no = 0;
  while (std::getline(in, line)) {
    ++no;
    std::string_view t = line;
    if (const auto hash = t.find('#'); hash != std::string_view::npos) t = t.substr(0, hash);
    t = io_detail::trim(t);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string_view::npos) throw ParseError(source, no, "expected 'key = value'");
    const auto key = io_detail::trim(t.substr(0, eq));
    const auto value = io_detail::trim(t.substr(eq + 1));
    if (!seen.insert(std::string(key)).second) {
      throw ParseError(source, no, "duplicate key '" + std::string(key) + "'");
    }
    if (key == "n_values") {
      cfg.n_values.clear();
      std::string list(value);
      for (char& c : list) {
        if (c == ',') c = ' ';
      }
      for (auto item : io_detail::words(list)) {
        cfg.n_values.push_back(require_number<std::size_t>(item, source, no, "n value"));
      }
    } else if (key == "trials") {
      cfg.trials = require_number<std::size_t>(value, source, no, "trials");
    } else if (key == "width") {
      cfg.width = require_number<double>(value, source, no, "width");
    } else if (key == "height") {
      cfg.height = require_number<double>(value, source, no, "height");
    } else if (key == "rho") {
      cfg.rho = require_number<double>(value, source, no, "rho");
    } else if (key == "base_seed") {
      cfg.base_seed = require_number<std::uint64_t>(value, source, no, "base_seed");
    } else if (key == "fallback") {
      try {
        cfg.fallback = parse_fallback(value);
      } catch (const Error& e) {
        throw ParseError(source, no, e.what());
      }
    } else if (key == "threads") {
      cfg.threads = require_number<unsigned>(value, source, no, "threads");
    } else {
      throw ParseError(source, no, "unknown key '" + std::string(key) + "'");
    }
  }
  for (const auto& k : required) {
    if (!seen.contains(k)) throw Error(source + ": missing required key '" + k + "'");
  }
  try {
    cfg.validate();
  } catch (const Error& e) {
    throw Error(source + ": " + e.what());
  }
  return cfg;
}

// Result tables: n,trial,seed,total_length,leftover,phase_1..phase_P,runtime.
// Trials with fewer phases leave the trailing phase cells empty.

struct ResultRow {
  std::size_t n = 0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  double total_length = 0.0;
  std::size_t leftover = 0;
  std::vector<double> phase_lengths;
  double runtime = 0.0;
};

[[nodiscard]] inline ResultRow to_row(const TrialResult& r) {
  return {r.n, r.trial, r.seed, r.total_length, r.leftover, r.phase_lengths(), r.runtime};
}

inline void write_results(std::ostream& out, std::span<const ResultRow> rows) {
  std::size_t phases = 0;
  for (const auto& r : rows) phases = std::max(phases, r.phase_lengths.size());
  out << "n,trial,seed,total_length,leftover";
  for (std::size_t i = 1; i <= phases; ++i) out << ",phase_" << i;
  out << ",runtime\n";
  for (const auto& r : rows) {
    out << r.n << ',' << r.trial << ',' << r.seed << ',' << io_detail::fmt(r.total_length) << ','
        << r.leftover;
    for (std::size_t i = 0; i < phases; ++i) {
      out << ',';
      if (i < r.phase_lengths.size()) out << io_detail::fmt(r.phase_lengths[i]);
    }
    out << ',' << io_detail::fmt(r.runtime) << '\n';
  }
}

inline void write_results(std::ostream& out, std::span<const TrialResult> results) {
  std::vector<ResultRow> rows;
  rows.reserve(results.size());
  for (const auto& r : results) rows.push_back(to_row(r));
  write_results(out, std::span<const ResultRow>(rows));
}

[[nodiscard]] inline std::vector<ResultRow> read_results(std::istream& in,
                                                         const std::string& source = "<results>") {
  using io_detail::require_number;
  std::string line;
  std::size_t no = 0;
  std::optional<std::size_t> phases;
  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    ++no;
    const auto t = io_detail::trim(line);
    if (t.empty()) continue;
    const auto f = io_detail::split(t, ',');
    if (!phases) {
      if (f.size() < 6 || f[0] != "n" || f[1] != "trial" || f[2] != "seed" ||
          f[3] != "total_length" || f[4] != "leftover" || f.back() != "runtime") {
        throw ParseError(source, no, "unexpected results header");
      }
      for (std::size_t i = 5; i + 1 < f.size(); ++i) {
        if (f[i] != "phase_" + std::to_string(i - 4)) {
          throw ParseError(source, no, "expected column phase_" + std::to_string(i - 4));
        }
      }
      phases = f.size() - 6;
      continue;
    }
    if (f.size() != *phases + 6) throw ParseError(source, no, "wrong number of columns");
    ResultRow r;
    r.n = require_number<std::size_t>(f[0], source, no, "n");
    r.trial = require_number<std::size_t>(f[1], source, no, "trial");
    r.seed = require_number<std::uint64_t>(f[2], source, no, "seed");
    r.total_length = require_number<double>(f[3], source, no, "total_length");
    r.leftover = require_number<std::size_t>(f[4], source, no, "leftover");
    for (std::size_t i = 0; i < *phases; ++i) {
      if (f[5 + i].empty()) break;
      r.phase_lengths.push_back(require_number<double>(f[5 + i], source, no, "phase length"));
    }
    r.runtime = require_number<double>(f.back(), source, no, "runtime");
    rows.push_back(std::move(r));
  }
  if (!phases) throw ParseError(source, no, "missing results header");
  return rows;
}

[[nodiscard]] inline ExponentFit fit_exponent(std::span<const ResultRow> rows) {
  std::vector<LengthSample> s;
  s.reserve(rows.size());
  for (const auto& r : rows) s.push_back({static_cast<double>(r.n), r.total_length});
  return fit_exponent(std::span<const LengthSample>(s));
}

}  // namespace beadtsp
