#pragma once

// Experiment configuration: a small sectioned key = value format.
//
//   # comment
//   [game]
//   family = random_payoff        # random_payoff | hard | cournot | matching_pennies | rps
//   dim = 50
//
//   [run]
//   T = 100000
//   feedback = gaussian           # full | gaussian
//   sigma = 0.1
//   seeds = 0..49                 # ranges and comma lists
//   record_every = 100
//   metrics = gap, tangent
//   out_dir = out/random_noisy
//
//   [solver.gabp]
//   eta = 0.001
//   T_sigma = 1000                # integer | theory_full | theory_noisy
//   mu = 1.0
//
//   [sweep]                       # sweep command only
//   eta = 0.01, 0.05
//   max_cells = 64

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "monogame/algorithms.hpp"
#include "monogame/feedback.hpp"
#include "monogame/games.hpp"
#include "monogame/run.hpp"

namespace monogame::config {

// Raw parse: sections of keys with the line each key came from.
struct Entry {
  std::string value;
  int line = 0;
};

struct Section {
  std::string name;
  int line = 0;
  std::map<std::string, Entry> entries;
};

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline ConfigError error_at(int line, const std::string& field, const std::string& msg) {
  std::string where = line > 0 ? "line " + std::to_string(line) : "config";
  if (!field.empty()) where += ", field '" + field + "'";
  return ConfigError(where + ": " + msg);
}

inline std::vector<Section> parse_sections(std::istream& in) {
  std::vector<Section> out;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const std::string text = trim(raw);
    if (text.empty()) continue;
    if (text.front() == '[') {
      if (text.back() != ']') throw error_at(line, "", "unterminated section header");
      const std::string name = trim(std::string_view(text).substr(1, text.size() - 2));
      if (name.empty()) throw error_at(line, "", "empty section name");
      for (const auto& s : out) {
        if (s.name == name) throw error_at(line, "", "duplicate section [" + name + "]");
      }
      out.push_back(Section{name, line, {}});
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw error_at(line, "", "expected 'key = value'");
    if (out.empty()) throw error_at(line, "", "key outside of any section");
    const std::string key = trim(std::string_view(text).substr(0, eq));
    const std::string value = trim(std::string_view(text).substr(eq + 1));
    if (key.empty()) throw error_at(line, "", "missing key");
    if (value.empty()) throw error_at(line, key, "missing value");
    auto& entries = out.back().entries;
    if (entries.count(key)) throw error_at(line, key, "duplicate key");
    entries.emplace(key, Entry{value, line});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Typed values.

inline double to_real(const Entry& e, const std::string& key) {
  double v = 0.0;
  const char* first = e.value.data();
  const char* last = first + e.value.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
    throw error_at(e.line, key, "expected a number, got '" + e.value + "'");
  }
  return v;
}

inline std::int64_t to_int(const std::string& text, int line, const std::string& key) {
  std::int64_t v = 0;
  const std::string t = trim(text);
  const char* first = t.data();
  const char* last = first + t.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || t.empty()) {
    throw error_at(line, key, "expected an integer, got '" + t + "'");
  }
  return v;
}

inline std::int64_t to_int(const Entry& e, const std::string& key) { return to_int(e.value, e.line, key); }

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

inline std::vector<double> to_reals(const Entry& e, const std::string& key) {
  std::vector<double> out;
  for (const auto& item : split_list(e.value)) out.push_back(to_real(Entry{item, e.line}, key));
  return out;
}

// "0..49", "1, 4, 9" or a mix of both.
inline std::vector<std::uint64_t> to_seeds(const Entry& e, const std::string& key) {
  std::vector<std::uint64_t> out;
  for (const auto& item : split_list(e.value)) {
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      const auto v = to_int(item, e.line, key);
      if (v < 0) throw error_at(e.line, key, "seeds must be nonnegative");
      out.push_back(static_cast<std::uint64_t>(v));
      continue;
    }
    const auto lo = to_int(item.substr(0, dots), e.line, key);
    const auto hi = to_int(item.substr(dots + 2), e.line, key);
    if (lo < 0 || hi < lo) throw error_at(e.line, key, "bad seed range '" + item + "'");
    for (auto s = lo; s <= hi; ++s) out.push_back(static_cast<std::uint64_t>(s));
  }
  if (out.empty()) throw error_at(e.line, key, "seed list is empty");
  return out;
}

// ---------------------------------------------------------------------------

struct GameConfig {
  std::string family = "random_payoff";
  std::size_t dim = 50;
  std::size_t firms = 3;
  double a = 10.0;
  double b = 1.0;
  std::vector<double> costs;
  std::vector<double> caps;
};

enum class TSigmaMode { kManual, kTheoryFull, kTheoryNoisy };

struct SolverConfig {
  SolverKind kind = SolverKind::kGabp;
  std::optional<double> eta;
  bool noisy_theory = false;
  TSigmaMode mode = TSigmaMode::kManual;
  std::int64_t T_sigma = 0;
  double c = 1.0;
  std::optional<double> mu;
  int line = 0;
};

struct SweepConfig {
  bool present = false;
  // grid key -> values exactly as written
  std::vector<std::pair<std::string, std::vector<std::string>>> grid;
  std::size_t max_cells = 64;
  int line = 0;
};

struct RunConfig {
  GameConfig game;
  std::vector<SolverConfig> solvers;
  std::int64_t T = 0;
  NoiseModel noise = NoNoise{};
  std::vector<std::uint64_t> seeds;
  std::int64_t record_every = 1;
  MetricSet metrics;
  std::string out_dir = "out";
  std::optional<int> workers;
  double oracle_tol = 0.0;
  SweepConfig sweep;
};

inline std::string feedback_name(const NoiseModel& m) {
  return std::holds_alternative<NoNoise>(m) ? "full" : "noisy";
}

namespace detail {

inline void reject_unknown(const Section& s, std::initializer_list<std::string_view> known) {
  for (const auto& [key, e] : s.entries) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw error_at(e.line, key, "unknown key in [" + s.name + "]");
    }
  }
}

inline const Entry* get(const Section& s, const std::string& key) {
  auto it = s.entries.find(key);
  return it == s.entries.end() ? nullptr : &it->second;
}

inline GameConfig parse_game(const Section& s) {
  reject_unknown(s, {"family", "dim", "firms", "a", "b", "costs", "caps"});
  GameConfig g;
  if (const auto* e = get(s, "family")) g.family = e->value;
  static const std::vector<std::string> families = {"random_payoff", "hard", "cournot",
                                                    "matching_pennies", "rps"};
  if (std::find(families.begin(), families.end(), g.family) == families.end()) {
    throw error_at(get(s, "family")->line, "family", "unknown game family '" + g.family + "'");
  }
  if (const auto* e = get(s, "dim")) {
    const auto d = to_int(*e, "dim");
    if (d < 1) throw error_at(e->line, "dim", "must be at least 1");
    if (g.family == "hard" && d < 2) throw error_at(e->line, "dim", "hard game needs dim >= 2");
    g.dim = static_cast<std::size_t>(d);
  }
  if (const auto* e = get(s, "firms")) {
    const auto n = to_int(*e, "firms");
    if (n < 1) throw error_at(e->line, "firms", "must be at least 1");
    g.firms = static_cast<std::size_t>(n);
  }
  if (const auto* e = get(s, "a")) g.a = to_real(*e, "a");
  if (const auto* e = get(s, "b")) g.b = to_real(*e, "b");
  if (const auto* e = get(s, "costs")) g.costs = to_reals(*e, "costs");
  if (const auto* e = get(s, "caps")) g.caps = to_reals(*e, "caps");
  if (g.family == "cournot") {
    if (g.costs.empty()) g.costs.assign(g.firms, 1.0);
    if (g.caps.empty()) g.caps.assign(g.firms, g.a / g.b);
    if (g.costs.size() != g.firms || g.caps.size() != g.firms) {
      throw error_at(s.line, "costs", "costs and caps need one entry per firm");
    }
  } else {
    for (const char* k : {"firms", "a", "b", "costs", "caps"}) {
      if (const auto* e = get(s, k)) throw error_at(e->line, k, "only applies to cournot");
    }
  }
  return g;
}

inline MetricSet parse_metrics(const Entry& e) {
  MetricSet m;
  for (const auto& name : split_list(e.value)) {
    if (name == "gap") continue;
    if (name == "tangent") m.tangent = true;
    else if (name == "dynamic_regret") m.dynamic_regret = true;
    else if (name == "external_regret") m.external_regret = true;
    else if (name == "potential") m.potential = true;
    else if (name == "stationary_distance") m.stationary_distance = true;
    else throw error_at(e.line, "metrics", "unknown metric '" + name + "'");
  }
  return m;
}

inline SolverConfig parse_solver(const Section& s, const std::string& name) {
  SolverConfig c;
  c.line = s.line;
  const auto kind = monogame::parse_solver(name);
  if (!kind) throw error_at(s.line, "", "unknown solver '" + name + "' (gabp, apga, og, aog)");
  c.kind = *kind;
  reject_unknown(s, {"eta", "schedule", "T_sigma", "c", "mu"});
  if (!is_anchored(c.kind)) {
    for (const char* k : {"mu", "T_sigma", "c"}) {
      if (const auto* e = get(s, k)) throw error_at(e->line, k, "not accepted by " + name);
    }
  }
  if (const auto* e = get(s, "schedule")) {
    if (e->value == "noisy_theory") c.noisy_theory = true;
    else if (e->value != "constant") throw error_at(e->line, "schedule", "expected constant or noisy_theory");
    if (c.noisy_theory && !is_anchored(c.kind)) {
      throw error_at(e->line, "schedule", "noisy_theory applies to gabp and apga only");
    }
  }
  if (const auto* e = get(s, "eta")) {
    if (c.noisy_theory) throw error_at(e->line, "eta", "the noisy_theory schedule sets eta itself");
    c.eta = to_real(*e, "eta");
    if (!(*c.eta > 0.0)) throw error_at(e->line, "eta", "must be positive");
  } else if (!c.noisy_theory) {
    throw error_at(s.line, "eta", "missing in [" + s.name + "]");
  }
  if (is_anchored(c.kind)) {
    const auto* mu = get(s, "mu");
    if (!mu) throw error_at(s.line, "mu", "missing in [" + s.name + "]");
    c.mu = to_real(*mu, "mu");
    if (!(*c.mu > 0.0)) throw error_at(mu->line, "mu", "must be positive");
    const auto* ts = get(s, "T_sigma");
    if (!ts) throw error_at(s.line, "T_sigma", "missing in [" + s.name + "]");
    if (ts->value == "theory_full") {
      if (c.noisy_theory) {
        throw error_at(ts->line, "T_sigma", "theory_full pairs with the constant schedule, not noisy_theory");
      }
      c.mode = TSigmaMode::kTheoryFull;
    } else if (ts->value == "theory_noisy") {
      if (!c.noisy_theory) {
        throw error_at(ts->line, "T_sigma", "theory_noisy pairs with schedule = noisy_theory");
      }
      c.mode = TSigmaMode::kTheoryNoisy;
    } else {
      if (c.noisy_theory) {
        throw error_at(ts->line, "T_sigma", "schedule = noisy_theory requires T_sigma = theory_noisy");
      }
      c.T_sigma = to_int(*ts, "T_sigma");
      if (c.T_sigma < 1) throw error_at(ts->line, "T_sigma", "must be at least 1");
    }
    if (const auto* ce = get(s, "c")) {
      if (c.mode == TSigmaMode::kManual) throw error_at(ce->line, "c", "only applies to theory T_sigma");
      c.c = to_real(*ce, "c");
      if (!(c.c >= 1.0)) throw error_at(ce->line, "c", "must be at least 1");
    }
  }
  return c;
}

inline SweepConfig parse_sweep(const Section& s) {
  SweepConfig sw;
  sw.present = true;
  sw.line = s.line;
  reject_unknown(s, {"eta", "mu", "T_sigma", "c", "max_cells"});
  for (const char* k : {"eta", "mu", "T_sigma", "c"}) {
    if (const auto* e = get(s, k)) {
      auto values = split_list(e->value);
      if (values.empty()) throw error_at(e->line, k, "empty grid");
      for (const auto& v : values) {
        if (std::string(k) == "T_sigma") {
          if (to_int(v, e->line, k) < 1) throw error_at(e->line, k, "must be at least 1");
        } else if (!(to_real(Entry{v, e->line}, k) > 0.0)) {
          throw error_at(e->line, k, "grid values must be positive");
        }
      }
      sw.grid.emplace_back(k, std::move(values));
    }
  }
  if (const auto* e = get(s, "max_cells")) {
    const auto m = to_int(*e, "max_cells");
    if (m < 1) throw error_at(e->line, "max_cells", "must be at least 1");
    sw.max_cells = static_cast<std::size_t>(m);
  }
  return sw;
}

}  // namespace detail

inline RunConfig parse(std::istream& in) {
  const auto sections = parse_sections(in);
  RunConfig cfg;
  const Section* game = nullptr;
  const Section* runs = nullptr;
  for (const auto& s : sections) {
    if (s.name == "game") game = &s;
    else if (s.name == "run") runs = &s;
    else if (s.name == "sweep") cfg.sweep = detail::parse_sweep(s);
    else if (s.name.rfind("solver.", 0) == 0) cfg.solvers.push_back(detail::parse_solver(s, s.name.substr(7)));
    else throw error_at(s.line, "", "unknown section [" + s.name + "]");
  }
  if (!game) throw error_at(0, "", "missing [game] section");
  cfg.game = detail::parse_game(*game);
  if (!runs) throw error_at(0, "", "missing [run] section");

  const Section& r = *runs;
  detail::reject_unknown(r, {"T", "feedback", "sigma", "seeds", "record_every", "metrics", "out_dir",
                             "workers", "oracle_tol"});
  const auto* T = detail::get(r, "T");
  if (!T) throw error_at(r.line, "T", "missing in [run]");
  cfg.T = to_int(*T, "T");
  if (cfg.T < 1) throw error_at(T->line, "T", "must be a positive integer");

  const auto* fb = detail::get(r, "feedback");
  const auto* sigma = detail::get(r, "sigma");
  if (!fb || fb->value == "full") {
    if (sigma) throw error_at(sigma->line, "sigma", "only applies to feedback = gaussian");
  } else if (fb->value == "gaussian") {
    if (!sigma) throw error_at(fb->line, "sigma", "feedback = gaussian needs sigma");
    const double sd = to_real(*sigma, "sigma");
    if (sd < 0.0) throw error_at(sigma->line, "sigma", "must be nonnegative");
    cfg.noise = Gaussian{sd};
  } else {
    throw error_at(fb->line, "feedback", "expected full or gaussian");
  }

  const auto* seeds = detail::get(r, "seeds");
  if (!seeds) throw error_at(r.line, "seeds", "missing in [run]");
  cfg.seeds = to_seeds(*seeds, "seeds");

  cfg.record_every = std::max<std::int64_t>(1, cfg.T / 1000);
  if (const auto* e = detail::get(r, "record_every")) {
    cfg.record_every = to_int(*e, "record_every");
    if (cfg.record_every < 1) throw error_at(e->line, "record_every", "must be at least 1");
  }
  if (const auto* e = detail::get(r, "metrics")) cfg.metrics = detail::parse_metrics(*e);
  if (const auto* e = detail::get(r, "out_dir")) cfg.out_dir = e->value;
  if (const auto* e = detail::get(r, "workers")) {
    const auto w = to_int(*e, "workers");
    if (w < 1) throw error_at(e->line, "workers", "must be at least 1");
    cfg.workers = static_cast<int>(w);
  }
  if (const auto* e = detail::get(r, "oracle_tol")) {
    cfg.oracle_tol = to_real(*e, "oracle_tol");
    if (!(cfg.oracle_tol > 0.0)) throw error_at(e->line, "oracle_tol", "must be positive");
  }

  // cross-section checks
  if (cfg.solvers.empty()) throw error_at(0, "", "no [solver.NAME] section");
  for (const auto& s : cfg.solvers) {
    if (!is_anchored(s.kind) && cfg.metrics.needs_oracle()) {
      throw error_at(detail::get(r, "metrics")->line, "metrics",
                     "potential and stationary_distance need gabp or apga, not " +
                         std::string(to_string(s.kind)));
    }
  }
  for (std::size_t i = 0; i < cfg.solvers.size(); ++i)
    for (std::size_t j = i + 1; j < cfg.solvers.size(); ++j)
      if (cfg.solvers[i].kind == cfg.solvers[j].kind)
        throw error_at(cfg.solvers[j].line, "", "solver declared twice");
  if (cfg.sweep.present && cfg.solvers.size() != 1) {
    throw error_at(cfg.sweep.line, "", "a sweep takes exactly one [solver.NAME] section");
  }
  return cfg;
}

inline RunConfig parse_string(const std::string& text) {
  std::istringstream in(text);
  return parse(in);
}

inline RunConfig load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  return parse(in);
}

// ---------------------------------------------------------------------------

inline GameSpec build_game(const GameConfig& g, std::uint64_t seed) {
  if (g.family == "random_payoff") return build_random_payoff(g.dim, seed);
  if (g.family == "hard") return build_hard_game(g.dim);
  if (g.family == "cournot") return build_cournot(g.firms, g.a, g.b, g.costs, g.caps);
  if (g.family == "matching_pennies") return build_bilinear(matching_pennies_matrix(), "matching_pennies");
  if (g.family == "rps") return build_bilinear(rock_paper_scissors_matrix(), "rps");
  throw ConfigError("unknown game family '" + g.family + "'");
}

// Run options for one (solver, seed) pair.
inline RunOptions resolve(const RunConfig& cfg, const SolverConfig& s, const GameSpec& game,
                          std::uint64_t seed) {
  RunOptions o;
  o.solver = s.kind;
  o.T = cfg.T;
  o.noise = cfg.noise;
  o.seed = seed;
  o.record_every = cfg.record_every;
  o.metrics = cfg.metrics;
  o.oracle_tol = cfg.oracle_tol;
  if (s.noisy_theory) o.schedule = NoisyTheoryRate{*s.mu, game.lipschitz_L};
  else o.schedule = ConstantRate{*s.eta};
  if (is_anchored(s.kind)) {
    o.mu = *s.mu;
    switch (s.mode) {
      case TSigmaMode::kManual: o.T_sigma = s.T_sigma; break;
      case TSigmaMode::kTheoryFull: o.T_sigma = tsigma_full(cfg.T, *s.eta, *s.mu, s.c); break;
      case TSigmaMode::kTheoryNoisy: o.T_sigma = tsigma_noisy(cfg.T, s.c); break;
    }
  }
  return o;
}

// ---------------------------------------------------------------------------
// Embedded hyperparameter bundles.

struct PresetRow {
  const char* name;
  const char* family;
  std::size_t dim;
  double sigma;  // 0 for full feedback
  const char* seeds;
  double og_eta, aog_eta;
  double apga_eta, apga_mu;
  std::int64_t apga_T_sigma;
  double gabp_eta, gabp_mu;
  std::int64_t gabp_T_sigma;
};

inline const std::vector<PresetRow>& preset_rows() {
  static const std::vector<PresetRow> rows = {
      {"random_full", "random_payoff", 50, 0.0, "0..49", 0.05, 0.05, 0.05, 1.0, 20, 0.05, 1.0, 10},
      {"random_noisy", "random_payoff", 50, 0.1, "0..49", 0.001, 0.001, 0.001, 1.0, 2000, 0.001, 1.0, 1000},
      {"hard_full", "hard", 100, 0.0, "0..9", 1.0, 1.0, 1.0, 0.1, 20, 1.0, 0.1, 20},
      {"hard_noisy", "hard", 100, 0.1, "0..9", 0.5, 0.5, 0.5, 0.1, 50, 0.1, 0.1, 100},
  };
  return rows;
}

inline std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& r : preset_rows()) out.emplace_back(r.name);
  return out;
}

inline std::string format_real(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

inline std::string preset_text(const std::string& name, std::int64_t T = 100000) {
  for (const auto& r : preset_rows()) {
    if (name != r.name) continue;
    std::ostringstream os;
    os << "# preset " << r.name << "\n\n[game]\nfamily = " << r.family << "\ndim = " << r.dim << "\n\n";
    os << "[run]\nT = " << T << "\n";
    if (r.sigma > 0.0) os << "feedback = gaussian\nsigma = " << format_real(r.sigma) << "\n";
    else os << "feedback = full\n";
    os << "seeds = " << r.seeds << "\nrecord_every = " << std::max<std::int64_t>(1, T / 1000)
       << "\nmetrics = gap, tangent\nout_dir = out/" << r.name << "\n\n";
    os << "[solver.og]\neta = " << format_real(r.og_eta) << "\n\n";
    os << "[solver.aog]\neta = " << format_real(r.aog_eta) << "\n\n";
    os << "[solver.apga]\neta = " << format_real(r.apga_eta) << "\nT_sigma = " << r.apga_T_sigma
       << "\nmu = " << format_real(r.apga_mu) << "\n\n";
    os << "[solver.gabp]\neta = " << format_real(r.gabp_eta) << "\nT_sigma = " << r.gabp_T_sigma
       << "\nmu = " << format_real(r.gabp_mu) << "\n";
    return os.str();
  }
  throw ConfigError("unknown preset '" + name + "'");
}

inline RunConfig preset(const std::string& name, std::int64_t T = 100000) {
  return parse_string(preset_text(name, T));
}

}  // namespace monogame::config
