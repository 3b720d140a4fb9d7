#pragma once

// Orchestration behind the command-line tool: seeded runs across a worker
// pool, CSV trajectories, summaries and plot scripts.
//
// Exit status: 0 ok, 1 config error, 2 runtime or oracle failure,
// 3 verification failure.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "monogame/config.hpp"
#include "monogame/run.hpp"
#include "monogame/verify.hpp"

namespace monogame::harness {

enum ExitCode : int { kOk = 0, kConfigError = 1, kRuntimeError = 2, kVerifyFailed = 3 };

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string csv_header(std::size_t n_players) {
  std::string h = "t,gradient_calls,gap,tangent_residual";
  for (std::size_t i = 1; i <= n_players; ++i) h += ",dyn_regret_" + std::to_string(i);
  for (std::size_t i = 1; i <= n_players; ++i) h += ",ext_regret_" + std::to_string(i);
  return h + ",potential,dist_stationary,eta_t,k";
}

inline std::string csv_row(const RunRecord& r, std::size_t n_players) {
  std::string s = std::to_string(r.t) + ',' + std::to_string(r.gradient_calls) + ',' + fmt(r.gap) + ',';
  if (r.tangent_residual) s += fmt(*r.tangent_residual);
  for (std::size_t i = 0; i < n_players; ++i) s += ',' + (r.dyn_regret ? fmt((*r.dyn_regret)[i]) : "");
  for (std::size_t i = 0; i < n_players; ++i) s += ',' + (r.ext_regret ? fmt((*r.ext_regret)[i]) : "");
  s += ',' + (r.potential ? fmt(*r.potential) : "");
  s += ',' + (r.dist_stationary ? fmt(*r.dist_stationary) : "");
  s += ',' + fmt(r.eta_t) + ',';
  if (r.k) s += std::to_string(*r.k);
  return s;
}

inline std::string solver_note(SolverKind k) {
  switch (k) {
    case SolverKind::kOg:
      return "og update: project(pi + eta (2 g_t - g_{t-1})), g_0 = 0, one gradient observation per iteration";
    case SolverKind::kAog:
      return "aog observations: two at t = 1, then one per iteration (the half-step observation is reused "
             "by the next half step); see the gradient_calls column";
    case SolverKind::kGabp:
    case SolverKind::kApga:
      return std::string(to_string(k)) + " observations: one per iteration";
  }
  return {};
}

// Whole CSV for one run, metadata first.
inline std::string run_csv(const GameSpec& game, const RunOptions& opt, const RunResult& res,
                           const std::string& game_label) {
  std::ostringstream os;
  os << "# game=" << game_label << " players=" << game.n_players() << " L=" << fmt(game.lipschitz_L)
     << " D=" << fmt(game.diameter_D) << '\n';
  os << "# solver=" << to_string(opt.solver) << " seed=" << opt.seed << " T=" << opt.T;
  if (is_anchored(opt.solver)) os << " T_sigma=" << opt.T_sigma << " mu=" << fmt(opt.mu);
  os << '\n';
  os << "# " << solver_note(opt.solver) << '\n';
  if (!res.ext_regret_exact.empty()) {
    os << "# ext_regret_exact=";
    for (std::size_t i = 0; i < res.ext_regret_exact.size(); ++i) {
      os << (i ? "," : "") << (res.ext_regret_exact[i] ? 1 : 0);
    }
    os << '\n';
  }
  os << csv_header(game.n_players()) << '\n';
  for (const auto& r : res.records) os << csv_row(r, game.n_players()) << '\n';
  return os.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
}

// ---------------------------------------------------------------------------

struct Job {
  std::size_t group = 0;  // index into the groups of a batch
  config::SolverConfig solver;
  std::uint64_t seed = 0;
  std::filesystem::path csv_path;
};

struct JobResult {
  bool ok = false;
  std::string error;
  double final_gap = 0.0;
  std::vector<std::pair<std::int64_t, double>> gaps;  // (t, gap)
  double wall_ms = 0.0;
};

inline int worker_count(std::optional<int> cli, const config::RunConfig& cfg) {
  if (cli && *cli >= 1) return *cli;
  if (cfg.workers) return *cfg.workers;
  if (const char* env = std::getenv("MONOGAME_WORKERS")) {
    const int w = std::atoi(env);
    if (w >= 1) return w;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

inline JobResult execute(const config::RunConfig& cfg, const Job& job) {
  JobResult out;
  const auto start = std::chrono::steady_clock::now();
  try {
    const GameSpec game = config::build_game(cfg.game, job.seed);
    const RunOptions opt = config::resolve(cfg, job.solver, game, job.seed);
    const RunResult res = run(game, opt);
    write_file(job.csv_path, run_csv(game, opt, res, cfg.game.family));
    for (const auto& r : res.records) out.gaps.emplace_back(r.t, r.gap);
    out.final_gap = res.records.empty() ? gap(game, res.final_profile) : res.records.back().gap;
    out.ok = true;
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  out.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return out;
}

inline std::vector<JobResult> execute_all(const config::RunConfig& cfg, const std::vector<Job>& jobs,
                                          int workers) {
  std::vector<JobResult> results(jobs.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) results[j] = execute(cfg, jobs[j]);
  };
  const int n = std::max(1, std::min<int>(workers, static_cast<int>(jobs.size())));
  std::vector<std::thread> pool;
  for (int w = 1; w < n; ++w) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  return results;
}

struct GroupSummary {
  std::string solver;
  std::size_t n_seeds = 0;
  std::size_t n_failed = 0;
  double mean = std::nan("");
  double se = std::nan("");
  std::optional<double> slope;
  double wall_ms = 0.0;
  std::string first_error;
  // mean and standard error of the gap per recorded t
  std::vector<std::int64_t> t;
  std::vector<double> traj_mean, traj_se;
};

inline GroupSummary summarize(std::string solver, const std::vector<const JobResult*>& runs, std::int64_t T) {
  GroupSummary g;
  g.solver = std::move(solver);
  g.n_seeds = runs.size();
  std::vector<const JobResult*> ok;
  for (const auto* r : runs) {
    g.wall_ms += r->wall_ms;
    if (r->ok) ok.push_back(r);
    else if (g.n_failed++ == 0) g.first_error = r->error;
  }
  if (ok.empty()) return g;
  const double n = static_cast<double>(ok.size());
  double s = 0.0, s2 = 0.0;
  for (const auto* r : ok) s += r->final_gap;
  g.mean = s / n;
  for (const auto* r : ok) s2 += (r->final_gap - g.mean) * (r->final_gap - g.mean);
  g.se = ok.size() > 1 ? std::sqrt(s2 / (n - 1.0) / n) : 0.0;

  const auto& ref = ok.front()->gaps;
  std::vector<std::pair<double, double>> pts;
  for (std::size_t idx = 0; idx < ref.size(); ++idx) {
    double m = 0.0, v = 0.0;
    for (const auto* r : ok) m += r->gaps[idx].second;
    m /= n;
    for (const auto* r : ok) v += (r->gaps[idx].second - m) * (r->gaps[idx].second - m);
    g.t.push_back(ref[idx].first);
    g.traj_mean.push_back(m);
    g.traj_se.push_back(ok.size() > 1 ? std::sqrt(v / (n - 1.0) / n) : 0.0);
    pts.emplace_back(static_cast<double>(ref[idx].first), m);
  }
  try {
    g.slope = slope_fit(pts, std::max<double>(1.0, static_cast<double>(T) / 100.0), static_cast<double>(T));
  } catch (const InputError&) {
    // too few points in the window; leave the column empty
  }
  return g;
}

inline std::string summary_header(const std::vector<std::string>& extra = {}) {
  std::string h;
  for (const auto& e : extra) h += e + ',';
  return h + "game,solver,feedback,n_seeds,final_gap_mean,final_gap_se,slope_fit,wall_ms,status";
}

inline std::string summary_row(const config::RunConfig& cfg, const GroupSummary& g,
                               const std::vector<std::string>& extra = {}) {
  std::string s;
  for (const auto& e : extra) s += e + ',';
  s += cfg.game.family + ',' + g.solver + ',' + config::feedback_name(cfg.noise) + ',' +
       std::to_string(g.n_seeds) + ',';
  if (g.n_failed < g.n_seeds) s += fmt(g.mean) + ',' + fmt(g.se);
  else s += ',';
  s += ',' + (g.slope ? fmt(*g.slope) : "");
  s += ',' + std::to_string(static_cast<long long>(std::llround(g.wall_ms)));
  s += ',' + (g.n_failed == 0 ? std::string("ok") : "failed " + std::to_string(g.n_failed));
  return s;
}

inline std::string mean_csv(const GroupSummary& g) {
  std::string s = "t,gap_mean,gap_se\n";
  for (std::size_t i = 0; i < g.t.size(); ++i) {
    s += std::to_string(g.t[i]) + ',' + fmt(g.traj_mean[i]) + ',' + fmt(g.traj_se[i]) + '\n';
  }
  return s;
}

inline std::string plot_script(const std::vector<std::pair<std::string, std::string>>& series) {
  std::ostringstream os;
  os << "# gnuplot -p plot.gp\n"
     << "set datafile separator ','\n"
     << "set logscale xy\n"
     << "set xlabel 'iteration'\n"
     << "set ylabel 'gap'\n"
     << "set key top right\n"
     << "set style fill transparent solid 0.2 noborder\n"
     << "plot ";
  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& [file, title] = series[i];
    if (i) os << ", \\\n     ";
    os << "'" << file << "' using 1:(($2-$3)>0?($2-$3):$2):($2+$3) with filledcurves notitle lc " << i + 1
       << ", \\\n     '" << file << "' using 1:2 with lines lw 2 lc " << i + 1 << " title '" << title << "'";
  }
  os << '\n';
  return os.str();
}

inline std::string run_file_name(const config::RunConfig& cfg, SolverKind kind, std::uint64_t seed) {
  return cfg.game.family + '_' + std::string(to_string(kind)) + '_' + config::feedback_name(cfg.noise) + '_' +
         std::to_string(seed) + ".csv";
}

inline std::string mean_file_name(const config::RunConfig& cfg, SolverKind kind) {
  return cfg.game.family + '_' + std::string(to_string(kind)) + '_' + config::feedback_name(cfg.noise) +
         "_mean.csv";
}

// Runs every (solver, seed) pair of `cfg` into `dir`; returns one summary per solver.
inline std::vector<GroupSummary> run_batch(const config::RunConfig& cfg, const std::filesystem::path& dir,
                                           int workers) {
  std::filesystem::create_directories(dir);
  std::vector<Job> jobs;
  for (std::size_t g = 0; g < cfg.solvers.size(); ++g) {
    for (auto seed : cfg.seeds) {
      jobs.push_back(Job{g, cfg.solvers[g], seed, dir / run_file_name(cfg, cfg.solvers[g].kind, seed)});
    }
  }
  const auto results = execute_all(cfg, jobs, workers);
  std::vector<GroupSummary> out;
  std::vector<std::pair<std::string, std::string>> series;
  for (std::size_t g = 0; g < cfg.solvers.size(); ++g) {
    std::vector<const JobResult*> mine;
    for (std::size_t j = 0; j < jobs.size(); ++j)
      if (jobs[j].group == g) mine.push_back(&results[j]);
    out.push_back(summarize(std::string(to_string(cfg.solvers[g].kind)), mine, cfg.T));
    if (!out.back().t.empty()) {
      const auto name = mean_file_name(cfg, cfg.solvers[g].kind);
      write_file(dir / name, mean_csv(out.back()));
      series.emplace_back(name, out.back().solver);
    }
  }
  if (!series.empty()) write_file(dir / "plot.gp", plot_script(series));
  return out;
}

// ---------------------------------------------------------------------------
// Commands. Diagnostics go to `err`, progress to `log`.

inline int cmd_run(const std::string& config_path, std::optional<int> workers_flag, std::ostream& log,
                   std::ostream& err) {
  config::RunConfig cfg;
  try {
    cfg = config::load(config_path);
    if (cfg.sweep.present) throw ConfigError("config has a [sweep] section; use the sweep command");
  } catch (const ConfigError& e) {
    err << config_path << ": " << e.what() << '\n';
    return kConfigError;
  }
  const std::filesystem::path dir(cfg.out_dir);
  std::vector<GroupSummary> groups;
  try {
    groups = run_batch(cfg, dir, worker_count(workers_flag, cfg));
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  std::string summary = summary_header() + '\n';
  bool failed = false;
  for (const auto& g : groups) {
    summary += summary_row(cfg, g) + '\n';
    if (g.n_failed) {
      failed = true;
      err << g.solver << ": " << g.n_failed << " run(s) failed, first: " << g.first_error << '\n';
    }
    log << g.solver << ": final gap " << fmt(g.mean) << " +- " << fmt(g.se) << '\n';
  }
  write_file(dir / "summary.csv", summary);
  log << "wrote " << (dir / "summary.csv").string() << '\n';
  return failed ? kRuntimeError : kOk;
}

// Cartesian product of the grid, in declaration order (last key fastest).
inline std::vector<std::vector<std::string>> grid_cells(const config::SweepConfig& sw) {
  std::vector<std::vector<std::string>> cells{{}};
  for (const auto& [key, values] : sw.grid) {
    std::vector<std::vector<std::string>> next;
    for (const auto& c : cells)
      for (const auto& v : values) {
        auto cell = c;
        cell.push_back(v);
        next.push_back(std::move(cell));
      }
    cells = std::move(next);
  }
  return cells;
}

inline std::size_t grid_size(const config::SweepConfig& sw) {
  std::size_t n = 1;
  for (const auto& [key, values] : sw.grid) n *= values.size();
  return n;
}

// Applies one grid cell to the single solver of the config.
inline config::SolverConfig apply_cell(const config::SweepConfig& sw, config::SolverConfig s,
                                       const std::vector<std::string>& cell) {
  for (std::size_t i = 0; i < sw.grid.size(); ++i) {
    const auto& key = sw.grid[i].first;
    const auto& v = cell[i];
    const config::Entry e{v, sw.line};
    if (key == "eta") {
      if (s.noisy_theory) throw config::error_at(sw.line, key, "the noisy_theory schedule sets eta itself");
      s.eta = config::to_real(e, key);
    } else if (key == "mu" || key == "T_sigma" || key == "c") {
      if (!is_anchored(s.kind)) {
        throw config::error_at(sw.line, key, "not accepted by " + std::string(to_string(s.kind)));
      }
      if (key == "mu") s.mu = config::to_real(e, key);
      if (key == "T_sigma") {
        if (s.mode != config::TSigmaMode::kManual) {
          throw config::error_at(sw.line, key, "solver uses a theory T_sigma; sweep c instead");
        }
        s.T_sigma = config::to_int(e, key);
      }
      if (key == "c") {
        if (s.mode == config::TSigmaMode::kManual) {
          throw config::error_at(sw.line, key, "only applies to theory T_sigma");
        }
        s.c = config::to_real(e, key);
        if (!(s.c >= 1.0)) throw config::error_at(sw.line, key, "must be at least 1");
      }
    }
  }
  return s;
}

inline int cmd_sweep(const std::string& config_path, std::optional<int> workers_flag, std::ostream& log,
                     std::ostream& err) {
  config::RunConfig cfg;
  std::vector<std::vector<std::string>> cells;
  std::vector<config::SolverConfig> cell_solvers;
  try {
    cfg = config::load(config_path);
    if (!cfg.sweep.present) throw ConfigError("no [sweep] section");
    const auto n = grid_size(cfg.sweep);
    if (n > cfg.sweep.max_cells) {
      throw config::error_at(cfg.sweep.line, "max_cells",
                             "grid has " + std::to_string(n) + " cells, cap is " + std::to_string(cfg.sweep.max_cells));
    }
    cells = grid_cells(cfg.sweep);
    for (const auto& c : cells) cell_solvers.push_back(apply_cell(cfg.sweep, cfg.solvers.front(), c));
  } catch (const ConfigError& e) {
    err << config_path << ": " << e.what() << '\n';
    return kConfigError;
  }

  const std::filesystem::path dir(cfg.out_dir);
  std::vector<std::string> keys;
  for (const auto& [k, v] : cfg.sweep.grid) keys.push_back(k);
  std::string summary = summary_header(keys) + '\n';
  bool failed = false;
  const int workers = worker_count(workers_flag, cfg);
  for (std::size_t c = 0; c < cells.size(); ++c) {
    config::RunConfig cell_cfg = cfg;
    cell_cfg.solvers = {cell_solvers[c]};
    std::vector<GroupSummary> groups;
    try {
      groups = run_batch(cell_cfg, dir / ("cell_" + std::to_string(c)), workers);
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      return kRuntimeError;
    }
    const auto& g = groups.front();
    summary += summary_row(cfg, g, cells[c]) + '\n';
    if (g.n_failed) {
      failed = true;
      err << "cell " << c << ": " << g.n_failed << " run(s) failed, first: " << g.first_error << '\n';
    }
  }
  write_file(dir / "summary.csv", summary);
  log << "wrote " << cells.size() << " cells to " << (dir / "summary.csv").string() << '\n';
  return failed ? kRuntimeError : kOk;
}

inline int cmd_verify(const std::string& suite, std::ostream& log, std::ostream& err) {
  if (!verify::is_suite(suite)) {
    err << "unknown suite '" << suite << "'; expected one of:";
    for (const auto& s : verify::suite_names()) err << ' ' << s;
    err << '\n';
    return kConfigError;
  }
  try {
    const auto report = verify::run_suite(suite);
    report.print(log);
    log << (report.passed() ? "all checks passed" : "verification FAILED") << '\n';
    return report.passed() ? kOk : kVerifyFailed;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
}

inline int cmd_preset(const std::string& name, const std::string& out_path, std::ostream& log,
                      std::ostream& err) {
  std::string text;
  try {
    text = config::preset_text(name);
  } catch (const ConfigError& e) {
    err << e.what() << "; available:";
    for (const auto& n : config::preset_names()) err << ' ' << n;
    err << '\n';
    return kConfigError;
  }
  try {
    if (out_path == "-") log << text;
    else write_file(out_path, text);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kOk;
}

}  // namespace monogame::harness
