#pragma once

// Drives one solver on one game for T iterations and emits metric rows.

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "monogame/algorithms.hpp"
#include "monogame/feedback.hpp"
#include "monogame/games.hpp"
#include "monogame/metrics.hpp"

namespace monogame {

struct MetricSet {
  bool tangent = false;
  bool dynamic_regret = false;
  bool external_regret = false;
  bool potential = false;
  bool stationary_distance = false;

  bool needs_ledger() const { return dynamic_regret || external_regret; }
  bool needs_oracle() const { return potential || stationary_distance; }
};

struct RunOptions {
  SolverKind solver = SolverKind::kGabp;
  Schedule schedule = ConstantRate{0.05};
  std::int64_t T = 0;
  // Anchored solvers only.
  std::int64_t T_sigma = kNeverReanchor;
  double mu = 0.0;
  NoiseModel noise = NoNoise{};
  std::uint64_t seed = 0;
  std::int64_t record_every = 1;
  MetricSet metrics;
  // 0 selects default_oracle_tol(game)
  double oracle_tol = 0.0;
  // defaults to game.initial_profile()
  std::optional<Profile> initial;
};

// Metrics of the iterate produced by step t (that is, pi^{t+1}).
struct RunRecord {
  std::int64_t t = 0;
  std::int64_t gradient_calls = 0;
  double gap = 0.0;
  std::optional<double> tangent_residual;
  std::optional<std::vector<double>> dyn_regret;
  std::optional<std::vector<double>> ext_regret;
  std::optional<double> potential;
  std::optional<double> dist_stationary;
  double eta_t = 0.0;
  // epoch of the reported iterate, k(t+1); empty for unanchored solvers
  std::optional<std::int64_t> k;
};

struct StepView {
  std::int64_t t;
  double eta;
  const Solver& solver;
  // true when step t replaced the anchor
  bool reanchored;
};

struct RunResult {
  std::vector<RunRecord> records;
  Profile final_profile;
  std::int64_t gradient_calls = 0;
  std::vector<bool> ext_regret_exact;
};

inline void validate(const GameSpec& game, const RunOptions& opt) {
  if (opt.T < 0) throw ConfigError("T must be nonnegative");
  if (opt.record_every < 1) throw ConfigError("record_every must be at least 1");
  validate(opt.schedule);
  validate(opt.noise);
  if (is_anchored(opt.solver)) {
    if (!(opt.mu > 0.0)) throw ConfigError("perturbed solvers require mu > 0");
    if (opt.T_sigma < 1) throw ConfigError("T_sigma must be at least 1");
  } else {
    if (std::holds_alternative<NoisyTheoryRate>(opt.schedule)) {
      throw ConfigError("noisy_theory schedule applies to perturbed solvers only");
    }
    if (opt.metrics.needs_oracle()) {
      throw ConfigError("potential and stationary_distance need an anchored solver");
    }
  }
  if (opt.metrics.needs_ledger() && !game.has_payoff()) {
    throw ConfigError("regret metrics need a game with payoffs");
  }
  if (opt.initial && !is_feasible(game.sets, *opt.initial)) {
    throw ConfigError("initial profile is infeasible");
  }
}

inline RunResult run(const GameSpec& game, const RunOptions& opt,
                     const std::function<void(const StepView&)>& on_step = {},
                     const std::function<void(const RunRecord&)>& on_record = {}) {
  validate(game, opt);
  const Profile initial = opt.initial ? *opt.initial : game.initial_profile();
  const std::int64_t T_sigma = is_anchored(opt.solver) ? opt.T_sigma : kNeverReanchor;
  Solver solver(opt.solver, initial, opt.mu, T_sigma);
  NoiseStreams streams(opt.seed, game.n_players());

  std::optional<RegretLedger> ledger;
  if (opt.metrics.needs_ledger()) ledger.emplace(game);
  std::optional<StationaryTracker> tracker;
  if (opt.metrics.needs_oracle()) {
    tracker.emplace(game, opt.mu, opt.oracle_tol > 0.0 ? opt.oracle_tol : default_oracle_tol(game));
    const auto* a = solver.anchor();
    tracker->enter(a->k, a->sigma_k, a->sigma_1);
  }

  RunResult result;
  for (std::int64_t t = 1; t <= opt.T; ++t) {
    if (ledger) ledger->record(game, solver.current());
    const double eta = learning_rate(opt.schedule, t, T_sigma);
    const std::int64_t k_before = solver.anchor() ? solver.anchor()->k : 0;
    result.gradient_calls += solver.step(game, opt.noise, streams, t, eta);
    const auto* anchor = solver.anchor();
    const bool reanchored = anchor && anchor->k != k_before;
    if (tracker && reanchored) tracker->enter(anchor->k, anchor->sigma_k, anchor->sigma_1);
    if (on_step) on_step(StepView{t, eta, solver, reanchored});

    if (t % opt.record_every != 0 && t != opt.T) continue;
    RunRecord rec;
    rec.t = t;
    rec.gradient_calls = result.gradient_calls;
    rec.eta_t = eta;
    const Profile& pi = solver.current();
    const Profile grad = game.gradient(pi);
    rec.gap = gap_from_gradient(game.sets, pi, grad);
    if (opt.metrics.tangent) rec.tangent_residual = tangent_residual_from_gradient(game.sets, pi, grad);
    if (anchor) rec.k = anchor->k;
    if (ledger && opt.metrics.dynamic_regret) rec.dyn_regret = ledger->dynamic_regret();
    if (ledger && opt.metrics.external_regret) rec.ext_regret = ledger->external_regret(game).value;
    if (tracker) {
      if (opt.metrics.potential) {
        if (auto snap = tracker->potential_at(anchor->k)) rec.potential = snap->value;
      }
      if (opt.metrics.stationary_distance) {
        rec.dist_stationary = distance(tracker->find(anchor->k)->pi_mu, pi);
      }
    }
    if (on_record) on_record(rec);
    result.records.push_back(std::move(rec));
  }
  result.final_profile = solver.current();
  if (ledger && opt.metrics.external_regret) result.ext_regret_exact = ledger->external_regret(game).exact;
  return result;
}

}  // namespace monogame
