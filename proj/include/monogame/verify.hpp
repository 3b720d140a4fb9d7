#pragma once

// Numerical property suites. Each check reports the measured quantity next
// to the bound it is held to, so a failure says by how much.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "monogame/algorithms.hpp"
#include "monogame/feedback.hpp"
#include "monogame/games.hpp"
#include "monogame/geometry.hpp"
#include "monogame/metrics.hpp"
#include "monogame/rng.hpp"
#include "monogame/run.hpp"

namespace monogame::verify {

struct Check {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double bound = 0.0;
  std::string note;
  // bound is a lower limit
  bool at_least = false;

  double margin() const { return at_least ? measured - bound : bound - measured; }
};

struct Report {
  std::string suite;
  std::vector<Check> checks;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
  }

  // measured <= bound
  void add_le(std::string name, double measured, double bound, std::string note = {}) {
    checks.push_back({std::move(name), measured <= bound, measured, bound, std::move(note)});
  }

  // measured >= bound
  void add_ge(std::string name, double measured, double bound, std::string note = {}) {
    checks.push_back({std::move(name), measured >= bound, measured, bound, std::move(note), true});
  }

  void add(std::string name, bool ok, double measured = 0.0, double bound = 0.0,
           std::string note = {}) {
    checks.push_back({std::move(name), ok, measured, bound, std::move(note)});
  }

  void append(const Report& other) {
    for (const auto& c : other.checks) checks.push_back(c);
  }

  void print(std::ostream& os) const {
    for (const auto& c : checks) {
      os << (c.passed ? "PASS " : "FAIL ") << suite << '/' << c.name << "  measured="
         << std::setprecision(6) << c.measured << " bound=" << c.bound;
      if (c.bound != 0.0 && std::isfinite(c.bound)) os << " margin=" << c.margin();
      if (!c.note.empty()) os << "  (" << c.note << ')';
      os << '\n';
    }
  }
};

// Game families the suites sweep over.
inline std::vector<GameSpec> benchmark_games(std::uint64_t seed = 0) {
  return {build_random_payoff(10, seed), build_hard_game(6),
          build_cournot(3, 10.0, 1.0, {1.0, 2.0, 0.5}, {4.0, 3.0, 5.0})};
}

// ---------------------------------------------------------------------------

inline Report geometry(int cases = 10000, std::uint64_t seed = 0) {
  Report r{"geometry", {}};
  auto rng = make_stream(seed, StreamPurpose::kVerify, 1);
  std::uniform_int_distribution<int> dim_dist(1, 20);
  std::normal_distribution<double> normal(0.0, 2.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  auto random_set = [&](int c) -> FeasibleSet {
    const auto d = static_cast<std::size_t>(dim_dist(rng));
    if (c % 2 == 0) return Simplex{d};
    const double lo = -5.0 * unit(rng);
    return Box{d, lo, lo + 0.1 + 5.0 * unit(rng)};
  };
  auto random_vec = [&](std::size_t d, double scale) {
    Vector v(static_cast<Eigen::Index>(d));
    for (Eigen::Index j = 0; j < v.size(); ++j) v[j] = scale * normal(rng);
    return v;
  };

  double idem = 0, expand = 0, sum_err = 0, neg = 0, moreau_rel = 0, cone = 0;
  for (int c = 0; c < cases; ++c) {
    const FeasibleSet set = random_set(c);
    const auto d = dim_of(set);
    const Vector v = random_vec(d, 1.0 + 10.0 * unit(rng));
    const Vector w = random_vec(d, 1.0 + 10.0 * unit(rng));
    const Vector pv = project(set, v);
    const Vector pw = project(set, w);
    idem = std::max(idem, (project(set, pv) - pv).lpNorm<Eigen::Infinity>());
    expand = std::max(expand, (pv - pw).norm() - (v - w).norm());
    if (std::holds_alternative<Simplex>(set)) {
      sum_err = std::max(sum_err, std::abs(pv.sum() - 1.0));
      neg = std::max(neg, -pv.minCoeff());
    }
    // Moreau at a feasible point (often on the boundary)
    const Vector point = sample_feasible(set, rng);
    const Vector g = random_vec(d, 1.0);
    const Vector tan = project_tangent(set, point, g);
    const Vector nor = g - tan;
    const double lhs = tan.squaredNorm() + nor.squaredNorm();
    moreau_rel = std::max(moreau_rel, std::abs(lhs - g.squaredNorm()) / std::max(1e-300, g.squaredNorm()));
    cone = std::max(cone, normal_cone_violation(set, point, nor) / (1.0 + g.norm()));
  }
  r.add_le("projection idempotence (max abs)", idem, 1e-12);
  r.add_le("projection non-expansiveness (max excess)", expand, 1e-12);
  r.add_le("simplex projection |sum - 1|", sum_err, 1e-12);
  r.add_le("simplex projection negativity", neg, 1e-15);
  r.add_le("moreau norm identity (rel)", moreau_rel, 1e-9);
  r.add_le("moreau normal-cone membership", cone, 1e-9);

  // gap nonnegativity on random profiles, zero at a known equilibrium
  double min_gap = 0.0;
  for (const auto& game : benchmark_games(seed)) {
    for (int c = 0; c < 200; ++c) {
      min_gap = std::min(min_gap, gap(game, sample_feasible(game.sets, rng)));
    }
  }
  r.add("gap nonnegative", min_gap >= 0.0, min_gap, 0.0);
  const auto rps = build_bilinear(rock_paper_scissors_matrix());
  r.add_le("gap at rock-paper-scissors equilibrium", gap(rps, rps.initial_profile()), 1e-15);
  return r;
}

// GAP(pi) <= D r_tan(pi) on random feasible profiles of every family.
inline Report gap_residual_bound(int profiles = 1000, std::uint64_t seed = 0) {
  Report r{"gap_residual", {}};
  auto rng = make_stream(seed, StreamPurpose::kVerify, 2);
  for (const auto& game : benchmark_games(seed)) {
    double worst = 0.0;  // max of gap - D r_tan (1 + 1e-9)
    double worst_ratio = 0.0;
    for (int c = 0; c < profiles; ++c) {
      const Profile p = sample_feasible(game.sets, rng);
      const double g = gap(game, p);
      const double bound = game.diameter_D * tangent_residual(game, p) * (1.0 + 1e-9);
      worst = std::max(worst, g - bound);
      if (bound > 0) worst_ratio = std::max(worst_ratio, g / bound);
    }
    r.add_le(game.family + ": gap - D r_tan (1+1e-9)", worst, 0.0,
             "max gap/(D r_tan) = " + std::to_string(worst_ratio));
  }
  return r;
}

// ---------------------------------------------------------------------------

inline Report games(int samples = 10000, std::uint64_t seed = 0) {
  Report r{"games", {}};
  auto rng = make_stream(seed, StreamPurpose::kVerify, 3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  for (const auto& game : benchmark_games(seed)) {
    const std::string f = game.family;
    // central finite differences of the payoffs at interior points
    double fd_err = 0.0;
    const int fd_points = std::max(1, samples / 10);
    for (int c = 0; c < fd_points; ++c) {
      Profile p = sample_feasible(game.sets, rng);
      // pull toward the centre to stay interior
      const Profile centre = game.initial_profile();
      for (std::size_t i = 0; i < p.size(); ++i) p[i] = 0.5 * p[i] + 0.5 * centre[i];
      const Profile g = game.gradient(p);
      for (std::size_t i = 0; i < p.size(); ++i) {
        const double width = std::holds_alternative<Box>(game.sets[i])
                                 ? std::get<Box>(game.sets[i]).hi - std::get<Box>(game.sets[i]).lo
                                 : 1.0;
        const double h = 1e-5 * width;
        for (Eigen::Index j = 0; j < p[i].size(); ++j) {
          Profile up = p, down = p;
          up[i][j] += h;
          down[i][j] -= h;
          const double fd = (game.payoff(up)[i] - game.payoff(down)[i]) / (2.0 * h);
          fd_err = std::max(fd_err, std::abs(fd - g[i][j]) / std::max(1.0, std::abs(g[i][j])));
        }
      }
    }
    r.add_le(f + ": gradient vs finite differences (rel)", fd_err, 1e-6);

    double mono = -1e300, lip = 0.0, zero_sum = 0.0;
    for (int c = 0; c < samples; ++c) {
      const Profile p = sample_feasible(game.sets, rng);
      const Profile q = sample_feasible(game.sets, rng);
      const double dist2 = squared_norm(p - q);
      if (dist2 <= 0.0) continue;
      const Profile dv = game.gradient(p) - game.gradient(q);
      mono = std::max(mono, dot(dv, p - q) / dist2);
      lip = std::max(lip, norm(dv) / std::sqrt(dist2));
      if (game.zero_sum) {
        const auto v = game.payoff(p);
        zero_sum = std::max(zero_sum, std::abs(v[0] + v[1]));
      }
    }
    r.add_le(f + ": monotonicity <dV, dp>/|dp|^2", mono, 1e-9);
    r.add_le(f + ": empirical Lipschitz ratio", lip, game.lipschitz_L);
    if (game.zero_sum) r.add_le(f + ": |v1 + v2|", zero_sum, 0.0);

    double norm_v = 0.0;
    for (int c = 0; c < samples / 10; ++c) norm_v = std::max(norm_v, norm(game.gradient(sample_feasible(game.sets, rng))));
    r.add_le(f + ": ||V|| vs declared zeta", norm_v, game.grad_bound_zeta);
  }
  return r;
}

// ---------------------------------------------------------------------------

inline Report feedback(int draws = 100000, std::uint64_t seed = 0) {
  Report r{"feedback", {}};
  const auto game = build_random_payoff(5, seed);
  const Profile p = game.initial_profile();
  const Profile truth = game.gradient(p);
  const double sigma = 0.1;
  NoiseStreams streams(seed, game.n_players());

  const auto dim = truth.total_dim();
  std::vector<double> sum(dim, 0.0), sum2(dim, 0.0), lag(dim, 0.0), prev(dim, 0.0);
  for (int n = 0; n < draws; ++n) {
    const auto fb = observe(game, p, Gaussian{sigma}, streams, n);
    std::size_t idx = 0;
    for (std::size_t i = 0; i < fb.grad.size(); ++i) {
      for (Eigen::Index j = 0; j < fb.grad[i].size(); ++j, ++idx) {
        const double e = fb.grad[i][j] - truth[i][j];
        sum[idx] += e;
        sum2[idx] += e * e;
        if (n > 0) lag[idx] += e * prev[idx];
        prev[idx] = e;
      }
    }
  }
  const double dn = static_cast<double>(draws);
  double worst_mean = 0.0, var_lo = 1e300, var_hi = 0.0, worst_ac = 0.0;
  for (std::size_t idx = 0; idx < dim; ++idx) {
    const double mean = sum[idx] / dn;
    const double var = sum2[idx] / dn - mean * mean;
    worst_mean = std::max(worst_mean, std::abs(mean));
    var_lo = std::min(var_lo, var);
    var_hi = std::max(var_hi, var);
    const double ac = (lag[idx] / (dn - 1.0) - mean * mean) / var;
    worst_ac = std::max(worst_ac, std::abs(ac));
  }
  r.add_le("noise mean |bias|", worst_mean, 4.0 * sigma / std::sqrt(dn));
  r.add("noise variance in [0.009, 0.011]", var_lo >= 0.009 && var_hi <= 0.011, var_hi, 0.011,
        "min " + std::to_string(var_lo));
  r.add_le("lag-1 autocorrelation", worst_ac, 4.0 / std::sqrt(dn));

  NoiseStreams a(seed, 2), b(seed, 2), z(seed, 2);
  bool same = true;
  for (int n = 0; n < 1000; ++n) {
    same = same && observe(game, p, Gaussian{sigma}, a, n).grad == observe(game, p, Gaussian{sigma}, b, n).grad;
  }
  r.add("determinism under a fixed seed", same);
  const bool zero_ok = observe(game, p, Gaussian{0.0}, z, 0).grad == observe(game, p, NoNoise{}, z, 0).grad &&
                       observe(game, p, NoNoise{}, z, 0).grad == truth;
  r.add("NoNoise equals Gaussian{0} and V exactly", zero_ok);
  return r;
}

// ---------------------------------------------------------------------------

// Frozen-anchor GABP: ||pi_mu - pi^{t+1}||^2 <= (1 + eta mu)^{-t} ||pi_mu - sigma_1||^2 (1 + 1e-6)
// + 10 tol for every t.
inline Report contraction(std::size_t dim = 10, std::int64_t steps = 500, double mu = 1.0,
                          double eta_factor = 0.9, std::uint64_t seed = 0) {
  Report r{"contraction", {}};
  const auto game = build_random_payoff(dim, seed);
  const double eta = eta_factor * mu / ((game.lipschitz_L + mu) * (game.lipschitz_L + mu));
  const double tol = default_oracle_tol(game);
  const Profile sigma1 = game.initial_profile();
  const auto sp = stationary_point(game, sigma1, mu, tol);
  const double d0 = squared_norm(sp.point - sigma1);

  GabpState s{sigma1, AnchorState::start(sigma1, kNeverReanchor), mu};
  double worst_excess = -1e300, worst_ratio = 0.0;
  bool ok = true;
  for (std::int64_t t = 1; t <= steps; ++t) {
    s = gabp_step(game.sets, std::move(s), FeedbackSample{game.gradient(s.pi), t}, eta);
    const double lhs = squared_norm(sp.point - s.pi);
    const double rhs = std::pow(1.0 + eta * mu, -static_cast<double>(t)) * d0 * (1.0 + 1e-6) + 10.0 * tol;
    ok = ok && lhs <= rhs;
    worst_excess = std::max(worst_excess, lhs - rhs);
    worst_ratio = std::max(worst_ratio, lhs / rhs);
  }
  r.add("frozen-anchor contraction at every t", ok, worst_ratio, 1.0,
        "max lhs/rhs; eta=" + std::to_string(eta) + " oracle residual=" + std::to_string(sp.residual));
  return r;
}

// ---------------------------------------------------------------------------

// Full-feedback GABP with the constant-rate theory interval, recording the
// anchor and its perturbed equilibrium for every epoch.
struct TheoryTrace {
  GameSpec game;
  double mu = 1.0;
  double eta = 0.0;
  std::int64_t T = 0;
  std::int64_t T_sigma = 0;
  double tol = 0.0;
  std::vector<EpochData> epochs;  // epochs[k-1] is epoch k
  Profile final_profile;
};

inline TheoryTrace theory_trace(GameSpec game, double mu, double eta_factor, std::int64_t T,
                                double c = 1.0) {
  TheoryTrace tr;
  tr.mu = mu;
  tr.eta = eta_factor * mu / ((game.lipschitz_L + mu) * (game.lipschitz_L + mu));
  tr.T = T;
  tr.T_sigma = tsigma_full(T, tr.eta, mu, c);
  tr.tol = default_oracle_tol(game);
  tr.game = std::move(game);

  RunOptions opt;
  opt.solver = SolverKind::kGabp;
  opt.schedule = ConstantRate{tr.eta};
  opt.T = T;
  opt.T_sigma = tr.T_sigma;
  opt.mu = mu;
  opt.record_every = T;
  StationaryTracker tracker(tr.game, mu, tr.tol);
  const Profile init = tr.game.initial_profile();
  tracker.enter(1, init, init);
  auto res = run(tr.game, opt, [&](const StepView& v) {
    if (v.reanchored) {
      const auto* a = v.solver.anchor();
      tracker.enter(a->k, a->sigma_k, a->sigma_1);
    }
  });
  for (const auto& [k, e] : tracker.epochs()) tr.epochs.push_back(e);
  tr.final_profile = res.final_profile;
  return tr;
}

// ||pi_mu_k - sigma_k|| <= 8D/(k+1) + 10 tol for every epoch.
inline Report anchor_rate(const TheoryTrace& tr) {
  Report r{"anchor_rate", {}};
  const double D = tr.game.diameter_D;
  bool ok = true;
  double worst_ratio = 0.0;
  for (const auto& e : tr.epochs) {
    const double lhs = distance(e.pi_mu, e.sigma_k);
    const double rhs = 8.0 * D / static_cast<double>(e.k + 1) + 10.0 * tr.tol;
    ok = ok && lhs <= rhs;
    worst_ratio = std::max(worst_ratio, lhs / rhs);
  }
  r.add("anchor distance <= 8D/(k+1) for all " + std::to_string(tr.epochs.size()) + " epochs", ok,
        worst_ratio, 1.0, "max lhs/rhs; T_sigma=" + std::to_string(tr.T_sigma));
  r.add_ge("completed epochs", static_cast<double>(tr.epochs.size()), 8.0);
  return r;
}

// P^{k+1} - P^k <= (k+1)^2 2D (||pi_mu_k - sigma_{k+1}|| + ||pi_mu_{k-1} - sigma_k||) + 10 tol,
// and the gap decomposition at the final iterate.
inline Report potential(const TheoryTrace& tr) {
  Report r{"potential", {}};
  const auto& ep = tr.epochs;
  const double D = tr.game.diameter_D;
  auto P = [&](std::size_t k) {  // P^k, 1-based k >= 2
    return monogame::potential(static_cast<std::int64_t>(k), ep[k - 2].pi_mu, ep[k - 2].sigma_hat,
                               ep[k - 1].sigma_hat);
  };
  bool ok = true;
  double worst_ratio = -1e300;
  std::size_t checked = 0;
  for (std::size_t k = 2; k + 1 <= ep.size(); ++k) {
    const double kk = static_cast<double>(k);
    const double lhs = P(k + 1) - P(k);
    const double slack = (kk + 1) * (kk + 1) * 2.0 * D *
                         (distance(ep[k - 1].pi_mu, ep[k].sigma_k) + distance(ep[k - 2].pi_mu, ep[k - 1].sigma_k));
    const double rhs = slack + 10.0 * tr.tol;
    ok = ok && lhs <= rhs;
    worst_ratio = std::max(worst_ratio, lhs / rhs);
    ++checked;
  }
  r.add("telescoping P^{k+1} - P^k over " + std::to_string(checked) + " epochs", ok && checked > 0,
        worst_ratio, 1.0, "max (P^{k+1}-P^k)/rhs");

  // GAP(pi^{T+1}) <= mu D (D/(K+1) + ||pi_mu_K - sigma_K||) + (L D + zeta) ||pi_mu_K - pi^{T+1}||
  const auto K = static_cast<std::size_t>(tr.T / tr.T_sigma);
  if (K >= 1 && K <= ep.size()) {
    const auto& e = ep[K - 1];
    const auto& g = tr.game;
    const double lhs = gap(g, tr.final_profile);
    const double rhs = tr.mu * D * (D / static_cast<double>(K + 1) + distance(e.pi_mu, e.sigma_k)) +
                       (g.lipschitz_L * D + g.grad_bound_zeta) * distance(e.pi_mu, tr.final_profile) +
                       1e-9 * (1.0 + g.grad_bound_zeta * D);
    r.add_le("gap decomposition at the last iterate", lhs, rhs);
  }
  return r;
}

// ---------------------------------------------------------------------------

// Update rules against their alternative closed forms on random states:
//  GABP: project(pi + eta (g - mu (pi - sigma_hat))) with sigma_hat the
//        centered anchor;
//  AOG:  project of the convex-combination centre
//        (t pi + pi_1)/(t+1) moved by eta g, for both half and full steps.
inline Report equivalences(int steps = 1000, std::uint64_t seed = 0) {
  Report r{"equivalences", {}};
  auto rng = make_stream(seed, StreamPurpose::kVerify, 4);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> kdist(1, 50);

  double gabp_err = 0.0;
  for (int n = 0; n < steps; ++n) {
    const auto game = n % 2 == 0 ? build_random_payoff(8, seed + static_cast<std::uint64_t>(n))
                                 : build_hard_game(6);
    const Profile pi = sample_feasible(game.sets, rng);
    AnchorState a = AnchorState::start(sample_feasible(game.sets, rng), 1000);
    a.sigma_k = sample_feasible(game.sets, rng);
    a.k = kdist(rng);
    const double mu = 0.05 + unit(rng);
    const double eta = 0.01 + 0.5 * unit(rng);
    const Profile g = game.gradient(sample_feasible(game.sets, rng));

    const Profile hat = a.centered();
    const auto stepped = gabp_step(game.sets, GabpState{pi, a, mu}, FeedbackSample{g, 1}, eta);
    for (std::size_t i = 0; i < pi.size(); ++i) {
      const Vector alt = project(game.sets[i], Vector(pi[i] + eta * (g[i] - mu * (pi[i] - hat[i]))));
      const double scale = 1.0 + alt.lpNorm<Eigen::Infinity>();
      gabp_err = std::max(gabp_err, (alt - stepped.pi[i]).lpNorm<Eigen::Infinity>() / scale);
    }
  }
  r.add_le("GABP boosted form vs centered-anchor form (max rel)", gabp_err, 1e-12);

  double aog_err = 0.0;
  for (int n = 0; n < steps; ++n) {
    const auto game = build_random_payoff(8, seed + static_cast<std::uint64_t>(n));
    AogState s;
    s.pi = sample_feasible(game.sets, rng);
    s.pi_initial = sample_feasible(game.sets, rng);
    s.t = 1 + kdist(rng);
    s.half_grad = game.gradient(sample_feasible(game.sets, rng));
    const double eta = 0.01 + 0.5 * unit(rng);
    const Profile pi = s.pi;
    const Profile g_prev = *s.half_grad;
    const double tt = static_cast<double>(s.t);
    NoiseStreams streams(seed, game.n_players());
    const auto stepped = aog_step(game, s, NoNoise{}, streams, eta);

    Profile half;
    for (std::size_t i = 0; i < pi.size(); ++i) {
      const Vector centre = (tt * pi[i] + s.pi_initial[i]) / (tt + 1.0);
      half.players.push_back(project(game.sets[i], Vector(centre + eta * g_prev[i])));
    }
    const Profile g_half = game.gradient(half);
    for (std::size_t i = 0; i < pi.size(); ++i) {
      const Vector centre = (tt * pi[i] + s.pi_initial[i]) / (tt + 1.0);
      const Vector alt = project(game.sets[i], Vector(centre + eta * g_half[i]));
      aog_err = std::max(aog_err, (alt - stepped.pi[i]).lpNorm<Eigen::Infinity>());
    }
  }
  r.add_le("AOG gradient-in-bracket form vs convex-combination form (max abs)", aog_err, 1e-12);
  return r;
}

// ---------------------------------------------------------------------------

struct RegretTrace {
  std::vector<std::int64_t> t;
  std::vector<std::vector<double>> dyn;
  std::vector<std::vector<double>> ext;
  std::int64_t T_sigma = 0;
};

inline RegretTrace regret_trace(std::size_t dim, std::int64_t T, double mu, double eta_factor,
                                std::int64_t record_every, std::uint64_t seed = 0) {
  const auto game = build_random_payoff(dim, seed);
  const double eta = eta_factor * mu / ((game.lipschitz_L + mu) * (game.lipschitz_L + mu));
  RunOptions opt;
  opt.solver = SolverKind::kGabp;
  opt.schedule = ConstantRate{eta};
  opt.T = T;
  opt.T_sigma = tsigma_full(T, eta, mu);
  opt.mu = mu;
  opt.record_every = record_every;
  opt.metrics.dynamic_regret = true;
  opt.metrics.external_regret = true;
  RegretTrace tr;
  tr.T_sigma = opt.T_sigma;
  for (const auto& rec : run(game, opt).records) {
    tr.t.push_back(rec.t);
    tr.dyn.push_back(*rec.dyn_regret);
    tr.ext.push_back(*rec.ext_regret);
  }
  return tr;
}

// DynamicReg_i(T)/(ln T)^2 at t_hi is at most twice its value at t_lo, and
// DynamicReg_i >= Reg_i at every record.
inline Report regret(const RegretTrace& tr, std::int64_t t_lo, std::int64_t t_hi) {
  Report r{"regret", {}};
  auto at = [&](std::int64_t t) -> const std::vector<double>* {
    for (std::size_t n = 0; n < tr.t.size(); ++n)
      if (tr.t[n] == t) return &tr.dyn[n];
    return nullptr;
  };
  const auto* lo = at(t_lo);
  const auto* hi = at(t_hi);
  if (!lo || !hi) {
    r.add("regret records present at both horizons", false);
    return r;
  }
  const double llo = std::log(static_cast<double>(t_lo)), lhi = std::log(static_cast<double>(t_hi));
  for (std::size_t i = 0; i < lo->size(); ++i) {
    const double a = (*lo)[i] / (llo * llo);
    const double b = (*hi)[i] / (lhi * lhi);
    r.add_le("player " + std::to_string(i + 1) + ": DynReg/(ln T)^2 growth " + std::to_string(t_lo) +
                 " -> " + std::to_string(t_hi),
             b / a, 2.0, "T_sigma=" + std::to_string(tr.T_sigma));
  }
  double worst = -1e300;
  for (std::size_t n = 0; n < tr.t.size(); ++n)
    for (std::size_t i = 0; i < tr.dyn[n].size(); ++i) worst = std::max(worst, tr.ext[n][i] - tr.dyn[n][i]);
  r.add_le("Reg_i - DynamicReg_i at every record", worst, 1e-9);
  return r;
}

// ---------------------------------------------------------------------------

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"geometry", "games",  "feedback", "contraction",
                                                 "lemma3",   "potential", "regret", "all"};
  return names;
}

inline bool is_suite(const std::string& name) {
  const auto& n = suite_names();
  return std::find(n.begin(), n.end(), name) != n.end();
}

// Runs a named suite at its default sizes.
inline Report run_suite(const std::string& name) {
  if (name == "geometry") {
    Report r = geometry();
    r.append(gap_residual_bound());
    return r;
  }
  if (name == "games") return games();
  if (name == "feedback") return feedback();
  if (name == "contraction") return contraction();
  if (name == "lemma3") return anchor_rate(theory_trace(build_random_payoff(10, 0), 1.0, 0.9, 100000));
  if (name == "potential") return potential(theory_trace(build_random_payoff(10, 0), 1.0, 0.9, 100000));
  if (name == "regret") return regret(regret_trace(10, 100000, 1.0, 0.9, 1000), 1000, 100000);
  if (name == "all") {
    Report all{"all", {}};
    for (const auto& s : suite_names()) {
      if (s == "all") continue;
      Report part = run_suite(s);
      for (auto& c : part.checks) c.name = s + "/" + c.name;
      all.append(part);
    }
    return all;
  }
  throw InputError("unknown verification suite '" + name + "'");
}

}  // namespace monogame::verify
