#pragma once

// Convergence and regret measurements.

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "monogame/algorithms.hpp"
#include "monogame/games.hpp"
#include "monogame/geometry.hpp"

namespace monogame {

// The stationary-point oracle hit its iteration cap.
class OracleFailure : public std::runtime_error {
 public:
  OracleFailure(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

inline double default_oracle_tol(const GameSpec& game) { return 1e-10 * game.diameter_D; }

struct StationaryPoint {
  Profile point;
  // norm of the last projected-gradient update
  double residual = 0.0;
  std::int64_t iterations = 0;
};

// Unique equilibrium of the mu-perturbed game anchored at sigma_hat:
//   pi_i = argmax_x { v_i(x, pi_-i) - mu/2 ||x - sigma_hat_i||^2 }.
// Projected gradient iteration on V(pi) - mu (pi - sigma_hat) with step
// mu / (L + mu)^2, started at the anchor.
inline StationaryPoint stationary_point(const GameSpec& game, const Profile& sigma_hat, double mu,
                                        double tol, std::int64_t max_iters = 10'000'000) {
  if (!(mu > 0.0)) throw InputError("stationary_point requires mu > 0");
  if (!(tol > 0.0)) throw InputError("stationary_point requires tol > 0");
  require_feasible(game.sets, sigma_hat);
  const double step = mu / ((game.lipschitz_L + mu) * (game.lipschitz_L + mu));
  Profile x = sigma_hat;
  double moved = 0.0;
  for (std::int64_t it = 1; it <= max_iters; ++it) {
    const Profile g = game.gradient(x);
    moved = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      Vector next = project(game.sets[i], Vector(x[i] + step * (g[i] - mu * (x[i] - sigma_hat[i]))));
      moved += (next - x[i]).squaredNorm();
      x[i] = std::move(next);
    }
    moved = std::sqrt(moved);
    if (moved < tol) return StationaryPoint{std::move(x), moved, it};
  }
  throw OracleFailure("stationary point oracle did not converge (residual " +
                          std::to_string(moved) + ")",
                      moved);
}

// One projected-gradient step of the oracle map; used to check a returned
// point is a fixed point.
inline double oracle_step_length(const GameSpec& game, const Profile& sigma_hat, double mu,
                                 const Profile& x) {
  const double step = mu / ((game.lipschitz_L + mu) * (game.lipschitz_L + mu));
  const Profile g = game.gradient(x);
  double moved = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const Vector next =
        project(game.sets[i], Vector(x[i] + step * (g[i] - mu * (x[i] - sigma_hat[i]))));
    moved += (next - x[i]).squaredNorm();
  }
  return std::sqrt(moved);
}

// (k sigma_k + sigma_1) / (k + 1)
inline Profile centered_anchor(std::int64_t k, const Profile& sigma_k, const Profile& sigma_1) {
  const double kk = static_cast<double>(k);
  Profile c = sigma_k;
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = (kk * sigma_k[i] + sigma_1[i]) / (kk + 1.0);
  return c;
}

// P^k = k (k+1) ( 1/2 ||pi_mu_prev - sh_prev||^2 + <sh_cur - pi_mu_prev, pi_mu_prev - sh_prev> )
inline double potential(std::int64_t k, const Profile& pi_mu_prev, const Profile& sigma_hat_prev,
                        const Profile& sigma_hat_cur) {
  if (k < 2) throw InputError("potential is defined for k >= 2");
  const Profile diff = pi_mu_prev - sigma_hat_prev;
  const double kk = static_cast<double>(k);
  return kk * (kk + 1.0) * (0.5 * squared_norm(diff) + dot(sigma_hat_cur - pi_mu_prev, diff));
}

struct PotentialSnapshot {
  std::int64_t k = 0;
  Profile pi_mu_prev;
  Profile sigma_hat_prev;
  Profile sigma_hat_cur;
  double value = 0.0;

  static PotentialSnapshot make(std::int64_t k, Profile pi_mu_prev, Profile sigma_hat_prev,
                                Profile sigma_hat_cur) {
    PotentialSnapshot s{k, std::move(pi_mu_prev), std::move(sigma_hat_prev),
                        std::move(sigma_hat_cur), 0.0};
    s.value = potential(s.k, s.pi_mu_prev, s.sigma_hat_prev, s.sigma_hat_cur);
    return s;
  }
};

// Per-epoch record of the anchor and its perturbed equilibrium.
struct EpochData {
  std::int64_t k = 1;
  Profile sigma_k;
  Profile sigma_hat;
  Profile pi_mu;
  double oracle_residual = 0.0;
};

// Computes and caches pi^{mu,k} once per epoch, as anchors are set.
class StationaryTracker {
 public:
  StationaryTracker(const GameSpec& game, double mu, double tol)
      : game_(&game), mu_(mu), tol_(tol) {}

  double tol() const { return tol_; }

  // Registers epoch k with anchor sigma_k; no-op if k is already known.
  const EpochData& enter(std::int64_t k, const Profile& sigma_k, const Profile& sigma_1) {
    if (auto it = epochs_.find(k); it != epochs_.end()) return it->second;
    EpochData e;
    e.k = k;
    e.sigma_k = sigma_k;
    e.sigma_hat = centered_anchor(k, sigma_k, sigma_1);
    auto sp = stationary_point(*game_, e.sigma_hat, mu_, tol_);
    e.pi_mu = std::move(sp.point);
    e.oracle_residual = sp.residual;
    return epochs_.emplace(k, std::move(e)).first->second;
  }

  const EpochData* find(std::int64_t k) const {
    auto it = epochs_.find(k);
    return it == epochs_.end() ? nullptr : &it->second;
  }

  // P^k from cached epochs k-1 and k.
  std::optional<PotentialSnapshot> potential_at(std::int64_t k) const {
    if (k < 2) return std::nullopt;
    const auto* prev = find(k - 1);
    const auto* cur = find(k);
    if (!prev || !cur) return std::nullopt;
    return PotentialSnapshot::make(k, prev->pi_mu, prev->sigma_hat, cur->sigma_hat);
  }

  const std::map<std::int64_t, EpochData>& epochs() const { return epochs_; }

 private:
  const GameSpec* game_;
  double mu_;
  double tol_;
  std::map<std::int64_t, EpochData> epochs_;
};

// ---------------------------------------------------------------------------
// Regret.
//
// Dynamic regret sums per-round best-response gaps. External regret compares
// against the best fixed strategy in hindsight; it is computed exactly for
//  - players whose payoff is linear in their own strategy (bilinear games,
//    the minimising player of the hard game): sum_t v_i(x, pi_-i^t) is affine
//    in x with slope sum_t grad_i v_i(pi^t), so the max is a support value;
//  - players whose payoff is affine in the opponents (hard game maximiser,
//    Cournot): sum_t v_i(x, pi_-i^t) = T v_i(x, mean pi_-i), so the best
//    response to the averaged environment is exact.
// The averaged-environment value is used in every other case and flagged.

enum class PayoffStructure { kLinearInOwn, kAffineInOpponents, kGeneral };

inline PayoffStructure payoff_structure(const GameSpec& game, std::size_t player) {
  if (game.family == "random_payoff" || game.family == "bilinear") {
    return PayoffStructure::kLinearInOwn;
  }
  if (game.family == "hard") {
    return player == 0 ? PayoffStructure::kAffineInOpponents : PayoffStructure::kLinearInOwn;
  }
  if (game.family == "cournot") return PayoffStructure::kAffineInOpponents;
  return PayoffStructure::kGeneral;
}

struct ExternalRegret {
  std::vector<double> value;
  // false when the value relies on an approximation or an unconverged inner solve
  std::vector<bool> exact;
};

class RegretLedger {
 public:
  explicit RegretLedger(const GameSpec& game)
      : n_(game.n_players()),
        realized_(n_, 0.0),
        best_(n_, 0.0),
        grad_dot_own_(n_, 0.0),
        dyn_converged_(n_, true) {
    if (!game.has_payoff()) {
      throw UnsupportedMetric("game '" + game.family + "' has no payoff evaluator");
    }
  }

  // Accumulates round t played at `profile`.
  void record(const GameSpec& game, const Profile& profile) {
    const auto v = game.payoff(profile);
    const Profile grad = game.gradient(profile);
    if (rounds_ == 0) {
      profile_sum_ = profile.zeros_like();
      grad_sum_ = profile.zeros_like();
    }
    for (std::size_t i = 0; i < n_; ++i) {
      realized_[i] += v[i];
      const auto br = best_response(game, i, profile);
      best_[i] += br.value;
      dyn_converged_[i] = dyn_converged_[i] && br.converged;
      grad_dot_own_[i] += grad[i].dot(profile[i]);
    }
    profile_sum_ += profile;
    grad_sum_ += grad;
    ++rounds_;
  }

  std::int64_t rounds() const { return rounds_; }
  const std::vector<double>& realized() const { return realized_; }

  std::vector<double> dynamic_regret() const {
    std::vector<double> r(n_);
    for (std::size_t i = 0; i < n_; ++i) r[i] = best_[i] - realized_[i];
    return r;
  }

  ExternalRegret external_regret(const GameSpec& game) const {
    ExternalRegret out{std::vector<double>(n_, 0.0), std::vector<bool>(n_, true)};
    if (rounds_ == 0) return out;
    const double T = static_cast<double>(rounds_);
    const Profile mean = (1.0 / T) * profile_sum_;
    for (std::size_t i = 0; i < n_; ++i) {
      if (payoff_structure(game, i) == PayoffStructure::kLinearInOwn) {
        out.value[i] = support(game.sets[i], grad_sum_[i]) - grad_dot_own_[i];
        continue;
      }
      const auto br = best_response(game, i, mean);
      out.value[i] = T * br.value - realized_[i];
      out.exact[i] = br.converged && payoff_structure(game, i) == PayoffStructure::kAffineInOpponents;
    }
    return out;
  }

 private:
  std::size_t n_;
  std::int64_t rounds_ = 0;
  std::vector<double> realized_;
  std::vector<double> best_;
  std::vector<double> grad_dot_own_;
  std::vector<bool> dyn_converged_;
  Profile profile_sum_;
  Profile grad_sum_;
};

// ---------------------------------------------------------------------------

// Least-squares slope of log(gap) against log(t) over records with
// t in [t_lo, t_hi]. Nonpositive gaps are skipped; fewer than 20 usable
// points is an error.
inline double slope_fit(const std::vector<std::pair<double, double>>& points, double t_lo,
                        double t_hi) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  for (const auto& [t, g] : points) {
    if (t < t_lo || t > t_hi || !(t > 0.0) || !(g > 0.0)) continue;
    const double x = std::log(t);
    const double y = std::log(g);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 20) {
    throw InputError("slope_fit needs at least 20 positive points in the window, got " +
                     std::to_string(n));
  }
  const double dn = static_cast<double>(n);
  const double denom = dn * sxx - sx * sx;
  if (denom <= 0.0) throw InputError("slope_fit window has no spread in t");
  return (dn * sxy - sx * sy) / denom;
}

}  // namespace monogame
