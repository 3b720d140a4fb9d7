#pragma once

// Benchmark monotone games as gradient oracles with declared constants.
//
// Every game exposes the joint gradient operator V, optional payoffs and a
// best-response oracle for regret. Declared constants are upper bounds:
//   lipschitz_L      >= sup ||V(p) - V(q)|| / ||p - q||
//   diameter_D       =  sup ||p - q|| over the product set
//   grad_bound_zeta  >= sup ||V(p)||

#include <algorithm>
#include <functional>
#include <memory>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "monogame/geometry.hpp"
#include "monogame/rng.hpp"
#include "monogame/types.hpp"

namespace monogame {

struct BestResponse {
  double value = 0.0;
  Vector strategy;
  // false when an iterative inner solver hit its iteration cap
  bool converged = true;
};

struct GameSpec {
  std::string family;
  std::vector<FeasibleSet> sets;
  std::function<Profile(const Profile&)> gradient;
  // Optional: per-player payoffs v_i(pi).
  std::function<std::vector<double>(const Profile&)> payoff;
  // Optional closed-form or specialised best response; when empty the
  // generic projected-gradient inner solver is used.
  std::function<BestResponse(std::size_t, const Profile&)> best_response;
  double lipschitz_L = 1.0;
  double diameter_D = 1.0;
  double grad_bound_zeta = 1.0;
  bool zero_sum = false;

  std::size_t n_players() const { return sets.size(); }

  std::vector<std::size_t> dims() const {
    std::vector<std::size_t> d;
    for (const auto& s : sets) d.push_back(dim_of(s));
    return d;
  }

  bool has_payoff() const { return static_cast<bool>(payoff); }

  // (1/d) * 1 for every player, projected onto its set.
  Profile initial_profile() const {
    Profile p;
    for (const auto& s : sets) {
      const auto d = dim_of(s);
      p.players.push_back(project(s, Vector::Constant(static_cast<Eigen::Index>(d),
                                                      1.0 / static_cast<double>(d))));
    }
    return p;
  }
};

// ---------------------------------------------------------------------------
// Two-player zero-sum bilinear games on simplices: v1 = x^T A y, v2 = -v1.

inline GameSpec build_bilinear(Matrix A, std::string family = "bilinear") {
  if (A.rows() < 1 || A.cols() < 1) throw InputError("payoff matrix must be non-empty");
  auto a = std::make_shared<const Matrix>(std::move(A));
  GameSpec g;
  g.family = std::move(family);
  g.sets = {Simplex{static_cast<std::size_t>(a->rows())},
            Simplex{static_cast<std::size_t>(a->cols())}};
  g.zero_sum = true;
  g.gradient = [a](const Profile& p) {
    return Profile({(*a) * p[1], -(a->transpose() * p[0])});
  };
  g.payoff = [a](const Profile& p) {
    const double v = p[0].dot((*a) * p[1]);
    return std::vector<double>{v, -v};
  };
  g.best_response = [a](std::size_t i, const Profile& p) {
    const Vector grad = i == 0 ? Vector((*a) * p[1]) : Vector(-(a->transpose() * p[0]));
    Eigen::Index arg = 0;
    const double value = grad.maxCoeff(&arg);
    return BestResponse{value, Vector::Unit(grad.size(), arg), true};
  };
  // Spectral norm bounded by Frobenius; ||A y|| is at most the largest column
  // norm on the simplex, ||A^T x|| the largest row norm.
  g.lipschitz_L = a->norm();
  g.diameter_D = diameter(g.sets);
  const double max_col = a->colwise().norm().maxCoeff();
  const double max_row = a->rowwise().norm().maxCoeff();
  g.grad_bound_zeta = std::sqrt(2.0) * std::max(max_col, max_row);
  if (g.lipschitz_L <= 0.0) g.lipschitz_L = 1e-12;
  if (g.grad_bound_zeta <= 0.0) g.grad_bound_zeta = 1e-12;
  return g;
}

// Entries i.i.d. uniform on [-1, 1], filled row-major from the game stream.
inline Matrix random_payoff_matrix(std::size_t dim, std::uint64_t seed) {
  if (dim < 1) throw InputError("random payoff game requires dim >= 1");
  auto rng = make_stream(seed, StreamPurpose::kGame);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto n = static_cast<Eigen::Index>(dim);
  Matrix A(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) A(r, c) = u(rng);
  return A;
}

inline GameSpec build_random_payoff(std::size_t dim, std::uint64_t seed) {
  return build_bilinear(random_payoff_matrix(dim, seed), "random_payoff");
}

inline Matrix matching_pennies_matrix() {
  Matrix A(2, 2);
  A << 1, -1, -1, 1;
  return A;
}

inline Matrix rock_paper_scissors_matrix() {
  Matrix A(3, 3);
  A << 0, -1, 1, 1, 0, -1, -1, 1, 0;
  return A;
}

// ---------------------------------------------------------------------------
// Hard concave-convex game:
//   max_x min_y f(x, y) = -1/2 x^T H x + h^T x + <A x - b, y>
// over [-200, 200]^n for both players.

struct HardGameMatrices {
  Matrix A;
  Matrix H;
  Vector b;
  Vector h;
};

inline constexpr double kHardBoxBound = 200.0;

// A has the anti-diagonal band: row i (1-based, i < n) carries -1/4 at
// column n-i and +1/4 at column n-i+1; row n carries +1/4 at column 1.
inline HardGameMatrices hard_game_matrices(std::size_t dim) {
  if (dim < 2) throw InputError("hard game requires dim >= 2");
  const auto n = static_cast<Eigen::Index>(dim);
  HardGameMatrices m;
  m.A = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    m.A(i, n - i - 2) = -0.25;
    m.A(i, n - i - 1) = 0.25;
  }
  m.A(n - 1, 0) = 0.25;
  m.H = 2.0 * m.A.transpose() * m.A;
  m.b = Vector::Constant(n, 0.25);
  m.h = Vector::Zero(n);
  m.h[n - 1] = 0.25;
  return m;
}

namespace detail {

struct HardGameData {
  HardGameMatrices m;
  Eigen::LLT<Matrix> llt;
};

}  // namespace detail

inline GameSpec build_hard_game(std::size_t dim) {
  auto data = std::make_shared<detail::HardGameData>();
  data->m = hard_game_matrices(dim);
  data->llt.compute(data->m.H);
  std::shared_ptr<const detail::HardGameData> d = data;

  GameSpec g;
  g.family = "hard";
  g.sets = {Box{dim, -kHardBoxBound, kHardBoxBound}, Box{dim, -kHardBoxBound, kHardBoxBound}};
  g.zero_sum = true;
  g.gradient = [d](const Profile& p) {
    const auto& m = d->m;
    return Profile({-(m.H * p[0]) + m.h + m.A.transpose() * p[1], -(m.A * p[0] - m.b)});
  };
  g.payoff = [d](const Profile& p) {
    const auto& m = d->m;
    const double f = -0.5 * p[0].dot(m.H * p[0]) + m.h.dot(p[0]) + (m.A * p[0] - m.b).dot(p[1]);
    return std::vector<double>{f, -f};
  };

  const double frob_A = d->m.A.norm();
  const double frob_H = d->m.H.norm();
  g.lipschitz_L = frob_H + frob_A;
  g.diameter_D = diameter(g.sets);
  const double radius = kHardBoxBound * std::sqrt(static_cast<double>(dim));
  g.grad_bound_zeta =
      (frob_H + 2.0 * frob_A) * radius + d->m.h.norm() + d->m.b.norm();

  const FeasibleSet box = g.sets[0];
  // Player 2's payoff is linear in y: closed form. Player 1 solves a concave
  // box-constrained quadratic: exact when the unconstrained maximiser is
  // feasible, projected gradient ascent from its clamp otherwise.
  g.best_response = [d, box, frob_H](std::size_t i, const Profile& p) {
    const auto& m = d->m;
    if (i == 1) {
      const Vector grad = -(m.A * p[0] - m.b);
      const Vector y = support_point(box, grad);
      const double f = -0.5 * p[0].dot(m.H * p[0]) + m.h.dot(p[0]) + (m.A * p[0] - m.b).dot(y);
      return BestResponse{-f, y, true};
    }
    const Vector lin = m.h + m.A.transpose() * p[1];
    const Vector x_free = d->llt.solve(lin);
    auto value_at = [&](const Vector& x) {
      return -0.5 * x.dot(m.H * x) + lin.dot(x) - m.b.dot(p[1]);
    };
    if (is_feasible(box, x_free, 0.0)) return BestResponse{value_at(x_free), x_free, true};

    const double step = 1.0 / frob_H;
    Vector x = project(box, x_free);
    bool converged = false;
    for (int it = 0; it < 1'000'000; ++it) {
      Vector next = project(box, Vector(x + step * (lin - m.H * x)));
      const double moved = (next - x).norm();
      x = std::move(next);
      if (moved < 1e-10) {
        converged = true;
        break;
      }
    }
    return BestResponse{value_at(x), x, converged};
  };
  return g;
}

// ---------------------------------------------------------------------------
// Cournot competition: firm i picks quantity q_i in [0, C_i], price is
// P = a - b * sum q, payoff v_i = q_i P - c_i q_i.

inline GameSpec build_cournot(std::size_t n_firms, double a, double b, std::vector<double> costs,
                              std::vector<double> caps) {
  if (n_firms < 1) throw InputError("cournot requires at least one firm");
  if (!(a > 0.0) || !(b > 0.0)) throw InputError("cournot requires a > 0 and b > 0");
  if (costs.size() != n_firms || caps.size() != n_firms) {
    throw InputError("cournot costs and caps must have one entry per firm");
  }
  for (double c : caps) {
    if (!(c > 0.0)) throw InputError("cournot capacities must be positive");
  }

  GameSpec g;
  g.family = "cournot";
  for (double c : caps) g.sets.push_back(Box{1, 0.0, c});
  auto cost = std::make_shared<const std::vector<double>>(costs);
  g.gradient = [a, b, cost](const Profile& p) {
    double total = 0.0;
    for (const auto& q : p.players) total += q[0];
    Profile out;
    for (std::size_t i = 0; i < p.size(); ++i) {
      Vector gi(1);
      gi[0] = a - b * total - b * p[i][0] - (*cost)[i];
      out.players.push_back(std::move(gi));
    }
    return out;
  };
  g.payoff = [a, b, cost](const Profile& p) {
    double total = 0.0;
    for (const auto& q : p.players) total += q[0];
    std::vector<double> v;
    for (std::size_t i = 0; i < p.size(); ++i) {
      v.push_back(p[i][0] * (a - b * total) - (*cost)[i] * p[i][0]);
    }
    return v;
  };
  // v_i is concave in q_i: q_i* = clamp((a - c_i - b sum_{j != i} q_j) / (2b), 0, C_i)
  g.best_response = [a, b, cost, caps](std::size_t i, const Profile& p) {
    double others = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j)
      if (j != i) others += p[j][0];
    const double q = std::clamp((a - (*cost)[i] - b * others) / (2.0 * b), 0.0, caps[i]);
    Vector x(1);
    x[0] = q;
    return BestResponse{q * (a - b * (others + q)) - (*cost)[i] * q, x, true};
  };
  // Jacobian is -b (I + 1 1^T), spectral norm b (n + 1).
  g.lipschitz_L = b * static_cast<double>(n_firms + 1);
  g.diameter_D = diameter(g.sets);
  const double cap_sum = std::accumulate(caps.begin(), caps.end(), 0.0);
  double zeta2 = 0.0;
  for (std::size_t i = 0; i < n_firms; ++i) {
    const double hi = a - costs[i];
    const double lo = a - costs[i] - b * (cap_sum + caps[i]);
    const double m = std::max(std::abs(hi), std::abs(lo));
    zeta2 += m * m;
  }
  g.grad_bound_zeta = std::max(std::sqrt(zeta2), 1e-12);
  return g;
}

// ---------------------------------------------------------------------------

// Projected gradient ascent on v_i(., pi_{-i}) with the given step, stopping
// when an update moves less than 1e-10 (cap 10^6 iterations).
inline BestResponse generic_best_response(const GameSpec& game, std::size_t player,
                                          const Profile& profile, Vector start, double step) {
  Profile p = profile;
  p[player] = project(game.sets[player], start);
  bool converged = false;
  for (int it = 0; it < 1'000'000; ++it) {
    const Vector g = game.gradient(p)[player];
    Vector next = project(game.sets[player], Vector(p[player] + step * g));
    const double moved = (next - p[player]).norm();
    p[player] = std::move(next);
    if (moved < 1e-10) {
      converged = true;
      break;
    }
  }
  return BestResponse{game.payoff(p)[player], p[player], converged};
}

// max_{x in X_i} v_i(x, pi_{-i}).
inline BestResponse best_response(const GameSpec& game, std::size_t player,
                                  const Profile& profile) {
  if (!game.has_payoff()) {
    throw UnsupportedMetric("game '" + game.family + "' has no payoff evaluator");
  }
  if (player >= game.n_players()) throw InputError("player index out of range");
  if (game.best_response) return game.best_response(player, profile);
  return generic_best_response(game, player, profile, profile[player], 1.0 / game.lipschitz_L);
}

inline double best_response_value(const GameSpec& game, std::size_t player,
                                  const Profile& profile) {
  return best_response(game, player, profile).value;
}

}  // namespace monogame
