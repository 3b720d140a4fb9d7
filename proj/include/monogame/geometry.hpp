#pragma once

// Euclidean projections onto per-player strategy sets, tangent-cone
// projections, and the two equilibrium measures built on them: the gap
// function and the tangent residual.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "monogame/types.hpp"

namespace monogame {

// The probability simplex {x >= 0, sum x = 1}.
struct Simplex {
  std::size_t dim = 1;
};

// The hyper-rectangle [lo, hi]^dim.
struct Box {
  std::size_t dim = 1;
  double lo = 0.0;
  double hi = 1.0;
};

using FeasibleSet = std::variant<Simplex, Box>;

inline std::size_t dim_of(const FeasibleSet& set) {
  return std::visit([](const auto& s) { return s.dim; }, set);
}

inline void validate(const FeasibleSet& set) {
  if (dim_of(set) == 0) throw InputError("feasible set dimension must be positive");
  if (const auto* b = std::get_if<Box>(&set); b && !(b->lo < b->hi)) {
    throw InputError("box requires lo < hi");
  }
}

inline double diameter(const FeasibleSet& set) {
  if (const auto* s = std::get_if<Simplex>(&set)) return s->dim >= 2 ? std::sqrt(2.0) : 0.0;
  const auto& b = std::get<Box>(set);
  return (b.hi - b.lo) * std::sqrt(static_cast<double>(b.dim));
}

// l2 combination of the per-player diameters.
inline double diameter(std::span<const FeasibleSet> sets) {
  double s = 0.0;
  for (const auto& set : sets) s += diameter(set) * diameter(set);
  return std::sqrt(s);
}

namespace detail {

inline void check_dim(const FeasibleSet& set, const Vector& v) {
  if (static_cast<std::size_t>(v.size()) != dim_of(set)) {
    throw InputError("vector of length " + std::to_string(v.size()) +
                     " does not match set dimension " + std::to_string(dim_of(set)));
  }
}

// Sort-based threshold method: x = max(v - theta, 0) with theta chosen so
// that the positive part sums to one.
inline Vector project_simplex(const Vector& v) {
  const auto n = v.size();
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumsum = 0.0;
  double theta = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    cumsum += u[static_cast<std::size_t>(j)];
    const double candidate = (cumsum - 1.0) / static_cast<double>(j + 1);
    if (u[static_cast<std::size_t>(j)] - candidate > 0.0) theta = candidate;
  }
  return (v.array() - theta).max(0.0).matrix();
}

inline double active_tol(const FeasibleSet& set) { return 1e-9 * diameter(set); }

}  // namespace detail

inline Vector project(const FeasibleSet& set, const Vector& v) {
  detail::check_dim(set, v);
  if (std::holds_alternative<Simplex>(set)) return detail::project_simplex(v);
  const auto& b = std::get<Box>(set);
  return v.cwiseMax(b.lo).cwiseMin(b.hi);
}

// Product-set projection, player by player.
inline Profile project(std::span<const FeasibleSet> sets, const Profile& p) {
  if (p.size() != sets.size()) throw InputError("profile has the wrong number of players");
  Profile out;
  out.players.reserve(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out.players.push_back(project(sets[i], p[i]));
  return out;
}

inline bool is_feasible(const FeasibleSet& set, const Vector& x, double tol = 1e-9) {
  if (static_cast<std::size_t>(x.size()) != dim_of(set)) return false;
  if (!x.allFinite()) return false;
  if (std::holds_alternative<Simplex>(set)) {
    return x.minCoeff() >= -tol && std::abs(x.sum() - 1.0) <= tol;
  }
  const auto& b = std::get<Box>(set);
  const double t = tol * std::max(1.0, b.hi - b.lo);
  return x.minCoeff() >= b.lo - t && x.maxCoeff() <= b.hi + t;
}

inline bool is_feasible(std::span<const FeasibleSet> sets, const Profile& p, double tol = 1e-9) {
  if (p.size() != sets.size()) return false;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!is_feasible(sets[i], p[i], tol)) return false;
  }
  return true;
}

inline void require_feasible(std::span<const FeasibleSet> sets, const Profile& p) {
  if (!is_feasible(sets, p)) throw InputError("profile is not feasible");
}

// max_{x in set} <g, x>
inline double support(const FeasibleSet& set, const Vector& g) {
  detail::check_dim(set, g);
  if (std::holds_alternative<Simplex>(set)) return g.maxCoeff();
  const auto& b = std::get<Box>(set);
  double s = 0.0;
  for (Eigen::Index j = 0; j < g.size(); ++j) s += g[j] * (g[j] > 0.0 ? b.hi : b.lo);
  return s;
}

// A maximizer of <g, x> over the set (a vertex).
inline Vector support_point(const FeasibleSet& set, const Vector& g) {
  detail::check_dim(set, g);
  if (std::holds_alternative<Simplex>(set)) {
    Eigen::Index arg = 0;
    g.maxCoeff(&arg);
    return Vector::Unit(g.size(), arg);
  }
  const auto& b = std::get<Box>(set);
  Vector x(g.size());
  for (Eigen::Index j = 0; j < g.size(); ++j) x[j] = g[j] > 0.0 ? b.hi : b.lo;
  return x;
}

// Projection of v onto the tangent cone of `set` at `point`. The remainder
// v - result lies in the normal cone (Moreau decomposition).
inline Vector project_tangent(const FeasibleSet& set, const Vector& point, const Vector& v) {
  detail::check_dim(set, point);
  detail::check_dim(set, v);
  const double tol = detail::active_tol(set);
  const auto n = v.size();
  if (const auto* b = std::get_if<Box>(&set)) {
    Vector d = v;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (b->hi - point[j] <= tol && d[j] > 0.0) d[j] = 0.0;
      if (point[j] - b->lo <= tol && d[j] < 0.0) d[j] = 0.0;
    }
    return d;
  }
  // Simplex: {d : sum d = 0, d_j >= 0 where point_j = 0}. The free set only
  // shrinks, so at most n passes.
  std::vector<bool> at_zero(static_cast<std::size_t>(n));
  std::vector<bool> clamped(static_cast<std::size_t>(n), false);
  for (Eigen::Index j = 0; j < n; ++j) at_zero[static_cast<std::size_t>(j)] = point[j] <= tol;
  double shift = 0.0;
  for (Eigen::Index pass = 0; pass <= n; ++pass) {
    double sum = 0.0;
    std::size_t free = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!clamped[static_cast<std::size_t>(j)]) {
        sum += v[j];
        ++free;
      }
    }
    shift = sum / static_cast<double>(free);
    bool changed = false;
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto uj = static_cast<std::size_t>(j);
      if (at_zero[uj] && !clamped[uj] && v[j] - shift < 0.0) {
        clamped[uj] = true;
        changed = true;
      }
    }
    if (!changed) break;
  }
  Vector d(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    d[j] = clamped[static_cast<std::size_t>(j)] ? 0.0 : v[j] - shift;
  }
  return d;
}

// How far `a` is from the normal cone at `point`, read off the cone's
// linear-inequality description (0 means a is in the cone).
//   box:     a_j = 0 inside, a_j >= 0 at hi, a_j <= 0 at lo
//   simplex: a_j = c on the support, a_j <= c off it, for a common c
inline double normal_cone_violation(const FeasibleSet& set, const Vector& point, const Vector& a) {
  detail::check_dim(set, point);
  detail::check_dim(set, a);
  const double tol = detail::active_tol(set);
  double worst = 0.0;
  if (const auto* b = std::get_if<Box>(&set)) {
    for (Eigen::Index j = 0; j < a.size(); ++j) {
      const bool at_hi = b->hi - point[j] <= tol;
      const bool at_lo = point[j] - b->lo <= tol;
      double v = 0.0;
      if (at_hi && at_lo) v = 0.0;
      else if (at_hi) v = std::max(0.0, -a[j]);
      else if (at_lo) v = std::max(0.0, a[j]);
      else v = std::abs(a[j]);
      worst = std::max(worst, v);
    }
    return worst;
  }
  double c = 0.0;
  std::size_t support_size = 0;
  for (Eigen::Index j = 0; j < a.size(); ++j) {
    if (point[j] > tol) {
      c += a[j];
      ++support_size;
    }
  }
  c /= static_cast<double>(std::max<std::size_t>(support_size, 1));
  for (Eigen::Index j = 0; j < a.size(); ++j) {
    worst = std::max(worst, point[j] > tol ? std::abs(a[j] - c) : std::max(0.0, a[j] - c));
  }
  return worst;
}

// Gap and tangent residual from an already-evaluated gradient V(point).
inline double gap_from_gradient(std::span<const FeasibleSet> sets, const Profile& point,
                                const Profile& grad) {
  double total = 0.0;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    total += support(sets[i], grad[i]) - grad[i].dot(point[i]);
  }
  const double eps = 1e-12 * (1.0 + norm(grad) * diameter(sets));
  if (total < -eps) {
    throw ConsistencyError("gap evaluated to " + std::to_string(total) +
                           ", below the rounding allowance");
  }
  return std::max(total, 0.0);
}

inline double tangent_residual_from_gradient(std::span<const FeasibleSet> sets,
                                             const Profile& point, const Profile& grad) {
  double s = 0.0;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    s += project_tangent(sets[i], point[i], grad[i]).squaredNorm();
  }
  return std::sqrt(s);
}

// GAP(pi) = max_{x in X} <V(pi), x - pi>. Works with any game type exposing
// `sets` and `gradient`.
template <class Game>
double gap(const Game& game, const Profile& profile) {
  require_feasible(game.sets, profile);
  return gap_from_gradient(game.sets, profile, game.gradient(profile));
}

// Distance from V(pi) to the normal cone at pi.
template <class Game>
double tangent_residual(const Game& game, const Profile& profile) {
  require_feasible(game.sets, profile);
  return tangent_residual_from_gradient(game.sets, profile, game.gradient(profile));
}

// Random feasible point. A quarter of simplex samples land on a random face
// so boundary handling gets exercised.
template <class Rng>
Vector sample_feasible(const FeasibleSet& set, Rng& rng) {
  const auto n = static_cast<Eigen::Index>(dim_of(set));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vector x(n);
  if (const auto* b = std::get_if<Box>(&set)) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double u = unit(rng);
      // occasionally pin coordinates to a face
      if (u < 0.05) x[j] = b->lo;
      else if (u > 0.95) x[j] = b->hi;
      else x[j] = b->lo + (b->hi - b->lo) * unit(rng);
    }
    return x;
  }
  std::exponential_distribution<double> expo(1.0);
  const bool on_face = n > 1 && unit(rng) < 0.25;
  for (Eigen::Index j = 0; j < n; ++j) {
    x[j] = (on_face && unit(rng) < 0.5) ? 0.0 : expo(rng);
  }
  if (x.sum() <= 0.0) x[0] = 1.0;
  return x / x.sum();
}

template <class Rng>
Profile sample_feasible(std::span<const FeasibleSet> sets, Rng& rng) {
  Profile p;
  for (const auto& s : sets) p.players.push_back(sample_feasible(s, rng));
  return p;
}

}  // namespace monogame
