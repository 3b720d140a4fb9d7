#pragma once

// Update rules for the four learning dynamics and the anchoring schedule.
//
//   GABP  pi' = P(pi + eta (g - mu (s_k - s_1)/(k+1) - mu (pi - s_k)))
//   APGA  pi' = P(pi + eta (g - mu (pi - s_k)))
//   OG    pi' = P(pi + eta (2 g_t - g_{t-1})),            g_0 = 0
//   AOG   pi_half = P(pi + eta g(pi_prev_half) + (pi_1 - pi)/(t+1))
//         pi'     = P(pi + eta g(pi_half)      + (pi_1 - pi)/(t+1))
//
// GABP and APGA share the anchor state machine: after every step tau grows
// by one, and when it reaches T_sigma the anchor s_k is replaced by the new
// iterate and k increments.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>

#include "monogame/feedback.hpp"
#include "monogame/games.hpp"
#include "monogame/geometry.hpp"

namespace monogame {

// T_sigma value that freezes the anchor for the whole run.
inline constexpr std::int64_t kNeverReanchor = std::numeric_limits<std::int64_t>::max();

// k(t) = floor((t - 1) / T_sigma) + 1
inline std::int64_t compute_k(std::int64_t t, std::int64_t T_sigma) {
  if (t < 1 || T_sigma < 1) throw InputError("compute_k requires t >= 1 and T_sigma >= 1");
  return (t - 1) / T_sigma + 1;
}

// Ceiling that treats values within 1e-12 (relative) of an integer as that
// integer, so 128^(6/7) lands on 64 and not 65.
inline std::int64_t ceil_tolerant(double x) {
  const double r = std::round(x);
  if (std::abs(x - r) <= 1e-12 * std::max(1.0, std::abs(x))) return static_cast<std::int64_t>(r);
  return static_cast<std::int64_t>(std::ceil(x));
}

// c * max(1, 6 ln(3 (T + 1)) / ln(1 + eta mu)), rounded up.
inline std::int64_t tsigma_full(std::int64_t T, double eta, double mu, double c = 1.0) {
  if (T < 1) throw InputError("tsigma_full requires T >= 1");
  if (!(eta * mu > 0.0)) throw InputError("tsigma_full requires eta * mu > 0");
  if (!(c >= 1.0)) throw InputError("tsigma_full requires c >= 1");
  const double ratio = 6.0 * std::log(3.0 * static_cast<double>(T + 1)) / std::log1p(eta * mu);
  return std::max<std::int64_t>(1, ceil_tolerant(c * std::max(1.0, ratio)));
}

// c * max(T^(6/7), 1), rounded up.
inline std::int64_t tsigma_noisy(std::int64_t T, double c = 1.0) {
  if (T < 1) throw InputError("tsigma_noisy requires T >= 1");
  if (!(c >= 1.0)) throw InputError("tsigma_noisy requires c >= 1");
  const double base = std::pow(static_cast<double>(T), 6.0 / 7.0);
  return std::max<std::int64_t>(1, ceil_tolerant(c * std::max(base, 1.0)));
}

// ---------------------------------------------------------------------------
// Learning-rate schedules.

struct ConstantRate {
  double eta = 0.0;
};

// eta_t = 1 / (kappa (t - T_sigma (k(t) - 1)) + 2 theta),
// kappa = mu / 2, theta = (3 mu^2 + 8 L^2) / (2 mu).
struct NoisyTheoryRate {
  double mu = 0.0;
  double L = 0.0;

  double kappa() const { return mu / 2.0; }
  double theta() const { return (3.0 * mu * mu + 8.0 * L * L) / (2.0 * mu); }
};

using Schedule = std::variant<ConstantRate, NoisyTheoryRate>;

inline void validate(const Schedule& s) {
  if (const auto* c = std::get_if<ConstantRate>(&s)) {
    if (!(c->eta > 0.0)) throw ConfigError("constant learning rate must be positive");
    return;
  }
  const auto& n = std::get<NoisyTheoryRate>(s);
  if (!(n.mu > 0.0) || !(n.L > 0.0)) {
    throw ConfigError("noisy_theory schedule requires mu > 0 and L > 0");
  }
}

// Learning rate for global iteration t (1-based).
inline double learning_rate(const Schedule& s, std::int64_t t, std::int64_t T_sigma) {
  if (const auto* c = std::get_if<ConstantRate>(&s)) return c->eta;
  const auto& n = std::get<NoisyTheoryRate>(s);
  const std::int64_t local = t - T_sigma * (compute_k(t, T_sigma) - 1);
  return 1.0 / (n.kappa() * static_cast<double>(local) + 2.0 * n.theta());
}

// eta in (0, mu / (L + mu)^2): the constant-rate regime with exponential
// inner convergence.
inline bool in_contraction_range(double eta, double mu, double L) {
  return eta > 0.0 && eta < mu / ((L + mu) * (L + mu));
}

// ---------------------------------------------------------------------------
// Anchor state machine.

struct AnchorState {
  Profile sigma_k;
  Profile sigma_1;
  std::int64_t k = 1;
  std::int64_t tau = 0;
  std::int64_t T_sigma = kNeverReanchor;

  static AnchorState start(const Profile& initial, std::int64_t T_sigma) {
    if (T_sigma < 1) throw InputError("T_sigma must be at least 1");
    return AnchorState{initial, initial, 1, 0, T_sigma};
  }

  // Counts one finished step whose result is `next`; returns true on re-anchor.
  bool advance(const Profile& next) {
    if (++tau == T_sigma) {
      ++k;
      tau = 0;
      sigma_k = next;
      return true;
    }
    return false;
  }

  // (k sigma_k + sigma_1) / (k + 1)
  Profile centered() const {
    const double kk = static_cast<double>(k);
    Profile c = sigma_k;
    for (std::size_t i = 0; i < c.size(); ++i) {
      c[i] = (kk * sigma_k[i] + sigma_1[i]) / (kk + 1.0);
    }
    return c;
  }
};

// ---------------------------------------------------------------------------
// Solver states and single steps.

struct GabpState {
  Profile pi;
  AnchorState anchor;
  double mu = 1.0;
};

struct ApgaState {
  Profile pi;
  AnchorState anchor;
  double mu = 1.0;
};

struct OgState {
  Profile pi;
  std::optional<Profile> prev_grad;
};

struct AogState {
  Profile pi;
  Profile pi_initial;
  // feedback observed at the previous half step
  std::optional<Profile> half_grad;
  std::int64_t t = 1;
};

namespace detail {

inline void check_step(std::span<const FeasibleSet> sets, const Profile& pi, const Profile& g,
                       double eta) {
  if (!(eta > 0.0)) throw InputError("learning rate must be positive");
  if (pi.size() != sets.size() || g.size() != sets.size()) {
    throw InputError("profile or feedback has the wrong number of players");
  }
}

inline void debug_check_feasible(std::span<const FeasibleSet> sets, const Profile& pi) {
#ifndef NDEBUG
  if (!is_feasible(sets, pi)) throw ConsistencyError("iterate left the feasible set");
#else
  (void)sets;
  (void)pi;
#endif
}

}  // namespace detail

inline GabpState gabp_step(std::span<const FeasibleSet> sets, GabpState s,
                           const FeedbackSample& fb, double eta) {
  detail::check_step(sets, s.pi, fb.grad, eta);
  const auto& a = s.anchor;
  const double kk = static_cast<double>(a.k);
  Profile next;
  next.players.reserve(sets.size());
  for (std::size_t i = 0; i < sets.size(); ++i) {
    const Vector boost = s.mu * (a.sigma_k[i] - a.sigma_1[i]) / (kk + 1.0);
    const Vector pull = s.mu * (s.pi[i] - a.sigma_k[i]);
    const Vector dir = fb.grad[i] - boost - pull;
    next.players.push_back(project(sets[i], Vector(s.pi[i] + eta * dir)));
  }
  detail::debug_check_feasible(sets, next);
  s.anchor.advance(next);
  s.pi = std::move(next);
  return s;
}

inline ApgaState apga_step(std::span<const FeasibleSet> sets, ApgaState s,
                           const FeedbackSample& fb, double eta) {
  detail::check_step(sets, s.pi, fb.grad, eta);
  Profile next;
  next.players.reserve(sets.size());
  for (std::size_t i = 0; i < sets.size(); ++i) {
    const Vector pull = s.mu * (s.pi[i] - s.anchor.sigma_k[i]);
    const Vector dir = fb.grad[i] - pull;
    next.players.push_back(project(sets[i], Vector(s.pi[i] + eta * dir)));
  }
  detail::debug_check_feasible(sets, next);
  s.anchor.advance(next);
  s.pi = std::move(next);
  return s;
}

inline OgState og_step(std::span<const FeasibleSet> sets, OgState s, const FeedbackSample& fb,
                       double eta) {
  detail::check_step(sets, s.pi, fb.grad, eta);
  Profile next;
  next.players.reserve(sets.size());
  for (std::size_t i = 0; i < sets.size(); ++i) {
    Vector dir = 2.0 * fb.grad[i];
    if (s.prev_grad) dir -= (*s.prev_grad)[i];
    next.players.push_back(project(sets[i], Vector(s.pi[i] + eta * dir)));
  }
  detail::debug_check_feasible(sets, next);
  s.prev_grad = fb.grad;
  s.pi = std::move(next);
  return s;
}

// AOG step. Observes feedback at the new half step; on the very first step
// it also observes at pi_1 (the half step before pi_1 is pi_1 itself).
// `calls`, when given, is incremented by the number of observations made.
inline AogState aog_step(const GameSpec& game, AogState s, const NoiseModel& model,
                         NoiseStreams& rng, double eta, std::int64_t* calls = nullptr) {
  const auto& sets = game.sets;
  if (!s.half_grad) {
    s.half_grad = observe(game, s.pi, model, rng, s.t).grad;
    if (calls) ++*calls;
  }
  detail::check_step(sets, s.pi, *s.half_grad, eta);
  const double pull = 1.0 / static_cast<double>(s.t + 1);
  Profile half;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    const Vector base = s.pi[i] + pull * (s.pi_initial[i] - s.pi[i]);
    half.players.push_back(project(sets[i], Vector(base + eta * (*s.half_grad)[i])));
  }
  auto fb = observe(game, half, model, rng, s.t);
  if (calls) ++*calls;
  Profile next;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    const Vector base = s.pi[i] + pull * (s.pi_initial[i] - s.pi[i]);
    next.players.push_back(project(sets[i], Vector(base + eta * fb.grad[i])));
  }
  detail::debug_check_feasible(sets, next);
  s.half_grad = std::move(fb.grad);
  s.pi = std::move(next);
  ++s.t;
  return s;
}

// ---------------------------------------------------------------------------

enum class SolverKind { kGabp, kApga, kOg, kAog };

inline std::string_view to_string(SolverKind k) {
  switch (k) {
    case SolverKind::kGabp: return "gabp";
    case SolverKind::kApga: return "apga";
    case SolverKind::kOg: return "og";
    case SolverKind::kAog: return "aog";
  }
  return "?";
}

inline std::optional<SolverKind> parse_solver(std::string_view name) {
  if (name == "gabp") return SolverKind::kGabp;
  if (name == "apga") return SolverKind::kApga;
  if (name == "og") return SolverKind::kOg;
  if (name == "aog") return SolverKind::kAog;
  return std::nullopt;
}

inline bool is_anchored(SolverKind k) { return k == SolverKind::kGabp || k == SolverKind::kApga; }

// Type-erased solver driving one of the four states.
class Solver {
 public:
  using State = std::variant<GabpState, ApgaState, OgState, AogState>;

  Solver(SolverKind kind, const Profile& initial, double mu, std::int64_t T_sigma)
      : kind_(kind), state_(make_state(kind, initial, mu, T_sigma)) {}

  SolverKind kind() const { return kind_; }
  const State& state() const { return state_; }

  const Profile& current() const {
    return std::visit([](const auto& s) -> const Profile& { return s.pi; }, state_);
  }

  const AnchorState* anchor() const {
    if (const auto* g = std::get_if<GabpState>(&state_)) return &g->anchor;
    if (const auto* a = std::get_if<ApgaState>(&state_)) return &a->anchor;
    return nullptr;
  }

  // One iteration at global step t with learning rate eta. Returns the number
  // of gradient observations consumed.
  std::int64_t step(const GameSpec& game, const NoiseModel& model, NoiseStreams& rng,
                    std::int64_t t, double eta) {
    std::int64_t calls = 0;
    if (auto* aog = std::get_if<AogState>(&state_)) {
      *aog = aog_step(game, std::move(*aog), model, rng, eta, &calls);
      return calls;
    }
    const auto fb = observe(game, current(), model, rng, t);
    std::visit(
        [&](auto& s) {
          using S = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<S, GabpState>) s = gabp_step(game.sets, std::move(s), fb, eta);
          else if constexpr (std::is_same_v<S, ApgaState>) s = apga_step(game.sets, std::move(s), fb, eta);
          else if constexpr (std::is_same_v<S, OgState>) s = og_step(game.sets, std::move(s), fb, eta);
        },
        state_);
    return 1;
  }

 private:
  static State make_state(SolverKind kind, const Profile& initial, double mu,
                          std::int64_t T_sigma) {
    switch (kind) {
      case SolverKind::kGabp:
        return GabpState{initial, AnchorState::start(initial, T_sigma), mu};
      case SolverKind::kApga:
        return ApgaState{initial, AnchorState::start(initial, T_sigma), mu};
      case SolverKind::kOg:
        return OgState{initial, std::nullopt};
      case SolverKind::kAog:
        return AogState{initial, initial, std::nullopt, 1};
    }
    throw InputError("unknown solver kind");
  }

  SolverKind kind_;
  State state_;
};

}  // namespace monogame
