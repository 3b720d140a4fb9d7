#pragma once

#include <cstdint>
#include <random>
#include <variant>
#include <vector>

#include "monogame/games.hpp"
#include "monogame/rng.hpp"

namespace monogame {

struct NoNoise {};

// i.i.d. N(0, sigma^2) per coordinate and per observation.
struct Gaussian {
  double sigma = 0.0;
};

using NoiseModel = std::variant<NoNoise, Gaussian>;

inline void validate(const NoiseModel& model) {
  if (const auto* g = std::get_if<Gaussian>(&model); g && !(g->sigma >= 0.0)) {
    throw InputError("gaussian noise requires sigma >= 0");
  }
}

// Noise second moment per observation: sigma^2 times the total dimension.
inline double noise_variance_bound(const NoiseModel& model, std::size_t total_dim) {
  if (const auto* g = std::get_if<Gaussian>(&model)) {
    return g->sigma * g->sigma * static_cast<double>(total_dim);
  }
  return 0.0;
}

struct FeedbackSample {
  Profile grad;
  std::int64_t t = 0;
};

// One independent stream per player, keyed by (run seed, player).
class NoiseStreams {
 public:
  NoiseStreams() = default;
  NoiseStreams(std::uint64_t run_seed, std::size_t n_players) {
    for (std::size_t i = 0; i < n_players; ++i) {
      streams_.push_back(Stream{make_stream(run_seed, StreamPurpose::kNoise, i), {}});
    }
  }

  std::size_t size() const { return streams_.size(); }

  double draw(std::size_t player, double sigma) {
    auto& s = streams_.at(player);
    return sigma * s.normal(s.engine);
  }

  // Full state, for determinism checks.
  friend bool operator==(const NoiseStreams& a, const NoiseStreams& b) {
    if (a.streams_.size() != b.streams_.size()) return false;
    for (std::size_t i = 0; i < a.streams_.size(); ++i) {
      if (!(a.streams_[i].engine == b.streams_[i].engine)) return false;
      if (a.streams_[i].normal != b.streams_[i].normal) return false;
    }
    return true;
  }

 private:
  struct Stream {
    CounterRng engine;
    std::normal_distribution<double> normal;
  };
  std::vector<Stream> streams_;
};

// V(pi) plus a fresh noise draw. NoNoise and Gaussian{0} leave the gradient
// untouched and consume no randomness.
inline FeedbackSample observe(const GameSpec& game, const Profile& profile,
                              const NoiseModel& model, NoiseStreams& rng, std::int64_t t = 0) {
  require_feasible(game.sets, profile);
  FeedbackSample fb{game.gradient(profile), t};
  const auto* g = std::get_if<Gaussian>(&model);
  if (g == nullptr || g->sigma == 0.0) return fb;
  if (rng.size() != game.n_players()) throw InputError("noise streams do not match the game");
  for (std::size_t i = 0; i < fb.grad.size(); ++i) {
    for (Eigen::Index j = 0; j < fb.grad[i].size(); ++j) fb.grad[i][j] += rng.draw(i, g->sigma);
  }
  return fb;
}

}  // namespace monogame
