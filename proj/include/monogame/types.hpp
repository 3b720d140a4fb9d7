#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace monogame {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Bad arguments from the caller: dimension mismatches, infeasible profiles,
// out-of-range parameters.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Inconsistent run configuration, detected before the first iteration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A metric was requested from a game that cannot provide it.
class UnsupportedMetric : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numerical result violated a post-condition by more than rounding allows.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// One strategy vector per player. The joint vector is the concatenation.
struct Profile {
  std::vector<Vector> players;

  Profile() = default;
  explicit Profile(std::vector<Vector> p) : players(std::move(p)) {}

  std::size_t size() const { return players.size(); }
  Vector& operator[](std::size_t i) { return players[i]; }
  const Vector& operator[](std::size_t i) const { return players[i]; }

  std::size_t total_dim() const {
    std::size_t n = 0;
    for (const auto& v : players) n += static_cast<std::size_t>(v.size());
    return n;
  }

  // Zero profile with the same shape.
  Profile zeros_like() const {
    Profile z;
    z.players.reserve(players.size());
    for (const auto& v : players) z.players.push_back(Vector::Zero(v.size()));
    return z;
  }

  Profile& operator+=(const Profile& o) {
    for (std::size_t i = 0; i < players.size(); ++i) players[i] += o.players[i];
    return *this;
  }
  Profile& operator-=(const Profile& o) {
    for (std::size_t i = 0; i < players.size(); ++i) players[i] -= o.players[i];
    return *this;
  }
  Profile& operator*=(double s) {
    for (auto& v : players) v *= s;
    return *this;
  }

  friend Profile operator+(Profile a, const Profile& b) { return a += b; }
  friend Profile operator-(Profile a, const Profile& b) { return a -= b; }
  friend Profile operator*(double s, Profile a) { return a *= s; }
  friend bool operator==(const Profile& a, const Profile& b) {
    if (a.players.size() != b.players.size()) return false;
    for (std::size_t i = 0; i < a.players.size(); ++i) {
      if (a.players[i].size() != b.players[i].size()) return false;
      if (a.players[i] != b.players[i]) return false;
    }
    return true;
  }
};

inline double dot(const Profile& a, const Profile& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i].dot(b[i]);
  return s;
}

inline double squared_norm(const Profile& a) {
  double s = 0.0;
  for (const auto& v : a.players) s += v.squaredNorm();
  return s;
}

inline double norm(const Profile& a) { return std::sqrt(squared_norm(a)); }

inline double distance(const Profile& a, const Profile& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]).squaredNorm();
  return std::sqrt(s);
}

// Same shape, every player vector filled with `value`.
inline Profile constant_profile(const std::vector<std::size_t>& dims, double value) {
  Profile p;
  for (auto d : dims) p.players.push_back(Vector::Constant(static_cast<Eigen::Index>(d), value));
  return p;
}

}  // namespace monogame
