#pragma once

#include <initializer_list>

#include "monogame/games.hpp"
#include "monogame/types.hpp"

namespace monogame::test {

inline Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

inline Profile prof(std::initializer_list<Vector> ps) { return Profile(std::vector<Vector>(ps)); }

// One player on `set` facing the gradient field `field`.
inline GameSpec single_player(FeasibleSet set, std::function<Vector(const Vector&)> field, double L = 1.0) {
  GameSpec g;
  g.family = "custom";
  g.sets = {set};
  g.gradient = [field](const Profile& p) { return Profile({field(p[0])}); };
  g.lipschitz_L = L;
  g.diameter_D = diameter(g.sets);
  return g;
}

}  // namespace monogame::test
