#include <gtest/gtest.h>

#include <cmath>

#include "monogame/geometry.hpp"
#include "monogame/rng.hpp"
#include "support.hpp"

namespace monogame {
namespace {

using test::prof;
using test::vec;

TEST(Project, SimplexAlreadyFeasible) {
  const Vector x = project(Simplex{3}, vec({0.2, 0.3, 0.5}));
  EXPECT_NEAR((x - vec({0.2, 0.3, 0.5})).norm(), 0.0, 1e-15);
}

TEST(Project, SimplexSymmetricGoesUniform) {
  const Vector x = project(Simplex{3}, vec({0.5, 0.5, 0.5}));
  for (int j = 0; j < 3; ++j) EXPECT_NEAR(x[j], 1.0 / 3.0, 1e-15);
}

// Brute-force grid minimization of |x - v|^2 over the 2-simplex.
TEST(Project, SimplexMatchesGridOracle) {
  const Vector v = vec({2.0, 0.0});
  double best = 1e300;
  Vector arg(2);
  for (int n = 0; n <= 10000; ++n) {
    const double a = n * 1e-4;
    const double d = (vec({a, 1.0 - a}) - v).squaredNorm();
    if (d < best) {
      best = d;
      arg = vec({a, 1.0 - a});
    }
  }
  const Vector x = project(Simplex{2}, v);
  EXPECT_NEAR((x - arg).norm(), 0.0, 1e-4);
  EXPECT_DOUBLE_EQ(x[0], 1.0);
  EXPECT_DOUBLE_EQ(x[1], 0.0);
}

TEST(Project, BoxClamps) {
  const Vector x = project(Box{2, -200, 200}, vec({300, -300}));
  EXPECT_EQ(x, vec({200, -200}));
}

TEST(Project, DimensionMismatchThrows) {
  EXPECT_THROW(project(Simplex{3}, vec({1, 2})), InputError);
  EXPECT_THROW(project(Box{2, 0, 1}, vec({1, 2, 3})), InputError);
}

TEST(Project, SimplexRandomFeasibleAndIdempotent) {
  auto rng = make_stream(11, StreamPurpose::kVerify);
  std::normal_distribution<double> n(0.0, 3.0);
  for (int c = 0; c < 2000; ++c) {
    Vector v(1 + c % 30);
    for (Eigen::Index j = 0; j < v.size(); ++j) v[j] = n(rng);
    const Vector x = project(Simplex{static_cast<std::size_t>(v.size())}, v);
    EXPECT_NEAR(x.sum(), 1.0, 1e-12);
    EXPECT_GE(x.minCoeff(), -1e-15);
    EXPECT_LE((project(Simplex{static_cast<std::size_t>(v.size())}, x) - x).lpNorm<Eigen::Infinity>(), 1e-12);
  }
}

TEST(Sets, Diameters) {
  EXPECT_DOUBLE_EQ(diameter(Simplex{2}), std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(diameter(Simplex{50}), std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(diameter(Box{4, -1, 1}), 4.0);
  const std::vector<FeasibleSet> sets = {Box{1, 0, 3}, Box{1, 0, 4}};
  EXPECT_DOUBLE_EQ(diameter(sets), 5.0);
}

TEST(Sets, Validation) {
  EXPECT_THROW(validate(FeasibleSet{Simplex{0}}), InputError);
  EXPECT_THROW(validate(FeasibleSet{Box{2, 1, 1}}), InputError);
  EXPECT_NO_THROW(validate(FeasibleSet{Box{2, 0, 1}}));
}

// Gap via enumeration of pure deviations, as a reference.
double gap_by_vertices(const std::vector<FeasibleSet>& sets, const Profile& p, const Profile& g) {
  double total = 0.0;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    const auto n = g[i].size();
    double best = -1e300;
    if (std::holds_alternative<Simplex>(sets[i])) {
      for (Eigen::Index j = 0; j < n; ++j) best = std::max(best, g[i][j]);
    } else {
      const auto& b = std::get<Box>(sets[i]);
      for (long mask = 0; mask < (1L << n); ++mask) {
        double s = 0.0;
        for (Eigen::Index j = 0; j < n; ++j) s += g[i][j] * ((mask >> j) & 1 ? b.hi : b.lo);
        best = std::max(best, s);
      }
    }
    total += best - g[i].dot(p[i]);
  }
  return total;
}

TEST(Gap, RockPaperScissorsUniformIsZero) {
  const auto g = build_bilinear(rock_paper_scissors_matrix());
  EXPECT_NEAR(gap(g, g.initial_profile()), 0.0, 1e-15);
}

TEST(Gap, MatchingPenniesPureProfile) {
  const auto g = build_bilinear(matching_pennies_matrix());
  const Profile p = prof({vec({1, 0}), vec({1, 0})});
  EXPECT_DOUBLE_EQ(gap(g, p), 2.0);
  EXPECT_DOUBLE_EQ(gap_by_vertices(g.sets, p, g.gradient(p)), 2.0);
}

TEST(Gap, BoxConstantGradientCorner) {
  const auto g = test::single_player(Box{2, 0, 1}, [](const Vector&) { return vec({1, -2}); });
  const Profile p = prof({vec({0, 1})});
  EXPECT_DOUBLE_EQ(gap(g, p), 3.0);
  EXPECT_DOUBLE_EQ(gap_by_vertices(g.sets, p, g.gradient(p)), 3.0);
}

TEST(Gap, InfeasibleProfileThrows) {
  const auto g = build_bilinear(matching_pennies_matrix());
  EXPECT_THROW(gap(g, prof({vec({1, 1}), vec({1, 0})})), InputError);
}

TEST(Gap, AgreesWithVertexEnumeration) {
  auto rng = make_stream(3, StreamPurpose::kVerify);
  const auto g = build_random_payoff(6, 3);
  const auto box = test::single_player(Box{5, -1, 2}, [](const Vector& x) { return Vector(1.0 - 2.0 * x.array()); });
  for (int c = 0; c < 200; ++c) {
    const Profile p = sample_feasible(g.sets, rng);
    EXPECT_NEAR(gap(g, p), gap_by_vertices(g.sets, p, g.gradient(p)), 1e-12);
    const Profile q = sample_feasible(box.sets, rng);
    EXPECT_NEAR(gap(box, q), gap_by_vertices(box.sets, q, box.gradient(q)), 1e-12);
  }
}

TEST(TangentResidual, BoxInteriorIsGradientNorm) {
  const auto g = test::single_player(Box{3, -1, 1}, [](const Vector&) { return vec({3, -4, 12}); });
  EXPECT_DOUBLE_EQ(tangent_residual(g, prof({vec({0.1, 0.2, -0.3})})), 13.0);
}

TEST(TangentResidual, BoxCornerOutwardGradientIsZero) {
  const auto g = test::single_player(Box{2, 0, 1}, [](const Vector&) { return vec({1, 1}); });
  EXPECT_DOUBLE_EQ(tangent_residual(g, prof({vec({1, 1})})), 0.0);
}

// min over the normal cone {c 1 - s : s >= 0, s_1 = 0} of |V - a| by a grid on (c, s_2).
TEST(TangentResidual, SimplexVertexMatchesConeOracle) {
  const Vector V = vec({2, 2});
  double best = 1e300;
  for (int ci = 0; ci <= 800; ++ci) {
    const double c = ci * 0.005;
    for (int si = 0; si <= 800; ++si) {
      const double s = si * 0.005;
      best = std::min(best, (V - vec({c, c - s})).norm());
    }
  }
  const auto g = test::single_player(Simplex{2}, [V](const Vector&) { return V; });
  EXPECT_NEAR(best, 0.0, 1e-12);
  EXPECT_NEAR(tangent_residual(g, prof({vec({1, 0})})), best, 1e-12);
}

TEST(TangentResidual, SimplexMatchesConeOracleOnRandomFaces) {
  // Normal cone at a point with zero set Z: {c 1 - s, s >= 0, s = 0 off Z}.
  // For fixed c the best s is closed form, leaving a 1-D search over c.
  auto rng = make_stream(5, StreamPurpose::kVerify);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const Vector point = vec({0.0, 0.6, 0.0, 0.4});
    Vector V(4);
    for (int j = 0; j < 4; ++j) V[j] = n(rng);
    auto dist2 = [&](double c) {
      double d2 = 0.0;
      for (int j = 0; j < 4; ++j) {
        const double r = V[j] - c;
        d2 += point[j] > 0 ? r * r : (r > 0 ? r * r : 0.0);
      }
      return d2;
    };
    // dist2 is convex in c: golden-section search
    double lo = -20.0, hi = 20.0;
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int it = 0; it < 200; ++it) {
      const double a = hi - phi * (hi - lo), b = lo + phi * (hi - lo);
      (dist2(a) < dist2(b) ? hi : lo) = dist2(a) < dist2(b) ? b : a;
    }
    const double best = std::sqrt(dist2(0.5 * (lo + hi)));
    const auto g = test::single_player(Simplex{4}, [V](const Vector&) { return V; });
    EXPECT_NEAR(tangent_residual(g, prof({point})), best, 1e-9);
  }
}

TEST(TangentResidual, MoreauDecomposition) {
  auto rng = make_stream(6, StreamPurpose::kVerify);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int c = 0; c < 1000; ++c) {
    const FeasibleSet set = c % 2 ? FeasibleSet{Simplex{5}} : FeasibleSet{Box{5, -1, 1}};
    const Vector point = sample_feasible(set, rng);
    Vector v(5);
    for (int j = 0; j < 5; ++j) v[j] = n(rng);
    const Vector t = project_tangent(set, point, v);
    const Vector nn = v - t;
    EXPECT_NEAR(t.dot(nn), 0.0, 1e-12);
    EXPECT_LE(normal_cone_violation(set, point, nn), 1e-12);
  }
}

TEST(GapResidual, GapBoundedByDiameterTimesResidual) {
  auto rng = make_stream(8, StreamPurpose::kVerify);
  const auto g = build_random_payoff(7, 8);
  for (int c = 0; c < 500; ++c) {
    const Profile p = sample_feasible(g.sets, rng);
    EXPECT_LE(gap(g, p), g.diameter_D * tangent_residual(g, p) * (1 + 1e-9));
  }
}

TEST(Feasibility, Checks) {
  const std::vector<FeasibleSet> sets = {Simplex{2}, Box{1, 0, 1}};
  EXPECT_TRUE(is_feasible(sets, prof({vec({0.5, 0.5}), vec({1})})));
  EXPECT_FALSE(is_feasible(sets, prof({vec({0.5, 0.6}), vec({1})})));
  EXPECT_FALSE(is_feasible(sets, prof({vec({0.5, 0.5}), vec({1.5})})));
  EXPECT_FALSE(is_feasible(sets, prof({vec({0.5, 0.5})})));
}

}  // namespace
}  // namespace monogame
