#include <gtest/gtest.h>

#include "monogame/games.hpp"
#include "monogame/rng.hpp"
#include "support.hpp"

namespace monogame {
namespace {

using test::prof;
using test::vec;

TEST(RandomPayoff, SymmetricMatrixAtUniformHasZeroGradient) {
  const auto g = build_bilinear(matching_pennies_matrix());
  const Profile v = g.gradient(g.initial_profile());
  EXPECT_EQ(v[0], vec({0, 0}));
  EXPECT_EQ(v[1], vec({0, 0}));
}

TEST(RandomPayoff, HandMatrixVectorProducts) {
  const auto g = build_bilinear(matching_pennies_matrix());
  const Profile v = g.gradient(prof({vec({1, 0}), vec({0, 1})}));
  EXPECT_EQ(v[0], vec({-1, 1}));
  EXPECT_EQ(v[1], vec({-1, 1}));
}

TEST(RandomPayoff, DeterministicInSeed) {
  EXPECT_EQ(random_payoff_matrix(50, 7), random_payoff_matrix(50, 7));
  EXPECT_NE(random_payoff_matrix(50, 7), random_payoff_matrix(50, 8));
  const Matrix A = random_payoff_matrix(50, 7);
  EXPECT_LE(A.maxCoeff(), 1.0);
  EXPECT_GE(A.minCoeff(), -1.0);
}

TEST(RandomPayoff, DeclaredConstants) {
  const auto g = build_random_payoff(10, 1);
  EXPECT_DOUBLE_EQ(g.diameter_D, 2.0);
  EXPECT_DOUBLE_EQ(g.lipschitz_L, random_payoff_matrix(10, 1).norm());
  EXPECT_TRUE(g.zero_sum);
}

TEST(HardGame, BandMatrixDim3) {
  const auto m = hard_game_matrices(3);
  Matrix expected(3, 3);
  expected << 0, -1, 1, -1, 1, 0, 1, 0, 0;
  EXPECT_EQ(m.A, 0.25 * expected);
  EXPECT_EQ(m.b, Vector::Constant(3, 0.25));
  EXPECT_EQ(m.h, vec({0, 0, 0.25}));
}

TEST(HardGame, GradientAtOrigin) {
  const auto g = build_hard_game(2);
  const Profile v = g.gradient(prof({vec({0, 0}), vec({0, 0})}));
  EXPECT_EQ(v[0], vec({0, 0.25}));
  EXPECT_EQ(v[1], vec({0.25, 0.25}));
}

TEST(HardGame, HessianSymmetricPsd) {
  auto rng = make_stream(1, StreamPurpose::kVerify);
  std::normal_distribution<double> n(0.0, 1.0);
  for (std::size_t d : {2, 5, 17}) {
    const auto m = hard_game_matrices(d);
    EXPECT_EQ(m.H, m.H.transpose());
    for (int c = 0; c < 100; ++c) {
      Vector x(static_cast<Eigen::Index>(d));
      for (Eigen::Index j = 0; j < x.size(); ++j) x[j] = n(rng);
      EXPECT_GE(x.dot(m.H * x), -1e-12);
    }
  }
}

TEST(HardGame, RejectsTinyDimension) { EXPECT_THROW(build_hard_game(1), InputError); }

// max over the box of -1/2 x^T H x + h^T x (y = 0) by a grid at step 0.05.
// Window [c - r, c + r]^2 clipped to the box.
std::pair<double, Vector> hard_br_grid(const HardGameMatrices& m, const Vector& y, const Vector& c, double r,
                                       double step) {
  const Vector lin = m.h + m.A.transpose() * y;
  double best = -1e300;
  Vector arg(2);
  const int n = static_cast<int>(std::lround(2 * r / step));
  for (int i = 0; i <= n; ++i) {
    const double x0 = c[0] - r + i * step;
    if (std::abs(x0) > kHardBoxBound + 1e-12) continue;
    for (int j = 0; j <= n; ++j) {
      const double x1 = c[1] - r + j * step;
      if (std::abs(x1) > kHardBoxBound + 1e-12) continue;
      const double q = m.H(0, 0) * x0 * x0 + 2 * m.H(0, 1) * x0 * x1 + m.H(1, 1) * x1 * x1;
      const double v = -0.5 * q + lin[0] * x0 + lin[1] * x1 - m.b.dot(y);
      if (v > best) {
        best = v;
        arg = vec({x0, x1});
      }
    }
  }
  return {best, arg};
}

TEST(HardGame, BestResponseMatchesGridAtZero) {
  const auto g = build_hard_game(2);
  const auto m = hard_game_matrices(2);
  const Profile p = prof({vec({0, 0}), vec({0, 0})});
  const auto br = best_response(g, 0, p);
  const auto [grid_value, grid_arg] = hard_br_grid(m, p[1], vec({0, 0}), 200, 0.05);
  EXPECT_TRUE(br.converged);
  EXPECT_NEAR(br.value, grid_value, 1e-9);
  EXPECT_NEAR((br.strategy - grid_arg).norm(), 0.0, 1e-9);
  EXPECT_NEAR(br.value, 0.5, 1e-12);
  EXPECT_NEAR((br.strategy - vec({2, 4})).norm(), 0.0, 1e-9);
}

TEST(HardGame, BestResponseOnBoundaryMatchesGrid) {
  const auto g = build_hard_game(2);
  const auto m = hard_game_matrices(2);
  const Profile p = prof({vec({0, 0}), vec({200, 200})});
  const auto br = best_response(g, 0, p);
  EXPECT_TRUE(br.converged);
  EXPECT_TRUE(is_feasible(g.sets[0], br.strategy));
  const auto [grid_value, grid_arg] = hard_br_grid(m, p[1], vec({0, 0}), 200, 0.05);
  // grid points are feasible, so the exact maximum can only be higher
  EXPECT_GE(br.value, grid_value - 1e-9);
  const auto [fine_value, fine_arg] = hard_br_grid(m, p[1], grid_arg, 0.1, 1e-4);
  EXPECT_GE(br.value, fine_value - 1e-9);
  EXPECT_NEAR(br.value, fine_value, 1e-4);
}

TEST(HardGame, PlayerTwoBestResponseIsAVertex) {
  const auto g = build_hard_game(3);
  const Profile p = prof({vec({1, -2, 3}), vec({0, 0, 0})});
  const auto br = best_response(g, 1, p);
  for (Eigen::Index j = 0; j < 3; ++j) EXPECT_EQ(std::abs(br.strategy[j]), kHardBoxBound);
  Profile q = p;
  q[1] = br.strategy;
  EXPECT_DOUBLE_EQ(br.value, g.payoff(q)[1]);
}

TEST(Cournot, HandGradient) {
  const auto g = build_cournot(2, 2.0, 1.0, {0.0, 0.0}, {10.0, 10.0});
  const Profile v = g.gradient(prof({vec({0.5}), vec({0.5})}));
  EXPECT_DOUBLE_EQ(v[0][0], 0.5);
  EXPECT_DOUBLE_EQ(v[1][0], 0.5);
}

TEST(Cournot, MonopolyAtCostEqualsPrice) {
  const auto g = build_cournot(1, 1.0, 1.0, {1.0}, {5.0});
  EXPECT_DOUBLE_EQ(g.gradient(prof({vec({0})}))[0][0], 0.0);
}

TEST(Cournot, MonotoneOnRandomPairs) {
  const auto g = build_cournot(4, 10.0, 0.5, {1, 2, 3, 0.5}, {5, 5, 5, 5});
  auto rng = make_stream(2, StreamPurpose::kVerify);
  for (int c = 0; c < 1000; ++c) {
    const Profile p = sample_feasible(g.sets, rng);
    const Profile q = sample_feasible(g.sets, rng);
    EXPECT_LE(dot(g.gradient(p) - g.gradient(q), p - q), 1e-12);
  }
}

TEST(Cournot, Validation) {
  EXPECT_THROW(build_cournot(0, 1, 1, {}, {}), InputError);
  EXPECT_THROW(build_cournot(2, 1, 1, {0}, {1, 1}), InputError);
  EXPECT_THROW(build_cournot(1, 1, 0, {0}, {1}), InputError);
  EXPECT_THROW(build_cournot(1, 1, 1, {0}, {0}), InputError);
}

TEST(Cournot, BestResponseMatchesGenericSolver) {
  // q_i* = clamp((a - c_i - b sum_{j != i} q_j) / (2b), 0, cap)
  const auto g = build_cournot(3, 10.0, 1.0, {1, 2, 0.5}, {4, 3, 5});
  auto rng = make_stream(7, StreamPurpose::kVerify);
  for (int c = 0; c < 50; ++c) {
    const Profile p = sample_feasible(g.sets, rng);
    for (std::size_t i = 0; i < 3; ++i) {
      const auto closed = best_response(g, i, p);
      const auto iter = generic_best_response(g, i, p, p[i], 1.0 / g.lipschitz_L);
      EXPECT_TRUE(iter.converged);
      EXPECT_NEAR(closed.value, iter.value, 1e-9);
      EXPECT_NEAR(closed.strategy[0], iter.strategy[0], 1e-8);
    }
  }
  const auto br = best_response(g, 0, prof({vec({1}), vec({2}), vec({0.5})}));
  EXPECT_NEAR(br.strategy[0], (10.0 - 1.0 - 2.5) / 2.0, 1e-12);
}

TEST(BestResponse, MatchingPennies) {
  const auto g = build_bilinear(matching_pennies_matrix());
  EXPECT_DOUBLE_EQ(best_response_value(g, 0, prof({vec({0.3, 0.7}), vec({1, 0})})), 1.0);
  EXPECT_DOUBLE_EQ(best_response_value(g, 0, g.initial_profile()), 0.0);
}

TEST(BestResponse, MissingPayoffIsUnsupported) {
  const auto g = test::single_player(Box{1, 0, 1}, [](const Vector& x) { return x; });
  EXPECT_THROW(best_response(g, 0, prof({vec({0.5})})), UnsupportedMetric);
}

TEST(Games, MonotoneAndLipschitzOnSamples) {
  auto rng = make_stream(4, StreamPurpose::kVerify);
  for (const auto& g : {build_random_payoff(8, 4), build_hard_game(5)}) {
    for (int c = 0; c < 1000; ++c) {
      const Profile p = sample_feasible(g.sets, rng);
      const Profile q = sample_feasible(g.sets, rng);
      const Profile dv = g.gradient(p) - g.gradient(q);
      EXPECT_LE(dot(dv, p - q), 1e-9 * (1 + squared_norm(p - q)));
      EXPECT_LE(norm(dv), g.lipschitz_L * distance(p, q) * (1 + 1e-12));
    }
  }
}

TEST(Games, InitialProfileIsUniformPoint) {
  const auto g = build_hard_game(4);
  EXPECT_EQ(g.initial_profile()[0], Vector::Constant(4, 0.25));
  const auto r = build_random_payoff(5, 0);
  EXPECT_EQ(r.initial_profile()[1], Vector::Constant(5, 0.2));
}

}  // namespace
}  // namespace monogame
