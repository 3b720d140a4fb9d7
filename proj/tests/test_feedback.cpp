#include <gtest/gtest.h>

#include "monogame/feedback.hpp"
#include "monogame/verify.hpp"
#include "support.hpp"

namespace monogame {
namespace {

using test::vec;

TEST(Observe, NoNoiseIsExactGradient) {
  const auto g = build_bilinear(matching_pennies_matrix());
  NoiseStreams rng(0, 2);
  const auto fb = observe(g, g.initial_profile(), NoNoise{}, rng, 3);
  EXPECT_EQ(fb.grad[0], vec({0, 0}));
  EXPECT_EQ(fb.grad[1], vec({0, 0}));
  EXPECT_EQ(fb.t, 3);
}

TEST(Observe, ZeroSigmaMatchesNoNoiseAndConsumesNothing) {
  const auto g = build_random_payoff(6, 2);
  NoiseStreams a(5, 2), b(5, 2);
  const Profile p = g.initial_profile();
  EXPECT_EQ(observe(g, p, Gaussian{0.0}, a).grad, observe(g, p, NoNoise{}, b).grad);
  EXPECT_TRUE(a == NoiseStreams(5, 2));
}

TEST(Observe, GaussianMomentsAndIndependence) {
  const auto r = verify::feedback(100000, 0);
  for (const auto& c : r.checks) EXPECT_TRUE(c.passed) << c.name << " measured " << c.measured;
}

TEST(Observe, SameSeedSameDraws) {
  const auto g = build_random_payoff(4, 1);
  NoiseStreams a(9, 2), b(9, 2), c(10, 2);
  const Profile p = g.initial_profile();
  for (int t = 0; t < 10; ++t) {
    const auto fa = observe(g, p, Gaussian{0.1}, a, t).grad;
    EXPECT_EQ(fa, observe(g, p, Gaussian{0.1}, b, t).grad);
    EXPECT_NE(fa, observe(g, p, Gaussian{0.1}, c, t).grad);
  }
}

TEST(Observe, PlayerStreamsAreSeparate) {
  // player 2's noise does not depend on how much player 1 has drawn
  NoiseStreams a(3, 2), b(3, 2);
  for (int n = 0; n < 5; ++n) a.draw(0, 1.0);
  EXPECT_EQ(a.draw(1, 1.0), b.draw(1, 1.0));
}

TEST(Observe, Validation) {
  EXPECT_THROW(validate(NoiseModel{Gaussian{-0.1}}), InputError);
  EXPECT_NO_THROW(validate(NoiseModel{Gaussian{0.0}}));
  const auto g = build_random_payoff(3, 0);
  NoiseStreams rng(0, 2);
  EXPECT_THROW(observe(g, test::prof({vec({1, 1, 1}), vec({1, 0, 0})}), NoNoise{}, rng), InputError);
  NoiseStreams wrong(0, 3);
  EXPECT_THROW(observe(g, g.initial_profile(), Gaussian{0.1}, wrong), InputError);
}

TEST(Observe, VarianceBound) {
  EXPECT_DOUBLE_EQ(noise_variance_bound(Gaussian{0.1}, 100), 0.1 * 0.1 * 100);
  EXPECT_DOUBLE_EQ(noise_variance_bound(NoNoise{}, 100), 0.0);
}

TEST(Rng, StreamsAreKeyedAndReplayable) {
  auto a = make_stream(1, StreamPurpose::kNoise, 0);
  auto b = make_stream(1, StreamPurpose::kNoise, 0);
  auto c = make_stream(1, StreamPurpose::kNoise, 1);
  auto d = make_stream(1, StreamPurpose::kGame, 0);
  const auto x = a();
  EXPECT_EQ(x, b());
  EXPECT_NE(x, c());
  EXPECT_NE(x, d());
  auto copy = a;
  EXPECT_EQ(copy(), a());
}

}  // namespace
}  // namespace monogame
