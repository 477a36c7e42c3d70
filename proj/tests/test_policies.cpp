#include "banditlab/policies.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>
#include <variant>
#include <vector>

#include "banditlab/actionspace.hpp"
#include "banditlab/spectral.hpp"

namespace banditlab {
namespace {

double space_residual(const ActionSpace& space, const Vec& x) {
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, UnitSphere>) {
          return std::abs(norm2(x) - 1.0);
        } else if constexpr (std::is_same_v<T, Ellipsoid>) {
          const Vec z = sub(x, s.center);
          return std::abs(dot(z, sym_inverse(s.a).apply(z)) - s.level);
        } else if constexpr (std::is_same_v<T, PNormBall>) {
          double acc = 0.0;
          for (double v : x) acc += std::pow(std::abs(v), s.p);
          return std::max(0.0, std::pow(acc, 1.0 / s.p) - s.radius);
        } else {
          double best = 1e300;
          for (const Vec& p : s.points) {
            double m = 0.0;
            for (std::size_t i = 0; i < p.size(); ++i)
              m = std::max(m, std::abs(p[i] - x[i]));
            best = std::min(best, m);
          }
          return best;
        }
      },
      space.value());
}

DesignState warmed_state(std::size_t d, int rounds, std::uint64_t seed) {
  DesignState s(d, 1.0);
  Rng rng(seed);
  for (int t = 0; t < rounds; ++t) s.update(rng.gaussian_vector(d), rng.normal());
  return s;
}

TEST(Oful, FreshStateOnSphereBreaksTieToFirstAxis) {
  const DesignState s(2, 1.0);
  const ActionSpace sphere(UnitSphere{2});
  const Vec a = oful_select(s, sphere, PolicyConfig{PolicyKind::Oful, 0.1, 1.0, {}});
  EXPECT_NEAR(a[0], 1.0, 1e-12);
  EXPECT_NEAR(a[1], 0.0, 1e-12);
}

TEST(Oful, MatchesExplicitUcbRoute) {
  const DesignState s = warmed_state(2, 30, 41);
  const ActionSpace sphere(UnitSphere{2});
  const PolicyConfig cfg{PolicyKind::Oful, 0.05, 2.0, {}};
  const double radius =
      confidence_radius(cfg.norm_bound, s.lambda(), s.rounds(), s.dim(), cfg.delta);
  EXPECT_EQ(oful_select(s, sphere, cfg),
            ucb_argmax(sphere, s.theta_hat(), s.gram(), radius));
}

TEST(LinTs, PosteriorDrawCovarianceMatchesGramInverse) {
  DesignState s(2, 1.0);
  const double r3 = std::sqrt(3.0);
  s.update({r3, r3}, 1.0);  // gram = [[4,3],[3,4]], gram_inv = (1/7)[[4,-3],[-3,4]]
  Rng rng(42);
  const int n = 100000;
  double c00 = 0.0, c01 = 0.0, c11 = 0.0;
  for (int t = 0; t < n; ++t) {
    const Vec draw = lints_sample_parameter(s, 1.0, rng);
    const Vec z = sub(draw, s.theta_hat());
    c00 += z[0] * z[0];
    c01 += z[0] * z[1];
    c11 += z[1] * z[1];
  }
  c00 /= n;
  c01 /= n;
  c11 /= n;
  EXPECT_NEAR(c00, 4.0 / 7.0, 0.03 * 4.0 / 7.0);
  EXPECT_NEAR(c11, 4.0 / 7.0, 0.03 * 4.0 / 7.0);
  EXPECT_NEAR(c01, -3.0 / 7.0, 0.03 * 3.0 / 7.0);
}

TEST(LinTs, ZeroScaleIsGreedyOnEstimate) {
  DesignState s(2, 1.0);
  s.update({1.0, 0.0}, 1.0);  // theta_hat = (0.5, 0)
  const ActionSpace sphere(UnitSphere{2});
  Rng rng(43);
  const Vec a = lints_select(s, sphere, PolicyConfig{PolicyKind::LinTs, 0.1, 1.0, 0.0},
                             rng);
  EXPECT_EQ(a, linear_argmax(sphere, s.theta_hat()));
}

TEST(LinTs, ZeroDrawFallsBackToFirstAxis) {
  // fresh state, scale 0: both attempts produce theta = 0
  const DesignState s(2, 1.0);
  const ActionSpace sphere(UnitSphere{2});
  Rng rng(44);
  const Vec a = lints_select(s, sphere, PolicyConfig{PolicyKind::LinTs, 0.1, 1.0, 0.0},
                             rng);
  EXPECT_NEAR(a[0], 1.0, 1e-12);
  EXPECT_NEAR(a[1], 0.0, 1e-12);
}

TEST(LinTs, DefaultScaleEqualsConfidenceRadius) {
  const DesignState s = warmed_state(2, 25, 45);
  const ActionSpace sphere(UnitSphere{2});
  const double radius = confidence_radius(1.0, s.lambda(), s.rounds(), s.dim(), 0.1);
  Rng rng1(46);
  Rng rng2(46);
  const Vec a = lints_select(s, sphere, PolicyConfig{PolicyKind::LinTs, 0.1, 1.0, {}},
                             rng1);
  const Vec b = lints_select(
      s, sphere, PolicyConfig{PolicyKind::LinTs, 0.1, 1.0, radius}, rng2);
  EXPECT_EQ(a, b);
}

TEST(LinTs, DeterministicGivenSeed) {
  const DesignState s = warmed_state(3, 10, 47);
  const ActionSpace sphere(UnitSphere{3});
  const PolicyConfig cfg{PolicyKind::LinTs, 0.1, 1.0, {}};
  Rng rng1(48);
  Rng rng2(48);
  EXPECT_EQ(lints_select(s, sphere, cfg, rng1), lints_select(s, sphere, cfg, rng2));
}

TEST(ConfiguredPolicyDispatch, UniformMatchesSampleUniform) {
  const ActionSpace sphere(UnitSphere{3});
  const ConfiguredPolicy policy(PolicyConfig{PolicyKind::Uniform, 0.1, 1.0, {}});
  const DesignState s(3, 1.0);
  Rng rng1(49);
  Rng rng2(49);
  EXPECT_EQ(policy.select(s, sphere, rng1), sample_uniform(sphere, rng2));
}

TEST(ConfiguredPolicyDispatch, SelectionsStayOnTheSpace) {
  const std::vector<ActionSpace> spaces = {
      ActionSpace(UnitSphere{3}),
      ActionSpace(Ellipsoid{SymMatrix::from_rows({{2.0, 0.5}, {0.5, 1.0}}), 1.3,
                            {0.2, -0.1}}),
      ActionSpace(PNormBall{2, 4.0, 1.5}),
      ActionSpace(FiniteSet{{{1.0, 0.0}, {0.0, 1.0}, {-0.5, 0.5}}}),
  };
  for (const PolicyKind kind : {PolicyKind::Oful, PolicyKind::LinTs,
                                PolicyKind::Uniform}) {
    for (const ActionSpace& space : spaces) {
      const ConfiguredPolicy policy(PolicyConfig{kind, 0.1, 1.0, {}});
      DesignState s(space.dim(), 1.0);
      Rng rng(50 + static_cast<int>(kind));
      for (int t = 0; t < 5; ++t) {
        const Vec a = policy.select(s, space, rng);
        EXPECT_LT(space_residual(space, a), 1e-8);
        s.update(a, rng.normal());
      }
    }
  }
}

TEST(ConfiguredPolicyDispatch, SingletonFiniteSetIsForced) {
  const Vec only = {0.3, -0.4};
  const ActionSpace space(FiniteSet{{only}});
  const DesignState s(2, 1.0);
  for (const PolicyKind kind : {PolicyKind::Oful, PolicyKind::LinTs,
                                PolicyKind::Uniform}) {
    Rng rng(51);
    const ConfiguredPolicy policy(PolicyConfig{kind, 0.1, 1.0, {}});
    EXPECT_EQ(policy.select(s, space, rng), only);
  }
}

TEST(PolicyBehavior, OptimalArmFractionConcentrates) {
  // by n = 4096 well over half the pulls are 10/sqrt(n)-optimal
  const BanditInstance inst{{1.0, 0.0}, 1.0, ActionSpace(UnitSphere{2})};
  const double eps = 10.0 / std::sqrt(4096.0);
  for (const PolicyKind kind : {PolicyKind::Oful, PolicyKind::LinTs}) {
    const ConfiguredPolicy policy(PolicyConfig{kind, 0.1, 1.0, {}});
    Rng rng(52);
    const EpisodeResult ep = run_episode(policy, inst, 4096, 1.0, rng, {});
    const double z = eps_fraction(ep.trajectory, inst.space, inst.theta_star, eps);
    EXPECT_GT(z, 0.5);
  }
}

TEST(PolicyBehavior, UniformCircleDesignIsHalfIdentity) {
  const ActionSpace sphere(UnitSphere{2});
  Rng rng(53);
  const int n = 100000;
  double g00 = 0.0, g01 = 0.0, g11 = 0.0;
  for (int t = 0; t < n; ++t) {
    const Vec a = uniform_select(sphere, rng);
    g00 += a[0] * a[0];
    g01 += a[0] * a[1];
    g11 += a[1] * a[1];
  }
  EXPECT_NEAR(g00 / n, 0.5, 0.02);
  EXPECT_NEAR(g11 / n, 0.5, 0.02);
  EXPECT_NEAR(g01 / n, 0.0, 0.02);
}

}  // namespace
}  // namespace banditlab
