#include "banditlab/spectral.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "test_util.hpp"

namespace banditlab {
namespace {

class TruthPolicy : public Policy {
 public:
  explicit TruthPolicy(Vec theta) : theta_(std::move(theta)) {}
  Vec select(const DesignState&, const ActionSpace& space, Rng&) const override {
    return linear_argmax(space, theta_);
  }

 private:
  Vec theta_;
};

SpectralTrace power_trace(const std::vector<std::int64_t>& rounds, double coeff,
                          double exponent) {
  std::vector<std::pair<std::int64_t, double>> cps;
  for (std::int64_t r : rounds)
    cps.emplace_back(r, coeff * std::pow(static_cast<double>(r), exponent));
  return make_spectral_trace(cps);
}

TEST(SpectralTraceBuild, DropsEarlyRoundsAndFlagsNonpositive) {
  const SpectralTrace t =
      make_spectral_trace({{1, 5.0}, {2, 4.0}, {4, 16.0}, {8, 0.0}});
  EXPECT_EQ(t.rounds, (std::vector<std::int64_t>{2, 4, 8}));
  EXPECT_DOUBLE_EQ(t.lambda_min[0], 4.0);
  EXPECT_NEAR(t.raw_exponent[0], 2.0, 1e-12);
  EXPECT_NEAR(t.raw_exponent[1], 2.0, 1e-12);
  EXPECT_TRUE(std::isnan(t.raw_exponent[2]));
}

TEST(ExponentEstimate, ExactSqrtGrowth) {
  const SpectralTrace t = power_trace(geometric_checkpoints(1024), 1.0, 0.5);
  const ExponentReport rep = exponent_estimate(t, 0.45, 0.5);
  EXPECT_NEAR(rep.fitted_slope, 0.5, 1e-12);
  ASSERT_TRUE(rep.n0_hat.has_value());
  EXPECT_EQ(*rep.n0_hat, 2);
  EXPECT_NEAR(rep.gamma_hat, 1.0, 1e-12);
  for (double e : t.raw_exponent) EXPECT_NEAR(e, 0.5, 1e-12);
}

TEST(ExponentEstimate, SubSqrtGrowthWithPrefactor) {
  // lambda = 2 n^{0.3}: slope 0.3, raw exponent 0.3 + ln2/ln n
  const SpectralTrace t = power_trace(spaced_checkpoints(10000, 20, 16), 2.0, 0.3);
  const ExponentReport rep = exponent_estimate(t, 0.5, 0.5);
  EXPECT_NEAR(rep.fitted_slope, 0.3, 1e-12);
  EXPECT_FALSE(rep.n0_hat.has_value());
  EXPECT_NEAR(t.raw_exponent.back(), 0.3752574989159953, 1e-12);
}

TEST(ExponentEstimate, LinearGrowth) {
  const SpectralTrace t = power_trace(geometric_checkpoints(256), 1.0, 1.0);
  const ExponentReport rep = exponent_estimate(t, 0.5, 1.0);
  EXPECT_NEAR(rep.fitted_slope, 1.0, 1e-12);
  ASSERT_TRUE(rep.n0_hat.has_value());
  EXPECT_EQ(*rep.n0_hat, 2);
}

TEST(ExponentEstimate, RejectsBadInput) {
  const SpectralTrace one = make_spectral_trace({{4, 2.0}});
  EXPECT_THROW(exponent_estimate(one, 0.5, 0.5), std::invalid_argument);

  const SpectralTrace t = power_trace({2, 4, 8, 16}, 1.0, 0.5);
  EXPECT_THROW(exponent_estimate(t, 0.5, 0.0), std::invalid_argument);
  EXPECT_THROW(exponent_estimate(t, 0.5, 1.5), std::invalid_argument);

  const SpectralTrace bad = make_spectral_trace({{4, 1.0}, {8, 0.0}});
  EXPECT_THROW(exponent_estimate(bad, 0.5, 1.0), std::invalid_argument);

  const SpectralTrace dup = make_spectral_trace({{4, 2.0}, {4, 2.0}});
  EXPECT_THROW(exponent_estimate(dup, 0.5, 1.0), std::invalid_argument);
}

TEST(EnsembleBandStats, MeanAndSampleStddev) {
  SpectralTrace a, b, c;
  for (SpectralTrace* t : {&a, &b, &c}) t->rounds = {4};
  a.raw_exponent = {1.0};
  b.raw_exponent = {2.0};
  c.raw_exponent = {3.0};
  const EnsembleBand band = ensemble_band({a, b, c}, 3.0);
  EXPECT_NEAR(band.mean[0], 2.0, 1e-12);
  EXPECT_NEAR(band.stddev[0], 1.0, 1e-12);
  EXPECT_NEAR(band.mean[0] - band.k_sigma * band.stddev[0], -1.0, 1e-12);
  EXPECT_NEAR(band.mean[0] + band.k_sigma * band.stddev[0], 5.0, 1e-12);
}

TEST(EnsembleBandStats, TwoTraceOneSigmaBand) {
  SpectralTrace a, b;
  a.rounds = b.rounds = {4};
  a.raw_exponent = {0.0};
  b.raw_exponent = {1.0};
  const EnsembleBand band = ensemble_band({a, b}, 1.0);
  EXPECT_NEAR(band.mean[0], 0.5, 1e-12);
  EXPECT_NEAR(band.stddev[0], 0.7071067811865476, 1e-12);
  EXPECT_NEAR(band.mean[0] - band.stddev[0], -0.20710678118654757, 1e-12);
  EXPECT_NEAR(band.mean[0] + band.stddev[0], 1.2071067811865475, 1e-12);
}

TEST(EnsembleBandStats, DegenerateCases) {
  SpectralTrace a;
  a.rounds = {2, 8};
  a.raw_exponent = {0.4, 0.6};
  const EnsembleBand solo = ensemble_band({a}, 2.0);
  EXPECT_DOUBLE_EQ(solo.stddev[0], 0.0);
  EXPECT_DOUBLE_EQ(solo.stddev[1], 0.0);

  const EnsembleBand twin = ensemble_band({a, a}, 2.0);
  EXPECT_NEAR(twin.stddev[0], 0.0, 1e-15);

  EXPECT_THROW(ensemble_band({}, 2.0), std::invalid_argument);
  SpectralTrace b = a;
  b.rounds = {2, 16};
  EXPECT_THROW(ensemble_band({a, b}, 2.0), std::invalid_argument);
}

TEST(ExpectedDesign, UniformCircleIsHalfIdentity) {
  const BanditInstance inst{{1.0, 0.0}, 0.0, ActionSpace(UnitSphere{2})};
  const ConfiguredPolicy uniform(PolicyConfig{PolicyKind::Uniform, 0.1, 1.0, {}});
  const std::int64_t n = 1000;
  const SymMatrix g = mc_expected_design(uniform, inst, n, 100, 1.0, 61);
  EXPECT_NEAR(g(0, 0) / n, 0.5, 0.05);
  EXPECT_NEAR(g(1, 1) / n, 0.5, 0.05);
  EXPECT_NEAR(g(0, 1) / n, 0.0, 0.05);
}

TEST(ExpectedDesign, UniformSphereLambdaMinNearNOverD) {
  const BanditInstance inst{{1.0, 0.0, 0.0}, 0.0, ActionSpace(UnitSphere{3})};
  const ConfiguredPolicy uniform(PolicyConfig{PolicyKind::Uniform, 0.1, 1.0, {}});
  const std::int64_t n = 1000;
  const SymMatrix g = mc_expected_design(uniform, inst, n, 100, 1.0, 62);
  const EigenDecomposition eig = eig_sym(g);
  EXPECT_NEAR(eig.eigenvalues.back(), static_cast<double>(n) / 3.0,
              0.05 * static_cast<double>(n) / 3.0);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      EXPECT_NEAR(g(i, j) / n, i == j ? 1.0 / 3.0 : 0.0, 0.05);
}

TEST(ExpectedDesign, GreedyTruthIsRankOne) {
  const BanditInstance inst{{1.0, 0.0}, 0.0, ActionSpace(UnitSphere{2})};
  const TruthPolicy greedy(inst.theta_star);
  const std::int64_t n = 500;
  const SymMatrix g = mc_expected_design(greedy, inst, n, 3, 1.0, 63);
  EXPECT_NEAR(g(0, 0), static_cast<double>(n), 1e-9);
  EXPECT_NEAR(g(0, 1), 0.0, 1e-9);
  EXPECT_NEAR(g(1, 1), 0.0, 1e-9);

  EXPECT_THROW(mc_expected_design(greedy, inst, 10, 0, 1.0, 63),
               std::invalid_argument);
}

TEST(AlignmentCheck, CleanSpectralGap) {
  const AlignmentReport sep =
      alignment_check(SymMatrix::from_rows({{10.0, 0.0}, {0.0, 1.0}}), {1.0, 0.0});
  EXPECT_FALSE(sep.degenerate);
  EXPECT_NEAR(sep.value, 0.0, 1e-12);

  const AlignmentReport tilted =
      alignment_check(SymMatrix::from_rows({{10.0, 1.0}, {1.0, 0.0}}), {1.0, 0.0});
  EXPECT_FALSE(tilted.degenerate);
  EXPECT_NEAR(tilted.value, 0.09853761796664214, 1e-12);
}

TEST(AlignmentCheck, DegenerateTopGap) {
  const AlignmentReport rep = alignment_check(SymMatrix::identity(2), {1.0, 0.0});
  EXPECT_TRUE(rep.degenerate);
  EXPECT_THROW(alignment_check(SymMatrix::identity(3), {1.0, 0.0}),
               std::invalid_argument);
}

TEST(EpsFraction, CountsOptimalRounds) {
  const ActionSpace sphere(UnitSphere{2});
  Trajectory traj;
  traj.actions = {{1.0, 0.0}, {0.0, 1.0}, {1.0, 0.0}, {-1.0, 0.0}};
  EXPECT_DOUBLE_EQ(eps_fraction(traj, sphere, {1.0, 0.0}, 0.0), 0.5);
  EXPECT_DOUBLE_EQ(eps_fraction(traj, sphere, {1.0, 0.0}, 3.0), 1.0);
  Trajectory empty;
  EXPECT_THROW(eps_fraction(empty, sphere, {1.0, 0.0}, 0.1), std::invalid_argument);
}

TEST(PinskerBound, ClosedFormValues) {
  const PinskerReport far = pinsker_bound(0.99, 0.01);
  EXPECT_NEAR(far.pinsker, 1.9207999999999998, 1e-12);
  EXPECT_GT(far.kl, far.pinsker);

  const PinskerReport mid = pinsker_bound(0.5, 0.25);
  EXPECT_NEAR(mid.pinsker, 0.125, 1e-12);
  EXPECT_NEAR(mid.kl, 0.14384103622589042, 1e-12);

  const PinskerReport same = pinsker_bound(0.3, 0.3);
  EXPECT_DOUBLE_EQ(same.pinsker, 0.0);
  EXPECT_DOUBLE_EQ(same.kl, 0.0);

  const PinskerReport degenerate = pinsker_bound(0.5, 0.0);
  EXPECT_TRUE(std::isinf(degenerate.kl));

  EXPECT_THROW(pinsker_bound(-0.1, 0.5), std::invalid_argument);
  EXPECT_THROW(pinsker_bound(0.5, 1.1), std::invalid_argument);
}

TEST(KlQuadratic, ClosedFormAndLambdaMinFloor) {
  const SymMatrix gbar = SymMatrix::from_rows({{4.0, 0.0}, {0.0, 1.0}});
  EXPECT_NEAR(kl_quadratic_lhs({0.0, 3.0}, {0.0, 0.0}, gbar), 4.5, 1e-12);
  EXPECT_DOUBLE_EQ(kl_quadratic_lhs({1.0, 2.0}, {1.0, 2.0}, gbar), 0.0);
  EXPECT_THROW(kl_quadratic_lhs({1.0}, {0.0, 0.0}, gbar), std::invalid_argument);

  Rng rng(71);
  for (int t = 0; t < 50; ++t) {
    const std::size_t d = 2 + t % 3;
    const SymMatrix m = testutil::random_pd(rng, d, 0.1);
    const double lam_min = eig_sym(m).eigenvalues.back();
    const Vec delta = rng.gaussian_vector(d);
    const double lhs = kl_quadratic_lhs(delta, Vec(d, 0.0), m);
    EXPECT_GE(lhs, 0.5 * lam_min * dot(delta, delta) - 1e-9);
  }
}

TEST(HighProbReference, ClosedForm) {
  EXPECT_NEAR(highprob_reference(1.0, 0.0, 2, 0.5, 100), -56.604368892615824, 1e-12);
  EXPECT_NEAR(highprob_reference(0.7, 0.0, 1, 1.0, 400), 0.7 * 20.0, 1e-12);
  EXPECT_DOUBLE_EQ(highprob_reference(1.0, 1.0, 2, 0.5, 0), 0.0);

  EXPECT_THROW(highprob_reference(1.0, 0.0, 0, 0.5, 100), std::invalid_argument);
  EXPECT_THROW(highprob_reference(1.0, 0.0, 2, 0.0, 100), std::invalid_argument);
  EXPECT_THROW(highprob_reference(1.0, 0.0, 2, 1.5, 100), std::invalid_argument);
  EXPECT_THROW(highprob_reference(1.0, 0.0, 2, 0.5, -1), std::invalid_argument);
}

}  // namespace
}  // namespace banditlab
