#include <gtest/gtest.h>

#include <numbers>

#include "clarklab/errors.hpp"
#include "clarklab/measure.hpp"
#include "test_util.hpp"

using namespace clarklab;

namespace {

MeasureRep delta(Complex xi, Complex w = 1.0) { return MeasureRep::atoms_only(1, {{{xi}, w}}); }

}  // namespace

TEST(Measures, TotalMassAndIntegrate) {
  const auto mu = MeasureRep::atoms_only(1, {{{1.0}, 2.0}, {{Complex(0, 1)}, 0.5}});
  EXPECT_NEAR(std::abs(total_mass(mu).value - 2.5), 0.0, 1e-15);
  const auto v = integrate(mu, [](std::span<const Complex> z) { return z[0]; });
  EXPECT_NEAR(std::abs(v.value - Complex(2.0, 0.5)), 0.0, 1e-15);
  const auto sigma = MeasureRep::uniform(SphereSamplePlan::circle(64));
  EXPECT_NEAR(std::abs(total_mass(sigma).value - 1.0), 0.0, 1e-14);
  const auto m = integrate(sigma, [](std::span<const Complex> z) { return z[0] * z[0]; });
  EXPECT_NEAR(std::abs(m.value), 0.0, 1e-14);
}

TEST(Measures, UniformOnBallTwoSecondMoment) {
  const auto sigma = MeasureRep::uniform(SphereSamplePlan::slice_product(2, 4096, 16, 3));
  const auto m = integrate(sigma, [](std::span<const Complex> z) { return Complex(std::norm(z[0])); });
  // E|zeta_1|^2 = 1/d on S^{2d-1}
  EXPECT_LE(std::abs(m.value - 0.5), 4 * m.se + 1e-12);
}

TEST(Measures, PoissonIntegralOfDelta) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 100; ++i) {
    const Complex xi = testutil::random_unimodular(rng);
    const Complex z = testutil::random_ball(rng, 1, 0.95)[0];
    const auto p = poisson_integral(delta(xi), BallPoint{z});
    ASSERT_NEAR(p.value.real(), testutil::herglotz_re(xi, z), 1e-12 * std::max(1.0, p.value.real()));
  }
  const auto sigma = MeasureRep::uniform(SphereSamplePlan::circle(512));
  EXPECT_NEAR(poisson_integral(sigma, BallPoint{Complex(0.3, -0.4)}).value.real(), 1.0, 1e-12);
}

TEST(Measures, CauchyTransformsOfDelta) {
  const Complex z(0.25, 0.5);
  const auto mu = delta(1.0);
  EXPECT_NEAR(std::abs(cauchy_plus(mu, BallPoint{z}).value - 1.0 / (1.0 - z)), 0.0, 1e-15);
  // C(1, z) - 1 = 1 / (1 - conj(z)) - 1
  EXPECT_NEAR(std::abs(cauchy_minus(mu, BallPoint{z}).value - (1.0 / (1.0 - std::conj(z)) - 1.0)), 0.0,
              1e-15);
}

TEST(Measures, CauchyPartsSumToPoissonForPositiveMeasures) {
  std::mt19937_64 rng(4);
  const auto mu = MeasureRep::atoms_only(
      1, {{{testutil::random_unimodular(rng)}, 0.7}, {{testutil::random_unimodular(rng)}, 1.3}});
  for (int i = 0; i < 200; ++i) {
    const BallPoint z{testutil::random_ball(rng, 1, 0.9)[0]};
    const Complex s = cauchy_plus(mu, z).value + cauchy_minus(mu, z).value;
    ASSERT_NEAR(std::abs(s - poisson_integral(mu, z).value), 0.0, 1e-12);
  }
}

TEST(Measures, ValidatesAtoms) {
  EXPECT_THROW(MeasureRep::atoms_only(1, {{{0.5}, 1.0}}), InvalidArgumentError);
  EXPECT_THROW(MeasureRep::atoms_only(2, {{{1.0}, 1.0}}), InvalidArgumentError);
  EXPECT_THROW(MeasureRep::atoms_only(1, {{{1.0}, -1.0}}, true), InvalidArgumentError);
}

TEST(Measures, DistributionTailOfUniformDensity) {
  // mu = sigma: mu_+ == 1, so the tail vanishes above 1.
  const auto sigma = MeasureRep::uniform(SphereSamplePlan::circle(256));
  TailSamples s;
  s.random = false;
  const auto nodes = sample_coordinates(SphereSamplePlan::circle(256));
  for (Complex z : nodes) {
    (void)z;
    s.values.push_back(std::abs(cauchy_plus(sigma, BallPoint{0.0}).value));
    s.weights.push_back(1.0 / 256);
  }
  EXPECT_EQ(distribution_tail(s, 1.5).value, 0.0);
  EXPECT_NEAR(distribution_tail(s, 0.5).value, 1.0, 1e-12);
}

TEST(Measures, DeltaTailMatchesClosedForm) {
  // For delta_1, |mu_+(e^{it})| = 1 / |1 - e^{it}| = 1 / (2 |sin(t/2)|), so
  // sigma(|mu_+| > y) = (2 / pi) arcsin(1 / (2y)) for y >= 1/2.
  const auto g = [](double t) { return 1.0 / (2.0 * std::abs(std::sin(t / 2.0))); };
  const std::vector<double> ys{1.0, 10.0, 100.0, 1000.0};
  const auto s = refined_circle_tail_grid(g, ys, 1 << 14, 64, 3);
  double prev = 2.0;
  for (double y : ys) {
    const auto e = distribution_tail(s, y);
    const double exact = 2.0 / std::numbers::pi * std::asin(1.0 / (2.0 * y));
    EXPECT_NEAR(e.value, exact, std::max(1e-4 * exact, e.se + 1e-12)) << "y=" << y;
    EXPECT_LE(e.value, prev);
    prev = e.value;
  }
}
