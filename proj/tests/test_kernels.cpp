#include <gtest/gtest.h>

#include <cstdlib>
#include <numbers>

#include "clarklab/errors.hpp"
#include "clarklab/geometry.hpp"
#include "clarklab/parallel.hpp"
#include "clarklab/polynomial.hpp"
#include "clarklab/quadrature.hpp"
#include "test_util.hpp"

using namespace clarklab;

TEST(Kernels, CauchyExamples) {
  EXPECT_EQ(cauchy_kernel(BallPoint{0.0}, SpherePoint{1.0}), Complex(1.0));
  EXPECT_EQ(cauchy_kernel(BallPoint{0.0, 0.0}, SpherePoint{Complex(0, 1), 0.0}), Complex(1.0));
  EXPECT_NEAR(std::abs(cauchy_kernel(BallPoint{0.5}, SpherePoint{1.0}) - 2.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(cauchy_kernel(BallPoint{0.5, 0.0}, SpherePoint{1.0, 0.0}) - 4.0), 0.0, 1e-15);
}

TEST(Kernels, CauchyIsConjugateLinearInSecondArgument) {
  // C(z, w) = (1 - <z, w>)^{-d}; <z, w> = sum z_i conj(w_i).
  const std::vector<Complex> z{Complex(0.1, 0.2), Complex(-0.3, 0.1)};
  const std::vector<Complex> w{Complex(0.2, -0.4), Complex(0.5, 0.3)};
  const Complex ip = z[0] * std::conj(w[0]) + z[1] * std::conj(w[1]);
  EXPECT_NEAR(std::abs(cauchy_kernel(z, w) - 1.0 / ((1.0 - ip) * (1.0 - ip))), 0.0, 1e-15);
}

TEST(Kernels, DegenerateKernelThrows) {
  const std::vector<Complex> one{1.0};
  EXPECT_THROW(cauchy_kernel(one, one), DegenerateKernelError);
  EXPECT_THROW(poisson_kernel(one, one), DegenerateKernelError);
}

TEST(Kernels, BallAndSphereInvariants) {
  EXPECT_THROW(BallPoint({1.0}), InvalidArgumentError);
  EXPECT_THROW(BallPoint({1.0 - 1e-13}), InvalidArgumentError);
  EXPECT_NO_THROW(BallPoint({0.999}));
  EXPECT_THROW(SpherePoint({0.9}), InvalidArgumentError);
  EXPECT_NO_THROW(SpherePoint({Complex(0.6, 0.0), Complex(0.0, 0.8)}));
}

TEST(Kernels, PoissonExamples) {
  EXPECT_DOUBLE_EQ(poisson_kernel(BallPoint{0.0}, SpherePoint{Complex(0, 1)}), 1.0);
  EXPECT_DOUBLE_EQ(poisson_kernel(BallPoint{0.0, 0.0, 0.0}, SpherePoint{0.0, 1.0, 0.0}), 1.0);
  for (double r : {0.1, 0.5, 0.9}) {
    EXPECT_NEAR(poisson_kernel(BallPoint{r}, SpherePoint{1.0}), (1 + r) / (1 - r), 1e-12 * (1 + r) / (1 - r));
    const double d2 = std::pow((1 + r) / (1 - r), 2);
    EXPECT_NEAR(poisson_kernel(BallPoint{r, 0.0}, SpherePoint{1.0, 0.0}), d2, 1e-12 * d2);
  }
}

TEST(Kernels, PoissonFactorsThroughCauchy) {
  std::mt19937_64 rng(3);
  for (int d = 1; d <= 3; ++d) {
    for (int i = 0; i < 1000; ++i) {
      const BallPoint z(testutil::random_ball(rng, d, 0.99));
      const SpherePoint s(testutil::random_sphere(rng, d));
      const Complex prod = cauchy_kernel(z, s) * cauchy_kernel(s, z) / cauchy_kernel(z, z);
      const double p = poisson_kernel(z, s);
      ASSERT_NEAR(std::abs(prod - p) / p, 0.0, 1e-12);
    }
  }
}

TEST(Kernels, CircleNodes) {
  const auto one = circle_nodes(1);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one.nodes[0], Complex(1.0));
  EXPECT_EQ(one.weight, 1.0);
  const auto four = circle_nodes(4);
  const Complex expect[] = {1.0, Complex(0, 1), -1.0, Complex(0, -1)};
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(std::abs(four.nodes[k] - expect[k]), 0.0, 1e-16);
  EXPECT_EQ(four.weight, 0.25);
  const auto n = circle_nodes(64);
  for (int k = 1; k < 64; ++k) {
    Complex s{};
    for (Complex z : n.nodes) s += std::pow(z, k) * n.weight;
    EXPECT_NEAR(std::abs(s), 0.0, 1e-14) << k;
  }
  EXPECT_THROW(circle_nodes(0), InvalidArgumentError);
}

TEST(Kernels, SampleSphereNormsAndDeterminism) {
  const auto plan = SphereSamplePlan::monte_carlo(3, 5000, 17);
  const auto a = sample_sphere(plan);
  const auto b = sample_sphere(plan);
  ASSERT_EQ(a.size(), 5000u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    ASSERT_NEAR(std::sqrt(norm_squared(a[i].coords())), 1.0, 1e-12);
    for (int j = 0; j < 3; ++j) ASSERT_EQ(a[i][j], b[i][j]);
  }
}

TEST(Kernels, SampleSphereMeanOnCircle) {
  const std::size_t n = 100000;
  const auto pts = sample_sphere(SphereSamplePlan::monte_carlo(1, n, 5));
  Complex mean{};
  for (const auto& p : pts) mean += p[0];
  mean /= static_cast<double>(n);
  EXPECT_LT(std::abs(mean), 3.0 / std::sqrt(static_cast<double>(n)));
}

// E|zeta_1|^2 = 1/d since the |zeta_i|^2 sum to one and are exchangeable.
TEST(Kernels, SampleSphereSecondMoment) {
  for (int d : {2, 3}) {
    const std::size_t n = 1000000;
    const auto coords = sample_coordinates(SphereSamplePlan::monte_carlo(d, n, 11));
    double s = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double v = std::norm(coords[i * d]);
      s += v;
      s2 += v * v;
    }
    const double mean = s / n;
    const double se = std::sqrt((s2 / n - mean * mean) / n);
    EXPECT_LT(std::abs(mean - 1.0 / d), 3.0 * se) << d;
  }
}

TEST(Kernels, SliceIntegrateExamples) {
  auto one = [](std::span<const Complex>) { return Complex(1.0); };
  const auto plan = SphereSamplePlan::slice_product(2, 1000, 64, 2);
  const auto r1 = slice_integrate(one, plan);
  EXPECT_NEAR(std::abs(r1.value - 1.0), 0.0, 1e-14);

  const auto big = SphereSamplePlan::slice_product(2, 100000, 64, 2);
  const auto r2 = slice_integrate([](std::span<const Complex> z) { return Complex(std::norm(z[0])); }, big);
  EXPECT_LT(std::abs(r2.value - 0.5), 3.0 * r2.se);
  EXPECT_GT(r2.se, 0.0);
  const auto r3 = slice_integrate([](std::span<const Complex> z) { return Complex(z[0].real()); }, big);
  EXPECT_LE(std::abs(r3.value), std::max(3.0 * r3.se, 1e-15));
}

TEST(Kernels, SliceIntegrateCircleMonomialsVanish) {
  const auto plan = SphereSamplePlan::circle(32);
  for (int k = -31; k <= 31; ++k) {
    if (k == 0) continue;
    const auto r = slice_integrate([k](std::span<const Complex> z) { return std::pow(z[0], k); }, plan);
    EXPECT_NEAR(std::abs(r.value), 0.0, 1e-14) << k;
    EXPECT_EQ(r.se, 0.0);
  }
}

TEST(Kernels, SliceIntegrateIsReproducible) {
  auto f = [](std::span<const Complex> z) { return std::exp(z[0]) * std::conj(z[1]); };
  const auto plan = SphereSamplePlan::slice_product(2, 3000, 16, 9);
  const auto a = slice_integrate(f, plan);
  const auto b = slice_integrate(f, plan);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.se, b.se);
}

TEST(Kernels, ReductionIndependentOfWorkerCount) {
  std::vector<double> v(100000);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1, 1);
  for (auto& x : v) x = u(rng);
  auto f = [](std::span<const Complex> z) { return Complex(std::norm(z[0]) * z[1].real()); };
  const auto plan = SphereSamplePlan::monte_carlo(2, 20000, 4);
  setenv("CLARKLAB_THREADS", "1", 1);
  const double s1 = pairwise_sum(v);
  const auto r1 = slice_integrate(f, plan);
  setenv("CLARKLAB_THREADS", "3", 1);
  const double s3 = pairwise_sum(v);
  const auto r3 = slice_integrate(f, plan);
  unsetenv("CLARKLAB_THREADS");
  EXPECT_EQ(s1, s3);
  EXPECT_EQ(r1.value, r3.value);
}

TEST(Kernels, PlanValidation) {
  EXPECT_THROW(SphereSamplePlan::monte_carlo(0, 10), InvalidArgumentError);
  EXPECT_THROW(SphereSamplePlan::monte_carlo(2, 0), InvalidArgumentError);
  const auto p = SphereSamplePlan::slice_product(3, 10, 7);
  EXPECT_EQ(p.sample_count, 70u);
}

TEST(Kernels, AdaptiveCircleRule) {
  // Poisson kernel of 0.95 integrates to one.
  const auto r = integrate_circle_adaptive([](Complex z) { return Complex((1 - 0.95 * 0.95) / std::norm(1.0 - 0.95 * z)); });
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.value.real(), 1.0, 1e-13);
}

TEST(Kernels, GaussKronrod) {
  const auto r = integrate_gauss_kronrod([](double x) { return std::sqrt(x); }, 0.0, 1.0, 1e-12);
  EXPECT_NEAR(r.value, 2.0 / 3.0, 1e-11);
  const auto v = integrate_gauss_kronrod_vector(
      [](double x, std::span<double> out) {
        out[0] = std::cos(x);
        out[1] = x * x;
      },
      2, 0.0, std::numbers::pi / 2, 1e-13);
  EXPECT_NEAR(v.value[0], 1.0, 1e-12);
  EXPECT_NEAR(v.value[1], std::pow(std::numbers::pi / 2, 3) / 3, 1e-12);
}

TEST(Polynomials, RootsOfKnownPolynomial) {
  const std::vector<Complex> roots{Complex(0.5, 0.1), Complex(-0.7, 0.2), Complex(0.0, -0.9), 2.0, Complex(-1.5, 1.5)};
  const auto found = polynomial_roots(Polynomial::from_roots(roots));
  ASSERT_EQ(found.size(), roots.size());
  for (Complex r : roots) {
    double best = 1e9;
    for (Complex f : found) best = std::min(best, std::abs(f - r));
    EXPECT_LT(best, 1e-12);
  }
}

TEST(Polynomials, ClusteredMultipleRoots) {
  const std::vector<Complex> roots{0.3, 0.3, 0.3, Complex(0, 0.5)};
  const auto found = polynomial_roots(Polynomial::from_roots(roots));
  const auto cl = cluster_roots(found, 1e-4);
  ASSERT_EQ(cl.size(), 2u);
  int total = 0;
  for (const auto& c : cl) total += c.multiplicity;
  EXPECT_EQ(total, 4);
}

TEST(Polynomials, MultivariateSlice) {
  // z1 z2 along (1/sqrt2, 1/sqrt2) is lambda^2 / 2.
  const MultiPolynomial p(2, {Monomial{{1, 1}, 1.0}});
  const double s = 1.0 / std::sqrt(2.0);
  const std::vector<Complex> zeta{s, s};
  const Polynomial q = p.slice(zeta);
  EXPECT_EQ(q.degree(), 2);
  EXPECT_NEAR(std::abs(q.coeff(2) - 0.5), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(q.coeff(0)) + std::abs(q.coeff(1)), 0.0, 1e-15);
}
