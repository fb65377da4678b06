#include <gtest/gtest.h>

#include <numbers>

#include "clarklab/errors.hpp"
#include "clarklab/essnorm.hpp"

using namespace clarklab;

namespace {

Symbol half_plus_half(Complex rot = 1.0) {
  return Symbol::polynomial(MultiPolynomial::constant(1, 0.5 * rot) + MultiPolynomial::coordinate(1, 0) * (0.5 * rot));
}

}  // namespace

TEST(EssNorm, ExtrapolateQuadraticIsExact) {
  const std::vector<double> t{0.1, 0.01, 0.001};
  std::vector<Estimate> v;
  for (double x : t) v.push_back({1.0 + 2.0 * x + 3.0 * x * x, 0.0});
  EXPECT_NEAR(extrapolate_to_zero(t, v).value, 1.0, 1e-12);
  std::vector<Estimate> noisy(3, {1.0, 0.1});
  const auto e = extrapolate_to_zero(t, noisy);
  EXPECT_NEAR(e.value, 1.0, 1e-12);
  EXPECT_GT(e.se, 0.1);
}

TEST(EssNorm, LowerBoundLadderForIdentity) {
  const auto cfg = EssNormConfig::defaults(1);
  const auto lad = testfn_lower_bound(Symbol::power(1), 1.0, cfg);
  ASSERT_EQ(lad.values.size(), cfg.radii.size());
  // (1 - r^2) / |1 - r zeta|^2 is a Poisson kernel: every rung is 1.
  for (const auto& v : lad.values) EXPECT_NEAR(v.value, 1.0, 1e-9);
  EXPECT_NEAR(lad.limit.value, 1.0, 1e-8);
}

TEST(EssNorm, LowerBoundLadderForConstant) {
  const auto cfg = EssNormConfig::defaults(1);
  const Complex alpha = std::polar(1.0, 0.5);
  const auto lad = testfn_lower_bound(Symbol::constant(1, 0.3), alpha, cfg);
  for (std::size_t i = 0; i < lad.radii.size(); ++i) {
    const double r = lad.radii[i];
    EXPECT_NEAR(lad.values[i].value, (1 - r * r) / std::norm(alpha - 0.3 * r), 1e-14);
  }
  EXPECT_NEAR(lad.limit.value, 0.0, 1e-6);
}

TEST(EssNorm, BhatSigmaExamples) {
  const auto cfg = EssNormConfig::defaults(1);
  EXPECT_NEAR(bhat_sigma(Symbol::power(1), cfg).value.value, 1.0, 1e-12);
  EXPECT_NEAR(bhat_sigma(Symbol::power(3), cfg).value.value, 1.0, 1e-12);
  EXPECT_NEAR(bhat_sigma(Symbol::constant(1, 0.3), cfg).value.value, 0.0, 1e-12);
  const Symbol scaled = Symbol::polynomial(MultiPolynomial::coordinate(1, 0) * 0.99);
  EXPECT_NEAR(bhat_sigma(scaled, cfg).value.value, 0.0, 1e-6);
}

TEST(EssNorm, ContactSearchFindsRotatedContact) {
  const Complex rot = std::polar(1.0, std::numbers::pi / 3);
  const auto cfg = EssNormConfig::defaults(1);
  const auto base = bhat_sigma(half_plus_half(), cfg);
  const auto turned = bhat_sigma(half_plus_half(rot), cfg);
  EXPECT_NEAR(base.value.value, 2.0, 1e-6);
  EXPECT_NEAR(turned.value.value, 2.0, 1e-6);
  EXPECT_NEAR(std::abs(turned.argmax - rot), 0.0, 1e-6);
  bool inserted = false;
  for (const auto& a : turned.per_alpha) inserted = inserted || a.inserted;
  EXPECT_TRUE(inserted);
}

TEST(EssNorm, AlphaGridHasUniformNodes) {
  auto cfg = EssNormConfig::defaults(1);
  cfg.alpha_nodes = 16;
  const auto grid = alpha_grid(Symbol::power(1), cfg);
  ASSERT_GE(grid.size(), 16u);
  for (const auto& a : grid) EXPECT_NEAR(std::abs(a.alpha), 1.0, 1e-14);
}

TEST(EssNorm, ReportForIdentityIsConsistent) {
  const auto rep = essential_norm_report(Symbol::power(1), EssNormConfig::defaults(1));
  EXPECT_NEAR(rep.bhat_sigma.value.value, 1.0, 1e-9);
  EXPECT_NEAR(rep.bhat_N.estimate, 1.0, 1e-3);
  EXPECT_NEAR(rep.lower_bound.value, 1.0, 1e-6);
  EXPECT_TRUE(rep.consistent);
  EXPECT_GE(rep.margin_lower, 0.0);
  EXPECT_GE(rep.margin_counting, 0.0);
}

TEST(EssNorm, ReportForCompactSymbol) {
  const Symbol scaled = Symbol::polynomial(MultiPolynomial::coordinate(1, 0) * 0.99);
  const auto rep = essential_norm_report(scaled, EssNormConfig::defaults(1));
  EXPECT_LE(rep.bhat_sigma.value.value, 1e-6);
  EXPECT_LE(rep.bhat_N.estimate, 0.05);
  EXPECT_TRUE(rep.consistent);
}

TEST(EssNorm, TruncationEstimateVanishesOnExactLadders) {
  const auto cfg = EssNormConfig::defaults(1);
  EXPECT_LE(testfn_lower_bound(Symbol::power(1), 1.0, cfg).truncation, 1e-9);
  // (1 - r^2) / (1 - (0.99 r)^2) is far from linear in 1 - r near r = 1.
  const Symbol scaled = Symbol::polynomial(MultiPolynomial::coordinate(1, 0) * 0.99);
  const auto lad = testfn_lower_bound(scaled, 1.0, cfg);
  EXPECT_GT(lad.truncation, 1e-5);
  EXPECT_GE(lad.truncation + 1e-6, std::abs(lad.limit.value));
}
