#include <gtest/gtest.h>

#include <algorithm>
#include <numbers>

#include "clarklab/clark.hpp"
#include "clarklab/corpus.hpp"
#include "clarklab/errors.hpp"
#include "test_util.hpp"

using namespace clarklab;

namespace {

Symbol half_plus_half(int dim) {
  return Symbol::polynomial(MultiPolynomial::constant(dim, 0.5) + MultiPolynomial::coordinate(dim, 0) * 0.5);
}

// Mobius map (z - a) / (1 - conj(a) z) and its unique Clark atom.
ClarkAtom mobius_atom(Complex a, Complex alpha) {
  const Complex xi = (alpha + a) / (1.0 + alpha * std::conj(a));
  return {xi, std::norm(1.0 - std::conj(a) * xi) / (1.0 - std::norm(a))};
}

void sort_by_arg(std::vector<ClarkAtom>& atoms) {
  std::sort(atoms.begin(), atoms.end(), [](const auto& x, const auto& y) { return std::arg(x.point) < std::arg(y.point); });
}

}  // namespace

TEST(Clark, TotalMassExamples) {
  EXPECT_NEAR(clark_total_mass(Symbol::power(1), 1.0), 1.0, 1e-15);
  EXPECT_NEAR(clark_total_mass(half_plus_half(1), 1.0), 3.0, 1e-15);
  EXPECT_NEAR(clark_total_mass(half_plus_half(2), -1.0), 0.75 / 2.25, 1e-15);
  const double c = 0.3;
  EXPECT_NEAR(clark_total_mass(Symbol::constant(1, c), Complex(0, 1)), (1 - c * c) / (1 + c * c), 1e-15);
}

TEST(Clark, AcDensityExamples) {
  // (1 + z)/2 at alpha = 1 has density exactly 1 away from the contact point.
  const Symbol h = half_plus_half(1);
  for (double t : {0.3, 1.0, 2.5, -2.0}) {
    EXPECT_NEAR(clark_ac_density(h, 1.0, SpherePoint{std::polar(1.0, t)}), 1.0, 1e-12);
  }
  EXPECT_THROW(clark_ac_density(h, 1.0, SpherePoint{1.0}), ContactPointError);
  EXPECT_EQ(clark_ac_density(Symbol::power(2), 1.0, SpherePoint{Complex(0, 1)}), 0.0);
  const Complex z1(0.6, 0.0), z2(0.0, 0.8);
  const Complex v = (1.0 + z1) / 2.0;
  EXPECT_NEAR(clark_ac_density(half_plus_half(2), -1.0, SpherePoint{z1, z2}),
              (1 - std::norm(v)) / std::norm(-1.0 - v), 1e-14);
}

TEST(Clark, PowerAtomsAreRootsOfAlpha) {
  for (int k = 1; k <= 3; ++k) {
    for (Complex alpha : {Complex(1.0), Complex(0, 1), std::polar(1.0, 2.2)}) {
      auto atoms = clark_atoms_d1(Symbol::power(k), alpha);
      ASSERT_EQ(atoms.size(), static_cast<std::size_t>(k));
      for (const auto& a : atoms) {
        EXPECT_NEAR(std::abs(std::pow(a.point, k) - alpha), 0.0, 1e-13);
        EXPECT_NEAR(std::abs(a.point), 1.0, 1e-13);
        EXPECT_NEAR(a.weight, 1.0 / k, 1e-13);
      }
    }
  }
}

TEST(Clark, MobiusAtom) {
  const Complex a(0.3, -0.5), alpha = std::polar(1.0, 0.9);
  const auto atoms = clark_atoms_d1(Symbol::blaschke(1.0, {{a, 1}}), alpha);
  ASSERT_EQ(atoms.size(), 1u);
  const auto want = mobius_atom(a, alpha);
  EXPECT_NEAR(std::abs(atoms[0].point - want.point), 0.0, 1e-13);
  EXPECT_NEAR(atoms[0].weight, want.weight, 1e-12);
}

TEST(Clark, BlaschkeAtomWeightsMatchAngularDerivative) {
  std::mt19937_64 rng(3);
  const std::vector<Complex> zeros{Complex(0.5, 0.1), Complex(-0.3, 0.7), Complex(0.0, -0.2), Complex(-0.6, -0.6)};
  std::vector<BlaschkeZero> bz;
  for (Complex a : zeros) bz.push_back({a, 1});
  const Complex gamma = std::polar(1.0, 0.3);
  const Symbol b = Symbol::blaschke(gamma, bz);
  for (int i = 0; i < 20; ++i) {
    const Complex alpha = testutil::random_unimodular(rng);
    const auto atoms = clark_atoms_d1(b, alpha);
    ASSERT_EQ(atoms.size(), zeros.size());
    double total = 0.0;
    for (const auto& at : atoms) {
      EXPECT_NEAR(std::abs(testutil::blaschke_eval(gamma, zeros, at.point) - alpha), 0.0, 1e-12);
      // |B'(zeta)| = sum (1 - |a|^2) / |zeta - a|^2 on the circle.
      double d = 0.0;
      for (Complex a : zeros) d += (1.0 - std::norm(a)) / std::norm(at.point - a);
      EXPECT_NEAR(at.weight, 1.0 / d, 1e-12);
      total += at.weight;
    }
    EXPECT_NEAR(total, clark_total_mass(b, alpha), 1e-12);
  }
}

TEST(Clark, RotationEquivariance) {
  const std::vector<Complex> zeros{Complex(0.2, 0.4), Complex(-0.5, 0.1), Complex(0.7, -0.3)};
  const double t = 0.8;
  const Complex rot = std::polar(1.0, t);
  std::vector<BlaschkeZero> z0, z1;
  for (Complex a : zeros) {
    z0.push_back({a, 1});
    z1.push_back({a / rot, 1});
  }
  // B(e^{it} z) has zeros a e^{-it} and unimodular factor e^{3it}.
  const Symbol b = Symbol::blaschke(1.0, z0);
  const Symbol br = Symbol::blaschke(std::pow(rot, 3), z1);
  const Complex alpha = std::polar(1.0, -1.1);
  auto a0 = clark_atoms_d1(b, alpha);
  auto a1 = clark_atoms_d1(br, alpha);
  for (auto& a : a0) a.point /= rot;
  sort_by_arg(a0);
  sort_by_arg(a1);
  ASSERT_EQ(a0.size(), a1.size());
  for (std::size_t i = 0; i < a0.size(); ++i) {
    EXPECT_NEAR(std::abs(a0[i].point - a1[i].point), 0.0, 1e-12);
    EXPECT_NEAR(a0[i].weight, a1[i].weight, 1e-12);
  }
}

TEST(Clark, SingularInnerHasNoAtomsButFullSingularMass) {
  const Symbol s = Symbol::singular_inner({{1.0, 1.0}});
  const auto data = clark_data(s, Complex(0, 1), ClarkOptions::defaults(1));
  EXPECT_EQ(data.ac_mass.value, 0.0);
  EXPECT_NEAR(data.singular_mass.value, clark_total_mass(s, Complex(0, 1)), 1e-14);
}

TEST(Clark, HalfPlusHalfZMassSplit) {
  const auto data = clark_data(half_plus_half(1), 1.0, ClarkOptions::defaults(1));
  EXPECT_NEAR(data.ac_mass.value, 1.0, 1e-8);
  EXPECT_NEAR(data.singular_mass.value, 2.0, 1e-8);
  ASSERT_TRUE(data.atoms.has_value());
  ASSERT_EQ(data.atoms->size(), 1u);
  EXPECT_NEAR(std::abs((*data.atoms)[0].point - 1.0), 0.0, 1e-10);
  EXPECT_NEAR((*data.atoms)[0].weight, 2.0, 1e-10);
  // Away from the contact point the measure is absolutely continuous.
  const auto off = clark_data(half_plus_half(1), Complex(0, 1), ClarkOptions::defaults(1));
  EXPECT_NEAR(off.singular_mass.value, 0.0, 1e-8);
}

TEST(Clark, ContactAtomsOfRationalSymbol) {
  const auto atoms = clark_contact_atoms(half_plus_half(1), 1.0);
  ASSERT_EQ(atoms.size(), 1u);
  EXPECT_NEAR(atoms[0].weight, 2.0, 1e-10);
  EXPECT_TRUE(clark_contact_atoms(half_plus_half(1), -1.0).empty());
}

TEST(Clark, AcMassOnBallTwo) {
  ClarkOptions opt;
  opt.plan = SphereSamplePlan::slice_product(2, 2048, 64, 11);
  const auto data = clark_data(half_plus_half(2), 1.0, opt);
  // No singular part on B_2: the a.c. mass is the full budget 3.
  EXPECT_NEAR(data.ac_mass.value, 3.0, 4 * data.ac_mass.se + 1e-3);
  EXPECT_GT(data.ac_mass.se, 0.0);
}

TEST(Clark, HerglotzOnAtoms) {
  std::mt19937_64 rng(9);
  const Symbol phi = Symbol::power(3);
  const Complex alpha = std::polar(1.0, 0.4);
  const auto data = clark_data(phi, alpha, ClarkOptions::defaults(1));
  std::vector<BallPoint> pts;
  for (int i = 0; i < 50; ++i) pts.push_back(BallPoint{testutil::random_ball(rng, 1, 0.95)[0]});
  const auto rep = verify_herglotz(phi, alpha, data, pts, ClarkOptions::defaults(1));
  EXPECT_LE(rep.max_residual, 1e-12);
  // Independent check of the same identity from the roots of z^3 = alpha.
  for (const auto& z : pts) {
    double p = 0.0;
    for (int k = 0; k < 3; ++k) {
      const Complex xi = std::polar(1.0, (std::arg(alpha) + 2 * std::numbers::pi * k) / 3);
      p += testutil::herglotz_re(xi, z.coords()[0]) / 3.0;
    }
    ASSERT_NEAR(p, testutil::herglotz_re(alpha, std::pow(z.coords()[0], 3)), 1e-10 * std::max(1.0, p));
  }
}

TEST(Clark, DoubleCauchyMatchesAtomicSum) {
  std::mt19937_64 rng(10);
  const Complex a(0.4, 0.3), alpha = std::polar(1.0, 2.0);
  const Symbol m = Symbol::blaschke(1.0, {{a, 1}});
  const auto at = mobius_atom(a, alpha);
  for (int i = 0; i < 20; ++i) {
    const Complex z = testutil::random_ball(rng, 1, 0.9)[0];
    const Complex w = testutil::random_ball(rng, 1, 0.9)[0];
    const Complex lhs = at.weight / (1.0 - z * std::conj(at.point)) / (1.0 - at.point * std::conj(w));
    const Complex rhs = double_cauchy_closed_form(m, alpha, BallPoint{z}, BallPoint{w});
    ASSERT_NEAR(std::abs(lhs - rhs), 0.0, 1e-11 * std::max(1.0, std::abs(lhs)));
  }
}

TEST(Clark, CauchyPlusClosedFormMatchesAtomicSum) {
  std::mt19937_64 rng(12);
  const Complex a(-0.2, 0.6), alpha = std::polar(1.0, -0.5);
  const Symbol m = Symbol::blaschke(1.0, {{a, 1}});
  const auto at = mobius_atom(a, alpha);
  for (int i = 0; i < 20; ++i) {
    const Complex z = testutil::random_ball(rng, 1, 0.9)[0];
    const Complex lhs = at.weight / (1.0 - z * std::conj(at.point));
    ASSERT_NEAR(std::abs(lhs - cauchy_plus_closed_form(m, alpha, BallPoint{z})), 0.0, 1e-11 * std::abs(lhs));
  }
}

TEST(Clark, DisintegrationOfPower) {
  const auto opt = ClarkOptions::defaults(1);
  const BoundaryFunction re = [](std::span<const Complex> z) { return Complex(z[0].real()); };
  const BoundaryFunction one = [](std::span<const Complex>) { return Complex(1.0); };
  const BoundaryFunction sq = [](std::span<const Complex> z) { return Complex(std::norm(z[0] - 0.5)); };
  for (const auto& f : {re, one, sq}) {
    const auto r = disintegration_check(Symbol::power(2), f, 64, opt);
    EXPECT_LE(r.residual, 1e-12);
  }
  // |zeta - 1/2|^2 integrates to 1 + 1/4 against arc length.
  EXPECT_NEAR(disintegration_check(Symbol::power(2), sq, 64, opt).rhs.real(), 1.25, 1e-12);
}

TEST(Clark, DisintegrationWithAcPart) {
  const BoundaryFunction re = [](std::span<const Complex> z) { return Complex(z[0].real()); };
  const auto r = disintegration_check(half_plus_half(1), re, 256, ClarkOptions::defaults(1));
  EXPECT_LE(r.residual, std::max(1e-8, 3 * r.se));
}

TEST(Clark, PoltoratskiForIdentity) {
  // sigma_1[z] = delta_1 and |mu_+(e^{it})| = 1 / |1 - e^{it}|.
  const std::vector<double> ys{10.0, 1000.0};
  const auto tab = poltoratski_check(Symbol::power(1), 1.0, ys, PoltoratskiOptions{}, ClarkOptions::defaults(1));
  ASSERT_EQ(tab.rows.size(), 2u);
  EXPECT_NEAR(tab.singular_mass, 1.0, 1e-12);
  for (const auto& row : tab.rows) {
    const double exact = 2.0 * row.y * std::asin(1.0 / (2 * row.y));
    EXPECT_NEAR(row.scaled, exact, 1e-3 * exact);
  }
  EXPECT_NEAR(tab.rows.back().scaled, 1.0, 1e-3);
}

TEST(Clark, AlphaMustBeUnimodular) {
  EXPECT_THROW(clark_total_mass(Symbol::power(1), 0.5), InvalidArgumentError);
}
