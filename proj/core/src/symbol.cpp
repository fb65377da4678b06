#include "clarklab/symbol.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "clarklab/errors.hpp"

namespace clarklab {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr double kUnimodularTol = 1e-12;

Complex blaschke_factor(Complex z, Complex a) { return (z - a) / (1.0 - std::conj(a) * z); }

Complex rational_denominator_checked(Complex q, const char* where) {
  if (std::abs(q) < 1e-14) throw DivisionDegeneracyError(where, "denominator vanishes");
  return q;
}

Polynomial univariate(const MultiPolynomial& p) {
  const std::vector<Complex> one{1.0};
  return p.slice(one);
}

MultiPolynomial multivariate(const Polynomial& p) {
  std::vector<Monomial> terms;
  for (int k = 0; k <= p.degree(); ++k) terms.push_back({{k}, p.coeff(k)});
  if (terms.empty()) terms.push_back({{0}, 0.0});
  return MultiPolynomial(1, std::move(terms));
}

}  // namespace

Symbol Symbol::constant(int dim, Complex value) {
  if (dim < 1) throw InvalidArgumentError("Symbol::constant", "dimension must be positive");
  if (!(std::abs(value) < 1.0)) {
    throw RangeViolationError("Symbol::constant", "constant symbols must satisfy |c| < 1");
  }
  return Symbol(dim, ConstantSymbol{dim, value});
}

Symbol Symbol::polynomial(MultiPolynomial poly) {
  if (poly.total_degree() > kMaxPolynomialDegree) {
    throw InvalidArgumentError("Symbol::polynomial", "total degree exceeds the cap of 32");
  }
  const int d = poly.dim();
  return Symbol(d, PolynomialSymbol{std::move(poly)});
}

Symbol Symbol::rational(MultiPolynomial numerator, MultiPolynomial denominator) {
  if (numerator.dim() != denominator.dim()) {
    throw InvalidArgumentError("Symbol::rational", "numerator and denominator dimensions differ");
  }
  if (numerator.total_degree() > kMaxPolynomialDegree ||
      denominator.total_degree() > kMaxPolynomialDegree) {
    throw InvalidArgumentError("Symbol::rational", "degree exceeds the cap of 32");
  }
  if (denominator.terms().empty() || std::abs(denominator.constant_term()) == 0.0) {
    throw InvalidArgumentError("Symbol::rational", "denominator must be nonzero at the origin");
  }
  const int d = numerator.dim();
  return Symbol(d, RationalSymbol{std::move(numerator), std::move(denominator)});
}

Symbol Symbol::blaschke(Complex unimodular, std::vector<BlaschkeZero> zeros) {
  if (std::abs(std::abs(unimodular) - 1.0) > kUnimodularTol) {
    throw InvalidArgumentError("Symbol::blaschke", "the constant factor must be unimodular");
  }
  if (std::abs(std::abs(unimodular) - 1.0) > 1e-15) unimodular /= std::abs(unimodular);
  int degree = 0;
  for (const auto& z : zeros) {
    if (!(std::abs(z.point) < 1.0)) {
      throw InvalidArgumentError("Symbol::blaschke", "zeros must lie in the open disk");
    }
    if (z.multiplicity < 1) throw InvalidArgumentError("Symbol::blaschke", "multiplicity must be >= 1");
    degree += z.multiplicity;
  }
  if (degree > kMaxPolynomialDegree) {
    throw InvalidArgumentError("Symbol::blaschke", "degree exceeds the cap of 32");
  }
  return Symbol(1, BlaschkeSymbol{unimodular, std::move(zeros)});
}

Symbol Symbol::power(int k) {
  if (k < 1) throw InvalidArgumentError("Symbol::power", "k must be positive");
  return blaschke(1.0, {{0.0, k}});
}

Symbol Symbol::singular_inner(std::vector<SingularAtom> atoms) {
  if (atoms.empty()) throw InvalidArgumentError("Symbol::singular_inner", "need at least one atom");
  for (auto& a : atoms) {
    if (std::abs(std::abs(a.point) - 1.0) > kUnimodularTol) {
      throw InvalidArgumentError("Symbol::singular_inner", "atoms must lie on the unit circle");
    }
    if (!(a.mass > 0.0)) throw InvalidArgumentError("Symbol::singular_inner", "masses must be positive");
    if (std::abs(std::abs(a.point) - 1.0) > 1e-15) a.point /= std::abs(a.point);
  }
  return Symbol(1, SingularInnerSymbol{std::move(atoms)});
}

Symbol Symbol::product(std::vector<Symbol> factors) {
  std::vector<Symbol> flat;
  for (auto& f : factors) {
    if (f.dim() != 1) throw InvalidArgumentError("Symbol::product", "products are d = 1 only");
    if (const auto* p = std::get_if<ProductSymbol>(&f.variant_)) {
      flat.insert(flat.end(), p->factors.begin(), p->factors.end());
    } else {
      flat.push_back(std::move(f));
    }
  }
  if (flat.empty()) throw InvalidArgumentError("Symbol::product", "need at least one factor");
  if (static_cast<int>(flat.size()) > kMaxProductFactors) {
    throw InvalidArgumentError("Symbol::product", "factor count exceeds the cap of 32");
  }
  return Symbol(1, ProductSymbol{std::move(flat)});
}

std::string Symbol::variant_name() const {
  return std::visit(Overloaded{[](const ConstantSymbol&) { return "constant"; },
                               [](const PolynomialSymbol&) { return "polynomial"; },
                               [](const RationalSymbol&) { return "rational"; },
                               [](const BlaschkeSymbol&) { return "blaschke"; },
                               [](const SingularInnerSymbol&) { return "singular_inner"; },
                               [](const ProductSymbol&) { return "product"; }},
                    variant_);
}

bool Symbol::is_constant() const {
  return std::visit(
      Overloaded{[](const ConstantSymbol&) { return true; },
                 [](const PolynomialSymbol& p) { return p.poly.total_degree() == 0; },
                 [](const RationalSymbol& r) {
                   return r.numerator.total_degree() == 0 && r.denominator.total_degree() == 0;
                 },
                 [](const BlaschkeSymbol& b) { return b.zeros.empty(); },
                 [](const SingularInnerSymbol&) { return false; },
                 [](const ProductSymbol& p) {
                   return std::all_of(p.factors.begin(), p.factors.end(),
                                      [](const Symbol& f) { return f.is_constant(); });
                 }},
      variant_);
}

bool Symbol::is_inner() const {
  return std::visit(
      Overloaded{[](const ConstantSymbol&) { return false; },
                 [this](const PolynomialSymbol& p) {
                   // c z^k with |c| = 1 in one variable.
                   return dim_ == 1 && p.poly.terms().size() == 1 &&
                          p.poly.terms()[0].exponent[0] > 0 &&
                          std::abs(std::abs(p.poly.terms()[0].coeff) - 1.0) <= 1e-15;
                 },
                 [](const RationalSymbol&) { return false; },
                 [](const BlaschkeSymbol&) { return true; },
                 [](const SingularInnerSymbol&) { return true; },
                 [](const ProductSymbol& p) {
                   return std::all_of(p.factors.begin(), p.factors.end(),
                                      [](const Symbol& f) { return f.is_inner(); });
                 }},
      variant_);
}

Complex Symbol::eval_raw(std::span<const Complex> z) const {
  if (static_cast<int>(z.size()) != dim_) {
    throw InvalidArgumentError("Symbol::eval", "point dimension does not match the symbol");
  }
  return std::visit(
      Overloaded{[](const ConstantSymbol& c) { return c.value; },
                 [&](const PolynomialSymbol& p) { return p.poly(z); },
                 [&](const RationalSymbol& r) {
                   return r.numerator(z) /
                          rational_denominator_checked(r.denominator(z), "Symbol::eval");
                 },
                 [&](const BlaschkeSymbol& b) {
                   Complex v = b.unimodular;
                   for (const auto& zero : b.zeros) {
                     const Complex f = blaschke_factor(z[0], zero.point);
                     for (int m = 0; m < zero.multiplicity; ++m) v *= f;
                   }
                   return v;
                 },
                 [&](const SingularInnerSymbol& s) {
                   Complex e{};
                   for (const auto& a : s.atoms) {
                     const Complex den = a.point - z[0];
                     if (std::abs(den) < 1e-300) {
                       throw ExceptionalPointError("Symbol::eval", "evaluation at a singular atom");
                     }
                     e += a.mass * (a.point + z[0]) / den;
                   }
                   return std::exp(-e);
                 },
                 [&](const ProductSymbol& p) {
                   Complex v = 1.0;
                   for (const auto& f : p.factors) v *= f.eval_raw(z);
                   return v;
                 }},
      variant_);
}

Complex Symbol::eval(const BallPoint& z) const {
  const Complex v = eval_raw(z.coords());
  if (!(std::abs(v) < 1.0)) {
    std::ostringstream os;
    os.precision(17);
    os << "|phi(z)| = " << std::abs(v) << " >= 1 at an interior point";
    throw RangeViolationError("Symbol::eval", os.str());
  }
  return v;
}

Complex Symbol::boundary_eval(std::span<const Complex> zeta) const {
  if (is_exceptional(zeta)) {
    std::ostringstream os;
    os.precision(17);
    os << "boundary point (" << zeta[0].real() << ", " << zeta[0].imag()
       << ") is in the declared exceptional set";
    throw ExceptionalPointError("Symbol::boundary_eval", os.str());
  }
  return eval_raw(zeta);
}

Complex Symbol::boundary_eval(const SpherePoint& zeta) const { return boundary_eval(zeta.coords()); }

Complex Symbol::value_at_origin() const {
  const std::vector<Complex> zero(dim_, 0.0);
  return eval_raw(zero);
}

std::vector<Complex> Symbol::exceptional_points() const {
  return std::visit(Overloaded{[](const SingularInnerSymbol& s) {
                                 std::vector<Complex> pts;
                                 for (const auto& a : s.atoms) pts.push_back(a.point);
                                 return pts;
                               },
                               [](const ProductSymbol& p) {
                                 std::vector<Complex> pts;
                                 for (const auto& f : p.factors) {
                                   const auto e = f.exceptional_points();
                                   pts.insert(pts.end(), e.begin(), e.end());
                                 }
                                 return pts;
                               },
                               [](const auto&) { return std::vector<Complex>{}; }},
                    variant_);
}

bool Symbol::is_exceptional(std::span<const Complex> zeta, double tol) const {
  if (dim_ != 1) return false;
  for (const auto& p : exceptional_points()) {
    if (std::abs(zeta[0] - p) < tol) return true;
  }
  return false;
}

Symbol Symbol::slice(std::span<const Complex> zeta) const {
  if (static_cast<int>(zeta.size()) != dim_) {
    throw InvalidArgumentError("Symbol::slice", "direction dimension does not match the symbol");
  }
  auto require_unimodular = [&] {
    if (std::abs(std::abs(zeta[0]) - 1.0) > 1e-12) {
      throw InvalidArgumentError("Symbol::slice", "d = 1 inner variants slice along unimodular directions");
    }
  };
  return std::visit(
      Overloaded{[&](const ConstantSymbol& c) { return Symbol::constant(1, c.value); },
                 [&](const PolynomialSymbol& p) {
                   return Symbol(1, PolynomialSymbol{multivariate(p.poly.slice(zeta))});
                 },
                 [&](const RationalSymbol& r) {
                   return Symbol(1, RationalSymbol{multivariate(r.numerator.slice(zeta)),
                                                   multivariate(r.denominator.slice(zeta))});
                 },
                 [&](const BlaschkeSymbol& b) {
                   require_unimodular();
                   const Complex u = zeta[0] / std::abs(zeta[0]);
                   BlaschkeSymbol out{b.unimodular, {}};
                   for (const auto& z : b.zeros) {
                     out.zeros.push_back({z.point * std::conj(u), z.multiplicity});
                     for (int m = 0; m < z.multiplicity; ++m) out.unimodular *= u;
                   }
                   return Symbol(1, std::move(out));
                 },
                 [&](const SingularInnerSymbol& s) {
                   require_unimodular();
                   const Complex u = zeta[0] / std::abs(zeta[0]);
                   SingularInnerSymbol out;
                   for (const auto& a : s.atoms) out.atoms.push_back({a.point * std::conj(u), a.mass});
                   return Symbol(1, std::move(out));
                 },
                 [&](const ProductSymbol& p) {
                   ProductSymbol out;
                   for (const auto& f : p.factors) out.factors.push_back(f.slice(zeta));
                   return Symbol(1, std::move(out));
                 }},
      variant_);
}

Complex Symbol::derivative(Complex z) const {
  if (dim_ != 1) throw InvalidArgumentError("derivative1d", "symbol must be univariate");
  const std::vector<Complex> pt{z};
  if (is_exceptional(pt)) {
    throw ExceptionalPointError("derivative1d", "derivative requested at an exceptional point");
  }
  return std::visit(
      Overloaded{[](const ConstantSymbol&) { return Complex{}; },
                 [&](const PolynomialSymbol& p) { return univariate(p.poly).derivative()(z); },
                 [&](const RationalSymbol& r) {
                   const Polynomial num = univariate(r.numerator);
                   const Polynomial den = univariate(r.denominator);
                   const Complex q = rational_denominator_checked(den(z), "derivative1d");
                   return (num.derivative()(z) * q - num(z) * den.derivative()(z)) / (q * q);
                 },
                 [&](const BlaschkeSymbol& b) {
                   // Product rule over the expanded factor list.
                   std::vector<Complex> f, df;
                   for (const auto& zero : b.zeros) {
                     const Complex a = zero.point;
                     const Complex den = 1.0 - std::conj(a) * z;
                     for (int m = 0; m < zero.multiplicity; ++m) {
                       f.push_back((z - a) / den);
                       df.push_back((1.0 - std::norm(a)) / (den * den));
                     }
                   }
                   Complex total{};
                   for (std::size_t i = 0; i < f.size(); ++i) {
                     Complex term = df[i];
                     for (std::size_t j = 0; j < f.size(); ++j) {
                       if (j != i) term *= f[j];
                     }
                     total += term;
                   }
                   return b.unimodular * total;
                 },
                 [&](const SingularInnerSymbol& s) {
                   Complex e{}, de{};
                   for (const auto& a : s.atoms) {
                     const Complex den = a.point - z;
                     e += a.mass * (a.point + z) / den;
                     de += a.mass * 2.0 * a.point / (den * den);
                   }
                   return -std::exp(-e) * de;
                 },
                 [&](const ProductSymbol& p) {
                   Complex total{};
                   for (std::size_t i = 0; i < p.factors.size(); ++i) {
                     Complex term = p.factors[i].derivative(z);
                     for (std::size_t j = 0; j < p.factors.size(); ++j) {
                       if (j != i) term *= p.factors[j].eval_raw(pt);
                     }
                     total += term;
                   }
                   return total;
                 }},
      variant_);
}

Complex derivative1d(const Symbol& phi, Complex z) { return phi.derivative(z); }

std::optional<RationalForm> Symbol::rational_form() const {
  if (dim_ != 1) return std::nullopt;
  return std::visit(
      Overloaded{[](const ConstantSymbol& c) -> std::optional<RationalForm> {
                   return RationalForm{Polynomial::constant(c.value), Polynomial::constant(1.0)};
                 },
                 [](const PolynomialSymbol& p) -> std::optional<RationalForm> {
                   return RationalForm{univariate(p.poly), Polynomial::constant(1.0)};
                 },
                 [](const RationalSymbol& r) -> std::optional<RationalForm> {
                   return RationalForm{univariate(r.numerator), univariate(r.denominator)};
                 },
                 [](const BlaschkeSymbol& b) -> std::optional<RationalForm> {
                   Polynomial num = Polynomial::constant(b.unimodular);
                   Polynomial den = Polynomial::constant(1.0);
                   for (const auto& z : b.zeros) {
                     num = num * Polynomial({-z.point, 1.0}).pow(z.multiplicity);
                     den = den * Polynomial({1.0, -std::conj(z.point)}).pow(z.multiplicity);
                   }
                   return RationalForm{num, den};
                 },
                 [](const SingularInnerSymbol&) -> std::optional<RationalForm> { return std::nullopt; },
                 [](const ProductSymbol& p) -> std::optional<RationalForm> {
                   RationalForm acc{Polynomial::constant(1.0), Polynomial::constant(1.0)};
                   for (const auto& f : p.factors) {
                     auto r = f.rational_form();
                     if (!r) return std::nullopt;
                     acc.numerator = acc.numerator * r->numerator;
                     acc.denominator = acc.denominator * r->denominator;
                   }
                   return acc;
                 }},
      variant_);
}

Symbol Symbol::scaled(Complex c) const {
  const bool unimodular = std::abs(std::abs(c) - 1.0) <= kUnimodularTol;
  return std::visit(
      Overloaded{[&](const ConstantSymbol& k) { return Symbol::constant(dim_, c * k.value); },
                 [&](const PolynomialSymbol& p) { return Symbol::polynomial(p.poly * c); },
                 [&](const RationalSymbol& r) { return Symbol::rational(r.numerator * c, r.denominator); },
                 [&](const BlaschkeSymbol& b) {
                   if (unimodular) return Symbol::blaschke(b.unimodular * c, b.zeros);
                   return Symbol::product({Symbol::constant(1, c), *this});
                 },
                 [&](const auto&) {
                   return Symbol::product(
                       {unimodular ? Symbol::blaschke(c, {}) : Symbol::constant(1, c), *this});
                 }},
      variant_);
}

Symbol Symbol::compose_linear(std::span<const Complex> matrix) const {
  return std::visit(
      Overloaded{[&](const ConstantSymbol&) { return *this; },
                 [&](const PolynomialSymbol& p) { return Symbol::polynomial(p.poly.compose_linear(matrix)); },
                 [&](const RationalSymbol& r) {
                   return Symbol::rational(r.numerator.compose_linear(matrix),
                                           r.denominator.compose_linear(matrix));
                 },
                 [&](const auto&) -> Symbol {
                   throw InvalidArgumentError("Symbol::compose_linear",
                                              "only polynomial, rational and constant symbols");
                 }},
      variant_);
}

SchwarzCheck validate_schwarz(const Symbol& phi, std::size_t m, std::uint64_t seed) {
  SchwarzCheck out;
  if (phi.is_inner()) {
    out.max_modulus = 1.0;
    out.reason = "inner variant (structural pass)";
    return out;
  }
  if (m == 0) throw InvalidArgumentError("validate_schwarz", "grid size must be positive");
  const int d = phi.dim();
  const SphereSamplePlan plan =
      d == 1 ? SphereSamplePlan::circle(m) : SphereSamplePlan::monte_carlo(d, m, seed);
  const auto pts = sample_coordinates(plan);
  const auto* rational = std::get_if<RationalSymbol>(&phi.variant());
  double best = -1.0;
  std::size_t best_i = 0;
  for (std::size_t i = 0; i < plan.sample_count; ++i) {
    std::span<const Complex> zeta(pts.data() + i * d, d);
    if (phi.is_exceptional(zeta)) continue;
    if (rational && std::abs(rational->denominator(zeta)) < 1e-12) {
      out.pass = false;
      out.witness = std::vector<Complex>(zeta.begin(), zeta.end());
      out.max_modulus = std::numeric_limits<double>::infinity();
      out.reason = "denominator vanishes on the sphere";
      return out;
    }
    const double v = std::abs(phi.eval_raw(zeta));
    if (v > best) {
      best = v;
      best_i = i;
    }
  }
  out.max_modulus = best;
  if (best > 1.0 + 1e-9) {
    out.pass = false;
    out.witness = std::vector<Complex>(pts.begin() + best_i * d, pts.begin() + (best_i + 1) * d);
    out.reason = "|phi| exceeds 1 on the boundary grid";
  }
  return out;
}

}  // namespace clarklab
