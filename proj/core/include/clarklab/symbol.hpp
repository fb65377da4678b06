#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "clarklab/geometry.hpp"
#include "clarklab/polynomial.hpp"
#include "clarklab/quadrature.hpp"

namespace clarklab {

inline constexpr int kMaxPolynomialDegree = 32;
inline constexpr int kMaxProductFactors = 32;

class Symbol;

struct ConstantSymbol {
  int dim = 1;
  Complex value{};
};

struct PolynomialSymbol {
  MultiPolynomial poly;
};

/// p / q with q zero-free on the closed ball.
struct RationalSymbol {
  MultiPolynomial numerator;
  MultiPolynomial denominator;
};

struct BlaschkeZero {
  Complex point{};
  int multiplicity = 1;
};

/// gamma * prod ((z - a) / (1 - conj(a) z))^m, d = 1.
struct BlaschkeSymbol {
  Complex unimodular{1.0, 0.0};
  std::vector<BlaschkeZero> zeros;
};

struct SingularAtom {
  Complex point{};
  double mass = 0.0;
};

/// exp(-sum c_k (xi_k + z) / (xi_k - z)), d = 1.
struct SingularInnerSymbol {
  std::vector<SingularAtom> atoms;
};

/// Pointwise product of d = 1 symbols.
struct ProductSymbol {
  std::vector<Symbol> factors;
};

/// phi = p / q for a d = 1 symbol with a rational representation.
struct RationalForm {
  Polynomial numerator;
  Polynomial denominator;
};

/// A holomorphic map phi: B_d -> D. Immutable after construction.
class Symbol {
 public:
  using Variant = std::variant<ConstantSymbol, PolynomialSymbol, RationalSymbol, BlaschkeSymbol,
                               SingularInnerSymbol, ProductSymbol>;

  static Symbol constant(int dim, Complex value);
  static Symbol polynomial(MultiPolynomial poly);
  static Symbol rational(MultiPolynomial numerator, MultiPolynomial denominator);
  static Symbol blaschke(Complex unimodular, std::vector<BlaschkeZero> zeros);
  /// z^k as a Blaschke product.
  static Symbol power(int k);
  static Symbol singular_inner(std::vector<SingularAtom> atoms);
  static Symbol product(std::vector<Symbol> factors);

  int dim() const { return dim_; }
  const Variant& variant() const { return variant_; }
  std::string variant_name() const;

  bool is_constant() const;
  /// Structurally inner: Blaschke, singular inner, unimodular monomials and
  /// products of these.
  bool is_inner() const;

  /// phi(z); throws RangeViolationError when |phi(z)| >= 1.
  Complex eval(const BallPoint& z) const;
  /// phi at any point of the closed ball where the formula is defined.
  Complex eval_raw(std::span<const Complex> z) const;
  /// Radial boundary value. Throws ExceptionalPointError at declared
  /// exceptional points.
  Complex boundary_eval(const SpherePoint& zeta) const;
  Complex boundary_eval(std::span<const Complex> zeta) const;
  /// phi(0).
  Complex value_at_origin() const;

  /// Boundary points where the symbol is not continuous (d = 1 only; rational
  /// symbols are required to be pole-free on the closed ball).
  std::vector<Complex> exceptional_points() const;
  bool is_exceptional(std::span<const Complex> zeta, double tol = 1e-12) const;

  /// lambda -> phi(lambda zeta) as a d = 1 symbol.
  Symbol slice(std::span<const Complex> zeta) const;
  Symbol slice(const SpherePoint& zeta) const { return slice(zeta.coords()); }

  /// phi'(z) for d = 1 symbols, |z| <= 1.
  Complex derivative(Complex z) const;

  /// p / q representation for d = 1 symbols without singular inner factors.
  std::optional<RationalForm> rational_form() const;

  /// c * phi. Unimodular c keeps the variant where possible.
  Symbol scaled(Complex c) const;
  /// phi o U for a d x d matrix (row-major); polynomial, rational and constant symbols.
  Symbol compose_linear(std::span<const Complex> matrix) const;

 private:
  Symbol(int dim, Variant v) : dim_(dim), variant_(std::move(v)) {}

  int dim_ = 1;
  Variant variant_;
};

Complex derivative1d(const Symbol& phi, Complex z);

struct SchwarzCheck {
  bool pass = true;
  double max_modulus = 0.0;
  std::optional<std::vector<Complex>> witness;
  std::string reason;
};

/// Sampled sup-norm check |phi| <= 1 + 1e-9 on m boundary points (circle
/// trapezoid nodes for d = 1, seeded Monte Carlo points otherwise).
SchwarzCheck validate_schwarz(const Symbol& phi, std::size_t m, std::uint64_t seed = 0);

}  // namespace clarklab
