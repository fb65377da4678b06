#pragma once

#include <span>
#include <vector>

#include "clarklab/geometry.hpp"

namespace clarklab {

/// Univariate polynomial with complex coefficients, ascending powers.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Complex> coeffs);

  static Polynomial constant(Complex c) { return Polynomial({c}); }
  static Polynomial monomial(int k, Complex c = 1.0);
  /// prod (z - r_i)
  static Polynomial from_roots(std::span<const Complex> roots);

  const std::vector<Complex>& coeffs() const { return coeffs_; }
  /// Degree after dropping exactly-zero leading coefficients; -1 for the zero polynomial.
  int degree() const;
  bool is_zero() const { return degree() < 0; }
  Complex coeff(int k) const;

  Complex operator()(Complex z) const;
  Polynomial derivative() const;

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(Complex c);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, Complex c) { return a *= c; }
  friend Polynomial operator*(Complex c, Polynomial a) { return a *= c; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  Polynomial pow(int k) const;

 private:
  std::vector<Complex> coeffs_;
};

/// All complex roots, with multiplicity, of a polynomial of degree >= 1.
/// Leading coefficients below 1e-14 of the largest are treated as zero.
/// Degree 1 and 2 use closed forms; higher degrees use the eigenvalues of the
/// companion matrix followed by Newton polishing.
std::vector<Complex> polynomial_roots(const Polynomial& p);

struct ClusteredRoot {
  Complex z;
  int multiplicity = 1;
};

/// Groups roots closer than tol (single linkage) and averages each group.
std::vector<ClusteredRoot> cluster_roots(std::span<const Complex> roots, double tol = 1e-6);

struct Monomial {
  std::vector<int> exponent;
  Complex coeff;
};

/// d-variate polynomial stored as a canonical sorted list of monomials.
class MultiPolynomial {
 public:
  MultiPolynomial() = default;
  MultiPolynomial(int dim, std::vector<Monomial> terms);

  static MultiPolynomial constant(int dim, Complex c);
  /// The coordinate function z_i (0-based).
  static MultiPolynomial coordinate(int dim, int i);

  int dim() const { return dim_; }
  const std::vector<Monomial>& terms() const { return terms_; }
  int total_degree() const;
  Complex constant_term() const;

  Complex operator()(std::span<const Complex> z) const;
  /// lambda -> p(lambda * zeta): coefficient j sums c_mu zeta^mu over |mu| = j.
  Polynomial slice(std::span<const Complex> zeta) const;

  MultiPolynomial& operator+=(const MultiPolynomial& o);
  MultiPolynomial& operator*=(Complex c);
  friend MultiPolynomial operator+(MultiPolynomial a, const MultiPolynomial& b) { return a += b; }
  friend MultiPolynomial operator*(MultiPolynomial a, Complex c) { return a *= c; }
  friend MultiPolynomial operator*(const MultiPolynomial& a, const MultiPolynomial& b);

  /// (p o U)(z) = p(U z) for a d x d matrix given row-major.
  MultiPolynomial compose_linear(std::span<const Complex> matrix) const;

  friend bool operator==(const MultiPolynomial& a, const MultiPolynomial& b);

 private:
  void canonicalize();

  int dim_ = 0;
  std::vector<Monomial> terms_;
};

}  // namespace clarklab
