#include "clarklab/polynomial.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "clarklab/errors.hpp"

namespace clarklab {

Polynomial::Polynomial(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs)) {}

Polynomial Polynomial::monomial(int k, Complex c) {
  std::vector<Complex> v(k + 1, 0.0);
  v[k] = c;
  return Polynomial(std::move(v));
}

Polynomial Polynomial::from_roots(std::span<const Complex> roots) {
  Polynomial p = constant(1.0);
  for (const auto& r : roots) p = p * Polynomial({-r, 1.0});
  return p;
}

int Polynomial::degree() const {
  for (int k = static_cast<int>(coeffs_.size()) - 1; k >= 0; --k) {
    if (coeffs_[k] != 0.0) return k;
  }
  return -1;
}

Complex Polynomial::coeff(int k) const {
  return k >= 0 && k < static_cast<int>(coeffs_.size()) ? coeffs_[k] : Complex{};
}

Complex Polynomial::operator()(Complex z) const {
  Complex acc{};
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() <= 1) return constant(0.0);
  std::vector<Complex> d(coeffs_.size() - 1);
  for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = static_cast<double>(k) * coeffs_[k];
  return Polynomial(std::move(d));
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), 0.0);
  for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), 0.0);
  for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
  return *this;
}

Polynomial& Polynomial::operator*=(Complex c) {
  for (auto& x : coeffs_) x *= c;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.coeffs_.empty() || b.coeffs_.empty()) return Polynomial();
  std::vector<Complex> c(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
  }
  return Polynomial(std::move(c));
}

Polynomial Polynomial::pow(int k) const {
  Polynomial r = constant(1.0);
  for (int i = 0; i < k; ++i) r = r * *this;
  return r;
}

namespace {

void newton_polish(const Polynomial& p, const Polynomial& dp, Complex& z) {
  for (int it = 0; it < 4; ++it) {
    const Complex f = p(z);
    const Complex df = dp(z);
    if (f == 0.0 || df == 0.0) return;
    const Complex next = z - f / df;
    if (!(std::abs(p(next)) < std::abs(f))) return;
    z = next;
  }
}

}  // namespace

std::vector<Complex> polynomial_roots(const Polynomial& p) {
  const auto& c = p.coeffs();
  double scale = 0.0;
  for (const auto& x : c) scale = std::max(scale, std::abs(x));
  int n = p.degree();
  while (n > 0 && std::abs(c[n]) <= 1e-14 * scale) --n;
  if (n < 1) throw RootSolveError("polynomial_roots", "polynomial has no roots (degree < 1)");

  std::vector<Complex> roots;
  if (n == 1) {
    roots.push_back(-c[0] / c[1]);
    return roots;
  }
  if (n == 2) {
    const Complex a = c[2], b = c[1], cc = c[0];
    const Complex disc = std::sqrt(b * b - 4.0 * a * cc);
    // Choose the sign that avoids cancellation.
    const Complex q = -0.5 * (b + (std::real(std::conj(b) * disc) >= 0.0 ? disc : -disc));
    if (q == 0.0) {
      roots = {0.0, 0.0};
    } else {
      roots = {q / a, cc / q};
    }
  } else {
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) companion(i, n - 1) = -c[i] / c[n];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
    if (solver.info() != Eigen::Success) {
      throw RootSolveError("polynomial_roots", "companion eigenvalue iteration did not converge");
    }
    roots.assign(solver.eigenvalues().begin(), solver.eigenvalues().end());
  }
  const Polynomial trimmed(std::vector<Complex>(c.begin(), c.begin() + n + 1));
  const Polynomial dp = trimmed.derivative();
  for (auto& z : roots) newton_polish(trimmed, dp, z);
  return roots;
}

std::vector<ClusteredRoot> cluster_roots(std::span<const Complex> roots, double tol) {
  const std::size_t n = roots.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(roots[i] - roots[j]) < tol) parent[find(i)] = find(j);
    }
  }
  std::map<std::size_t, std::vector<Complex>> groups;
  for (std::size_t i = 0; i < n; ++i) groups[find(i)].push_back(roots[i]);
  std::vector<ClusteredRoot> out;
  for (auto& [_, g] : groups) {
    Complex s{};
    for (const auto& z : g) s += z;
    out.push_back({s / static_cast<double>(g.size()), static_cast<int>(g.size())});
  }
  return out;
}

MultiPolynomial::MultiPolynomial(int dim, std::vector<Monomial> terms)
    : dim_(dim), terms_(std::move(terms)) {
  if (dim_ < 1) throw InvalidArgumentError("MultiPolynomial", "dimension must be positive");
  for (const auto& t : terms_) {
    if (static_cast<int>(t.exponent.size()) != dim_) {
      throw InvalidArgumentError("MultiPolynomial", "multi-index length does not match dimension");
    }
    for (int e : t.exponent) {
      if (e < 0) throw InvalidArgumentError("MultiPolynomial", "negative exponent");
    }
  }
  canonicalize();
}

MultiPolynomial MultiPolynomial::constant(int dim, Complex c) {
  return MultiPolynomial(dim, {{std::vector<int>(dim, 0), c}});
}

MultiPolynomial MultiPolynomial::coordinate(int dim, int i) {
  std::vector<int> e(dim, 0);
  e.at(i) = 1;
  return MultiPolynomial(dim, {{e, 1.0}});
}

void MultiPolynomial::canonicalize() {
  std::map<std::vector<int>, Complex> merged;
  for (const auto& t : terms_) merged[t.exponent] += t.coeff;
  terms_.clear();
  for (auto& [e, c] : merged) {
    if (c != 0.0) terms_.push_back({e, c});
  }
}

int MultiPolynomial::total_degree() const {
  int deg = 0;
  for (const auto& t : terms_) {
    deg = std::max(deg, std::accumulate(t.exponent.begin(), t.exponent.end(), 0));
  }
  return deg;
}

Complex MultiPolynomial::constant_term() const {
  for (const auto& t : terms_) {
    if (std::all_of(t.exponent.begin(), t.exponent.end(), [](int e) { return e == 0; })) {
      return t.coeff;
    }
  }
  return 0.0;
}

Complex MultiPolynomial::operator()(std::span<const Complex> z) const {
  Complex acc{};
  for (const auto& t : terms_) {
    Complex m = t.coeff;
    for (int i = 0; i < dim_; ++i) {
      for (int k = 0; k < t.exponent[i]; ++k) m *= z[i];
    }
    acc += m;
  }
  return acc;
}

Polynomial MultiPolynomial::slice(std::span<const Complex> zeta) const {
  std::vector<Complex> c(total_degree() + 1, 0.0);
  for (const auto& t : terms_) {
    Complex m = t.coeff;
    int weight = 0;
    for (int i = 0; i < dim_; ++i) {
      for (int k = 0; k < t.exponent[i]; ++k) m *= zeta[i];
      weight += t.exponent[i];
    }
    c[weight] += m;
  }
  return Polynomial(std::move(c));
}

MultiPolynomial& MultiPolynomial::operator+=(const MultiPolynomial& o) {
  if (dim_ == 0) dim_ = o.dim_;
  if (o.dim_ != dim_) throw InvalidArgumentError("MultiPolynomial", "dimension mismatch");
  terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
  canonicalize();
  return *this;
}

MultiPolynomial& MultiPolynomial::operator*=(Complex c) {
  for (auto& t : terms_) t.coeff *= c;
  canonicalize();
  return *this;
}

MultiPolynomial operator*(const MultiPolynomial& a, const MultiPolynomial& b) {
  if (a.dim_ != b.dim_) throw InvalidArgumentError("MultiPolynomial", "dimension mismatch");
  std::vector<Monomial> terms;
  terms.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& x : a.terms_) {
    for (const auto& y : b.terms_) {
      std::vector<int> e(a.dim_);
      for (int i = 0; i < a.dim_; ++i) e[i] = x.exponent[i] + y.exponent[i];
      terms.push_back({std::move(e), x.coeff * y.coeff});
    }
  }
  return MultiPolynomial(a.dim_, std::move(terms));
}

MultiPolynomial MultiPolynomial::compose_linear(std::span<const Complex> matrix) const {
  if (static_cast<int>(matrix.size()) != dim_ * dim_) {
    throw InvalidArgumentError("compose_linear", "matrix must be d x d");
  }
  // (U z)_i = sum_j U_ij z_j
  std::vector<MultiPolynomial> rows;
  for (int i = 0; i < dim_; ++i) {
    std::vector<Monomial> lin;
    for (int j = 0; j < dim_; ++j) {
      std::vector<int> e(dim_, 0);
      e[j] = 1;
      lin.push_back({e, matrix[i * dim_ + j]});
    }
    rows.emplace_back(dim_, std::move(lin));
  }
  MultiPolynomial out = constant(dim_, 0.0);
  for (const auto& t : terms_) {
    MultiPolynomial m = constant(dim_, t.coeff);
    for (int i = 0; i < dim_; ++i) {
      for (int k = 0; k < t.exponent[i]; ++k) m = m * rows[i];
    }
    out += m;
  }
  return out;
}

bool operator==(const MultiPolynomial& a, const MultiPolynomial& b) {
  if (a.dim_ != b.dim_ || a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    if (a.terms_[i].exponent != b.terms_[i].exponent || a.terms_[i].coeff != b.terms_[i].coeff) {
      return false;
    }
  }
  return true;
}

}  // namespace clarklab
