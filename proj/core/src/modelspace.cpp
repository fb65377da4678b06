#include "clarklab/modelspace.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "clarklab/errors.hpp"

namespace clarklab {

namespace {

void require_finite_inner(const Symbol& inner, const char* where) {
  if (inner.dim() != 1 || !inner.is_inner()) throw InvalidArgumentError(where, "symbol must be a univariate inner function");
  if (!inner.rational_form()) {
    throw InvalidArgumentError(where, "singular inner factors are unsupported (no finite atomic Clark measure)");
  }
}

Complex eval_at(const Symbol& s, Complex z) { return s.eval_raw(std::span<const Complex>(&z, 1)); }

void require_interior(Complex z, const char* where) {
  if (!(std::abs(z) < 1.0 - kBallMargin)) throw InvalidArgumentError(where, "point must lie in the open disk");
}

// Decay rate of the Taylor coefficients of a rational inner function.
double inner_decay(const Symbol& inner) {
  const auto form = inner.rational_form();
  double rho = 0.0;
  if (form && form->denominator.degree() >= 1) {
    for (Complex r : polynomial_roots(form->denominator)) rho = std::max(rho, 1.0 / std::abs(r));
  }
  return rho;
}

int inner_degree(const Symbol& inner) {
  const auto form = inner.rational_form();
  return form ? std::max(form->numerator.degree(), form->denominator.degree()) : 0;
}

}  // namespace

Complex repkernel(const Symbol& inner, Complex z, Complex w) {
  if (inner.dim() != 1) throw InvalidArgumentError("repkernel", "symbol must be univariate");
  require_interior(z, "repkernel");
  require_interior(w, "repkernel");
  return (1.0 - eval_at(inner, z) * std::conj(eval_at(inner, w))) / (1.0 - z * std::conj(w));
}

double kernel_gram_min_eigenvalue(const Symbol& inner, std::span<const Complex> points) {
  const auto m = static_cast<Eigen::Index>(points.size());
  if (m == 0) return 0.0;
  Eigen::MatrixXcd g(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) g(i, j) = repkernel(inner, points[j], points[i]);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

KernelSpan::KernelSpan(Symbol inner, std::vector<Complex> points, std::vector<Complex> coeffs)
    : inner_(std::move(inner)), points_(std::move(points)), coeffs_(std::move(coeffs)) {
  require_finite_inner(inner_, "KernelSpan");
  if (points_.size() != coeffs_.size()) throw InvalidArgumentError("KernelSpan", "points and coefficients differ in length");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    require_interior(points_[i], "KernelSpan");
    for (std::size_t j = 0; j < i; ++j) {
      if (std::abs(points_[i] - points_[j]) < 1e-8) throw InvalidArgumentError("KernelSpan", "basis points must be distinct");
    }
  }
  if (kernel_gram_min_eigenvalue(inner_, points_) < -1e-10) {
    throw InvalidArgumentError("KernelSpan", "kernel Gram matrix is not positive semidefinite");
  }
}

Complex KernelSpan::operator()(Complex z) const {
  const Complex iz = eval_at(inner_, z);
  Complex s{};
  for (std::size_t j = 0; j < points_.size(); ++j) {
    s += coeffs_[j] * (1.0 - iz * std::conj(eval_at(inner_, points_[j]))) / (1.0 - z * std::conj(points_[j]));
  }
  return s;
}

double KernelSpan::decay_rate() const {
  double rho = inner_decay(inner_);
  for (const Complex& w : points_) rho = std::max(rho, std::abs(w));
  return rho;
}

CircleFunction unitary_apply(const Symbol& inner, Complex alpha, Complex w) {
  if (inner.dim() != 1) throw InvalidArgumentError("unitary_apply", "symbol must be univariate");
  require_interior(w, "unitary_apply");
  const Complex scale = 1.0 - alpha * std::conj(eval_at(inner, w));
  const Complex wc = std::conj(w);
  return [scale, wc](Complex zeta) { return scale / (1.0 - zeta * wc); };
}

CircleFunction unitary_apply(const KernelSpan& f, Complex alpha) {
  std::vector<CircleFunction> parts;
  for (const Complex& w : f.points()) parts.push_back(unitary_apply(f.symbol(), alpha, w));
  const std::vector<Complex> c = f.coeffs();
  return [parts, c](Complex zeta) {
    Complex s{};
    for (std::size_t j = 0; j < parts.size(); ++j) s += c[j] * parts[j](zeta);
    return s;
  };
}

GramReport gram_test(const Symbol& inner, Complex alpha, std::span<const Complex> points) {
  require_finite_inner(inner, "gram_test");
  const auto atoms = clark_atoms_d1(inner, alpha);
  const std::size_t m = points.size();
  std::vector<CircleFunction> u;
  for (const Complex& w : points) u.push_back(unitary_apply(inner, alpha, w));
  // Values of U K_{w_j} at every atom.
  std::vector<Complex> vals(m * atoms.size());
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t a = 0; a < atoms.size(); ++a) vals[j * atoms.size() + a] = u[j](atoms[a].point);
  }
  double fro = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      Complex g{};
      for (std::size_t a = 0; a < atoms.size(); ++a) {
        g += atoms[a].weight * vals[j * atoms.size() + a] * std::conj(vals[i * atoms.size() + a]);
      }
      fro += std::norm(g - repkernel(inner, points[i], points[j]));
    }
  }
  GramReport rep;
  rep.degree = inner_degree(inner);
  rep.alpha = alpha;
  rep.basis = m;
  rep.frobenius_residual = std::sqrt(fro);
  return rep;
}

CircleFunction adjoint_apply(const Symbol& inner, Complex alpha, const CircleFunction& f) {
  require_finite_inner(inner, "adjoint_apply");
  const auto atoms = clark_atoms_d1(inner, alpha);
  std::vector<Complex> points, weighted;
  for (const auto& a : atoms) {
    points.push_back(a.point);
    weighted.push_back(a.weight * f(a.point));
  }
  return [inner, alpha, points, weighted](Complex z) {
    Complex s{};
    for (std::size_t j = 0; j < points.size(); ++j) s += weighted[j] / (1.0 - z * std::conj(points[j]));
    return (1.0 - std::conj(alpha) * eval_at(inner, z)) * s;
  };
}

MembershipReport ksmall_member(const Symbol& inner, const CircleFunction& f, int degree, double decay,
                               std::size_t n) {
  require_finite_inner(inner, "ksmall_member");
  const int deg_i = inner_degree(inner);
  if (n <= static_cast<std::size_t>(2 * (deg_i + std::max(degree, 0)))) {
    throw InsufficientResolutionError("ksmall_member", "need more than 2 (deg I + deg f) circle nodes");
  }
  const double rho = std::max(inner_decay(inner), decay);
  if (rho > 0.0) {
    const double alias = std::pow(rho, 0.5 * static_cast<double>(n)) / (1.0 - rho);
    if (!(alias <= 1e-12)) {
      throw InsufficientResolutionError("ksmall_member", "aliasing from the geometric Fourier tail exceeds 1e-12");
    }
  }
  const CircleNodes nodes = circle_nodes(n);
  std::vector<Complex> g(n);
  for (std::size_t j = 0; j < n; ++j) {
    const Complex z = nodes.nodes[j];
    g[j] = inner.boundary_eval(std::span<const Complex>(&z, 1)) * std::conj(f(z));
  }
  MembershipReport rep;
  rep.nodes = n;
  const int half = static_cast<int>(n / 2);
  const int top = std::min(half - 1, 16);
  for (int k = -half; k <= top; ++k) {
    Complex c{};
    for (std::size_t j = 0; j < n; ++j) {
      const double ang = -2.0 * std::numbers::pi * static_cast<double>(k) * static_cast<double>(j) / static_cast<double>(n);
      c += g[j] * std::polar(1.0, ang);
    }
    c /= static_cast<double>(n);
    if (k <= 0) rep.max_nonpositive = std::max(rep.max_nonpositive, std::abs(c));
    rep.coefficients.emplace_back(k, c);
  }
  rep.member = rep.max_nonpositive <= 1e-10;
  return rep;
}

MembershipReport ksmall_member(const Symbol& inner, const Polynomial& f, std::size_t n) {
  return ksmall_member(inner, [f](Complex z) { return f(z); }, std::max(f.degree(), 0), 0.0, n);
}

MembershipReport ksmall_member(const KernelSpan& f, std::size_t n) {
  return ksmall_member(f.symbol(), [f](Complex z) { return f(z); }, 0, f.decay_rate(), n);
}

}  // namespace clarklab
