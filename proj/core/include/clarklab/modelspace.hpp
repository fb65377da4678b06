#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "clarklab/clark.hpp"
#include "clarklab/geometry.hpp"
#include "clarklab/polynomial.hpp"
#include "clarklab/symbol.hpp"

namespace clarklab {

using CircleFunction = std::function<Complex(Complex)>;

/// K(z, w) = (1 - I(z) conj(I(w))) / (1 - z conj(w)) for d = 1.
Complex repkernel(const Symbol& inner, Complex z, Complex w);

/// A finite combination sum_j c_j K_{w_j} in K_I.
class KernelSpan {
 public:
  /// Checks that the points are interior and pairwise at least 1e-8 apart
  /// and that the kernel Gram matrix is positive semidefinite to -1e-10.
  KernelSpan(Symbol inner, std::vector<Complex> points, std::vector<Complex> coeffs);

  const Symbol& symbol() const { return inner_; }
  const std::vector<Complex>& points() const { return points_; }
  const std::vector<Complex>& coeffs() const { return coeffs_; }

  /// Value at a point of the closed disk.
  Complex operator()(Complex z) const;
  /// Geometric decay rate of the Taylor coefficients.
  double decay_rate() const;

 private:
  Symbol inner_;
  std::vector<Complex> points_;
  std::vector<Complex> coeffs_;
};

/// Smallest eigenvalue of the Hermitian kernel Gram matrix K(w_i, w_j).
double kernel_gram_min_eigenvalue(const Symbol& inner, std::span<const Complex> points);

/// U_alpha K_w: zeta -> (1 - alpha conj(I(w))) / (1 - zeta conj(w)).
CircleFunction unitary_apply(const Symbol& inner, Complex alpha, Complex w);
/// U_alpha applied to a kernel span.
CircleFunction unitary_apply(const KernelSpan& f, Complex alpha);

struct GramReport {
  int degree = 0;
  Complex alpha{};
  std::size_t basis = 0;
  double frobenius_residual = 0.0;
};

/// || G_unitary - G_kernel ||_F with the unitary Gram matrix computed on the
/// Clark atoms of (I, alpha).
GramReport gram_test(const Symbol& inner, Complex alpha, std::span<const Complex> points);

/// U_alpha^* f: z -> (1 - conj(alpha) I(z)) sum_j weight_j f(zeta_j) C(z, zeta_j).
CircleFunction adjoint_apply(const Symbol& inner, Complex alpha, const CircleFunction& f);

struct MembershipReport {
  bool member = false;
  std::size_t nodes = 0;
  /// Largest |c_k| over k <= 0.
  double max_nonpositive = 0.0;
  /// (index, coefficient) for indices -n/2 .. min(n/2 - 1, 16).
  std::vector<std::pair<int, Complex>> coefficients;
};

/// Membership in K_I^*: all DFT coefficients of index <= 0 of I conj(f) on
/// n circle nodes vanish within 1e-10. Throws InsufficientResolutionError
/// when n <= 2 (deg I + deg f) or when aliasing from the geometric tail of
/// the Fourier series could exceed 1e-12.
MembershipReport ksmall_member(const Symbol& inner, const Polynomial& f, std::size_t n);
MembershipReport ksmall_member(const KernelSpan& f, std::size_t n);
/// Generic handle: f holomorphic with Taylor coefficients O(decay^k) and a
/// polynomial part of degree at most `degree`.
MembershipReport ksmall_member(const Symbol& inner, const CircleFunction& f, int degree, double decay,
                               std::size_t n);

}  // namespace clarklab
