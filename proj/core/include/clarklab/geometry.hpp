#pragma once

#include <complex>
#include <span>
#include <vector>

namespace clarklab {

using Complex = std::complex<double>;

/// A Monte Carlo or quadrature estimate with its 1-sigma standard error.
/// Deterministic quadratures report se = 0.
struct Estimate {
  double value = 0.0;
  double se = 0.0;
};

struct ComplexEstimate {
  Complex value{};
  double se = 0.0;
};

inline constexpr double kBallMargin = 1e-12;
inline constexpr double kSphereTolerance = 1e-12;
inline constexpr double kKernelCutoff = 1e-14;

/// Hermitian inner product, conjugate-linear in the second argument.
Complex inner(std::span<const Complex> z, std::span<const Complex> w);
double norm_squared(std::span<const Complex> z);

/// A point of the open unit ball B_d, kept at least kBallMargin inside.
class BallPoint {
 public:
  explicit BallPoint(std::vector<Complex> coords);
  BallPoint(std::initializer_list<Complex> coords)
      : BallPoint(std::vector<Complex>(coords)) {}

  std::span<const Complex> coords() const { return coords_; }
  int dim() const { return static_cast<int>(coords_.size()); }
  const Complex& operator[](int i) const { return coords_[i]; }

 private:
  std::vector<Complex> coords_;
};

/// A point of the unit sphere S^{2d-1}.
class SpherePoint {
 public:
  explicit SpherePoint(std::vector<Complex> coords);
  SpherePoint(std::initializer_list<Complex> coords)
      : SpherePoint(std::vector<Complex>(coords)) {}

  /// Normalizes a nonzero vector onto the sphere.
  static SpherePoint normalized(std::vector<Complex> coords);

  std::span<const Complex> coords() const { return coords_; }
  int dim() const { return static_cast<int>(coords_.size()); }
  const Complex& operator[](int i) const { return coords_[i]; }

 private:
  std::vector<Complex> coords_;
};

/// C(z, w) = (1 - <z, w>)^{-d}. Arguments may be interior or boundary points.
Complex cauchy_kernel(std::span<const Complex> z, std::span<const Complex> w);
Complex cauchy_kernel(const BallPoint& z, const SpherePoint& zeta);
Complex cauchy_kernel(const SpherePoint& zeta, const BallPoint& z);
Complex cauchy_kernel(const BallPoint& z, const BallPoint& w);

/// Invariant Poisson kernel ((1 - |z|^2) / |1 - <z, zeta>|^2)^d.
double poisson_kernel(std::span<const Complex> z, std::span<const Complex> zeta);
double poisson_kernel(const BallPoint& z, const SpherePoint& zeta);

}  // namespace clarklab
