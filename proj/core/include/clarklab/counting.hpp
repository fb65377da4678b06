#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "clarklab/geometry.hpp"
#include "clarklab/polynomial.hpp"
#include "clarklab/quadrature.hpp"
#include "clarklab/symbol.hpp"

namespace clarklab {

/// N_{phi_zeta}(w) with the preimages found.
struct CountingSample {
  Complex w{};
  double value = 0.0;
  std::vector<ClusteredRoot> roots;
};

/// Counting function of the slice lambda -> phi(lambda zeta) at w. Roots of
/// p - w q with |z| < 1 - 1e-12 are kept and clustered at 1e-6.
/// Throws ConstantSliceError, ExcludedTargetError (|w - phi(0)| < 1e-12) and
/// RootSolveError (a kept root with |phi_zeta(z) - w| > 1e-8).
CountingSample slice_counting(const Symbol& phi, std::span<const Complex> zeta, Complex w);
CountingSample slice_counting(const Symbol& phi, const SpherePoint& zeta, Complex w);

struct IntegratedCounting {
  Estimate value;
  std::size_t slices = 0;
  std::size_t skipped = 0;
};

/// Rational slices of phi along the directions of a plan. Counting functions
/// do not change when the slice variable is rotated, so one slice per
/// direction suffices; d = 1 uses the single slice zeta = 1.
class SliceFamily {
 public:
  SliceFamily(const Symbol& phi, const SphereSamplePlan& plan);

  std::size_t size() const { return slices_.size(); }
  bool deterministic() const { return deterministic_; }
  Complex center() const { return center_; }
  std::span<const Complex> direction(std::size_t j) const;
  bool constant(std::size_t j) const { return slices_[j].constant; }
  const Polynomial& numerator(std::size_t j) const { return slices_[j].p; }
  const Polynomial& denominator(std::size_t j) const { return slices_[j].q; }

  /// N of slice j at w. Constant slices give 0 (w differs from their value).
  double counting(std::size_t j, Complex w) const;

  /// Average over the slices. Slices whose root solve fails are skipped; more
  /// than 0.1% skipped raises RootSolveError.
  IntegratedCounting integrate(Complex w) const;

 private:
  struct Slice {
    Polynomial p;
    Polynomial q;
    bool constant = false;
  };
  int dim_ = 1;
  bool deterministic_ = true;
  Complex center_{};
  std::vector<Complex> directions_;
  std::vector<Slice> slices_;
};

/// integral over the sphere of N_{phi_zeta}(w).
IntegratedCounting integrated_counting(const Symbol& phi, Complex w, const SphereSamplePlan& plan);

/// Jensen majorant: mean of log|psi_w(phi_zeta)| on the circle plus
/// log(1 / |psi_w(phi_zeta(0))|). The circle rule starts at `circle_nodes`
/// and doubles until stable.
double majorant(const Symbol& phi, std::span<const Complex> zeta, Complex w,
                std::size_t circle_nodes = 256);

struct StantonOptions {
  std::size_t directions = 128;  // d >= 2
  std::uint64_t seed = 0;
  std::size_t angles = 128;
  double radial_tol = 1e-11;
};

struct StantonResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  /// Standard error of lhs - rhs across directions.
  double se = 0.0;
  std::size_t slices = 0;
};

/// lhs = integral |f(phi)|^2 d sigma_d; rhs = |f(phi(0))|^2 plus twice the
/// area integral of |f'(w)|^2 times the integrated counting function. The
/// area integral uses polar coordinates about phi(0) (adaptive Gauss-Kronrod
/// in the radius, trapezoid in the angle) and is paired with lhs slice by
/// slice.
std::vector<StantonResult> stanton_check(std::span<const Polynomial> fs, const Symbol& phi,
                                         const StantonOptions& options = {});
StantonResult stanton_check(const Polynomial& f, const Symbol& phi, const StantonOptions& options = {});

struct LimsupEstimate {
  std::vector<double> radii;
  std::vector<double> sup_values;
  std::vector<double> sup_se;
  std::vector<double> argmax_angle;
  /// Value at the largest radius.
  double estimate = 0.0;
  /// Range of the values over the last three radii.
  double band_lo = 0.0;
  double band_hi = 0.0;
};

struct BhatNOptions {
  std::vector<double> radii{0.9, 0.99, 0.999, 0.9999};
  std::size_t angular_nodes = 512;
  /// d >= 2: only dim, the group count (directions) and seed are used.
  SphereSamplePlan plan = SphereSamplePlan::slice_product(2, 1024, 1, 0);
};

/// Per radius r: sup over angular nodes w = r e^{i theta} of
/// integrated_counting(phi, w) / (1 - r).
LimsupEstimate bhat_N(const Symbol& phi, const BhatNOptions& options = {});

}  // namespace clarklab
