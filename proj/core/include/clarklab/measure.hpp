#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "clarklab/geometry.hpp"
#include "clarklab/quadrature.hpp"
#include "clarklab/symbol.hpp"

namespace clarklab {

struct MeasureAtom {
  std::vector<Complex> point;  // on the unit sphere
  Complex weight{};
};

/// Serializable description of a density. The callable is rebuilt from the
/// tag and parameters when a measure is read back from JSON.
struct DensityTag {
  std::string kind = "custom";  // uniform | constant | clark_ac | custom
  double constant = 1.0;
  std::shared_ptr<const Symbol> symbol;  // clark_ac
  Complex alpha{1.0, 0.0};  // clark_ac: the Clark parameter
};

struct Density {
  RealBoundaryFunction fn;
  SphereSamplePlan plan;
  DensityTag tag;
  /// d = 1 only: integrate with nested trapezoid doubling starting from
  /// plan.circle_nodes instead of a fixed rule.
  bool adaptive = false;
  std::size_t max_nodes = std::size_t{1} << 22;
};

/// A measure on the sphere: finite atomic part plus an optional density
/// with respect to sigma_d.
class MeasureRep {
 public:
  MeasureRep(int dim, std::vector<MeasureAtom> atoms, std::optional<Density> density,
             bool positive);

  static MeasureRep atoms_only(int dim, std::vector<MeasureAtom> atoms, bool positive = true);
  /// sigma_d itself (density 1).
  static MeasureRep uniform(const SphereSamplePlan& plan);
  static MeasureRep with_density(Density density, std::vector<MeasureAtom> atoms = {},
                                 bool positive = true);

  int dim() const { return dim_; }
  bool positive() const { return positive_; }
  const std::vector<MeasureAtom>& atoms() const { return atoms_; }
  const std::optional<Density>& density() const { return density_; }

 private:
  int dim_;
  std::vector<MeasureAtom> atoms_;
  std::optional<Density> density_;
  bool positive_;
};

/// Sum of atom weights plus the density quadrature.
ComplexEstimate total_mass(const MeasureRep& mu);

/// integral of f d mu. Failures of f at an atom are reported as
/// ExceptionalPointError (collision with f's exceptional set).
ComplexEstimate integrate(const MeasureRep& mu, const BoundaryFunction& f);

/// Invariant Poisson integral P[mu](z).
ComplexEstimate poisson_integral(const MeasureRep& mu, const BallPoint& z);
/// mu_+(z) = integral C(z, zeta) d mu(zeta).
ComplexEstimate cauchy_plus(const MeasureRep& mu, const BallPoint& z);
/// mu_-(z) = integral (C(zeta, z) - 1) d mu(zeta).
ComplexEstimate cauchy_minus(const MeasureRep& mu, const BallPoint& z);

/// Weighted boundary samples of a nonnegative function, e.g. |mu_+|.
struct TailSamples {
  std::vector<double> values;
  std::vector<double> weights;
  /// Random samples: the standard error is binomial. Otherwise the samples
  /// are an ordered grid on the circle and the reported error is the total
  /// weight of cells whose neighbour lies on the other side of y.
  bool random = true;
};

/// sigma_d-measure of {|mu_+| > y}.
Estimate distribution_tail(const TailSamples& samples, double y);

/// Builds an ordered circle grid for g(theta) = |mu_+(e^{i theta})|: a
/// uniform midpoint grid of `coarse` cells whose cells near a level crossing
/// of any threshold in `levels` (or at a local maximum above the smallest
/// level) are split `split` ways, `passes` times.
TailSamples refined_circle_tail_grid(const std::function<double(double)>& g,
                                     std::span<const double> levels, std::size_t coarse = 1 << 16,
                                     std::size_t split = 64, int passes = 3);

}  // namespace clarklab
