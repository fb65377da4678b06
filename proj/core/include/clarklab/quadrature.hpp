#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "clarklab/geometry.hpp"

namespace clarklab {

/// Roots of unity e^{2 pi i k / n} with uniform weights 1/n.
struct CircleNodes {
  std::vector<Complex> nodes;
  double weight = 0.0;

  std::size_t size() const { return nodes.size(); }
};

CircleNodes circle_nodes(std::size_t n);

enum class SampleMode { kMonteCarlo, kSliceProduct };

/// How the normalized surface measure sigma_d is sampled.
///
/// Monte Carlo mode draws sample_count Gaussian-normalized points. Slice-product
/// mode draws `directions` random points zeta_j and integrates each slice
/// circle {e^{i t} zeta_j} with `circle_nodes` equispaced nodes, so
/// directions * circle_nodes == sample_count. Standard errors are computed
/// across independent groups (single points, or whole slice circles).
///
/// For d = 1 the slice-product plan is a single deterministic midpoint
/// trapezoid rule with nodes e^{i pi (2k+1)/n} and reports se = 0.
struct SphereSamplePlan {
  int dim = 1;
  std::size_t sample_count = 0;
  std::uint64_t seed = 0;
  SampleMode mode = SampleMode::kSliceProduct;
  std::size_t directions = 1;
  std::size_t circle_nodes = 0;

  static SphereSamplePlan monte_carlo(int dim, std::size_t samples, std::uint64_t seed = 0);
  static SphereSamplePlan slice_product(int dim, std::size_t directions, std::size_t circle_nodes,
                                        std::uint64_t seed = 0);
  /// The 1-D trapezoid rule with n nodes.
  static SphereSamplePlan circle(std::size_t n) { return slice_product(1, 1, n, 0); }

  std::size_t group_count() const;
  std::size_t group_size() const;
  bool deterministic() const { return dim == 1 && mode == SampleMode::kSliceProduct; }
  /// Throws InvalidArgumentError when the plan is inconsistent.
  void validate() const;
};

/// The sphere points of a plan in node order (group-major).
std::vector<SpherePoint> sample_sphere(const SphereSamplePlan& plan);

/// Flat coordinates of every node: node i occupies [i*d, (i+1)*d).
std::vector<Complex> sample_coordinates(const SphereSamplePlan& plan);

/// Random directions used by a plan (d >= 2 slice-product or Monte Carlo
/// points), flat as in sample_coordinates. Deterministic per (seed, index).
std::vector<Complex> sample_directions(int dim, std::size_t count, std::uint64_t seed);

using BoundaryFunction = std::function<Complex(std::span<const Complex> zeta)>;
using RealBoundaryFunction = std::function<double(std::span<const Complex> zeta)>;
/// Writes `width` real outputs for the node at `zeta`.
using VectorBoundaryFunction =
    std::function<void(std::span<const Complex> zeta, std::span<double> out)>;
/// Writes `width` real outputs for node index `node` of a plan.
using IndexedNodeFunction = std::function<void(std::size_t node, std::span<double> out)>;

/// Integrates f against sigma_d using the plan. Evaluation failures are
/// rethrown with the offending point in the message.
ComplexEstimate slice_integrate(const BoundaryFunction& f, const SphereSamplePlan& plan);
Estimate slice_integrate_real(const RealBoundaryFunction& f, const SphereSamplePlan& plan);
std::vector<Estimate> slice_integrate_vector(const VectorBoundaryFunction& f, std::size_t width,
                                             const SphereSamplePlan& plan);

/// Same reduction, driven by node index; used with cached boundary values.
std::vector<Estimate> reduce_over_nodes(const IndexedNodeFunction& f, std::size_t width,
                                        const SphereSamplePlan& plan);

struct AdaptiveCircleOptions {
  std::size_t initial_nodes = 256;
  std::size_t max_nodes = std::size_t{1} << 22;
  double abs_tol = 1e-14;
  double rel_tol = 1e-13;
};

struct AdaptiveCircleResult {
  Complex value{};
  std::size_t nodes = 0;
  bool converged = false;
};

/// Trapezoid rule on T with nested doubling until successive values agree.
/// Nodes are rotated by a fixed irrational offset so they avoid +-1 and
/// other rational angles.
AdaptiveCircleResult integrate_circle_adaptive(const std::function<Complex(Complex)>& f,
                                               const AdaptiveCircleOptions& options = {});

/// Adaptive Gauss-Kronrod (7/15) on [a, b] with absolute tolerance.
struct GaussKronrodResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t evaluations = 0;
};
GaussKronrodResult integrate_gauss_kronrod(const std::function<double(double)>& f, double a,
                                           double b, double abs_tol = 1e-12, int max_depth = 40);

/// Vector-valued variant: every component shares the subdivision, which is
/// refined until the largest component error meets the tolerance.
using VectorFunction1D = std::function<void(double x, std::span<double> out)>;
struct GaussKronrodVectorResult {
  std::vector<double> value;
  double error = 0.0;
  std::size_t evaluations = 0;
};
GaussKronrodVectorResult integrate_gauss_kronrod_vector(const VectorFunction1D& f,
                                                        std::size_t width, double a, double b,
                                                        double abs_tol = 1e-12, int max_depth = 40);

/// Mean and standard error of independent group values.
Estimate group_estimate(std::span<const double> group_values, bool deterministic);

}  // namespace clarklab
