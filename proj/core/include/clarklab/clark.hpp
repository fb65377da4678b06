#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "clarklab/geometry.hpp"
#include "clarklab/measure.hpp"
#include "clarklab/quadrature.hpp"
#include "clarklab/symbol.hpp"

namespace clarklab {

/// Degree cap for the exact atomic path of finite Blaschke products.
inline constexpr int kMaxAtomicDegree = 16;

struct ClarkAtom {
  Complex point{};  // on T
  double weight = 0.0;
};

/// Quadrature settings for the absolutely continuous part.
struct ClarkOptions {
  /// d >= 2: the sphere plan. d = 1: only circle_nodes is used, as the
  /// starting size of the adaptive trapezoid rule.
  SphereSamplePlan plan = SphereSamplePlan::circle(256);
  std::size_t max_circle_nodes = std::size_t{1} << 22;

  static ClarkOptions defaults(int dim, std::uint64_t seed = 0);
};

/// Clark measure data sigma_alpha[phi].
struct ClarkData {
  Complex alpha{1.0, 0.0};
  double total_mass = 0.0;
  Estimate ac_mass;
  /// total_mass - ac_mass; the standard error is that of ac_mass.
  Estimate singular_mass;
  /// d = 1 rational symbols: the boundary points with phi(zeta) = alpha and
  /// their weights 1 / |phi'(zeta)| (all of sigma_alpha^s).
  std::optional<std::vector<ClarkAtom>> atoms;
  /// Number of circle nodes used by the d = 1 adaptive rule (0 for d >= 2).
  std::size_t circle_nodes_used = 0;
  bool quadrature_converged = true;
  std::vector<std::string> warnings;
};

double clark_total_mass(const Symbol& phi, Complex alpha);

/// (1 - |phi(zeta)|^2) / |alpha - phi(zeta)|^2; zero for inner symbols.
/// Throws ContactPointError when |phi(zeta) - alpha| < 1e-12.
double clark_ac_density(const Symbol& phi, Complex alpha, std::span<const Complex> zeta);
double clark_ac_density(const Symbol& phi, Complex alpha, const SpherePoint& zeta);

/// Absolutely continuous mass: adaptive trapezoid for d = 1, the options'
/// sphere plan otherwise. Reports whether the d = 1 rule converged.
Estimate clark_ac_mass(const Symbol& phi, Complex alpha, const ClarkOptions& options,
                       std::size_t* nodes_used = nullptr, bool* converged = nullptr);

/// Singular mass by the mass budget: total - ac.
Estimate clark_singular_mass(const Symbol& phi, Complex alpha, const ClarkOptions& options);

/// Exact Clark atoms of a finite Blaschke product of degree 1..16.
/// Throws RootOffCircleError if a solution of phi = alpha leaves T by more
/// than 1e-8; clustered roots (closer than 1e-6) add a warning.
std::vector<ClarkAtom> clark_atoms_d1(const Symbol& phi, Complex alpha,
                                      std::vector<std::string>* warnings = nullptr);

/// Boundary contact atoms of a d = 1 rational symbol: the solutions of
/// phi(zeta) = alpha on T with weights 1 / |phi'(zeta)|.
std::vector<ClarkAtom> clark_contact_atoms(const Symbol& phi, Complex alpha);

ClarkData clark_data(const Symbol& phi, Complex alpha, const ClarkOptions& options);

/// The a.c. density of sigma_alpha with a clark_ac tag. For d = 1 the plan
/// gives the starting size of the adaptive rule.
Density make_clark_density(const Symbol& phi, Complex alpha, const SphereSamplePlan& plan,
                           std::size_t max_circle_nodes = std::size_t{1} << 22);

/// The measure sigma_alpha as atoms (if known) plus the a.c. density.
MeasureRep clark_measure(const Symbol& phi, const ClarkData& data, const ClarkOptions& options);

/// Number of circle nodes needed to resolve integrands with poles where
/// phi = target (d = 1 rational symbols); 4096 otherwise.
std::size_t circle_resolution(const Symbol& phi, Complex target, std::size_t max_nodes);

struct ResidualReport {
  double max_residual = 0.0;
  /// Standard error of the estimate at the point of the maximum residual.
  double se = 0.0;
  /// max residual / se over points with se > 0 (0 when every se is 0).
  double max_sigma = 0.0;
  std::vector<double> residuals;
};

/// max |P[sigma_alpha](z) - Re((alpha + phi(z)) / (alpha - phi(z)))|.
ResidualReport verify_herglotz(const Symbol& phi, Complex alpha, const ClarkData& data,
                               std::span<const BallPoint> points, const ClarkOptions& options);

/// max residual of the double Cauchy integral identity over (z, w) pairs.
ResidualReport verify_double_cauchy(const Symbol& phi, Complex alpha, const ClarkData& data,
                                    std::span<const std::pair<BallPoint, BallPoint>> pairs,
                                    const ClarkOptions& options);

/// Right-hand side of the double Cauchy identity.
Complex double_cauchy_closed_form(const Symbol& phi, Complex alpha, const BallPoint& z,
                                  const BallPoint& w);

/// 1 / (1 - conj(alpha) phi(z)) + alpha conj(phi(0)) / (1 - alpha conj(phi(0))).
Complex cauchy_plus_closed_form(const Symbol& phi, Complex alpha, std::span<const Complex> z);
Complex cauchy_plus_closed_form(const Symbol& phi, Complex alpha, const BallPoint& z);

struct DisintegrationResult {
  Complex lhs{};
  Complex rhs{};
  double residual = 0.0;
  /// Standard error of lhs - rhs.
  double se = 0.0;
  std::size_t alpha_nodes = 0;
  std::vector<std::string> warnings;
};

/// lhs = (1/n) sum_k integral f d sigma_{alpha_k} over the n-th roots of
/// unity; rhs = integral f d sigma_d.
DisintegrationResult disintegration_check(const Symbol& phi, const BoundaryFunction& f,
                                          std::size_t alpha_nodes, const ClarkOptions& options);
/// Several test functions sharing one pass over the nodes.
std::vector<DisintegrationResult> disintegration_check(const Symbol& phi,
                                                       std::span<const BoundaryFunction> fs,
                                                       std::size_t alpha_nodes,
                                                       const ClarkOptions& options);

struct PoltoratskiRow {
  double y = 0.0;
  Estimate tail;
  double scaled = 0.0;  // pi * y * tail
  double scaled_se = 0.0;
};

struct PoltoratskiTable {
  Complex alpha{};
  double singular_mass = 0.0;
  double singular_mass_se = 0.0;
  std::size_t samples = 0;
  std::vector<PoltoratskiRow> rows;
};

struct PoltoratskiOptions {
  std::size_t coarse_cells = std::size_t{1} << 16;  // d = 1 grid
  std::size_t split = 64;
  int passes = 3;
  SphereSamplePlan plan = SphereSamplePlan::monte_carlo(2, 1000000, 0);  // d >= 2
};

/// Distribution of |mu_+| on the boundary for mu = sigma_alpha, where the
/// boundary values of mu_+ come from the closed form and boundary_eval(phi).
PoltoratskiTable poltoratski_check(const Symbol& phi, Complex alpha, std::span<const double> y_grid,
                                   const PoltoratskiOptions& options,
                                   const ClarkOptions& clark_options);

/// Boundary values of phi on a sphere plan, cached for repeated use over an
/// alpha grid.
class BoundaryCache {
 public:
  BoundaryCache(const Symbol& phi, const SphereSamplePlan& plan);

  const SphereSamplePlan& plan() const { return plan_; }
  std::span<const Complex> values() const { return values_; }
  std::span<const Complex> points() const { return points_; }

  /// a.c. mass of sigma_alpha from cached values.
  Estimate ac_mass(Complex alpha) const;

 private:
  SphereSamplePlan plan_;
  std::vector<Complex> points_;
  std::vector<Complex> values_;
};

}  // namespace clarklab
