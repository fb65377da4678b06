#pragma once

#include <cstdint>
#include <vector>

#include "clarklab/clark.hpp"
#include "clarklab/counting.hpp"
#include "clarklab/geometry.hpp"
#include "clarklab/quadrature.hpp"
#include "clarklab/symbol.hpp"

namespace clarklab {

struct EssNormConfig {
  std::size_t alpha_nodes = 256;
  /// Boundary values within this distance of T propose extra alpha nodes.
  double contact_threshold = 5e-3;
  std::size_t max_inserted = 32;
  /// d = 1 grid used to locate near-contact boundary values.
  std::size_t contact_grid = 1 << 14;
  std::vector<double> radii{0.9, 0.99, 0.999, 0.9999};
  std::size_t angular_nodes = 512;
  /// d >= 2: directions for the counting estimator.
  std::size_t counting_directions = 1024;
  /// Shared by all three estimators.
  std::uint64_t seed = 0;
  /// d >= 2 sphere plan for the measure estimators; d = 1 uses adaptive rules.
  ClarkOptions clark;

  static EssNormConfig defaults(int dim, std::uint64_t seed = 0);
};

struct AlphaMass {
  Complex alpha{};
  Estimate singular;
  bool inserted = false;  // added by the contact search
};

struct BhatSigma {
  Estimate value;
  Complex argmax{};
  std::vector<AlphaMass> per_alpha;
};

struct LowerBoundLadder {
  Complex alpha{};
  std::vector<double> radii;
  std::vector<Estimate> values;
  /// Value at the largest radius.
  Estimate raw;
  /// Quadratic extrapolation in 1 - r to r = 1 from the last three radii.
  Estimate limit;
  /// |quadratic - linear extrapolation|, a truncation error estimate.
  double truncation = 0.0;
};

struct EssNormReport {
  BhatSigma bhat_sigma;
  LimsupEstimate bhat_N;
  /// sup over alpha of the extrapolated radial limits.
  Estimate lower_bound;
  /// sup over alpha of the values at the largest radius.
  double lower_bound_raw = 0.0;
  /// Truncation estimate of the ladder attaining lower_bound; part of tol_lower.
  double lower_truncation = 0.0;
  std::vector<LowerBoundLadder> lower_ladders;
  double tol_lower = 0.0;
  double tol_counting = 0.0;
  /// bhat_sigma + tol_lower - lower_bound.
  double margin_lower = 0.0;
  /// band + tol_counting - |bhat_N - bhat_sigma|.
  double margin_counting = 0.0;
  bool consistent = false;
};

/// Uniform alpha nodes plus contact candidates: local maxima of |phi| on the
/// boundary above 1 - contact_threshold, refined and clustered.
std::vector<AlphaMass> alpha_grid(const Symbol& phi, const EssNormConfig& config);

BhatSigma bhat_sigma(const Symbol& phi, const EssNormConfig& config);

/// Radial ladder of integral (1 - r^2) / |alpha - r phi|^2 d sigma_d.
LowerBoundLadder testfn_lower_bound(const Symbol& phi, Complex alpha, const EssNormConfig& config);

EssNormReport essential_norm_report(const Symbol& phi, const EssNormConfig& config);

/// Lagrange extrapolation to t = 0 through the points (t_i, v_i).
Estimate extrapolate_to_zero(std::span<const double> t, std::span<const Estimate> v);

}  // namespace clarklab
