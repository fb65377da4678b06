#include "clarklab/counting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "clarklab/clark.hpp"
#include "clarklab/errors.hpp"
#include "clarklab/parallel.hpp"

namespace clarklab {

namespace {

constexpr double kExcludedTol = 1e-12;
constexpr double kKeepRadius = 1.0 - 1e-12;
constexpr double kResidualTol = 1e-8;

bool is_constant_ratio(const Polynomial& p, const Polynomial& q) {
  const Polynomial r = p * q(0.0) - q * p(0.0);
  double scale = 0.0;
  for (const Complex& c : p.coeffs()) scale = std::max(scale, std::abs(c));
  for (const Complex& c : q.coeffs()) scale = std::max(scale, std::abs(c));
  for (const Complex& c : r.coeffs()) {
    if (std::abs(c) > 1e-14 * scale * scale) return false;
  }
  return true;
}

RationalForm slice_form(const Symbol& phi, std::span<const Complex> zeta) {
  const Symbol s = phi.slice(zeta);
  auto form = s.rational_form();
  if (!form) throw InvalidArgumentError("counting", "slice has no rational form (singular inner factor)");
  return *form;
}

// Kept roots of p - w q; checks the residual of each.
std::vector<Complex> kept_roots(const Polynomial& p, const Polynomial& q, Complex w) {
  const Polynomial level = p - w * q;
  std::vector<Complex> kept;
  if (level.degree() < 1) return kept;
  for (Complex z : polynomial_roots(level)) {
    if (!(std::abs(z) < kKeepRadius)) continue;
    const double res = std::abs(p(z) / q(z) - w);
    if (!(res <= kResidualTol)) {
      std::ostringstream os;
      os << "root " << z << " has residual " << res;
      throw RootSolveError("slice_counting", os.str());
    }
    kept.push_back(z);
  }
  return kept;
}

double log_sum(std::span<const Complex> roots) {
  double n = 0.0;
  for (const Complex& z : roots) n -= std::log(std::abs(z));
  return n;
}

}  // namespace

CountingSample slice_counting(const Symbol& phi, std::span<const Complex> zeta, Complex w) {
  SpherePoint check{std::vector<Complex>(zeta.begin(), zeta.end())};
  if (check.dim() != phi.dim()) throw InvalidArgumentError("slice_counting", "direction dimension mismatch");
  if (!(std::abs(w) < 1.0)) throw InvalidArgumentError("slice_counting", "target must lie in the open disk");
  const RationalForm form = slice_form(phi, zeta);
  if (is_constant_ratio(form.numerator, form.denominator)) {
    throw ConstantSliceError("slice_counting", "slice is constant; N is undefined");
  }
  const Complex c = form.numerator(0.0) / form.denominator(0.0);
  if (std::abs(w - c) < kExcludedTol) throw ExcludedTargetError("slice_counting", "w equals phi_zeta(0)");
  const auto kept = kept_roots(form.numerator, form.denominator, w);
  CountingSample s;
  s.w = w;
  s.roots = cluster_roots(kept, 1e-6);
  for (const auto& r : s.roots) s.value += r.multiplicity * -std::log(std::abs(r.z));
  return s;
}

CountingSample slice_counting(const Symbol& phi, const SpherePoint& zeta, Complex w) {
  return slice_counting(phi, zeta.coords(), w);
}

SliceFamily::SliceFamily(const Symbol& phi, const SphereSamplePlan& plan) : dim_(phi.dim()) {
  center_ = phi.value_at_origin();
  if (dim_ == 1) {
    deterministic_ = true;
    directions_ = {Complex(1.0, 0.0)};
  } else {
    plan.validate();
    if (plan.dim != dim_) throw InvalidArgumentError("SliceFamily", "plan dimension mismatch");
    deterministic_ = false;
    directions_ = sample_directions(dim_, plan.group_count(), plan.seed);
  }
  const std::size_t n = directions_.size() / static_cast<std::size_t>(dim_);
  slices_.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const RationalForm form = slice_form(phi, direction(j));
    slices_[j].p = form.numerator;
    slices_[j].q = form.denominator;
    slices_[j].constant = is_constant_ratio(form.numerator, form.denominator);
  }
}

std::span<const Complex> SliceFamily::direction(std::size_t j) const {
  const std::size_t d = static_cast<std::size_t>(dim_);
  return {directions_.data() + j * d, d};
}

double SliceFamily::counting(std::size_t j, Complex w) const {
  if (std::abs(w - center_) < kExcludedTol) throw ExcludedTargetError("counting", "w equals phi(0)");
  const Slice& s = slices_[j];
  if (s.constant) return 0.0;
  const auto kept = kept_roots(s.p, s.q, w);
  return log_sum(kept);
}

IntegratedCounting SliceFamily::integrate(Complex w) const {
  const std::size_t n = slices_.size();
  std::vector<double> values(n, 0.0);
  std::vector<char> ok(n, 1);
  if (std::abs(w - center_) < kExcludedTol) throw ExcludedTargetError("integrated_counting", "w equals phi(0)");
  for (std::size_t j = 0; j < n; ++j) {
    try {
      values[j] = counting(j, w);
    } catch (const RootSolveError&) {
      ok[j] = 0;
    }
  }
  IntegratedCounting out;
  out.slices = n;
  std::vector<double> good;
  good.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    if (ok[j]) good.push_back(values[j]);
  }
  out.skipped = n - good.size();
  if (static_cast<double>(out.skipped) > 1e-3 * static_cast<double>(n)) {
    throw RootSolveError("integrated_counting", std::to_string(out.skipped) + " of " + std::to_string(n) +
                                                    " slices failed the root solve");
  }
  if (good.empty()) throw RootSolveError("integrated_counting", "no slice could be solved");
  out.value = group_estimate(good, deterministic_);
  return out;
}

IntegratedCounting integrated_counting(const Symbol& phi, Complex w, const SphereSamplePlan& plan) {
  if (!(std::abs(w) < 1.0)) throw InvalidArgumentError("integrated_counting", "target must lie in the open disk");
  return SliceFamily(phi, plan).integrate(w);
}

double majorant(const Symbol& phi, std::span<const Complex> zeta, Complex w, std::size_t circle_nodes) {
  if (!(std::abs(w) < 1.0)) throw InvalidArgumentError("majorant", "target must lie in the open disk");
  const Symbol s = phi.slice(zeta);
  const Complex c = s.value_at_origin();
  if (std::abs(w - c) < kExcludedTol) throw ExcludedTargetError("majorant", "w equals phi_zeta(0)");
  auto psi = [w](Complex l) { return (w - l) / (1.0 - std::conj(w) * l); };
  AdaptiveCircleOptions opts;
  opts.initial_nodes = std::max(circle_nodes, circle_resolution(s, w, opts.max_nodes));
  const auto r = integrate_circle_adaptive(
      [&](Complex xi) {
        const std::span<const Complex> p(&xi, 1);
        if (s.is_exceptional(p)) return Complex{};
        return Complex(std::log(std::abs(psi(s.boundary_eval(p)))), 0.0);
      },
      opts);
  return r.value.real() - std::log(std::abs(psi(c)));
}

std::vector<StantonResult> stanton_check(std::span<const Polynomial> fs, const Symbol& phi,
                                         const StantonOptions& options) {
  if (options.angles < 1) throw InvalidArgumentError("stanton_check", "need at least one angle");
  const std::size_t nf = fs.size();
  const SphereSamplePlan plan = phi.dim() == 1
                                    ? SphereSamplePlan::circle(1)
                                    : SphereSamplePlan::slice_product(phi.dim(), options.directions, 1, options.seed);
  const SliceFamily family(phi, plan);
  const std::size_t m = family.size();
  const Complex c = family.center();
  std::vector<Polynomial> dfs;
  for (const auto& f : fs) dfs.push_back(f.derivative());

  // Per slice, per f: lhs_j and rhs_j.
  std::vector<double> lhs(m * nf, 0.0), rhs(m * nf, 0.0);
  const double angle_step = 2.0 * std::numbers::pi / static_cast<double>(options.angles);

  parallel_for(m, [&](std::size_t j) {
    const Polynomial& p = family.numerator(j);
    const Polynomial& q = family.denominator(j);
    for (std::size_t k = 0; k < nf; ++k) {
      AdaptiveCircleOptions opts;
      const auto r = integrate_circle_adaptive(
          [&](Complex xi) { return Complex(std::norm(fs[k](p(xi) / q(xi))), 0.0); }, opts);
      lhs[j * nf + k] = r.value.real();
      rhs[j * nf + k] = std::norm(fs[k](c));
    }
    if (family.constant(j) || nf == 0) return;
    std::vector<double> area(nf, 0.0);
    for (std::size_t a = 0; a < options.angles; ++a) {
      const Complex dir = std::polar(1.0, angle_step * static_cast<double>(a));
      const double b = (std::conj(c) * dir).real();
      const double radius = -b + std::sqrt(b * b + 1.0 - std::norm(c));
      const auto g = integrate_gauss_kronrod_vector(
          [&](double rho, std::span<double> out) {
            const Complex w = c + rho * dir;
            double n = 0.0;
            if (std::abs(w - c) >= kExcludedTol && std::abs(w) < 1.0) n = family.counting(j, w);
            for (std::size_t k = 0; k < nf; ++k) out[k] = std::norm(dfs[k](w)) * n * rho;
          },
          nf, 0.0, radius, options.radial_tol);
      for (std::size_t k = 0; k < nf; ++k) area[k] += g.value[k];
    }
    // Normalized area measure dA / pi, doubled.
    for (std::size_t k = 0; k < nf; ++k) rhs[j * nf + k] += 2.0 * area[k] * angle_step / std::numbers::pi;
  });

  std::vector<StantonResult> out(nf);
  for (std::size_t k = 0; k < nf; ++k) {
    std::vector<double> l(m), r(m), d(m);
    for (std::size_t j = 0; j < m; ++j) {
      l[j] = lhs[j * nf + k];
      r[j] = rhs[j * nf + k];
      d[j] = l[j] - r[j];
    }
    const bool det = family.deterministic();
    out[k].lhs = group_estimate(l, det).value;
    out[k].rhs = group_estimate(r, det).value;
    const Estimate diff = group_estimate(d, det);
    out[k].residual = std::abs(diff.value);
    out[k].se = diff.se;
    out[k].slices = m;
  }
  return out;
}

StantonResult stanton_check(const Polynomial& f, const Symbol& phi, const StantonOptions& options) {
  return stanton_check(std::span<const Polynomial>(&f, 1), phi, options).front();
}

LimsupEstimate bhat_N(const Symbol& phi, const BhatNOptions& options) {
  const auto& radii = options.radii;
  if (radii.empty() || options.angular_nodes == 0) throw InvalidArgumentError("bhat_N", "grids must be nonempty");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0) || radii[i] > 1.0 - 1e-6) {
      throw InvalidArgumentError("bhat_N", "radii must lie in (0, 1 - 1e-6]");
    }
    if (i > 0 && !(radii[i] > radii[i - 1])) throw InvalidArgumentError("bhat_N", "radii must increase");
  }
  SphereSamplePlan plan = options.plan;
  if (phi.dim() == 1) {
    plan = SphereSamplePlan::circle(1);
  } else {
    plan.dim = phi.dim();
  }
  const SliceFamily family(phi, plan);

  LimsupEstimate est;
  est.radii = radii;
  const std::size_t na = options.angular_nodes;
  for (double r : radii) {
    std::vector<Estimate> vals(na);
    std::vector<char> valid(na, 1);
    parallel_for(na, [&](std::size_t a) {
      const Complex w = std::polar(r, 2.0 * std::numbers::pi * static_cast<double>(a) / static_cast<double>(na));
      if (std::abs(w - family.center()) < kExcludedTol) {
        valid[a] = 0;
        return;
      }
      vals[a] = family.integrate(w).value;
    });
    double best = 0.0, best_se = 0.0, best_angle = 0.0;
    bool any = false;
    for (std::size_t a = 0; a < na; ++a) {
      if (!valid[a]) continue;
      const double ratio = vals[a].value / (1.0 - r);
      if (!any || ratio > best) {
        best = ratio;
        best_se = vals[a].se / (1.0 - r);
        best_angle = 2.0 * std::numbers::pi * static_cast<double>(a) / static_cast<double>(na);
        any = true;
      }
    }
    est.sup_values.push_back(best);
    est.sup_se.push_back(best_se);
    est.argmax_angle.push_back(best_angle);
  }
  est.estimate = est.sup_values.back();
  const std::size_t first = est.sup_values.size() >= 3 ? est.sup_values.size() - 3 : 0;
  est.band_lo = *std::min_element(est.sup_values.begin() + first, est.sup_values.end());
  est.band_hi = *std::max_element(est.sup_values.begin() + first, est.sup_values.end());
  return est;
}

}  // namespace clarklab
