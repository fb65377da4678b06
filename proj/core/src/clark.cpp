#include "clarklab/clark.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>

#include "clarklab/errors.hpp"
#include "clarklab/parallel.hpp"
#include "clarklab/polynomial.hpp"

namespace clarklab {

namespace {

constexpr double kContactTol = 1e-12;
constexpr double kOffCircleTol = 1e-8;
constexpr double kContactRootTol = 1e-9;

void check_alpha(Complex alpha, const char* where) {
  if (std::abs(std::abs(alpha) - 1.0) > 1e-12) {
    throw InvalidArgumentError(where, "alpha must be unimodular");
  }
}

// Density at a quadrature node. A node that happens to sit on a contact
// point is a null set and contributes nothing.
double density_value(Complex v, Complex alpha) {
  const double diff = std::norm(alpha - v);
  if (diff < kContactTol * kContactTol) return 0.0;
  return std::max(0.0, 1.0 - std::norm(v)) / diff;
}

Complex eval1(const Symbol& phi, Complex z) { return phi.eval_raw(std::span<const Complex>(&z, 1)); }

Complex boundary1(const Symbol& phi, Complex zeta) {
  return phi.boundary_eval(std::span<const Complex>(&zeta, 1));
}

std::size_t next_pow2(double x) {
  std::size_t n = 1;
  while (static_cast<double>(n) < x && n < (std::size_t{1} << 40)) n <<= 1;
  return n;
}

Complex polish_level_root(const Symbol& phi, Complex z, Complex alpha) {
  for (int it = 0; it < 8; ++it) {
    const Complex f = eval1(phi, z) - alpha;
    Complex df;
    try {
      df = phi.derivative(z);
    } catch (const Error&) {
      break;
    }
    if (std::abs(df) == 0.0) break;
    const Complex step = f / df;
    const Complex trial = z - step;
    if (!(std::abs(eval1(phi, trial) - alpha) <= std::abs(f))) break;
    z = trial;
    if (std::abs(step) < 1e-16) break;
  }
  return z;
}

std::size_t initial_circle_nodes(const Symbol& phi, Complex alpha, const ClarkOptions& options) {
  return std::max<std::size_t>(options.plan.circle_nodes,
                               circle_resolution(phi, alpha, options.max_circle_nodes));
}

// Adaptive d = 1 integral of f * density (atoms excluded).
Complex ac_integral_d1(const Symbol& phi, Complex alpha, const std::function<Complex(Complex)>& f,
                       std::size_t initial, std::size_t max_nodes, std::size_t* nodes = nullptr,
                       bool* converged = nullptr) {
  if (phi.is_inner()) {
    if (nodes) *nodes = 0;
    if (converged) *converged = true;
    return {};
  }
  AdaptiveCircleOptions opts;
  opts.initial_nodes = std::min(initial, max_nodes);
  opts.max_nodes = max_nodes;
  const auto r = integrate_circle_adaptive(
      [&](Complex zeta) {
        if (phi.is_exceptional(std::span<const Complex>(&zeta, 1))) return Complex{};
        const double w = density_value(boundary1(phi, zeta), alpha);
        return w == 0.0 ? Complex{} : w * f(zeta);
      },
      opts);
  if (nodes) *nodes = r.nodes;
  if (converged) *converged = r.converged;
  return r.value;
}

std::size_t pole_resolution(double radius) {
  const double gap = std::max(1e-300, 1.0 - radius);
  return next_pow2(40.0 / gap);
}

double max_norm(std::span<const Complex> z) { return std::sqrt(norm_squared(z)); }

}  // namespace

ClarkOptions ClarkOptions::defaults(int dim, std::uint64_t seed) {
  ClarkOptions o;
  o.plan = dim == 1 ? SphereSamplePlan::circle(256) : SphereSamplePlan::slice_product(dim, 4096, 256, seed);
  return o;
}

double clark_total_mass(const Symbol& phi, Complex alpha) {
  check_alpha(alpha, "clark_total_mass");
  const Complex c = phi.value_at_origin();
  if (!(std::abs(c) < 1.0)) throw RangeViolationError("clark_total_mass", "|phi(0)| >= 1");
  return (1.0 - std::norm(c)) / std::norm(alpha - c);
}

double clark_ac_density(const Symbol& phi, Complex alpha, std::span<const Complex> zeta) {
  check_alpha(alpha, "clark_ac_density");
  const Complex v = phi.boundary_eval(zeta);
  if (std::abs(v - alpha) < kContactTol) {
    throw ContactPointError("clark_ac_density", "phi(zeta) coincides with alpha");
  }
  if (phi.is_inner()) return 0.0;
  return std::max(0.0, 1.0 - std::norm(v)) / std::norm(alpha - v);
}

double clark_ac_density(const Symbol& phi, Complex alpha, const SpherePoint& zeta) {
  return clark_ac_density(phi, alpha, zeta.coords());
}

std::size_t circle_resolution(const Symbol& phi, Complex target, std::size_t max_nodes) {
  const auto form = phi.rational_form();
  if (!form) return std::min<std::size_t>(4096, max_nodes);
  double gap = std::numeric_limits<double>::infinity();
  auto scan = [&](const Polynomial& p) {
    if (p.degree() < 1) return;
    for (Complex r : polynomial_roots(p)) {
      const double g = std::abs(std::abs(r) - 1.0);
      if (g > kContactRootTol) gap = std::min(gap, g);
    }
  };
  scan(form->numerator - target * form->denominator);
  scan(form->denominator);
  std::size_t n = 256;
  if (std::isfinite(gap)) n = std::max(n, next_pow2(40.0 / gap));
  return std::min(n, max_nodes);
}

Estimate clark_ac_mass(const Symbol& phi, Complex alpha, const ClarkOptions& options,
                       std::size_t* nodes_used, bool* converged) {
  check_alpha(alpha, "clark_ac_mass");
  if (phi.dim() == 1) {
    const Complex v =
        ac_integral_d1(phi, alpha, [](Complex) { return Complex(1.0, 0.0); },
                       initial_circle_nodes(phi, alpha, options), options.max_circle_nodes,
                       nodes_used, converged);
    return {v.real(), 0.0};
  }
  if (options.plan.dim != phi.dim()) throw InvalidArgumentError("clark_ac_mass", "plan dimension mismatch");
  if (nodes_used) *nodes_used = 0;
  if (converged) *converged = true;
  return slice_integrate_real(
      [&](std::span<const Complex> zeta) { return density_value(phi.boundary_eval(zeta), alpha); },
      options.plan);
}

Estimate clark_singular_mass(const Symbol& phi, Complex alpha, const ClarkOptions& options) {
  const double total = clark_total_mass(phi, alpha);
  const Estimate ac = clark_ac_mass(phi, alpha, options);
  return {total - ac.value, ac.se};
}

std::vector<ClarkAtom> clark_atoms_d1(const Symbol& phi, Complex alpha,
                                      std::vector<std::string>* warnings) {
  check_alpha(alpha, "clark_atoms_d1");
  if (phi.dim() != 1 || !phi.is_inner()) {
    throw InvalidArgumentError("clark_atoms_d1", "symbol must be a univariate finite Blaschke product");
  }
  const auto form = phi.rational_form();
  if (!form) throw InvalidArgumentError("clark_atoms_d1", "symbol has a singular inner factor");
  const Polynomial level = form->numerator - alpha * form->denominator;
  const int n = level.degree();
  if (n < 1) throw InvalidArgumentError("clark_atoms_d1", "Blaschke degree must be at least 1");
  if (n > kMaxAtomicDegree) {
    throw InvalidArgumentError("clark_atoms_d1", "degree " + std::to_string(n) + " exceeds the atomic cap of " +
                                                     std::to_string(kMaxAtomicDegree));
  }
  std::vector<Complex> roots = polynomial_roots(level);
  std::vector<ClarkAtom> atoms;
  atoms.reserve(roots.size());
  for (Complex r : roots) {
    r = polish_level_root(phi, r, alpha);
    const double dev = std::abs(std::abs(r) - 1.0);
    if (dev > kOffCircleTol) {
      std::ostringstream os;
      os << "solution " << r << " of phi = alpha is " << dev << " off the circle";
      throw RootOffCircleError("clark_atoms_d1", os.str());
    }
    const Complex zeta = r / std::abs(r);
    atoms.push_back({zeta, 1.0 / std::abs(phi.derivative(zeta))});
  }
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    for (std::size_t j = i + 1; j < atoms.size(); ++j) {
      if (std::abs(atoms[i].point - atoms[j].point) < 1e-6 && warnings) {
        warnings->push_back("clark_atoms_d1: clustered roots closer than 1e-6");
      }
    }
  }
  std::sort(atoms.begin(), atoms.end(),
            [](const ClarkAtom& a, const ClarkAtom& b) { return std::arg(a.point) < std::arg(b.point); });
  return atoms;
}

std::vector<ClarkAtom> clark_contact_atoms(const Symbol& phi, Complex alpha) {
  check_alpha(alpha, "clark_contact_atoms");
  if (phi.dim() != 1) throw InvalidArgumentError("clark_contact_atoms", "symbol must be univariate");
  const auto form = phi.rational_form();
  if (!form) throw InvalidArgumentError("clark_contact_atoms", "symbol has a singular inner factor");
  const Polynomial level = form->numerator - alpha * form->denominator;
  std::vector<ClarkAtom> atoms;
  if (level.degree() < 1) return atoms;
  for (Complex r : polynomial_roots(level)) {
    r = polish_level_root(phi, r, alpha);
    if (std::abs(std::abs(r) - 1.0) > kContactRootTol) continue;
    const Complex zeta = r / std::abs(r);
    if (std::abs(eval1(phi, zeta) - alpha) > kContactRootTol) continue;
    const Complex d = phi.derivative(zeta);
    if (std::abs(d) == 0.0) continue;
    atoms.push_back({zeta, 1.0 / std::abs(d)});
  }
  return atoms;
}

ClarkData clark_data(const Symbol& phi, Complex alpha, const ClarkOptions& options) {
  ClarkData data;
  data.alpha = alpha;
  data.total_mass = clark_total_mass(phi, alpha);
  data.ac_mass = clark_ac_mass(phi, alpha, options, &data.circle_nodes_used, &data.quadrature_converged);
  data.singular_mass = {data.total_mass - data.ac_mass.value, data.ac_mass.se};
  if (!data.quadrature_converged) data.warnings.push_back("a.c. quadrature hit the node cap");

  if (phi.dim() == 1) {
    const auto form = phi.rational_form();
    if (!form) {
      data.warnings.push_back("singular part not materialized (singular inner factor)");
    } else if (phi.is_inner()) {
      const int degree = (form->numerator - alpha * form->denominator).degree();
      if (degree > kMaxAtomicDegree) {
        data.warnings.push_back("Blaschke degree above the atomic cap; singular mass from the budget only");
      } else {
        data.atoms = clark_atoms_d1(phi, alpha, &data.warnings);
      }
    } else {
      data.atoms = clark_contact_atoms(phi, alpha);
    }
  }
  if (data.atoms) {
    double sum = 0.0;
    for (const auto& a : *data.atoms) sum += a.weight;
    if (std::abs(sum - data.singular_mass.value) > 1e-8) {
      std::ostringstream os;
      os << "atom weights " << sum << " differ from the budget singular mass " << data.singular_mass.value;
      data.warnings.push_back(os.str());
    }
  }
  if (data.singular_mass.value < -3.0 * data.singular_mass.se - 1e-10) {
    data.warnings.push_back("negative singular mass beyond 3 SE: phi may not be a self-map");
  }
  return data;
}

Density make_clark_density(const Symbol& phi, Complex alpha, const SphereSamplePlan& plan,
                           std::size_t max_circle_nodes) {
  check_alpha(alpha, "make_clark_density");
  if (plan.dim != phi.dim()) throw InvalidArgumentError("make_clark_density", "plan dimension mismatch");
  Density density;
  density.fn = [phi, alpha](std::span<const Complex> zeta) {
    if (phi.is_exceptional(zeta)) return 0.0;
    return density_value(phi.boundary_eval(zeta), alpha);
  };
  density.tag.kind = "clark_ac";
  density.tag.alpha = alpha;
  density.tag.symbol = std::make_shared<const Symbol>(phi);
  density.plan = plan;
  if (phi.dim() == 1) {
    density.adaptive = true;
    density.max_nodes = max_circle_nodes;
  }
  return density;
}

MeasureRep clark_measure(const Symbol& phi, const ClarkData& data, const ClarkOptions& options) {
  std::vector<MeasureAtom> atoms;
  if (data.atoms) {
    for (const auto& a : *data.atoms) atoms.push_back({{a.point}, Complex(a.weight, 0.0)});
  }
  if (phi.dim() == 1 && phi.is_inner()) return MeasureRep::atoms_only(1, std::move(atoms));
  const SphereSamplePlan plan = phi.dim() == 1
                                    ? SphereSamplePlan::circle(initial_circle_nodes(phi, data.alpha, options))
                                    : options.plan;
  return MeasureRep::with_density(make_clark_density(phi, data.alpha, plan, options.max_circle_nodes),
                                  std::move(atoms));
}

namespace {

void require_materialized(const Symbol& phi, const ClarkData& data, const char* where) {
  if (phi.dim() == 1 && !data.atoms && std::abs(data.singular_mass.value) > 1e-8) {
    throw InvalidArgumentError(where, "singular part of the Clark measure is not materialized");
  }
}

double herglotz_rhs(const Symbol& phi, Complex alpha, const BallPoint& z) {
  const Complex v = phi.eval(z);
  return ((alpha + v) / (alpha - v)).real();
}

}  // namespace

ResidualReport verify_herglotz(const Symbol& phi, Complex alpha, const ClarkData& data,
                               std::span<const BallPoint> points, const ClarkOptions& options) {
  check_alpha(alpha, "verify_herglotz");
  require_materialized(phi, data, "verify_herglotz");
  ResidualReport rep;
  rep.residuals.resize(points.size());
  std::vector<double> lhs(points.size(), 0.0), se(points.size(), 0.0);

  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].dim() != phi.dim()) throw InvalidArgumentError("verify_herglotz", "point dimension mismatch");
    if (data.atoms) {
      for (const auto& a : *data.atoms) {
        lhs[i] += a.weight * poisson_kernel(points[i].coords(), std::span<const Complex>(&a.point, 1));
      }
    }
  }
  if (phi.dim() == 1) {
    const std::size_t base = initial_circle_nodes(phi, alpha, options);
    for (std::size_t i = 0; i < points.size(); ++i) {
      const auto z = points[i].coords();
      const std::size_t n0 = std::max(base, std::min(options.max_circle_nodes, pole_resolution(max_norm(z))));
      lhs[i] += ac_integral_d1(
                    phi, alpha,
                    [&](Complex zeta) { return Complex(poisson_kernel(z, std::span<const Complex>(&zeta, 1)), 0.0); },
                    n0, options.max_circle_nodes)
                    .real();
    }
  } else {
    const auto est = slice_integrate_vector(
        [&](std::span<const Complex> zeta, std::span<double> out) {
          const double w = density_value(phi.boundary_eval(zeta), alpha);
          for (std::size_t i = 0; i < points.size(); ++i) {
            out[i] = w == 0.0 ? 0.0 : w * poisson_kernel(points[i].coords(), zeta);
          }
        },
        points.size(), options.plan);
    for (std::size_t i = 0; i < points.size(); ++i) {
      lhs[i] += est[i].value;
      se[i] = est[i].se;
    }
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double r = std::abs(lhs[i] - herglotz_rhs(phi, alpha, points[i]));
    rep.residuals[i] = r;
    if (r >= rep.max_residual) {
      rep.max_residual = r;
      rep.se = se[i];
    }
    if (se[i] > 0.0) rep.max_sigma = std::max(rep.max_sigma, r / se[i]);
  }
  return rep;
}

Complex double_cauchy_closed_form(const Symbol& phi, Complex alpha, const BallPoint& z, const BallPoint& w) {
  const Complex pz = phi.eval(z);
  const Complex pw = phi.eval(w);
  return (1.0 - pz * std::conj(pw)) / ((1.0 - std::conj(alpha) * pz) * (1.0 - alpha * std::conj(pw))) *
         cauchy_kernel(z, w);
}

ResidualReport verify_double_cauchy(const Symbol& phi, Complex alpha, const ClarkData& data,
                                    std::span<const std::pair<BallPoint, BallPoint>> pairs,
                                    const ClarkOptions& options) {
  check_alpha(alpha, "verify_double_cauchy");
  require_materialized(phi, data, "verify_double_cauchy");
  const std::size_t m = pairs.size();
  std::vector<Complex> lhs(m);
  std::vector<double> se(m, 0.0);
  auto integrand = [&](std::size_t i, std::span<const Complex> zeta) {
    return cauchy_kernel(pairs[i].first.coords(), zeta) * cauchy_kernel(zeta, pairs[i].second.coords());
  };
  for (std::size_t i = 0; i < m; ++i) {
    if (pairs[i].first.dim() != phi.dim() || pairs[i].second.dim() != phi.dim()) {
      throw InvalidArgumentError("verify_double_cauchy", "point dimension mismatch");
    }
    if (data.atoms) {
      for (const auto& a : *data.atoms) lhs[i] += a.weight * integrand(i, std::span<const Complex>(&a.point, 1));
    }
  }
  if (phi.dim() == 1) {
    const std::size_t base = initial_circle_nodes(phi, alpha, options);
    for (std::size_t i = 0; i < m; ++i) {
      const double rad = std::max(max_norm(pairs[i].first.coords()), max_norm(pairs[i].second.coords()));
      const std::size_t n0 = std::max(base, std::min(options.max_circle_nodes, pole_resolution(rad)));
      lhs[i] += ac_integral_d1(
          phi, alpha, [&](Complex zeta) { return integrand(i, std::span<const Complex>(&zeta, 1)); }, n0,
          options.max_circle_nodes);
    }
  } else {
    const auto est = slice_integrate_vector(
        [&](std::span<const Complex> zeta, std::span<double> out) {
          const double w = density_value(phi.boundary_eval(zeta), alpha);
          for (std::size_t i = 0; i < m; ++i) {
            const Complex v = w == 0.0 ? Complex{} : w * integrand(i, zeta);
            out[2 * i] = v.real();
            out[2 * i + 1] = v.imag();
          }
        },
        2 * m, options.plan);
    for (std::size_t i = 0; i < m; ++i) {
      lhs[i] += Complex(est[2 * i].value, est[2 * i + 1].value);
      se[i] = std::hypot(est[2 * i].se, est[2 * i + 1].se);
    }
  }
  ResidualReport rep;
  rep.residuals.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double r = std::abs(lhs[i] - double_cauchy_closed_form(phi, alpha, pairs[i].first, pairs[i].second));
    rep.residuals[i] = r;
    if (r >= rep.max_residual) {
      rep.max_residual = r;
      rep.se = se[i];
    }
    if (se[i] > 0.0) rep.max_sigma = std::max(rep.max_sigma, r / se[i]);
  }
  return rep;
}

Complex cauchy_plus_closed_form(const Symbol& phi, Complex alpha, std::span<const Complex> z) {
  check_alpha(alpha, "cauchy_plus_closed_form");
  const Complex c0 = std::conj(phi.value_at_origin());
  return 1.0 / (1.0 - std::conj(alpha) * phi.eval_raw(z)) + alpha * c0 / (1.0 - alpha * c0);
}

Complex cauchy_plus_closed_form(const Symbol& phi, Complex alpha, const BallPoint& z) {
  phi.eval(z);  // range check
  return cauchy_plus_closed_form(phi, alpha, z.coords());
}

std::vector<DisintegrationResult> disintegration_check(const Symbol& phi,
                                                       std::span<const BoundaryFunction> fs,
                                                       std::size_t alpha_nodes,
                                                       const ClarkOptions& options) {
  if (alpha_nodes < 1) throw InvalidArgumentError("disintegration_check", "need at least one alpha node");
  const std::size_t nf = fs.size();
  const CircleNodes alphas = circle_nodes(alpha_nodes);
  std::vector<DisintegrationResult> out(nf);
  for (auto& r : out) r.alpha_nodes = alpha_nodes;

  if (phi.dim() == 1) {
    const auto form = phi.rational_form();
    const bool have_singular = form.has_value();
    if (!have_singular) {
      for (auto& r : out) r.warnings.push_back("singular parts not materialized; lhs uses a.c. parts only");
    }
    std::vector<std::vector<Complex>> per_alpha(alpha_nodes, std::vector<Complex>(nf));
    parallel_for(alpha_nodes, [&](std::size_t k) {
      const Complex alpha = alphas.nodes[k];
      std::vector<ClarkAtom> atoms;
      if (have_singular) {
        atoms = phi.is_inner() ? clark_atoms_d1(phi, alpha) : clark_contact_atoms(phi, alpha);
      }
      const std::size_t n0 = initial_circle_nodes(phi, alpha, options);
      for (std::size_t j = 0; j < nf; ++j) {
        Complex v{};
        for (const auto& a : atoms) v += a.weight * fs[j](std::span<const Complex>(&a.point, 1));
        v += ac_integral_d1(
            phi, alpha, [&](Complex zeta) { return fs[j](std::span<const Complex>(&zeta, 1)); }, n0,
            options.max_circle_nodes);
        per_alpha[k][j] = v;
      }
    });
    for (std::size_t j = 0; j < nf; ++j) {
      Complex sum{};
      for (std::size_t k = 0; k < alpha_nodes; ++k) sum += per_alpha[k][j];
      out[j].lhs = sum * alphas.weight;
      AdaptiveCircleOptions opts;
      opts.max_nodes = options.max_circle_nodes;
      out[j].rhs = integrate_circle_adaptive(
                       [&](Complex zeta) { return fs[j](std::span<const Complex>(&zeta, 1)); }, opts)
                       .value;
      out[j].residual = std::abs(out[j].lhs - out[j].rhs);
      out[j].se = 0.0;
    }
    return out;
  }

  if (options.plan.dim != phi.dim()) throw InvalidArgumentError("disintegration_check", "plan dimension mismatch");
  // Paired estimator on shared nodes: lhs - rhs = f (W - 1) with W the
  // alpha-average of the a.c. densities at the node.
  const auto est = slice_integrate_vector(
      [&](std::span<const Complex> zeta, std::span<double> o) {
        const Complex v = phi.boundary_eval(zeta);
        double w = 0.0;
        for (const Complex& a : alphas.nodes) w += density_value(v, a);
        w *= alphas.weight;
        for (std::size_t j = 0; j < nf; ++j) {
          const Complex f = fs[j](zeta);
          const Complex l = w * f;
          const Complex d = l - f;
          o[6 * j + 0] = l.real();
          o[6 * j + 1] = l.imag();
          o[6 * j + 2] = f.real();
          o[6 * j + 3] = f.imag();
          o[6 * j + 4] = d.real();
          o[6 * j + 5] = d.imag();
        }
      },
      6 * nf, options.plan);
  for (std::size_t j = 0; j < nf; ++j) {
    out[j].lhs = {est[6 * j].value, est[6 * j + 1].value};
    out[j].rhs = {est[6 * j + 2].value, est[6 * j + 3].value};
    out[j].residual = std::abs(Complex(est[6 * j + 4].value, est[6 * j + 5].value));
    out[j].se = std::hypot(est[6 * j + 4].se, est[6 * j + 5].se);
  }
  return out;
}

DisintegrationResult disintegration_check(const Symbol& phi, const BoundaryFunction& f,
                                          std::size_t alpha_nodes, const ClarkOptions& options) {
  return disintegration_check(phi, std::span<const BoundaryFunction>(&f, 1), alpha_nodes, options).front();
}

PoltoratskiTable poltoratski_check(const Symbol& phi, Complex alpha, std::span<const double> y_grid,
                                   const PoltoratskiOptions& options, const ClarkOptions& clark_options) {
  check_alpha(alpha, "poltoratski_check");
  for (double y : y_grid) {
    if (!(y > 0.0)) throw InvalidArgumentError("poltoratski_check", "thresholds must be positive");
  }
  const Complex c0 = std::conj(phi.value_at_origin());
  const Complex shift = alpha * c0 / (1.0 - alpha * c0);
  auto mu_plus_abs = [&](std::span<const Complex> zeta) {
    if (phi.is_exceptional(zeta)) return std::numeric_limits<double>::infinity();
    const Complex denom = 1.0 - std::conj(alpha) * phi.boundary_eval(zeta);
    if (std::abs(denom) == 0.0) return std::numeric_limits<double>::infinity();
    return std::abs(1.0 / denom + shift);
  };

  PoltoratskiTable table;
  table.alpha = alpha;
  const Estimate sing = clark_singular_mass(phi, alpha, clark_options);
  table.singular_mass = sing.value;
  table.singular_mass_se = sing.se;

  TailSamples samples;
  if (phi.dim() == 1) {
    samples = refined_circle_tail_grid(
        [&](double theta) {
          const Complex zeta = std::polar(1.0, theta);
          return mu_plus_abs(std::span<const Complex>(&zeta, 1));
        },
        y_grid, options.coarse_cells, options.split, options.passes);
  } else {
    SphereSamplePlan plan = options.plan;
    plan.dim = phi.dim();
    plan.validate();
    const auto coords = sample_coordinates(plan);
    const std::size_t n = coords.size() / static_cast<std::size_t>(plan.dim);
    samples.random = true;
    samples.values.resize(n);
    samples.weights.assign(n, 1.0 / static_cast<double>(n));
    const std::size_t d = static_cast<std::size_t>(plan.dim);
    const std::size_t chunks = (n + kReductionChunk - 1) / kReductionChunk;
    parallel_for(chunks, [&](std::size_t c) {
      const std::size_t end = std::min(n, (c + 1) * kReductionChunk);
      for (std::size_t i = c * kReductionChunk; i < end; ++i) {
        samples.values[i] = mu_plus_abs(std::span<const Complex>(coords.data() + i * d, d));
      }
    });
  }
  table.samples = samples.values.size();
  for (double y : y_grid) {
    PoltoratskiRow row;
    row.y = y;
    row.tail = distribution_tail(samples, y);
    row.scaled = std::numbers::pi * y * row.tail.value;
    row.scaled_se = std::numbers::pi * y * row.tail.se;
    table.rows.push_back(row);
  }
  return table;
}

BoundaryCache::BoundaryCache(const Symbol& phi, const SphereSamplePlan& plan) : plan_(plan) {
  plan_.validate();
  if (plan_.dim != phi.dim()) throw InvalidArgumentError("BoundaryCache", "plan dimension mismatch");
  points_ = sample_coordinates(plan_);
  const std::size_t d = static_cast<std::size_t>(plan_.dim);
  const std::size_t n = points_.size() / d;
  values_.resize(n);
  const std::size_t chunks = (n + kReductionChunk - 1) / kReductionChunk;
  parallel_for(chunks, [&](std::size_t c) {
    const std::size_t end = std::min(n, (c + 1) * kReductionChunk);
    for (std::size_t i = c * kReductionChunk; i < end; ++i) {
      const std::span<const Complex> zeta(points_.data() + i * d, d);
      values_[i] = phi.is_exceptional(zeta) ? Complex(std::numeric_limits<double>::quiet_NaN(), 0.0)
                                            : phi.boundary_eval(zeta);
    }
  });
}

Estimate BoundaryCache::ac_mass(Complex alpha) const {
  const auto est = reduce_over_nodes(
      [&](std::size_t i, std::span<double> out) {
        const Complex v = values_[i];
        out[0] = std::isnan(v.real()) ? 0.0 : density_value(v, alpha);
      },
      1, plan_);
  return est.front();
}

}  // namespace clarklab
