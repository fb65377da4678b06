#include "clarklab/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "clarklab/errors.hpp"
#include "clarklab/parallel.hpp"

namespace clarklab {

MeasureRep::MeasureRep(int dim, std::vector<MeasureAtom> atoms, std::optional<Density> density,
                       bool positive)
    : dim_(dim), atoms_(std::move(atoms)), density_(std::move(density)), positive_(positive) {
  if (dim_ < 1) throw InvalidArgumentError("MeasureRep", "dimension must be positive");
  for (const auto& a : atoms_) {
    // Validates the sphere invariant.
    SpherePoint check(a.point);
    if (check.dim() != dim_) throw InvalidArgumentError("MeasureRep", "atom dimension mismatch");
    if (positive_ && (a.weight.imag() != 0.0 || a.weight.real() < 0.0)) {
      throw InvalidArgumentError("MeasureRep", "positive measures need nonnegative real atom weights");
    }
  }
  if (density_) {
    density_->plan.validate();
    if (density_->plan.dim != dim_) throw InvalidArgumentError("MeasureRep", "density plan dimension mismatch");
    if (!density_->fn) throw InvalidArgumentError("MeasureRep", "density has no evaluator");
  }
}

MeasureRep MeasureRep::atoms_only(int dim, std::vector<MeasureAtom> atoms, bool positive) {
  return MeasureRep(dim, std::move(atoms), std::nullopt, positive);
}

MeasureRep MeasureRep::uniform(const SphereSamplePlan& plan) {
  Density d;
  d.fn = [](std::span<const Complex>) { return 1.0; };
  d.plan = plan;
  d.tag.kind = "uniform";
  return MeasureRep(plan.dim, {}, std::move(d), true);
}

MeasureRep MeasureRep::with_density(Density density, std::vector<MeasureAtom> atoms, bool positive) {
  const int dim = density.plan.dim;
  return MeasureRep(dim, std::move(atoms), std::move(density), positive);
}

namespace {

ComplexEstimate integrate_density(const Density& density, const BoundaryFunction& f) {
  if (density.adaptive && density.plan.dim == 1) {
    AdaptiveCircleOptions opts;
    opts.initial_nodes = density.plan.circle_nodes;
    opts.max_nodes = std::max(density.max_nodes, opts.initial_nodes);
    const auto r = integrate_circle_adaptive(
        [&](Complex zeta) {
          const std::span<const Complex> p(&zeta, 1);
          const double w = density.fn(p);
          return w == 0.0 ? Complex{} : w * f(p);
        },
        opts);
    return {r.value, 0.0};
  }
  return slice_integrate(
      [&](std::span<const Complex> zeta) {
        const double w = density.fn(zeta);
        return w == 0.0 ? Complex{} : w * f(zeta);
      },
      density.plan);
}

}  // namespace

ComplexEstimate integrate(const MeasureRep& mu, const BoundaryFunction& f) {
  Complex atom_sum{};
  for (const auto& a : mu.atoms()) {
    if (a.weight == 0.0) continue;
    try {
      atom_sum += a.weight * f(a.point);
    } catch (const Error& e) {
      throw ExceptionalPointError("integrate",
                                  std::string("atom collides with the integrand's exceptional set: ") +
                                      e.what());
    }
  }
  ComplexEstimate out{atom_sum, 0.0};
  if (mu.density()) {
    const auto d = integrate_density(*mu.density(), f);
    out.value += d.value;
    out.se = d.se;
  }
  return out;
}

ComplexEstimate total_mass(const MeasureRep& mu) {
  return integrate(mu, [](std::span<const Complex>) { return Complex(1.0, 0.0); });
}

ComplexEstimate poisson_integral(const MeasureRep& mu, const BallPoint& z) {
  if (z.dim() != mu.dim()) throw InvalidArgumentError("poisson_integral", "dimension mismatch");
  return integrate(mu, [&](std::span<const Complex> zeta) {
    return Complex(poisson_kernel(z.coords(), zeta), 0.0);
  });
}

ComplexEstimate cauchy_plus(const MeasureRep& mu, const BallPoint& z) {
  if (z.dim() != mu.dim()) throw InvalidArgumentError("cauchy_plus", "dimension mismatch");
  return integrate(mu, [&](std::span<const Complex> zeta) { return cauchy_kernel(z.coords(), zeta); });
}

ComplexEstimate cauchy_minus(const MeasureRep& mu, const BallPoint& z) {
  if (z.dim() != mu.dim()) throw InvalidArgumentError("cauchy_minus", "dimension mismatch");
  return integrate(mu, [&](std::span<const Complex> zeta) {
    return cauchy_kernel(zeta, z.coords()) - 1.0;
  });
}

Estimate distribution_tail(const TailSamples& s, double y) {
  if (!(y > 0.0)) throw InvalidArgumentError("distribution_tail", "threshold must be positive");
  if (s.values.size() != s.weights.size()) {
    throw InvalidArgumentError("distribution_tail", "values and weights differ in length");
  }
  const std::size_t n = s.values.size();
  std::vector<double> above(n), w2(n), edge(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    above[i] = s.values[i] > y ? s.weights[i] : 0.0;
    w2[i] = s.weights[i] * s.weights[i];
  }
  const double tail = pairwise_sum(above);
  const double total = pairwise_sum(s.weights);
  double se = 0.0;
  if (s.random) {
    const double p = total > 0.0 ? tail / total : 0.0;
    se = std::sqrt(std::max(0.0, p * (1.0 - p)) * pairwise_sum(w2));
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const bool a = s.values[i] > y;
      const bool prev = s.values[(i + n - 1) % n] > y;
      const bool next = s.values[(i + 1) % n] > y;
      if (a != prev || a != next) edge[i] = s.weights[i];
    }
    se = pairwise_sum(edge);
  }
  return {tail, se};
}

TailSamples refined_circle_tail_grid(const std::function<double(double)>& g,
                                     std::span<const double> levels, std::size_t coarse,
                                     std::size_t split, int passes) {
  struct Cell {
    double left;
    double width;
    double value;
  };
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  const double y_min = levels.empty() ? 0.0 : *std::min_element(levels.begin(), levels.end());

  std::vector<Cell> cells(coarse);
  const double h = kTwoPi / static_cast<double>(coarse);
  for (std::size_t i = 0; i < coarse; ++i) {
    const double left = h * static_cast<double>(i);
    cells[i] = {left, h, g(left + 0.5 * h)};
  }

  for (int pass = 0; pass < passes; ++pass) {
    const std::size_t n = cells.size();
    std::vector<char> mark(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      const double v = cells[i].value;
      const double vp = cells[(i + n - 1) % n].value;
      const double vn = cells[(i + 1) % n].value;
      if (!levels.empty() && v >= y_min && v >= vp && v >= vn && (v > vp || v > vn)) mark[i] = 1;
      for (double y : levels) {
        if ((v > y) != (vp > y) || (v > y) != (vn > y)) {
          mark[i] = 1;
          break;
        }
      }
    }
    std::vector<Cell> next;
    next.reserve(n + split * static_cast<std::size_t>(std::count(mark.begin(), mark.end(), 1)));
    for (std::size_t i = 0; i < n; ++i) {
      if (!mark[i]) {
        next.push_back(cells[i]);
        continue;
      }
      const double sub = cells[i].width / static_cast<double>(split);
      for (std::size_t k = 0; k < split; ++k) {
        const double left = cells[i].left + sub * static_cast<double>(k);
        next.push_back({left, sub, g(left + 0.5 * sub)});
      }
    }
    cells = std::move(next);
  }

  TailSamples out;
  out.random = false;
  out.values.reserve(cells.size());
  out.weights.reserve(cells.size());
  for (const auto& c : cells) {
    out.values.push_back(c.value);
    out.weights.push_back(c.width / kTwoPi);
  }
  return out;
}

}  // namespace clarklab
