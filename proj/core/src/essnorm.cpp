#include "clarklab/essnorm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include "clarklab/errors.hpp"
#include "clarklab/parallel.hpp"

namespace clarklab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void validate_config(const EssNormConfig& c) {
  if (c.alpha_nodes < 16) throw InvalidArgumentError("essnorm", "need at least 16 alpha nodes");
  if (c.radii.empty()) throw InvalidArgumentError("essnorm", "radii ladder is empty");
  for (std::size_t i = 0; i < c.radii.size(); ++i) {
    if (!(c.radii[i] > 0.0 && c.radii[i] < 1.0)) throw InvalidArgumentError("essnorm", "radii must lie in (0, 1)");
    if (i > 0 && !(c.radii[i] > c.radii[i - 1])) throw InvalidArgumentError("essnorm", "radii must increase");
  }
}

// Group means of g(value) over cached boundary values, then mean and SE.
template <class G>
Estimate cached_estimate(const BoundaryCache& cache, G&& g) {
  const auto& plan = cache.plan();
  const std::size_t gs = plan.group_size();
  const std::size_t groups = plan.group_count();
  const auto values = cache.values();
  std::vector<double> means(groups);
  for (std::size_t k = 0; k < groups; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < gs; ++i) {
      const Complex v = values[k * gs + i];
      if (!std::isnan(v.real())) s += g(v);
    }
    means[k] = s / static_cast<double>(gs);
  }
  return group_estimate(means, plan.deterministic());
}

double clark_density(Complex v, Complex alpha) {
  const double diff = std::norm(alpha - v);
  if (diff < 1e-24) return 0.0;
  return std::max(0.0, 1.0 - std::norm(v)) / diff;
}

double golden_max(const std::function<double(double)>& f, double a, double b) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 80 && b - a > 1e-15; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = f(x1);
    }
  }
  return 0.5 * (a + b);
}

struct Candidate {
  Complex value;  // phi at the boundary point
};

std::vector<Candidate> contact_candidates_d1(const Symbol& phi, const EssNormConfig& config) {
  std::vector<Candidate> out;
  const std::size_t n = config.contact_grid;
  auto modulus = [&](double theta) {
    const Complex z = std::polar(1.0, theta);
    const std::span<const Complex> p(&z, 1);
    if (phi.is_exceptional(p)) return 0.0;
    return std::abs(phi.boundary_eval(p));
  };
  std::vector<double> m(n);
  for (std::size_t k = 0; k < n; ++k) m[k] = modulus(kTwoPi * static_cast<double>(k) / static_cast<double>(n));
  const double h = kTwoPi / static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double v = m[k], vp = m[(k + n - 1) % n], vn = m[(k + 1) % n];
    if (!(v > 1.0 - config.contact_threshold)) continue;
    if (!(v >= vp && v >= vn && (v > vp || v > vn))) continue;
    double theta = h * static_cast<double>(k);
    if (v < 1.0 - 1e-15) theta = golden_max(modulus, theta - h, theta + h);
    const Complex z = std::polar(1.0, theta);
    out.push_back({phi.boundary_eval(std::span<const Complex>(&z, 1))});
  }
  return out;
}

std::vector<Candidate> contact_candidates_cached(const BoundaryCache& cache, const EssNormConfig& config) {
  std::vector<Candidate> out;
  const auto values = cache.values();
  const auto& plan = cache.plan();
  const std::size_t gs = plan.group_size();
  const double thr = 1.0 - config.contact_threshold;
  for (std::size_t g = 0; g < plan.group_count(); ++g) {
    for (std::size_t i = 0; i < gs; ++i) {
      const Complex v = values[g * gs + i];
      const double a = std::abs(v);
      if (std::isnan(v.real()) || !(a > thr)) continue;
      if (gs > 2) {
        const double ap = std::abs(values[g * gs + (i + gs - 1) % gs]);
        const double an = std::abs(values[g * gs + (i + 1) % gs]);
        if (!(a >= ap && a >= an && (a > ap || a > an))) continue;
      }
      out.push_back({v});
    }
  }
  return out;
}

std::vector<Complex> cluster_contacts(std::vector<Candidate> cands, std::size_t cap) {
  std::sort(cands.begin(), cands.end(),
            [](const Candidate& a, const Candidate& b) { return std::abs(a.value) > std::abs(b.value); });
  std::vector<Complex> alphas;
  for (const auto& c : cands) {
    if (alphas.size() >= cap) break;
    if (std::abs(c.value) == 0.0) continue;
    const Complex a = c.value / std::abs(c.value);
    bool near = false;
    for (const Complex& b : alphas) {
      if (std::abs(std::arg(a / b)) < 1e-3) {
        near = true;
        break;
      }
    }
    if (!near) alphas.push_back(a);
  }
  return alphas;
}

std::vector<AlphaMass> alpha_grid_impl(const Symbol& phi, const EssNormConfig& config,
                                       const BoundaryCache* cache) {
  std::vector<AlphaMass> grid;
  const CircleNodes nodes = circle_nodes(config.alpha_nodes);
  for (const Complex& a : nodes.nodes) grid.push_back({a, {}, false});
  if (phi.dim() == 1 && phi.is_inner()) return grid;  // every alpha is attained
  std::vector<Candidate> cands;
  if (phi.dim() == 1) {
    cands = contact_candidates_d1(phi, config);
  } else if (cache) {
    cands = contact_candidates_cached(*cache, config);
  }
  for (const Complex& a : cluster_contacts(std::move(cands), config.max_inserted)) grid.push_back({a, {}, true});
  return grid;
}

BhatSigma finish_sigma(std::vector<AlphaMass> rows) {
  BhatSigma out;
  out.per_alpha = std::move(rows);
  bool first = true;
  for (const auto& r : out.per_alpha) {
    if (first || r.singular.value > out.value.value) {
      out.value = r.singular;
      out.argmax = r.alpha;
      first = false;
    }
  }
  return out;
}

BhatSigma bhat_sigma_impl(const Symbol& phi, std::vector<AlphaMass> rows, const EssNormConfig& config,
                          const BoundaryCache* cache) {
  parallel_for(rows.size(), [&](std::size_t k) {
    const Complex alpha = rows[k].alpha;
    if (phi.dim() == 1) {
      rows[k].singular = clark_singular_mass(phi, alpha, config.clark);
    } else {
      const double total = clark_total_mass(phi, alpha);
      const Estimate ac = cached_estimate(*cache, [alpha](Complex v) { return clark_density(v, alpha); });
      rows[k].singular = {total - ac.value, ac.se};
    }
  });
  return finish_sigma(std::move(rows));
}

// d = 1 radial test-function integrals for many alpha at one radius: nested
// trapezoid doubling on a shared grid until every alpha is stable.
std::vector<double> lower_values_d1(const Symbol& phi, std::span<const Complex> alphas, double r,
                                    std::size_t max_nodes) {
  std::size_t n0 = 256;
  for (const Complex& a : alphas) n0 = std::max(n0, circle_resolution(phi, a / r, max_nodes));
  n0 = std::min(n0, max_nodes);
  const std::size_t k = alphas.size();
  const double offset = kTwoPi * 0.6180339887498949 / static_cast<double>(n0);
  auto g = [&](Complex v, Complex a) {
    if (std::isnan(v.real())) return 0.0;
    return (1.0 - r * r) / std::norm(a - r * v);
  };
  auto phi_at = [&](double theta) {
    const Complex z = std::polar(1.0, theta);
    const std::span<const Complex> p(&z, 1);
    if (phi.is_exceptional(p)) return Complex(std::numeric_limits<double>::quiet_NaN(), 0.0);
    return phi.boundary_eval(p);
  };
  // Sums over nodes, accumulated in chunks for determinism.
  auto add_nodes = [&](std::size_t n, std::size_t start, std::size_t stride, std::vector<double>& sums) {
    const std::size_t count = (n - start + stride - 1) / stride;
    const std::size_t chunks = (count + kReductionChunk - 1) / kReductionChunk;
    std::vector<std::vector<double>> partial(chunks, std::vector<double>(k, 0.0));
    parallel_for(chunks, [&](std::size_t c) {
      const std::size_t end = std::min(count, (c + 1) * kReductionChunk);
      for (std::size_t i = c * kReductionChunk; i < end; ++i) {
        const std::size_t node = start + i * stride;
        const Complex v = phi_at(offset + kTwoPi * static_cast<double>(node) / static_cast<double>(n));
        for (std::size_t j = 0; j < k; ++j) partial[c][j] += g(v, alphas[j]);
      }
    });
    for (std::size_t j = 0; j < k; ++j) {
      std::vector<double> col(chunks);
      for (std::size_t c = 0; c < chunks; ++c) col[c] = partial[c][j];
      sums[j] += pairwise_sum(col);
    }
  };
  std::vector<double> sums(k, 0.0);
  std::size_t n = n0;
  add_nodes(n, 0, 1, sums);
  std::vector<double> prev(k);
  for (std::size_t j = 0; j < k; ++j) prev[j] = sums[j] / static_cast<double>(n);
  int stable = 0;
  while (n * 2 <= std::max(max_nodes, n0) && stable < 2) {
    n *= 2;
    add_nodes(n, 1, 2, sums);
    double change = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      const double v = sums[j] / static_cast<double>(n);
      change = std::max(change, std::abs(v - prev[j]) / std::max(1.0, std::abs(v)));
      prev[j] = v;
    }
    stable = change <= 1e-13 ? stable + 1 : 0;
  }
  return prev;
}

std::vector<LowerBoundLadder> lower_ladders(const Symbol& phi, std::span<const Complex> alphas,
                                            const EssNormConfig& config, const BoundaryCache* cache) {
  const std::size_t k = alphas.size();
  std::vector<LowerBoundLadder> ladders(k);
  for (std::size_t j = 0; j < k; ++j) {
    ladders[j].alpha = alphas[j];
    ladders[j].radii = config.radii;
    ladders[j].values.resize(config.radii.size());
  }
  for (std::size_t i = 0; i < config.radii.size(); ++i) {
    const double r = config.radii[i];
    if (phi.dim() == 1) {
      const auto vals = lower_values_d1(phi, alphas, r, config.clark.max_circle_nodes);
      for (std::size_t j = 0; j < k; ++j) ladders[j].values[i] = {vals[j], 0.0};
    } else {
      parallel_for(k, [&](std::size_t j) {
        const Complex a = alphas[j];
        ladders[j].values[i] =
            cached_estimate(*cache, [a, r](Complex v) { return (1.0 - r * r) / std::norm(a - r * v); });
      });
    }
  }
  for (auto& l : ladders) {
    l.raw = l.values.back();
    const std::size_t m = l.radii.size();
    const std::size_t first = m >= 3 ? m - 3 : 0;
    std::vector<double> t;
    for (std::size_t i = first; i < m; ++i) t.push_back(1.0 - l.radii[i]);
    l.limit = extrapolate_to_zero(t, std::span<const Estimate>(l.values).subspan(first));
    if (t.size() >= 2) {
      const auto lin = extrapolate_to_zero(std::span<const double>(t).last(2),
                                           std::span<const Estimate>(l.values).last(2));
      l.truncation = std::abs(l.limit.value - lin.value);
    }
  }
  return ladders;
}

}  // namespace

EssNormConfig EssNormConfig::defaults(int dim, std::uint64_t seed) {
  EssNormConfig c;
  c.seed = seed;
  c.clark = ClarkOptions::defaults(dim, seed);
  return c;
}

Estimate extrapolate_to_zero(std::span<const double> t, std::span<const Estimate> v) {
  if (t.size() != v.size() || t.empty()) throw InvalidArgumentError("extrapolate_to_zero", "bad ladder");
  double value = 0.0, var = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    double c = 1.0;
    for (std::size_t j = 0; j < t.size(); ++j) {
      if (j != i) c *= t[j] / (t[j] - t[i]);
    }
    value += c * v[i].value;
    var += c * c * v[i].se * v[i].se;
  }
  return {value, std::sqrt(var)};
}

std::vector<AlphaMass> alpha_grid(const Symbol& phi, const EssNormConfig& config) {
  validate_config(config);
  if (phi.dim() == 1) return alpha_grid_impl(phi, config, nullptr);
  const BoundaryCache cache(phi, config.clark.plan);
  return alpha_grid_impl(phi, config, &cache);
}

BhatSigma bhat_sigma(const Symbol& phi, const EssNormConfig& config) {
  validate_config(config);
  if (phi.dim() == 1) return bhat_sigma_impl(phi, alpha_grid_impl(phi, config, nullptr), config, nullptr);
  const BoundaryCache cache(phi, config.clark.plan);
  return bhat_sigma_impl(phi, alpha_grid_impl(phi, config, &cache), config, &cache);
}

LowerBoundLadder testfn_lower_bound(const Symbol& phi, Complex alpha, const EssNormConfig& config) {
  validate_config(config);
  if (phi.dim() == 1) return lower_ladders(phi, std::span<const Complex>(&alpha, 1), config, nullptr).front();
  const BoundaryCache cache(phi, config.clark.plan);
  return lower_ladders(phi, std::span<const Complex>(&alpha, 1), config, &cache).front();
}

EssNormReport essential_norm_report(const Symbol& phi, const EssNormConfig& config) {
  validate_config(config);
  std::optional<BoundaryCache> cache;
  if (phi.dim() > 1) cache.emplace(phi, config.clark.plan);
  const BoundaryCache* cp = cache ? &*cache : nullptr;

  EssNormReport rep;
  auto grid = alpha_grid_impl(phi, config, cp);
  std::vector<Complex> alphas;
  for (const auto& g : grid) alphas.push_back(g.alpha);
  rep.bhat_sigma = bhat_sigma_impl(phi, std::move(grid), config, cp);

  BhatNOptions nopt;
  nopt.radii = config.radii;
  nopt.angular_nodes = config.angular_nodes;
  if (phi.dim() > 1) nopt.plan = SphereSamplePlan::slice_product(phi.dim(), config.counting_directions, 1, config.seed);
  rep.bhat_N = bhat_N(phi, nopt);

  rep.lower_ladders = lower_ladders(phi, alphas, config, cp);
  bool first = true;
  for (const auto& l : rep.lower_ladders) {
    if (first || l.limit.value > rep.lower_bound.value) {
      rep.lower_bound = l.limit;
      rep.lower_truncation = l.truncation;
    }
    rep.lower_bound_raw = first ? l.raw.value : std::max(rep.lower_bound_raw, l.raw.value);
    first = false;
  }

  const double sigma = rep.bhat_sigma.value.value;
  const double se_sigma = rep.bhat_sigma.value.se;
  const double se_n = rep.bhat_N.sup_se.back();
  rep.tol_lower =
      std::max({0.02 * std::abs(sigma), 3.0 * std::hypot(se_sigma, rep.lower_bound.se), 1e-6}) + rep.lower_truncation;
  rep.tol_counting = std::max({0.02 * std::abs(sigma), 3.0 * std::hypot(se_sigma, se_n), 1e-6});
  const double band = rep.bhat_N.band_hi - rep.bhat_N.band_lo;
  rep.margin_lower = sigma + rep.tol_lower - rep.lower_bound.value;
  rep.margin_counting = band + rep.tol_counting - std::abs(rep.bhat_N.estimate - sigma);
  rep.consistent = rep.margin_lower >= 0.0 && rep.margin_counting >= 0.0;
  return rep;
}

}  // namespace clarklab
