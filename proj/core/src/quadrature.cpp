#include "clarklab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "clarklab/errors.hpp"
#include "clarklab/parallel.hpp"

namespace clarklab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string format_point(std::span<const Complex> z) {
  std::ostringstream os;
  os.precision(17);
  os << "(";
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (i) os << ", ";
    os << z[i].real() << (z[i].imag() < 0 ? "" : "+") << z[i].imag() << "i";
  }
  os << ")";
  return os.str();
}

// Directions [chunk*kReductionChunk, ...) for one RNG chunk.
void fill_direction_chunk(int dim, std::uint64_t seed, std::size_t chunk, std::size_t count,
                          Complex* out) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(chunk),
                    static_cast<std::uint32_t>(static_cast<std::uint64_t>(chunk) >> 32),
                    0x636c6b6cu};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t j = 0; j < count; ++j) {
    Complex* p = out + j * dim;
    double r2 = 0.0;
    do {
      r2 = 0.0;
      for (int i = 0; i < dim; ++i) {
        const double re = normal(rng);
        const double im = normal(rng);
        p[i] = Complex(re, im);
        r2 += re * re + im * im;
      }
    } while (r2 == 0.0);
    const double r = std::sqrt(r2);
    for (int i = 0; i < dim; ++i) p[i] /= r;
  }
}

// Fills the nodes of one group into `nodes` (group_size * dim entries).
void group_nodes(const SphereSamplePlan& plan, const Complex* direction, Complex* nodes) {
  const int d = plan.dim;
  if (plan.mode == SampleMode::kMonteCarlo) {
    std::copy(direction, direction + d, nodes);
    return;
  }
  const std::size_t n = plan.circle_nodes;
  for (std::size_t k = 0; k < n; ++k) {
    const Complex rot = std::polar(1.0, kTwoPi * static_cast<double>(k) / static_cast<double>(n));
    for (int i = 0; i < d; ++i) nodes[k * d + i] = rot * direction[i];
  }
}

// Per-group mean values, width entries per group.
using GroupFiller = std::function<void(std::size_t group, const Complex* nodes,
                                       std::span<double> scratch, std::span<double> group_out)>;

std::vector<Estimate> reduce_groups(const SphereSamplePlan& plan, std::size_t width,
                                    const GroupFiller& filler) {
  plan.validate();
  const std::size_t groups = plan.group_count();
  const std::size_t gsize = plan.group_size();
  const int d = plan.dim;
  std::vector<double> values(groups * width, 0.0);
  const std::size_t chunks = (groups + kReductionChunk - 1) / kReductionChunk;

  parallel_for(chunks, [&](std::size_t c) {
    const std::size_t begin = c * kReductionChunk;
    const std::size_t count = std::min(kReductionChunk, groups - begin);
    std::vector<Complex> dirs(count * d);
    if (plan.deterministic()) {
      // d = 1 midpoint trapezoid: single fixed direction e^{i pi / n}.
      dirs[0] = std::polar(1.0, std::numbers::pi / static_cast<double>(plan.circle_nodes));
    } else {
      fill_direction_chunk(d, plan.seed, c, count, dirs.data());
    }
    std::vector<Complex> nodes(gsize * d);
    std::vector<double> scratch(width);
    for (std::size_t j = 0; j < count; ++j) {
      group_nodes(plan, dirs.data() + j * d, nodes.data());
      filler(begin + j, nodes.data(), scratch,
             std::span<double>(values.data() + (begin + j) * width, width));
    }
  });

  std::vector<Estimate> out(width);
  std::vector<double> column(groups);
  for (std::size_t w = 0; w < width; ++w) {
    for (std::size_t g = 0; g < groups; ++g) column[g] = values[g * width + w];
    out[w] = group_estimate(column, plan.deterministic());
  }
  return out;
}

}  // namespace

CircleNodes circle_nodes(std::size_t n) {
  if (n == 0) throw InvalidArgumentError("circle_nodes", "n must be positive");
  CircleNodes c;
  c.nodes.resize(n);
  c.weight = 1.0 / static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) {
    // Exact values at the quarter turns so that n = 4 yields {1, i, -1, -i}.
    if ((4 * k) % n == 0) {
      static constexpr Complex quarter[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
      c.nodes[k] = quarter[(4 * k / n) % 4];
    } else {
      c.nodes[k] = std::polar(1.0, kTwoPi * static_cast<double>(k) / static_cast<double>(n));
    }
  }
  return c;
}

SphereSamplePlan SphereSamplePlan::monte_carlo(int dim, std::size_t samples, std::uint64_t seed) {
  SphereSamplePlan p;
  p.dim = dim;
  p.sample_count = samples;
  p.seed = seed;
  p.mode = SampleMode::kMonteCarlo;
  p.directions = samples;
  p.circle_nodes = 1;
  p.validate();
  return p;
}

SphereSamplePlan SphereSamplePlan::slice_product(int dim, std::size_t directions,
                                                 std::size_t circle_nodes, std::uint64_t seed) {
  SphereSamplePlan p;
  p.dim = dim;
  p.seed = seed;
  p.mode = SampleMode::kSliceProduct;
  p.directions = dim == 1 ? 1 : directions;
  p.circle_nodes = circle_nodes;
  p.sample_count = p.directions * circle_nodes;
  p.validate();
  return p;
}

std::size_t SphereSamplePlan::group_count() const {
  return mode == SampleMode::kMonteCarlo ? sample_count : directions;
}

std::size_t SphereSamplePlan::group_size() const {
  return mode == SampleMode::kMonteCarlo ? 1 : circle_nodes;
}

void SphereSamplePlan::validate() const {
  if (dim < 1) throw InvalidArgumentError("SphereSamplePlan", "dimension must be positive");
  if (sample_count == 0) throw InvalidArgumentError("SphereSamplePlan", "sample_count must be positive");
  if (mode == SampleMode::kSliceProduct) {
    if (circle_nodes == 0 || directions == 0 || directions * circle_nodes != sample_count) {
      throw InvalidArgumentError("SphereSamplePlan",
                                 "slice-product plans need directions * circle_nodes == sample_count");
    }
    if (dim == 1 && directions != 1) {
      throw InvalidArgumentError("SphereSamplePlan", "d = 1 slice-product plans use one direction");
    }
  }
}

std::vector<Complex> sample_directions(int dim, std::size_t count, std::uint64_t seed) {
  std::vector<Complex> out(count * dim);
  const std::size_t chunks = (count + kReductionChunk - 1) / kReductionChunk;
  parallel_for(chunks, [&](std::size_t c) {
    const std::size_t begin = c * kReductionChunk;
    const std::size_t n = std::min(kReductionChunk, count - begin);
    fill_direction_chunk(dim, seed, c, n, out.data() + begin * dim);
  });
  return out;
}

std::vector<Complex> sample_coordinates(const SphereSamplePlan& plan) {
  plan.validate();
  const int d = plan.dim;
  const std::size_t gsize = plan.group_size();
  std::vector<Complex> out(plan.sample_count * d);
  std::vector<Complex> dirs;
  if (plan.deterministic()) {
    dirs = {std::polar(1.0, std::numbers::pi / static_cast<double>(plan.circle_nodes))};
  } else {
    dirs = sample_directions(d, plan.group_count(), plan.seed);
  }
  for (std::size_t g = 0; g < plan.group_count(); ++g) {
    group_nodes(plan, dirs.data() + g * d, out.data() + g * gsize * d);
  }
  return out;
}

std::vector<SpherePoint> sample_sphere(const SphereSamplePlan& plan) {
  const auto flat = sample_coordinates(plan);
  const int d = plan.dim;
  std::vector<SpherePoint> pts;
  pts.reserve(plan.sample_count);
  for (std::size_t i = 0; i < plan.sample_count; ++i) {
    pts.emplace_back(std::vector<Complex>(flat.begin() + i * d, flat.begin() + (i + 1) * d));
  }
  return pts;
}

std::vector<Estimate> slice_integrate_vector(const VectorBoundaryFunction& f, std::size_t width,
                                             const SphereSamplePlan& plan) {
  const std::size_t gsize = plan.group_size();
  const int d = plan.dim;
  return reduce_groups(plan, width,
                       [&](std::size_t, const Complex* nodes, std::span<double> scratch,
                           std::span<double> out) {
                         std::fill(out.begin(), out.end(), 0.0);
                         for (std::size_t k = 0; k < gsize; ++k) {
                           std::span<const Complex> zeta(nodes + k * d, d);
                           try {
                             f(zeta, scratch);
                           } catch (const Error& e) {
                             throw Error(e.error_class(), "slice_integrate",
                                         std::string(e.what()) + " at zeta=" + format_point(zeta));
                           }
                           for (std::size_t w = 0; w < out.size(); ++w) out[w] += scratch[w];
                         }
                         for (auto& v : out) v /= static_cast<double>(gsize);
                       });
}

ComplexEstimate slice_integrate(const BoundaryFunction& f, const SphereSamplePlan& plan) {
  const auto est = slice_integrate_vector(
      [&](std::span<const Complex> zeta, std::span<double> out) {
        const Complex v = f(zeta);
        out[0] = v.real();
        out[1] = v.imag();
      },
      2, plan);
  return {Complex(est[0].value, est[1].value), std::hypot(est[0].se, est[1].se)};
}

Estimate slice_integrate_real(const RealBoundaryFunction& f, const SphereSamplePlan& plan) {
  return slice_integrate_vector(
      [&](std::span<const Complex> zeta, std::span<double> out) { out[0] = f(zeta); }, 1,
      plan)[0];
}

std::vector<Estimate> reduce_over_nodes(const IndexedNodeFunction& f, std::size_t width,
                                        const SphereSamplePlan& plan) {
  const std::size_t gsize = plan.group_size();
  return reduce_groups(plan, width,
                       [&](std::size_t group, const Complex*, std::span<double> scratch,
                           std::span<double> out) {
                         std::fill(out.begin(), out.end(), 0.0);
                         for (std::size_t k = 0; k < gsize; ++k) {
                           f(group * gsize + k, scratch);
                           for (std::size_t w = 0; w < out.size(); ++w) out[w] += scratch[w];
                         }
                         for (auto& v : out) v /= static_cast<double>(gsize);
                       });
}

Estimate group_estimate(std::span<const double> g, bool deterministic) {
  const std::size_t m = g.size();
  if (m == 0) return {};
  const double mean = pairwise_sum(g) / static_cast<double>(m);
  if (deterministic || m < 2) return {mean, 0.0};
  std::vector<double> dev(m);
  for (std::size_t i = 0; i < m; ++i) dev[i] = (g[i] - mean) * (g[i] - mean);
  const double var = pairwise_sum(dev) / static_cast<double>(m - 1);
  return {mean, std::sqrt(var / static_cast<double>(m))};
}

AdaptiveCircleResult integrate_circle_adaptive(const std::function<Complex(Complex)>& f,
                                               const AdaptiveCircleOptions& options) {
  // Fixed offset (a golden-ratio fraction of the initial spacing); nodes
  // offset + 2 pi k / n are nested under doubling.
  const std::size_t n0 = std::max<std::size_t>(options.initial_nodes, 4);
  const double offset = kTwoPi * 0.6180339887498949 / static_cast<double>(n0);

  auto sum_nodes = [&](std::size_t n, std::size_t first, std::size_t stride) {
    std::vector<double> re, im;
    const std::size_t count = (n - first + stride - 1) / stride;
    re.reserve(count);
    im.reserve(count);
    for (std::size_t k = first; k < n; k += stride) {
      const Complex v = f(std::polar(1.0, offset + kTwoPi * static_cast<double>(k) / static_cast<double>(n)));
      re.push_back(v.real());
      im.push_back(v.imag());
    }
    return Complex(pairwise_sum(re), pairwise_sum(im));
  };

  std::size_t n = n0;
  Complex total = sum_nodes(n, 0, 1);
  Complex prev = total / static_cast<double>(n);
  int stable = 0;
  while (2 * n <= options.max_nodes) {
    // The new nodes of the 2n rule are the odd indices.
    total += sum_nodes(2 * n, 1, 2);
    n *= 2;
    const Complex cur = total / static_cast<double>(n);
    const double diff = std::abs(cur - prev);
    prev = cur;
    if (diff <= std::max(options.abs_tol, options.rel_tol * std::abs(cur))) {
      if (++stable >= 2) return {cur, n, true};
    } else {
      stable = 0;
    }
  }
  return {prev, n, false};
}

namespace {

constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double kronrod;
  double error;
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double k = kWgk[7] * fc;
  double g = kWg[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double x = h * kXgk[j];
    const double s = f(c - x) + f(c + x);
    k += kWgk[j] * s;
    if (j % 2 == 1) g += kWg[j / 2] * s;
  }
  return {k * h, std::abs((k - g) * h)};
}

void gk_recurse(const std::function<double(double)>& f, double a, double b, double tol_density,
                int depth, GaussKronrodResult& acc) {
  const Panel p = gk15(f, a, b);
  acc.evaluations += 15;
  const double tol = std::max(tol_density * (b - a), 1e-15 * std::abs(p.kronrod));
  if (p.error <= tol || depth <= 0) {
    acc.value += p.kronrod;
    acc.error += p.error;
    return;
  }
  const double m = 0.5 * (a + b);
  gk_recurse(f, a, m, tol_density, depth - 1, acc);
  gk_recurse(f, m, b, tol_density, depth - 1, acc);
}

}  // namespace

GaussKronrodResult integrate_gauss_kronrod(const std::function<double(double)>& f, double a,
                                           double b, double abs_tol, int max_depth) {
  GaussKronrodResult acc;
  if (b == a) return acc;
  gk_recurse(f, a, b, abs_tol / std::abs(b - a), max_depth, acc);
  return acc;
}

namespace {

void gk15_vector(const VectorFunction1D& f, std::size_t width, double a, double b,
                 std::vector<double>& kron, double& err, std::vector<double>& buf) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  std::vector<double> g(width, 0.0);
  kron.assign(width, 0.0);
  f(c, buf);
  for (std::size_t i = 0; i < width; ++i) {
    kron[i] = kWgk[7] * buf[i];
    g[i] = kWg[3] * buf[i];
  }
  std::vector<double> other(width);
  for (int j = 0; j < 7; ++j) {
    const double x = h * kXgk[j];
    f(c - x, buf);
    f(c + x, other);
    for (std::size_t i = 0; i < width; ++i) {
      const double s = buf[i] + other[i];
      kron[i] += kWgk[j] * s;
      if (j % 2 == 1) g[i] += kWg[j / 2] * s;
    }
  }
  err = 0.0;
  for (std::size_t i = 0; i < width; ++i) {
    err = std::max(err, std::abs((kron[i] - g[i]) * h));
    kron[i] *= h;
  }
}

void gk_vector_recurse(const VectorFunction1D& f, std::size_t width, double a, double b,
                       double tol_density, int depth, GaussKronrodVectorResult& acc,
                       std::vector<double>& buf) {
  std::vector<double> kron;
  double err = 0.0;
  gk15_vector(f, width, a, b, kron, err, buf);
  acc.evaluations += 15;
  double scale = 0.0;
  for (double v : kron) scale = std::max(scale, std::abs(v));
  const double tol = std::max(tol_density * (b - a), 1e-15 * scale);
  if (err <= tol || depth <= 0) {
    for (std::size_t i = 0; i < width; ++i) acc.value[i] += kron[i];
    acc.error += err;
    return;
  }
  const double m = 0.5 * (a + b);
  gk_vector_recurse(f, width, a, m, tol_density, depth - 1, acc, buf);
  gk_vector_recurse(f, width, m, b, tol_density, depth - 1, acc, buf);
}

}  // namespace

GaussKronrodVectorResult integrate_gauss_kronrod_vector(const VectorFunction1D& f,
                                                        std::size_t width, double a, double b,
                                                        double abs_tol, int max_depth) {
  GaussKronrodVectorResult acc;
  acc.value.assign(width, 0.0);
  if (b == a || width == 0) return acc;
  std::vector<double> buf(width);
  gk_vector_recurse(f, width, a, b, abs_tol / std::abs(b - a), max_depth, acc, buf);
  return acc;
}

}  // namespace clarklab
