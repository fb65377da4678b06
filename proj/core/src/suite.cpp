#include "clarklab/suite.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>

#include "clarklab/clark.hpp"
#include "clarklab/corpus.hpp"
#include "clarklab/counting.hpp"
#include "clarklab/errors.hpp"
#include "clarklab/essnorm.hpp"
#include "clarklab/modelspace.hpp"

namespace clarklab {

namespace {

using Rng = std::mt19937_64;

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Complex random_unimodular(Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
  return std::polar(1.0, u(rng));
}

// Uniform in the ball of radius `radius` in C^d.
std::vector<Complex> random_ball(Rng& rng, int dim, double radius) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Complex> z(dim);
  double n2 = 0.0;
  for (auto& c : z) {
    c = {g(rng), g(rng)};
    n2 += std::norm(c);
  }
  const double r = radius * std::pow(u(rng), 1.0 / (2.0 * dim)) / std::sqrt(n2);
  for (auto& c : z) c *= r;
  return z;
}

std::vector<Complex> random_sphere(Rng& rng, int dim) {
  auto z = random_ball(rng, dim, 1.0);
  const double n = std::sqrt(norm_squared(z));
  for (auto& c : z) c /= n;
  return z;
}

std::vector<Symbol> d1_blaschke_corpus(std::uint64_t seed) {
  std::vector<Symbol> out{Symbol::power(1), Symbol::power(2), Symbol::power(3)};
  for (auto& s : random_blaschke_family(5, seed)) out.push_back(std::move(s));
  return out;
}

CheckResult herglotz(std::uint64_t seed) {
  Rng rng(seed + 1);
  CheckResult r{"herglotz", "Poisson integral of sigma_alpha equals the Herglotz real part", false, 0.0, 1e-10, 0.0, {}};
  std::vector<BallPoint> pts;
  for (int i = 0; i < 50; ++i) pts.emplace_back(random_ball(rng, 1, 0.95));
  std::vector<Complex> alphas;
  for (int k = 0; k < 8; ++k) alphas.push_back(random_unimodular(rng));
  const auto opts = ClarkOptions::defaults(1, seed);
  for (const auto& phi : d1_blaschke_corpus(seed)) {
    for (Complex a : alphas) {
      const auto data = clark_data(phi, a, opts);
      r.value = std::max(r.value, verify_herglotz(phi, a, data, pts, opts).max_residual);
    }
  }
  r.pass = r.value <= r.bound;
  r.detail = fmt("8 symbols x 8 alpha x 50 points, max residual %.3g", r.value);
  return r;
}

CheckResult mass_budget(std::uint64_t seed) {
  CheckResult r{"mass_budget", "singular mass of (1+z)/2 is 2 at alpha = 1 and 0 at alpha = i", false, 0.0, 1e-8, 0.0, {}};
  const Symbol phi = corpus_symbol("half_plus_half_z", seed);
  const auto opts = ClarkOptions::defaults(1, seed);
  const double s1 = clark_data(phi, 1.0, opts).singular_mass.value;
  const double si = clark_data(phi, Complex(0.0, 1.0), opts).singular_mass.value;
  r.value = std::max(std::abs(s1 - 2.0), std::abs(si));
  r.pass = r.value <= r.bound;
  r.detail = fmt("singular(1) = %.12g, singular(i) = %.3g", s1, si);
  return r;
}

CheckResult dimension_contrast(std::uint64_t seed) {
  CheckResult r{"dimension_contrast", "(1+z1)/2 on B_2 at alpha = 1: a.c. mass 3, no singular part", false, 0.0, 3.0, 0.0, {}};
  const Symbol phi = corpus_symbol("half_plus_half_z1_ball2", seed);
  ClarkOptions opts = ClarkOptions::defaults(2, seed);
  opts.plan = SphereSamplePlan::monte_carlo(2, 1000000, seed);
  const auto data = clark_data(phi, 1.0, opts);
  const double se = data.ac_mass.se;
  const double z_ac = std::abs(data.ac_mass.value - 3.0) / se;
  const double z_s = std::abs(data.singular_mass.value) / se;
  r.value = std::max(z_ac, z_s);
  r.pass = r.value <= r.bound;
  r.detail = fmt("ac = %.6f +- %.2g, singular = %.3g (in SE units: %.2f, %.2f)", data.ac_mass.value, se,
                 data.singular_mass.value, z_ac, z_s);
  return r;
}

CheckResult compactness(std::uint64_t seed) {
  CheckResult r{"compactness", "z1 on B_2: a.c. mass 1 for every alpha and all estimators vanish", false, 0.0, 3.0, 0.0, {}};
  const Symbol phi = corpus_symbol("z1_ball2", seed);
  const auto opts = ClarkOptions::defaults(2, seed);
  Rng rng(seed + 4);
  double worst = 0.0;
  for (int k = 0; k < 8; ++k) {
    const Estimate m = clark_ac_mass(phi, random_unimodular(rng), opts);
    worst = std::max(worst, std::abs(m.value - 1.0) / m.se);
  }
  const auto rep = essential_norm_report(phi, EssNormConfig::defaults(2, seed));
  const double top = std::max({rep.bhat_sigma.value.value, rep.bhat_N.estimate, rep.lower_bound.value});
  r.value = worst;
  r.pass = worst <= 3.0 && top <= 0.05 && rep.consistent;
  r.detail = fmt("ac mass deviation %.2f SE; estimators (%.4f, %.4f, %.4f); verdict %s", worst,
                 rep.bhat_sigma.value.value, rep.bhat_N.estimate, rep.lower_bound.value,
                 rep.consistent ? "consistent" : "inconsistent");
  return r;
}

CheckResult essnorm_triple(std::uint64_t seed) {
  CheckResult r{"essnorm_triple", "Clark, counting and test-function estimators agree", true, 0.0, 1.0, 0.0, {}};
  struct Case {
    const char* name;
    double target;
    double tol_sigma, tol_n, tol_lower;  // relative, or absolute when target = 0
  };
  const Case cases[] = {{"z", 1.0, 1e-6, 0.02, 1e-6},
                        {"half_plus_half_z", 2.0, 1e-6, 0.05, 0.02},
                        {"const_0.3", 0.0, 1e-6, 1e-6, 1e-6}};
  for (const auto& c : cases) {
    const auto rep = essential_norm_report(corpus_symbol(c.name, seed), EssNormConfig::defaults(1, seed));
    auto dev = [&](double v, double tol) {
      const double scale = c.target == 0.0 ? 1.0 : c.target;
      return std::abs(v - c.target) / (scale * tol);
    };
    const double worst = std::max({dev(rep.bhat_sigma.value.value, c.tol_sigma), dev(rep.bhat_N.estimate, c.tol_n),
                                   dev(rep.lower_bound.value, c.tol_lower)});
    r.value = std::max(r.value, worst);
    r.pass = r.pass && worst <= 1.0 && rep.consistent;
    r.detail += fmt("%s: (%.6f, %.6f, %.6f) %s; ", c.name, rep.bhat_sigma.value.value, rep.bhat_N.estimate,
                    rep.lower_bound.value, rep.consistent ? "consistent" : "inconsistent");
  }
  return r;
}

CheckResult disintegration(std::uint64_t seed) {
  CheckResult r{"disintegration", "alpha-average of sigma_alpha is sigma_d", false, 0.0, 1.0, 0.0, {}};
  const std::vector<BoundaryFunction> fs{[](std::span<const Complex>) { return Complex(1.0); },
                                         [](std::span<const Complex> z) { return Complex(z[0].real()); },
                                         [](std::span<const Complex> z) { return Complex(std::norm(z[0])); }};
  for (const auto& e : builtin_corpus(seed)) {
    const auto res = disintegration_check(e.symbol, fs, 256, ClarkOptions::defaults(e.symbol.dim(), seed));
    for (const auto& d : res) r.value = std::max(r.value, d.residual / std::max(1e-8, 3.0 * d.se));
  }
  r.pass = r.value <= r.bound;
  r.detail = fmt("worst |lhs - rhs| / max(1e-8, 3 SE) = %.3g", r.value);
  return r;
}

CheckResult double_cauchy(std::uint64_t seed) {
  CheckResult r{"double_cauchy", "double Cauchy integral matches its closed form", false, 0.0, 1e-10, 0.0, {}};
  Rng rng(seed + 7);
  std::vector<std::pair<BallPoint, BallPoint>> pairs1, pairs2;
  for (int i = 0; i < 10; ++i) {
    pairs1.emplace_back(BallPoint(random_ball(rng, 1, 0.95)), BallPoint(random_ball(rng, 1, 0.95)));
  }
  const auto opts1 = ClarkOptions::defaults(1, seed);
  for (const auto& phi : random_blaschke_family(5, seed)) {
    const Complex a = random_unimodular(rng);
    r.value = std::max(r.value, verify_double_cauchy(phi, a, clark_data(phi, a, opts1), pairs1, opts1).max_residual);
  }
  for (int i = 0; i < 10; ++i) {
    pairs2.emplace_back(BallPoint(random_ball(rng, 2, 0.9)), BallPoint(random_ball(rng, 2, 0.9)));
  }
  const Symbol phi2 = corpus_symbol("half_plus_half_z1_ball2", seed);
  ClarkOptions opts2 = ClarkOptions::defaults(2, seed);
  opts2.plan = SphereSamplePlan::monte_carlo(2, 1000000, seed);
  const auto mc = verify_double_cauchy(phi2, -1.0, clark_data(phi2, -1.0, opts2), pairs2, opts2);
  r.pass = r.value <= r.bound && mc.max_sigma <= 3.0;
  r.detail = fmt("atomic max residual %.3g; Monte Carlo max residual %.3g at %.2f SE", r.value, mc.max_residual,
                 mc.max_sigma);
  return r;
}

CheckResult stanton(std::uint64_t seed) {
  CheckResult r{"stanton", "Stanton formula for f in {1, z, z^2, z^3 + z/2}", false, 0.0, 1.0, 0.0, {}};
  const std::vector<Polynomial> fs{Polynomial({1.0}), Polynomial({0.0, 1.0}), Polynomial({0.0, 0.0, 1.0}),
                                   Polynomial({0.0, 0.5, 0.0, 1.0})};
  StantonOptions so;
  so.seed = seed;
  for (const auto& e : builtin_corpus(seed)) {
    for (const auto& s : stanton_check(fs, e.symbol, so)) {
      r.value = std::max(r.value, s.residual / std::max(1e-6, 3.0 * s.se));
    }
  }
  r.pass = r.value <= r.bound;
  r.detail = fmt("worst residual / max(1e-6, 3 SE) = %.3g", r.value);
  return r;
}

CheckResult clark_unitary(std::uint64_t seed) {
  CheckResult r{"clark_unitary", "U_alpha preserves kernel inner products; U_alpha^* inverts it", false, 0.0, 1e-8, 0.0, {}};
  Rng rng(seed + 9);
  std::normal_distribution<double> g;
  double gram = 0.0, round_trip = 0.0;
  for (const auto& inner : random_blaschke_family(5, seed)) {
    const Complex a = random_unimodular(rng);
    std::vector<Complex> pts, coeffs;
    for (int j = 0; j < 8; ++j) {
      pts.push_back(random_ball(rng, 1, 0.9)[0]);
      coeffs.emplace_back(g(rng), g(rng));
    }
    gram = std::max(gram, gram_test(inner, a, pts).frobenius_residual);
    const KernelSpan f(inner, pts, coeffs);
    const CircleFunction back = adjoint_apply(inner, a, unitary_apply(f, a));
    for (int k = 0; k < 20; ++k) {
      const Complex z = random_ball(rng, 1, 0.95)[0];
      round_trip = std::max(round_trip, std::abs(back(z) - f(z)));
    }
  }
  r.value = gram;
  r.pass = gram <= 1e-8 && round_trip <= 1e-10;
  r.detail = fmt("Gram Frobenius residual %.3g, adjoint round trip %.3g", gram, round_trip);
  return r;
}

CheckResult poltoratski(std::uint64_t seed) {
  CheckResult r{"poltoratski", "pi y |{|mu_+| > y}| tends to the singular mass", true, 0.0, 0.1, 0.0, {}};
  const std::vector<double> y{1e3};
  for (const char* name : {"z", "half_plus_half_z"}) {
    const auto tab = poltoratski_check(corpus_symbol(name, seed), 1.0, y, PoltoratskiOptions{},
                                       ClarkOptions::defaults(1, seed));
    const double target = tab.singular_mass;
    const double dev = std::abs(tab.rows[0].scaled - target) / target;
    r.value = std::max(r.value, dev);
    r.pass = r.pass && dev <= r.bound;
    r.detail += fmt("%s: %.5f vs %.5f; ", name, tab.rows[0].scaled, target);
  }
  return r;
}

CheckResult counting_bound(std::uint64_t seed) {
  CheckResult r{"counting_bound", "N <= Jensen majorant, with equality on Blaschke slices", false, 0.0, 1e-8, 0.0, {}};
  std::vector<CorpusEntry> entries;
  for (auto& e : builtin_corpus(seed)) {
    if (!e.symbol.is_constant()) entries.push_back(std::move(e));
  }
  Rng rng(seed + 11);
  double excess = 0.0, gap = 0.0;
  std::size_t equal_cases = 0;
  for (std::size_t i = 0; i < 1000; ++i) {
    const Symbol& phi = entries[i % entries.size()].symbol;
    const auto zeta = random_sphere(rng, phi.dim());
    const Complex c = phi.slice(zeta).value_at_origin();
    Complex w;
    do {
      w = random_ball(rng, 1, 0.95)[0];
    } while (std::abs(w - c) < 1e-3);
    const double n = slice_counting(phi, zeta, w).value;
    const double m = majorant(phi, zeta, w);
    excess = std::max(excess, n - m);
    if (phi.dim() == 1 && phi.is_inner()) {
      gap = std::max(gap, std::abs(n - m));
      ++equal_cases;
    }
  }
  r.value = std::max(excess, gap);
  r.pass = excess <= 1e-8 && gap <= 1e-8;
  r.detail = fmt("max N - majorant %.3g over 1000 samples; max |N - majorant| %.3g over %zu Blaschke samples", excess,
                 gap, equal_cases);
  return r;
}

struct Entry {
  const char* id;
  bool quick;
  double time_limit;  // seconds; 0 for none
  CheckResult (*run)(std::uint64_t);
};

const Entry kEntries[] = {
    {"herglotz", true, 1.0, herglotz},
    {"mass_budget", true, 0.0, mass_budget},
    {"dimension_contrast", false, 30.0, dimension_contrast},
    {"compactness", false, 0.0, compactness},
    {"essnorm_triple", true, 0.0, essnorm_triple},
    {"disintegration", false, 0.0, disintegration},
    {"double_cauchy", false, 0.0, double_cauchy},
    {"stanton", false, 0.0, stanton},
    {"clark_unitary", true, 0.0, clark_unitary},
    {"poltoratski", true, 20.0, poltoratski},
    {"counting_bound", false, 0.0, counting_bound},
};

}  // namespace

bool SuiteReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

std::vector<std::string> suite_names() { return {"core", "quick"}; }

SuiteReport run_suite(const std::string& name, std::uint64_t seed) {
  if (name != "core" && name != "quick") throw InvalidArgumentError("run_suite", "unknown suite '" + name + "'");
  SuiteReport rep;
  rep.suite = name;
  rep.seed = seed;
  for (const auto& e : kEntries) {
    if (name == "quick" && !e.quick) continue;
    const auto t0 = std::chrono::steady_clock::now();
    CheckResult c;
    try {
      c = e.run(seed);
    } catch (const std::exception& ex) {
      c.id = e.id;
      c.pass = false;
      c.detail = std::string("exception: ") + ex.what();
    }
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (e.time_limit > 0.0 && c.seconds > e.time_limit) {
      c.pass = false;
      c.detail += fmt(" (took %.2f s, limit %.0f s)", c.seconds, e.time_limit);
    }
    rep.checks.push_back(std::move(c));
  }
  return rep;
}

}  // namespace clarklab
