// clark-lab: command-line front end for the clarklab library.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "clarklab/clark.hpp"
#include "clarklab/corpus.hpp"
#include "clarklab/counting.hpp"
#include "clarklab/errors.hpp"
#include "clarklab/essnorm.hpp"
#include "clarklab/io.hpp"
#include "clarklab/modelspace.hpp"
#include "clarklab/parallel.hpp"
#include "clarklab/suite.hpp"

namespace {

using namespace clarklab;
using io::Json;

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

constexpr std::size_t kMaxAlphaNodes = 1 << 16;
constexpr std::size_t kMaxSamples = std::size_t{1} << 26;

struct Common {
  std::string symbol;
  std::string out;
  std::string format = "json";
  std::uint64_t seed = 0;
  int threads = 0;
};

// Output of a subcommand: the JSON result plus an optional CSV projection.
struct Output {
  Json result;
  std::vector<std::string> csv_header;
  std::vector<std::vector<std::string>> csv_rows;
  Json timings = Json::object();
  int exit_code = kExitOk;
};

std::string num(double x) {
  std::ostringstream s;
  s.precision(17);
  s << x;
  return s.str();
}

/// "1", "-1", "i", "0.3,0.4", "[0.3,0.4]", "0.3+0.4i" style complex literals.
Complex parse_complex(const std::string& text) {
  std::string t;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  }
  if (t.empty()) throw InvalidArgumentError("cli", "empty complex literal");
  try {
    if (t.front() == '[') return io::complex_from_json(Json::parse(t));
    if (auto comma = t.find(','); comma != std::string::npos) {
      return {std::stod(t.substr(0, comma)), std::stod(t.substr(comma + 1))};
    }
    if (t.back() == 'i') {
      const std::string body = t.substr(0, t.size() - 1);
      // split at the last sign that is not an exponent sign
      std::size_t split = std::string::npos;
      for (std::size_t k = body.size(); k-- > 1;) {
        if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
          split = k;
          break;
        }
      }
      auto coef = [](const std::string& s) {
        if (s.empty() || s == "+") return 1.0;
        if (s == "-") return -1.0;
        return std::stod(s);
      };
      if (split == std::string::npos) return {0.0, coef(body)};
      return {std::stod(body.substr(0, split)), coef(body.substr(split))};
    }
    std::size_t used = 0;
    const double re = std::stod(t, &used);
    if (used != t.size()) throw std::invalid_argument(t);
    return {re, 0.0};
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    throw InvalidArgumentError("cli", "cannot parse complex number '" + text + "'");
  }
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw InvalidArgumentError("cli", "cannot parse number '" + item + "' in list");
    }
  }
  return out;
}

Symbol load_symbol(const std::string& arg, std::uint64_t seed) {
  if (arg.empty()) throw InvalidArgumentError("cli", "--symbol is required");
  Symbol phi = arg.rfind("builtin:", 0) == 0 ? corpus_symbol(arg.substr(8), seed) : io::parse_symbol_argument(arg);
  const SchwarzCheck chk = validate_schwarz(phi, phi.dim() == 1 ? 4096 : 20000, seed);
  if (!chk.pass) {
    throw RangeViolationError("validate_schwarz", "symbol is not a self-map of the disk (max modulus " +
                                                      num(chk.max_modulus) + "): " + chk.reason);
  }
  return phi;
}

void require_cap(std::size_t value, std::size_t cap, const char* what) {
  if (value == 0 || value > cap) {
    throw InvalidArgumentError("cli", std::string(what) + " must lie in [1, " + std::to_string(cap) + "]");
  }
}

std::vector<Complex> uniform_alphas(std::size_t n) {
  std::vector<Complex> a;
  for (std::size_t k = 0; k < n; ++k) a.push_back(std::polar(1.0, 2.0 * std::numbers::pi * k / n));
  return a;
}

// Sphere plan options shared by several subcommands.
struct PlanArgs {
  std::size_t samples = 0;  // Monte Carlo when set
  std::size_t directions = 0;
  std::size_t slice_nodes = 0;
  std::size_t circle_nodes = 0;  // d = 1 starting size

  void attach(CLI::App* app) {
    app->add_option("--samples", samples, "Monte Carlo sample count (d >= 2)");
    app->add_option("--directions", directions, "slice-product directions (d >= 2)");
    app->add_option("--slice-nodes", slice_nodes, "slice-product circle nodes (d >= 2)");
    app->add_option("--circle-nodes", circle_nodes, "starting trapezoid size (d = 1)");
  }

  ClarkOptions options(int dim, std::uint64_t seed) const {
    ClarkOptions o = ClarkOptions::defaults(dim, seed);
    if (dim == 1) {
      if (circle_nodes) {
        require_cap(circle_nodes, o.max_circle_nodes, "--circle-nodes");
        o.plan = SphereSamplePlan::circle(circle_nodes);
      }
    } else if (samples) {
      require_cap(samples, kMaxSamples, "--samples");
      o.plan = SphereSamplePlan::monte_carlo(dim, samples, seed);
    } else if (directions || slice_nodes) {
      const std::size_t m = directions ? directions : o.plan.directions;
      const std::size_t n = slice_nodes ? slice_nodes : o.plan.circle_nodes;
      require_cap(m * n, kMaxSamples, "directions x slice nodes");
      o.plan = SphereSamplePlan::slice_product(dim, m, n, seed);
    }
    o.plan.validate();
    return o;
  }
};

// Random interior points for the residual reports.
std::vector<BallPoint> residual_points(int dim, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed + 101);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<BallPoint> pts;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Complex> z(dim);
    double n2 = 0.0;
    for (auto& c : z) {
      c = {g(rng), g(rng)};
      n2 += std::norm(c);
    }
    const double r = 0.9 * std::pow(u(rng), 1.0 / (2.0 * dim)) / std::sqrt(n2);
    for (auto& c : z) c *= r;
    pts.emplace_back(std::move(z));
  }
  return pts;
}

Output run_clark(const Common& c, const std::vector<std::string>& alpha_args, std::size_t alpha_grid,
                 const PlanArgs& plan, bool residuals, Json& config) {
  const Symbol phi = load_symbol(c.symbol, c.seed);
  const ClarkOptions opts = plan.options(phi.dim(), c.seed);
  std::vector<Complex> alphas;
  for (const auto& a : alpha_args) alphas.push_back(parse_complex(a));
  if (alpha_grid) {
    require_cap(alpha_grid, kMaxAlphaNodes, "--alpha-grid");
    for (Complex a : uniform_alphas(alpha_grid)) alphas.push_back(a);
  }
  if (alphas.empty()) alphas.push_back(1.0);
  config["plan"] = io::plan_to_json(opts.plan);
  config["alphas"] = Json::array();
  for (Complex a : alphas) config["alphas"].push_back(io::to_json(a));
  config["residuals"] = residuals;

  Output out;
  out.csv_header = {"alpha_re", "alpha_im", "total_mass", "ac_mass", "ac_mass_se", "singular_mass", "atoms"};
  Json reports = Json::array();
  const auto pts = residual_points(phi.dim(), 8, c.seed);
  std::vector<std::pair<BallPoint, BallPoint>> pairs;
  for (std::size_t i = 0; i + 1 < pts.size(); i += 2) pairs.emplace_back(pts[i], pts[i + 1]);
  for (Complex a : alphas) {
    const ClarkData data = clark_data(phi, a, opts);
    Json j = io::clark_to_json(data);
    if (residuals) {
      j["residuals"] = {{"herglotz", io::residual_to_json(verify_herglotz(phi, a, data, pts, opts))},
                        {"double_cauchy", io::residual_to_json(verify_double_cauchy(phi, a, data, pairs, opts))}};
    }
    reports.push_back(j);
    out.csv_rows.push_back({num(a.real()), num(a.imag()), num(data.total_mass), num(data.ac_mass.value),
                            num(data.ac_mass.se), num(data.singular_mass.value),
                            data.atoms ? std::to_string(data.atoms->size()) : ""});
  }
  out.result = alphas.size() == 1 ? reports[0] : Json{{"per_alpha", reports}};
  return out;
}

Output run_atoms(const Common& c, const std::string& alpha_arg, Json& config) {
  const Symbol phi = load_symbol(c.symbol, c.seed);
  if (phi.dim() != 1) throw InvalidArgumentError("atoms", "atoms are available for d = 1 symbols only");
  const Complex a = parse_complex(alpha_arg);
  config["alpha"] = io::to_json(a);
  std::vector<std::string> warnings;
  std::vector<ClarkAtom> atoms;
  if (phi.is_inner()) {
    if (!phi.rational_form()) throw InvalidArgumentError("atoms", "singular inner factors have no finite atom list");
    atoms = clark_atoms_d1(phi, a, &warnings);
  } else if (phi.rational_form()) {
    atoms = clark_contact_atoms(phi, a);
  }
  Output out;
  out.csv_header = {"re", "im", "arg", "weight"};
  Json list = Json::array();
  double total = 0.0;
  for (const auto& at : atoms) {
    list.push_back(Json::array({at.point.real(), at.point.imag(), at.weight}));
    out.csv_rows.push_back({num(at.point.real()), num(at.point.imag()), num(std::arg(at.point)), num(at.weight)});
    total += at.weight;
  }
  out.result = {{"alpha", io::to_json(a)}, {"atoms", list}, {"atom_mass", total}, {"warnings", warnings}};
  return out;
}

Output run_essnorm(const Common& c, std::size_t alpha_nodes, const std::string& radii, std::size_t angular,
                   std::size_t directions, const PlanArgs& plan, Json& config) {
  const Symbol phi = load_symbol(c.symbol, c.seed);
  EssNormConfig cfg = EssNormConfig::defaults(phi.dim(), c.seed);
  cfg.clark = plan.options(phi.dim(), c.seed);
  if (alpha_nodes) {
    require_cap(alpha_nodes, kMaxAlphaNodes, "--alpha-nodes");
    cfg.alpha_nodes = alpha_nodes;
  }
  if (!radii.empty()) cfg.radii = parse_list(radii);
  if (angular) cfg.angular_nodes = angular;
  if (directions) cfg.counting_directions = directions;
  config["alpha_nodes"] = cfg.alpha_nodes;
  config["radii"] = cfg.radii;
  config["angular_nodes"] = cfg.angular_nodes;
  config["counting_directions"] = cfg.counting_directions;
  config["plan"] = io::plan_to_json(cfg.clark.plan);

  const EssNormReport rep = essential_norm_report(phi, cfg);
  Output out;
  out.result = io::essnorm_to_json(rep);
  out.result["symbol_ref"] = c.symbol;
  out.csv_header = {"alpha_arg", "singular_mass", "se", "inserted"};
  for (const auto& a : rep.bhat_sigma.per_alpha) {
    out.csv_rows.push_back({num(std::arg(a.alpha)), num(a.singular.value), num(a.singular.se), a.inserted ? "1" : "0"});
  }
  return out;
}

Output run_counting(const Common& c, const std::vector<std::string>& ws, bool stanton, bool limsup,
                    std::size_t directions, Json& config) {
  const Symbol phi = load_symbol(c.symbol, c.seed);
  const SphereSamplePlan plan = phi.dim() == 1
                                    ? SphereSamplePlan::circle(1)
                                    : SphereSamplePlan::slice_product(phi.dim(), directions ? directions : 1024, 1, c.seed);
  config["plan"] = io::plan_to_json(plan);
  config["w"] = ws;
  config["stanton"] = stanton;
  config["limsup"] = limsup;
  const SliceFamily family(phi, plan);
  Output out;
  out.csv_header = {"w_re", "w_im", "N", "N_se", "majorant", "majorant_se"};
  Json rows = Json::array();
  for (const auto& wa : ws) {
    const Complex w = parse_complex(wa);
    const IntegratedCounting n = family.integrate(w);
    // Jensen majorant averaged over the same slices.
    std::vector<double> m;
    for (std::size_t j = 0; j < family.size(); ++j) {
      if (family.constant(j)) {
        m.push_back(0.0);
        continue;
      }
      m.push_back(majorant(phi, family.direction(j), w));
    }
    const Estimate me = group_estimate(m, family.deterministic());
    rows.push_back({{"w", io::to_json(w)},
                    {"N", n.value.value},
                    {"N_se", n.value.se},
                    {"majorant", me.value},
                    {"majorant_se", me.se},
                    {"slices", n.slices},
                    {"skipped", n.skipped}});
    out.csv_rows.push_back({num(w.real()), num(w.imag()), num(n.value.value), num(n.value.se), num(me.value), num(me.se)});
  }
  out.result["table"] = rows;
  if (stanton) {
    const std::vector<Polynomial> fs{Polynomial({1.0}), Polynomial({0.0, 1.0}), Polynomial({0.0, 0.0, 1.0}),
                                     Polynomial({0.0, 0.5, 0.0, 1.0})};
    const char* names[] = {"1", "z", "z^2", "z^3 + 0.5 z"};
    StantonOptions so;
    so.seed = c.seed;
    const auto res = stanton_check(fs, phi, so);
    Json sj = Json::array();
    for (std::size_t i = 0; i < res.size(); ++i) {
      Json e = io::stanton_to_json(res[i]);
      e["f"] = names[i];
      sj.push_back(e);
    }
    out.result["stanton"] = sj;
  }
  if (limsup) {
    BhatNOptions bo;
    if (phi.dim() >= 2) bo.plan = SphereSamplePlan::slice_product(phi.dim(), directions ? directions : 1024, 1, c.seed);
    out.result["bhat_N"] = io::limsup_to_json(bhat_N(phi, bo));
  }
  return out;
}

BoundaryFunction test_function(const std::string& name) {
  if (name == "one") return [](std::span<const Complex>) { return Complex(1.0); };
  if (name == "re") return [](std::span<const Complex> z) { return Complex(z[0].real()); };
  if (name == "abs2") return [](std::span<const Complex> z) { return Complex(std::norm(z[0])); };
  throw InvalidArgumentError("disintegrate", "unknown test function '" + name + "' (one, re, abs2)");
}

Output run_disintegrate(const Common& c, std::vector<std::string> fnames, std::size_t alpha_nodes,
                        const PlanArgs& plan, Json& config) {
  const Symbol phi = load_symbol(c.symbol, c.seed);
  require_cap(alpha_nodes, kMaxAlphaNodes, "--alpha-nodes");
  if (fnames.empty()) fnames = {"one", "re", "abs2"};
  const ClarkOptions opts = plan.options(phi.dim(), c.seed);
  config["alpha_nodes"] = alpha_nodes;
  config["functions"] = fnames;
  config["plan"] = io::plan_to_json(opts.plan);
  std::vector<BoundaryFunction> fs;
  for (const auto& n : fnames) fs.push_back(test_function(n));
  const auto res = disintegration_check(phi, fs, alpha_nodes, opts);
  Output out;
  out.csv_header = {"f", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "residual", "se"};
  Json rows = Json::array();
  for (std::size_t i = 0; i < res.size(); ++i) {
    Json j = io::disintegration_to_json(res[i]);
    j["f"] = fnames[i];
    rows.push_back(j);
    out.csv_rows.push_back({fnames[i], num(res[i].lhs.real()), num(res[i].lhs.imag()), num(res[i].rhs.real()),
                            num(res[i].rhs.imag()), num(res[i].residual), num(res[i].se)});
  }
  out.result["checks"] = rows;
  return out;
}

Output run_poltoratski(const Common& c, const std::string& alpha_arg, const std::string& ys, std::size_t samples,
                       Json& config) {
  const Symbol phi = load_symbol(c.symbol, c.seed);
  const Complex a = parse_complex(alpha_arg);
  const std::vector<double> y = ys.empty() ? std::vector<double>{10.0, 100.0, 1000.0} : parse_list(ys);
  PoltoratskiOptions po;
  if (phi.dim() >= 2) po.plan = SphereSamplePlan::monte_carlo(phi.dim(), samples ? samples : 1000000, c.seed);
  config["alpha"] = io::to_json(a);
  config["y"] = y;
  config["plan"] = io::plan_to_json(po.plan);
  const auto tab = poltoratski_check(phi, a, y, po, ClarkOptions::defaults(phi.dim(), c.seed));
  Output out;
  out.result = io::poltoratski_to_json(tab);
  out.csv_header = {"y", "tail", "tail_se", "scaled", "scaled_se"};
  for (const auto& r : tab.rows) {
    out.csv_rows.push_back({num(r.y), num(r.tail.value), num(r.tail.se), num(r.scaled), num(r.scaled_se)});
  }
  return out;
}

Output run_modelspace(const Common& c, const std::string& mode, const std::string& alpha_arg,
                      const std::vector<std::string>& points, const std::string& poly, std::size_t nodes,
                      Json& config) {
  const Symbol inner = load_symbol(c.symbol, c.seed);
  config["mode"] = mode;
  Output out;
  if (mode == "gram") {
    const Complex a = parse_complex(alpha_arg);
    std::vector<Complex> pts;
    for (const auto& p : points) pts.push_back(parse_complex(p));
    if (pts.empty()) {
      for (const auto& b : residual_points(1, 8, c.seed)) pts.push_back(b[0]);
    }
    config["alpha"] = io::to_json(a);
    config["points"] = Json::array();
    for (Complex p : pts) config["points"].push_back(io::to_json(p));
    out.result = io::gram_to_json(gram_test(inner, a, pts));
    out.csv_header = {"degree", "basis", "frobenius_residual"};
    out.csv_rows.push_back({out.result["degree"].dump(), out.result["basis"].dump(),
                            num(out.result["frobenius_residual"].get<double>())});
    return out;
  }
  if (mode == "member") {
    std::vector<Complex> coeffs;
    std::string spaced = poly;
    std::replace(spaced.begin(), spaced.end(), ';', ' ');
    std::stringstream ss(spaced);
    std::string item;
    while (ss >> item) coeffs.push_back(parse_complex(item));
    if (coeffs.empty()) throw InvalidArgumentError("modelspace", "--poly needs coefficients 'c0;c1;...'");
    config["poly"] = Json::array();
    for (Complex p : coeffs) config["poly"].push_back(io::to_json(p));
    config["nodes"] = nodes;
    out.result = io::membership_to_json(ksmall_member(inner, Polynomial(coeffs), nodes));
    out.csv_header = {"index", "re", "im"};
    for (const auto& row : out.result["coefficients"]) {
      out.csv_rows.push_back({row[0].dump(), num(row[1].get<double>()), num(row[2].get<double>())});
    }
    return out;
  }
  throw InvalidArgumentError("modelspace", "--mode must be gram or member");
}

Output run_verify(const std::string& suite, std::uint64_t seed, Json& config) {
  config["suite"] = suite;
  const SuiteReport rep = run_suite(suite, seed);
  Output out;
  Json checks = Json::array();
  out.csv_header = {"id", "pass", "value", "bound"};
  for (const auto& ch : rep.checks) {
    checks.push_back({{"id", ch.id},
                      {"description", ch.description},
                      {"pass", ch.pass},
                      {"value", ch.value},
                      {"bound", ch.bound},
                      {"detail", ch.detail}});
    out.timings[ch.id] = ch.seconds;
    out.csv_rows.push_back({ch.id, ch.pass ? "PASS" : "FAIL", num(ch.value), num(ch.bound)});
    std::fprintf(stderr, "%s %-20s %s\n", ch.pass ? "PASS" : "FAIL", ch.id.c_str(), ch.detail.c_str());
  }
  out.result = {{"suite", suite}, {"all_pass", rep.all_pass()}, {"checks", checks}};
  out.exit_code = rep.all_pass() ? kExitOk : kExitNumerical;
  return out;
}

std::string csv_text(const Output& o) {
  std::string s;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) s += ',';
      s += cells[i];
    }
    s += '\n';
  };
  line(o.csv_header);
  for (const auto& r : o.csv_rows) line(r);
  return s;
}

void emit(const Common& c, const std::string& command, const Json& config, const Output& o) {
  const std::string hash = io::config_hash(config);
  std::string text;
  if (c.format == "csv") {
    text = "# clark-lab " + command + " config_hash=" + hash + "\n" + csv_text(o);
  } else {
    Json doc;
    doc["schema_version"] = io::kSchemaVersion;
    doc["command"] = command;
    doc["config_hash"] = hash;
    doc["config"] = config;
    doc["result"] = o.result;
    text = doc.dump(2) + "\n";
  }
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  io::write_text_file(c.out, text);
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&tt));
  Json meta{{"report", c.out}, {"config_hash", hash}, {"timestamp", stamp}, {"threads", worker_count()},
            {"timings_seconds", o.timings}};
  io::write_text_file(c.out + ".meta.json", meta.dump(2) + "\n");
}

int exit_code_for(const Error& e) {
  switch (e.error_class()) {
    case ErrorClass::kValidation: return kExitValidation;
    case ErrorClass::kNumerical: return kExitNumerical;
    case ErrorClass::kIo: return kExitIo;
  }
  return kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Aleksandrov-Clark measures, identity checks and essential norms of composition operators"};
  app.require_subcommand(1);
  Common common;

  auto add_common = [&](CLI::App* sub, bool needs_symbol) {
    auto* opt = sub->add_option("--symbol", common.symbol, "symbol: inline JSON, a JSON file, or builtin:<name>");
    if (needs_symbol) opt->required();
    sub->add_option("--out", common.out, "report path (stdout when omitted)");
    sub->add_option("--format", common.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--seed", common.seed, "random seed (default 0)");
    sub->add_option("--threads", common.threads, "worker threads (overrides CLARKLAB_THREADS)");
  };

  std::vector<std::string> alphas;
  std::string alpha = "1";
  std::size_t alpha_grid = 0, alpha_nodes = 0, angular = 0, directions = 0, samples = 0, nodes = 64;
  std::string radii, ys, mode = "gram", poly, suite = "core";
  std::vector<std::string> ws, fnames, points;
  bool no_residuals = false, stanton = false, limsup = false;
  PlanArgs plan;

  auto* clark = app.add_subcommand("clark", "Clark measure data for (phi, alpha) or an alpha grid");
  add_common(clark, true);
  clark->add_option("--alpha", alphas, "Clark parameter on T (repeatable)");
  clark->add_option("--alpha-grid", alpha_grid, "add n equispaced alpha values");
  clark->add_flag("--no-residuals", no_residuals, "skip the Herglotz and double Cauchy residuals");
  plan.attach(clark);

  auto* atoms = app.add_subcommand("atoms", "Clark atoms of a d = 1 symbol");
  add_common(atoms, true);
  atoms->add_option("--alpha", alpha, "Clark parameter on T");

  auto* ess = app.add_subcommand("essnorm", "three estimates of the essential norm");
  add_common(ess, true);
  ess->add_option("--alpha-nodes", alpha_nodes, "uniform alpha nodes (default 256)");
  ess->add_option("--radii", radii, "comma-separated radii ladder");
  ess->add_option("--angular-nodes", angular, "angular nodes for the counting sup");
  ess->add_option("--counting-directions", directions, "directions for the counting estimator (d >= 2)");
  plan.attach(ess);

  auto* counting = app.add_subcommand("counting", "Nevanlinna counting function and Jensen majorant");
  add_common(counting, true);
  counting->add_option("--w", ws, "target points in the disk (repeatable)");
  counting->add_option("--directions", directions, "slice directions (d >= 2)");
  counting->add_flag("--stanton", stanton, "run the Stanton formula check");
  counting->add_flag("--limsup", limsup, "estimate the limsup of N / (1 - |w|)");

  auto* dis = app.add_subcommand("disintegrate", "alpha-average of Clark measures against sigma_d");
  add_common(dis, true);
  dis->add_option("--f", fnames, "test functions: one, re, abs2 (repeatable)");
  dis->add_option("--alpha-nodes", alpha_nodes, "alpha nodes (default 256)");
  plan.attach(dis);

  auto* pol = app.add_subcommand("poltoratski", "distribution function of the Cauchy transform");
  add_common(pol, true);
  pol->add_option("--alpha", alpha, "Clark parameter on T");
  pol->add_option("--y", ys, "comma-separated thresholds");
  pol->add_option("--samples", samples, "Monte Carlo samples (d >= 2)");

  auto* ms = app.add_subcommand("modelspace", "Clark unitary Gram test or model space membership");
  add_common(ms, true);
  ms->add_option("--mode", mode, "gram or member")->check(CLI::IsMember({"gram", "member"}));
  ms->add_option("--alpha", alpha, "Clark parameter on T");
  ms->add_option("--point", points, "kernel basis point (repeatable)");
  ms->add_option("--poly", poly, "polynomial coefficients, separated by spaces or semicolons");
  ms->add_option("--nodes", nodes, "circle nodes for membership");

  auto* ver = app.add_subcommand("verify", "run an identity suite over the built-in corpus");
  add_common(ver, false);
  ver->add_option("--suite", suite, "core or quick")->check(CLI::IsMember(suite_names()));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitValidation;
  }

  if (common.threads > 0) setenv("CLARKLAB_THREADS", std::to_string(common.threads).c_str(), 1);

  try {
    CLI::App* sub = app.get_subcommands().front();
    const std::string command = sub->get_name();
    Json config;
    config["command"] = command;
    config["seed"] = common.seed;
    if (!common.symbol.empty()) config["symbol"] = common.symbol;
    Output out;
    if (command == "clark") {
      out = run_clark(common, alphas, alpha_grid, plan, !no_residuals, config);
    } else if (command == "atoms") {
      out = run_atoms(common, alpha, config);
    } else if (command == "essnorm") {
      out = run_essnorm(common, alpha_nodes, radii, angular, directions, plan, config);
    } else if (command == "counting") {
      if (ws.empty()) ws = {"0.5", "0,0.9", "-0.99"};
      out = run_counting(common, ws, stanton, limsup, directions, config);
    } else if (command == "disintegrate") {
      out = run_disintegrate(common, fnames, alpha_nodes ? alpha_nodes : 256, plan, config);
    } else if (command == "poltoratski") {
      out = run_poltoratski(common, alpha, ys, samples, config);
    } else if (command == "modelspace") {
      out = run_modelspace(common, mode, alpha, points, poly, nodes, config);
    } else {
      out = run_verify(suite, common.seed, config);
    }
    emit(common, command, config, out);
    return out.exit_code;
  } catch (const Error& e) {
    std::cerr << "clark-lab: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "clark-lab: " << e.what() << "\n";
    return kExitIo;
  }
}
