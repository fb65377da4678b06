#include "clarklab/io.hpp"

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>

#include "clarklab/errors.hpp"

namespace clarklab::io {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw InvalidArgumentError("io", std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

Json poly_to_json(const MultiPolynomial& p) {
  Json terms = Json::array();
  for (const auto& m : p.terms()) terms.push_back({{"exponent", m.exponent}, {"coeff", to_json(m.coeff)}});
  return {{"terms", terms}};
}

MultiPolynomial poly_from_json(const Json& j, int dim) {
  std::vector<Monomial> terms;
  for (const auto& t : field(j, "terms")) {
    Monomial m;
    m.exponent = field(t, "exponent").get<std::vector<int>>();
    if (static_cast<int>(m.exponent.size()) != dim) {
      throw InvalidArgumentError("io", "multi-index length does not match the dimension");
    }
    for (int e : m.exponent) {
      if (e < 0) throw InvalidArgumentError("io", "negative exponent");
    }
    m.coeff = complex_from_json(field(t, "coeff"));
    terms.push_back(std::move(m));
  }
  return MultiPolynomial(dim, std::move(terms));
}

}  // namespace

Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw InvalidArgumentError("io", "complex numbers are [re, im] pairs");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

Json symbol_to_json(const Symbol& phi) {
  Json j;
  j["dim"] = phi.dim();
  j["variant"] = phi.variant_name();
  std::visit(Overloaded{[&](const ConstantSymbol& c) { j["value"] = to_json(c.value); },
                        [&](const PolynomialSymbol& p) { j["terms"] = poly_to_json(p.poly)["terms"]; },
                        [&](const RationalSymbol& r) {
                          j["numerator"] = poly_to_json(r.numerator);
                          j["denominator"] = poly_to_json(r.denominator);
                        },
                        [&](const BlaschkeSymbol& b) {
                          j["unimodular"] = to_json(b.unimodular);
                          Json zs = Json::array();
                          for (const auto& z : b.zeros) {
                            zs.push_back({{"point", to_json(z.point)}, {"multiplicity", z.multiplicity}});
                          }
                          j["zeros"] = zs;
                        },
                        [&](const SingularInnerSymbol& s) {
                          Json as = Json::array();
                          for (const auto& a : s.atoms) as.push_back({{"point", to_json(a.point)}, {"mass", a.mass}});
                          j["atoms"] = as;
                        },
                        [&](const ProductSymbol& p) {
                          Json fs = Json::array();
                          for (const auto& f : p.factors) fs.push_back(symbol_to_json(f));
                          j["factors"] = fs;
                        }},
             phi.variant());
  return j;
}

Symbol symbol_from_json(const Json& j) {
  try {
    const int dim = field(j, "dim").get<int>();
    if (dim < 1) throw InvalidArgumentError("io", "dimension must be positive");
    const std::string variant = field(j, "variant").get<std::string>();
    auto require_d1 = [&] {
      if (dim != 1) throw InvalidArgumentError("io", "variant '" + variant + "' is univariate");
    };
    if (variant == "constant") return Symbol::constant(dim, complex_from_json(field(j, "value")));
    if (variant == "polynomial") return Symbol::polynomial(poly_from_json(j, dim));
    if (variant == "rational") {
      return Symbol::rational(poly_from_json(field(j, "numerator"), dim), poly_from_json(field(j, "denominator"), dim));
    }
    if (variant == "blaschke") {
      require_d1();
      std::vector<BlaschkeZero> zeros;
      for (const auto& z : field(j, "zeros")) {
        zeros.push_back({complex_from_json(field(z, "point")), z.value("multiplicity", 1)});
      }
      const Complex u = j.contains("unimodular") ? complex_from_json(j.at("unimodular")) : Complex(1.0, 0.0);
      return Symbol::blaschke(u, std::move(zeros));
    }
    if (variant == "singular_inner") {
      require_d1();
      std::vector<SingularAtom> atoms;
      for (const auto& a : field(j, "atoms")) {
        atoms.push_back({complex_from_json(field(a, "point")), field(a, "mass").get<double>()});
      }
      return Symbol::singular_inner(std::move(atoms));
    }
    if (variant == "product") {
      require_d1();
      std::vector<Symbol> factors;
      for (const auto& f : field(j, "factors")) factors.push_back(symbol_from_json(f));
      return Symbol::product(std::move(factors));
    }
    throw InvalidArgumentError("io", "unknown symbol variant '" + variant + "'");
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgumentError("io", std::string("malformed symbol document: ") + e.what());
  }
}

Json plan_to_json(const SphereSamplePlan& plan) {
  Json j;
  j["dim"] = plan.dim;
  j["mode"] = plan.mode == SampleMode::kMonteCarlo ? "monte_carlo" : "slice_product";
  j["sample_count"] = plan.sample_count;
  j["directions"] = plan.directions;
  j["circle_nodes"] = plan.circle_nodes;
  j["seed"] = plan.seed;
  return j;
}

SphereSamplePlan plan_from_json(const Json& j) {
  try {
    const int dim = field(j, "dim").get<int>();
    const std::string mode = field(j, "mode").get<std::string>();
    const std::uint64_t seed = j.value("seed", std::uint64_t{0});
    SphereSamplePlan p;
    if (mode == "monte_carlo") {
      p = SphereSamplePlan::monte_carlo(dim, field(j, "sample_count").get<std::size_t>(), seed);
    } else if (mode == "slice_product") {
      p = SphereSamplePlan::slice_product(dim, field(j, "directions").get<std::size_t>(),
                                          field(j, "circle_nodes").get<std::size_t>(), seed);
    } else {
      throw InvalidArgumentError("io", "unknown plan mode '" + mode + "'");
    }
    p.validate();
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgumentError("io", std::string("malformed plan document: ") + e.what());
  }
}

Json measure_to_json(const MeasureRep& mu) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["dim"] = mu.dim();
  j["positive"] = mu.positive();
  Json atoms = Json::array();
  for (const auto& a : mu.atoms()) {
    Json pt = Json::array();
    for (const Complex& c : a.point) pt.push_back(to_json(c));
    atoms.push_back({{"point", pt}, {"weight", to_json(a.weight)}});
  }
  j["atoms"] = atoms;
  if (!mu.density()) {
    j["density"] = nullptr;
    return j;
  }
  const Density& d = *mu.density();
  Json dj;
  dj["kind"] = d.tag.kind;
  if (d.tag.kind == "constant") {
    dj["constant"] = d.tag.constant;
  } else if (d.tag.kind == "clark_ac") {
    if (!d.tag.symbol) throw InvalidArgumentError("measure_to_json", "clark_ac density without a symbol");
    dj["symbol"] = symbol_to_json(*d.tag.symbol);
    dj["alpha"] = to_json(d.tag.alpha);
  } else if (d.tag.kind != "uniform") {
    throw InvalidArgumentError("measure_to_json", "custom densities cannot be serialized");
  }
  dj["plan"] = plan_to_json(d.plan);
  dj["adaptive"] = d.adaptive;
  dj["max_nodes"] = d.max_nodes;
  j["density"] = dj;
  return j;
}

MeasureRep measure_from_json(const Json& j) {
  try {
    const int dim = field(j, "dim").get<int>();
    const bool positive = j.value("positive", true);
    std::vector<MeasureAtom> atoms;
    for (const auto& a : field(j, "atoms")) {
      MeasureAtom m;
      for (const auto& c : field(a, "point")) m.point.push_back(complex_from_json(c));
      m.weight = complex_from_json(field(a, "weight"));
      atoms.push_back(std::move(m));
    }
    if (!j.contains("density") || j.at("density").is_null()) {
      return MeasureRep(dim, std::move(atoms), std::nullopt, positive);
    }
    const Json& dj = j.at("density");
    const std::string kind = field(dj, "kind").get<std::string>();
    const SphereSamplePlan plan = plan_from_json(field(dj, "plan"));
    const std::size_t max_nodes = dj.value("max_nodes", std::size_t{1} << 22);
    Density d;
    if (kind == "clark_ac") {
      d = make_clark_density(symbol_from_json(field(dj, "symbol")), complex_from_json(field(dj, "alpha")), plan,
                             max_nodes);
    } else if (kind == "uniform") {
      d.fn = [](std::span<const Complex>) { return 1.0; };
      d.tag.kind = "uniform";
    } else if (kind == "constant") {
      const double c = field(dj, "constant").get<double>();
      d.fn = [c](std::span<const Complex>) { return c; };
      d.tag.kind = "constant";
      d.tag.constant = c;
    } else {
      throw InvalidArgumentError("io", "unknown density kind '" + kind + "'");
    }
    d.plan = plan;
    d.adaptive = dj.value("adaptive", d.adaptive);
    d.max_nodes = max_nodes;
    if (d.plan.dim != dim) throw InvalidArgumentError("io", "density plan dimension mismatch");
    return MeasureRep(dim, std::move(atoms), std::move(d), positive);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgumentError("io", std::string("malformed measure document: ") + e.what());
  }
}

Json clark_to_json(const ClarkData& data) {
  Json j;
  j["alpha"] = to_json(data.alpha);
  j["total_mass"] = data.total_mass;
  j["ac_mass"] = data.ac_mass.value;
  j["ac_mass_se"] = data.ac_mass.se;
  j["singular_mass"] = data.singular_mass.value;
  if (data.atoms) {
    Json atoms = Json::array();
    for (const auto& a : *data.atoms) atoms.push_back(Json::array({a.point.real(), a.point.imag(), a.weight}));
    j["atoms"] = atoms;
  }
  j["circle_nodes_used"] = data.circle_nodes_used;
  j["quadrature_converged"] = data.quadrature_converged;
  j["warnings"] = data.warnings;
  return j;
}

Json residual_to_json(const ResidualReport& r) {
  return {{"max_residual", r.max_residual}, {"se", r.se}, {"max_sigma", r.max_sigma}, {"residuals", r.residuals}};
}

Json disintegration_to_json(const DisintegrationResult& r) {
  return {{"lhs", to_json(r.lhs)},         {"rhs", to_json(r.rhs)},
          {"residual", r.residual},        {"se", r.se},
          {"alpha_nodes", r.alpha_nodes},  {"warnings", r.warnings}};
}

Json poltoratski_to_json(const PoltoratskiTable& t) {
  Json rows = Json::array();
  for (const auto& r : t.rows) {
    rows.push_back({{"y", r.y}, {"tail", r.tail.value}, {"tail_se", r.tail.se}, {"scaled", r.scaled},
                    {"scaled_se", r.scaled_se}});
  }
  return {{"alpha", to_json(t.alpha)},
          {"singular_mass", t.singular_mass},
          {"singular_mass_se", t.singular_mass_se},
          {"samples", t.samples},
          {"rows", rows}};
}

Json counting_to_json(const CountingSample& s) {
  Json roots = Json::array();
  for (const auto& r : s.roots) roots.push_back({{"z", to_json(r.z)}, {"multiplicity", r.multiplicity}});
  return {{"w", to_json(s.w)}, {"N", s.value}, {"roots", roots}};
}

Json stanton_to_json(const StantonResult& s) {
  return {{"lhs", s.lhs}, {"rhs", s.rhs}, {"residual", s.residual}, {"se", s.se}, {"slices", s.slices}};
}

Json limsup_to_json(const LimsupEstimate& e) {
  Json ladder = Json::array();
  for (std::size_t i = 0; i < e.radii.size(); ++i) {
    ladder.push_back(Json::array({e.radii[i], e.sup_values[i], e.sup_se[i], e.argmax_angle[i]}));
  }
  return {{"ladder", ladder},
          {"ladder_columns", Json::array({"radius", "sup_ratio", "se", "argmax_angle"})},
          {"estimate", e.estimate},
          {"band", Json::array({e.band_lo, e.band_hi})},
          {"note", "limsup estimated by a fixed radii ladder with a sup over angular nodes"}};
}

Json essnorm_to_json(const EssNormReport& r) {
  Json per_alpha = Json::array();
  for (const auto& a : r.bhat_sigma.per_alpha) {
    per_alpha.push_back(Json::array({std::arg(a.alpha), a.singular.value, a.singular.se, a.inserted}));
  }
  Json ladders = Json::array();
  for (const auto& l : r.lower_ladders) {
    Json vals = Json::array();
    for (std::size_t i = 0; i < l.radii.size(); ++i) {
      vals.push_back(Json::array({l.radii[i], l.values[i].value, l.values[i].se}));
    }
    ladders.push_back({{"arg", std::arg(l.alpha)}, {"ladder", vals}, {"raw", l.raw.value}, {"limit", l.limit.value},
                       {"limit_se", l.limit.se}, {"truncation", l.truncation}});
  }
  Json j;
  j["bhat_sigma"] = {{"value", r.bhat_sigma.value.value},
                     {"se", r.bhat_sigma.value.se},
                     {"argmax", std::arg(r.bhat_sigma.argmax)},
                     {"per_alpha_columns", Json::array({"arg", "mass", "se", "inserted"})},
                     {"per_alpha", per_alpha}};
  j["bhat_N"] = limsup_to_json(r.bhat_N);
  j["lower_bound"] = {{"value", r.lower_bound.value},
                      {"se", r.lower_bound.se},
                      {"raw_at_largest_radius", r.lower_bound_raw},
                      {"truncation", r.lower_truncation},
                      {"per_alpha_ladders", ladders}};
  j["verdict"] = r.consistent ? "consistent" : "inconsistent";
  j["margins"] = {{"lower", r.margin_lower}, {"counting", r.margin_counting}};
  j["tolerances"] = {{"lower", r.tol_lower}, {"counting", r.tol_counting}};
  return j;
}

Json gram_to_json(const GramReport& r) {
  return {{"degree", r.degree}, {"alpha", to_json(r.alpha)}, {"basis", r.basis},
          {"frobenius_residual", r.frobenius_residual}};
}

Json membership_to_json(const MembershipReport& r) {
  Json coeffs = Json::array();
  for (const auto& [k, c] : r.coefficients) coeffs.push_back(Json::array({k, c.real(), c.imag()}));
  return {{"verdict", r.member ? "member" : "not_member"},
          {"nodes", r.nodes},
          {"max_nonpositive", r.max_nonpositive},
          {"coefficients", coeffs}};
}

std::string config_hash(const Json& config) {
  const std::string s = config.dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("io", "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("io", "cannot read '" + path + "'");
  return ss.str();
}

void write_text_file(const std::string& path, std::string_view content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("io", "cannot open '" + tmp + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("io", "cannot write '" + tmp + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("io", "cannot rename '" + tmp + "' to '" + path + "': " + ec.message());
}

Symbol parse_symbol_argument(const std::string& arg) {
  std::string text = arg;
  std::size_t first = text.find_first_not_of(" \t\n\r");
  if (first == std::string::npos) throw InvalidArgumentError("io", "empty symbol argument");
  if (text[first] != '{') text = read_text_file(arg);
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidArgumentError("io", std::string("symbol is not valid JSON: ") + e.what());
  }
  return symbol_from_json(j);
}

}  // namespace clarklab::io
