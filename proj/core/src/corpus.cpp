#include "clarklab/corpus.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "clarklab/errors.hpp"

namespace clarklab {

Symbol random_blaschke(int degree, std::uint64_t seed, double max_radius) {
  if (degree < 1) throw InvalidArgumentError("random_blaschke", "degree must be positive");
  if (!(max_radius > 0.0 && max_radius < 1.0)) {
    throw InvalidArgumentError("random_blaschke", "max_radius must lie in (0, 1)");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<BlaschkeZero> zeros;
  for (int k = 0; k < degree; ++k) {
    const double r = max_radius * std::sqrt(u(rng));
    const double t = 2.0 * std::numbers::pi * u(rng);
    zeros.push_back({std::polar(r, t), 1});
  }
  const Complex gamma = std::polar(1.0, 2.0 * std::numbers::pi * u(rng));
  return Symbol::blaschke(gamma, std::move(zeros));
}

std::vector<Symbol> random_blaschke_family(std::size_t count, std::uint64_t seed, int max_degree) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_int_distribution<int> deg(1, max_degree);
  std::vector<Symbol> out;
  for (std::size_t i = 0; i < count; ++i) {
    const int d = i == 0 ? max_degree : deg(rng);  // always cover the top degree
    out.push_back(random_blaschke(d, rng()));
  }
  return out;
}

namespace {

MultiPolynomial mono(int dim, std::vector<int> exponent, Complex c) {
  return MultiPolynomial(dim, {Monomial{std::move(exponent), c}});
}

}  // namespace

std::vector<CorpusEntry> builtin_corpus(std::uint64_t seed) {
  std::vector<CorpusEntry> c;
  c.push_back({"z", Symbol::power(1), "identity of the disk"});
  c.push_back({"z2", Symbol::power(2), "z^2"});
  c.push_back({"z3", Symbol::power(3), "z^3"});
  const auto family = random_blaschke_family(5, seed);
  for (std::size_t i = 0; i < family.size(); ++i) {
    c.push_back({"blaschke_rand_" + std::to_string(i), family[i], "seeded random Blaschke product"});
  }
  c.push_back({"half_plus_half_z", Symbol::polynomial(mono(1, {0}, 0.5) + mono(1, {1}, 0.5)), "(1 + z) / 2"});
  c.push_back({"const_0.3", Symbol::constant(1, 0.3), "constant 0.3"});
  c.push_back({"0.99z", Symbol::polynomial(mono(1, {1}, 0.99)), "0.99 z"});
  c.push_back({"z1_ball2", Symbol::polynomial(mono(2, {1, 0}, 1.0)), "z1 on B_2"});
  c.push_back({"half_plus_half_z1_ball2", Symbol::polynomial(mono(2, {0, 0}, 0.5) + mono(2, {1, 0}, 0.5)),
               "(1 + z1) / 2 on B_2"});
  c.push_back({"z1z2_ball2", Symbol::polynomial(mono(2, {1, 1}, 1.0)), "z1 z2 on B_2"});
  return c;
}

std::vector<std::string> corpus_names() {
  std::vector<std::string> names;
  for (const auto& e : builtin_corpus()) names.push_back(e.name);
  return names;
}

Symbol corpus_symbol(const std::string& name, std::uint64_t seed) {
  for (auto& e : builtin_corpus(seed)) {
    if (e.name == name) return e.symbol;
  }
  throw InvalidArgumentError("corpus", "no built-in symbol named '" + name + "'");
}

}  // namespace clarklab
