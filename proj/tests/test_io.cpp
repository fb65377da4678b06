#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <random>

#include "clarklab/clark.hpp"
#include "clarklab/corpus.hpp"
#include "clarklab/errors.hpp"
#include "clarklab/io.hpp"

using namespace clarklab;
using clarklab::io::Json;

namespace {

void expect_same_values(const Symbol& a, const Symbol& b) {
  ASSERT_EQ(a.dim(), b.dim());
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  for (int i = 0; i < 20; ++i) {
    std::vector<Complex> z(a.dim());
    double n2 = 0.0;
    for (auto& c : z) {
      c = {g(rng), g(rng)};
      n2 += std::norm(c);
    }
    for (auto& c : z) c *= 0.9 / std::sqrt(n2);
    ASSERT_EQ(a.eval_raw(z), b.eval_raw(z));
  }
}

}  // namespace

TEST(Io, SymbolRoundTripIsExact) {
  for (const auto& e : builtin_corpus(3)) {
    const Json j = io::symbol_to_json(e.symbol);
    const Symbol back = io::symbol_from_json(Json::parse(j.dump()));
    EXPECT_EQ(io::symbol_to_json(back).dump(), j.dump()) << e.name;
    expect_same_values(e.symbol, back);
  }
  const Symbol s = Symbol::product({Symbol::singular_inner({{Complex(0, 1), 0.25}}), random_blaschke(3, 1)});
  expect_same_values(s, io::symbol_from_json(io::symbol_to_json(s)));
  const Symbol r = Symbol::rational(MultiPolynomial::coordinate(1, 0) * 0.5,
                                    MultiPolynomial::constant(1, 1.0) + MultiPolynomial::coordinate(1, 0) * -0.4);
  expect_same_values(r, io::symbol_from_json(io::symbol_to_json(r)));
}

TEST(Io, ComplexAcceptsNumbers) {
  EXPECT_EQ(io::complex_from_json(Json::parse("[0.5, -2]")), Complex(0.5, -2));
  EXPECT_EQ(io::complex_from_json(Json::parse("3")), Complex(3, 0));
}

TEST(Io, MalformedSymbols) {
  EXPECT_THROW(io::symbol_from_json(Json::parse(R"({"dim":1,"variant":"nope"})")), InvalidArgumentError);
  EXPECT_THROW(io::symbol_from_json(Json::parse(R"({"dim":1,"variant":"constant"})")), InvalidArgumentError);
  EXPECT_THROW(io::symbol_from_json(Json::parse("[1,2]")), InvalidArgumentError);
  EXPECT_THROW(io::parse_symbol_argument("{not json"), InvalidArgumentError);
  EXPECT_THROW(io::parse_symbol_argument("/nonexistent/symbol.json"), IoError);
}

TEST(Io, ParseInlineSymbol) {
  const Json j = io::symbol_to_json(Symbol::power(2));
  const Symbol s = io::parse_symbol_argument(j.dump());
  expect_same_values(s, Symbol::power(2));
}

TEST(Io, PlanRoundTrip) {
  const auto p = SphereSamplePlan::slice_product(3, 100, 32, 77);
  const auto q = io::plan_from_json(io::plan_to_json(p));
  EXPECT_EQ(q.dim, 3);
  EXPECT_EQ(q.directions, 100u);
  EXPECT_EQ(q.circle_nodes, 32u);
  EXPECT_EQ(q.seed, 77u);
  EXPECT_EQ(q.sample_count, 3200u);
  const auto m = io::plan_from_json(io::plan_to_json(SphereSamplePlan::monte_carlo(2, 500, 4)));
  EXPECT_EQ(m.mode, SampleMode::kMonteCarlo);
  EXPECT_EQ(m.sample_count, 500u);
}

TEST(Io, MeasureRoundTrip) {
  const auto mu = MeasureRep::atoms_only(1, {{{1.0}, 2.0}, {{Complex(0, 1)}, 0.5}});
  const auto back = io::measure_from_json(io::measure_to_json(mu));
  EXPECT_EQ(back.atoms().size(), 2u);
  EXPECT_EQ(total_mass(back).value, total_mass(mu).value);

  const Symbol h = Symbol::polynomial(MultiPolynomial::constant(1, 0.5) + MultiPolynomial::coordinate(1, 0) * 0.5);
  const auto opt = ClarkOptions::defaults(1);
  const auto data = clark_data(h, 1.0, opt);
  const auto sigma = clark_measure(h, data, opt);
  const auto again = io::measure_from_json(Json::parse(io::measure_to_json(sigma).dump()));
  EXPECT_NEAR(std::abs(total_mass(again).value - 3.0), 0.0, 1e-8);
  const BallPoint z{Complex(0.2, 0.3)};
  EXPECT_NEAR(std::abs(poisson_integral(again, z).value - poisson_integral(sigma, z).value), 0.0, 1e-12);
}

TEST(Io, CustomDensityIsNotSerializable) {
  Density d{[](std::span<const Complex>) { return 1.0; }, SphereSamplePlan::circle(16), {}, false};
  EXPECT_THROW(io::measure_to_json(MeasureRep::with_density(d)), InvalidArgumentError);
}

TEST(Io, ConfigHashIsStable) {
  Json a = {{"x", 1}, {"y", "s"}};
  Json b = {{"x", 1}, {"y", "s"}};
  EXPECT_EQ(io::config_hash(a), io::config_hash(b));
  EXPECT_EQ(io::config_hash(a).size(), 16u);
  b["x"] = 2;
  EXPECT_NE(io::config_hash(a), io::config_hash(b));
}

TEST(Io, FileRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "clarklab_io_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "a.json").string();
  io::write_text_file(path, "{\"k\": 1}\n");
  EXPECT_EQ(io::read_text_file(path), "{\"k\": 1}\n");
  std::filesystem::remove_all(dir);
  EXPECT_THROW(io::read_text_file(path), IoError);
}

TEST(Io, ReportsSerialize) {
  const auto data = clark_data(Symbol::power(2), 1.0, ClarkOptions::defaults(1));
  const Json j = io::clark_to_json(data);
  EXPECT_NEAR(j.at("total_mass").get<double>(), 1.0, 1e-15);
  EXPECT_EQ(j.at("atoms").size(), 2u);
}
