#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "clarklab/symbol.hpp"

namespace clarklab {

struct CorpusEntry {
  std::string name;
  Symbol symbol;
  std::string description;
};

/// Finite Blaschke product of the given degree with zeros drawn uniformly
/// from the disk of radius max_radius and a random unimodular factor.
Symbol random_blaschke(int degree, std::uint64_t seed, double max_radius = 0.9);

/// Seeded random Blaschke products of degree 1..8 used by the suites.
std::vector<Symbol> random_blaschke_family(std::size_t count, std::uint64_t seed,
                                           int max_degree = 8);

/// The example corpus: z, z^2, z^3, seeded random Blaschke products, (1+z)/2,
/// the constant 0.3, 0.99 z, and z1, (1+z1)/2, z1 z2 on B_2.
std::vector<CorpusEntry> builtin_corpus(std::uint64_t seed = 0);

/// Looks up a corpus entry by name; throws InvalidArgumentError otherwise.
Symbol corpus_symbol(const std::string& name, std::uint64_t seed = 0);
std::vector<std::string> corpus_names();

}  // namespace clarklab
