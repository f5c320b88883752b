#pragma once

#include <cstdint>

#include "ncgsat/formula.hpp"

namespace ncgsat {
namespace gen {

// Reproducible instance generators. Pure functions of their parameters and
// seed; the same call always yields the same formula. Variable id i is
// named "x<i+1>".

/// Uniform random k-CNF: m clauses, each over k distinct variables chosen
/// uniformly from n, signs uniform. Throws std::invalid_argument if k > n
/// or k == 0.
Problem random_kcnf(std::uint32_t n, std::uint32_t m, std::uint32_t k,
                    std::uint64_t seed);

struct PlantedCnf {
  Problem problem;
  Assignment model;  // the hidden satisfying assignment
};

/// Random k-CNF filtered to be satisfied by a hidden uniform assignment:
/// every clause is resampled until it has a true literal under it. All
/// instances are satisfiable by construction.
PlantedCnf random_kcnf_planted(std::uint32_t n, std::uint32_t m,
                               std::uint32_t k, std::uint64_t seed);

struct OpWeights {
  double and_w = 0.3;
  double or_w = 0.3;
  double not_w = 0.2;
  double implies_w = 0.1;
  double iff_w = 0.1;
};

/// Random formula tree. Leaves are uniform literals (a variable or its
/// negation); internal connectives are drawn by weight; And/Or arity is
/// uniform in [2, max_arity]; each child receives a fresh uniform depth
/// budget in [1, depth-1], so sizes vary. depth == 1 yields a literal.
Problem random_formula(std::uint32_t max_depth, std::uint32_t max_arity,
                       std::uint32_t n_vars, const OpWeights& weights,
                       std::uint64_t seed);

}  // namespace gen
}  // namespace ncgsat
