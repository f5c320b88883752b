#include "ncgsat/gen.hpp"

#include <stdexcept>
#include <string>
#include <vector>

#include "ncgsat/rng.hpp"

namespace ncgsat {
namespace gen {

namespace {

std::vector<std::string> default_names(std::uint32_t n) {
  std::vector<std::string> names;
  names.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i)
    names.push_back("x" + std::to_string(i + 1));
  return names;
}

// k distinct variables by partial Fisher-Yates over a scratch id vector.
std::vector<VarId> draw_vars(std::vector<VarId>& pool, std::uint32_t k,
                             Rng& rng) {
  std::vector<VarId> out(k);
  for (std::uint32_t i = 0; i < k; ++i) {
    std::uint64_t j = i + rng.below(pool.size() - i);
    std::swap(pool[i], pool[j]);
    out[i] = pool[i];
  }
  return out;
}

Formula clause_formula(const std::vector<VarId>& vars,
                       const std::vector<bool>& negs) {
  std::vector<Formula> lits;
  lits.reserve(vars.size());
  for (std::size_t i = 0; i < vars.size(); ++i) {
    Formula leaf = Formula::var(vars[i]);
    lits.push_back(negs[i] ? Formula::negation(std::move(leaf))
                           : std::move(leaf));
  }
  return Formula::disjunction(std::move(lits));
}

void check_kcnf_args(std::uint32_t n, std::uint32_t k) {
  if (k == 0 || k > n)
    throw std::invalid_argument("need 1 <= k <= n, got k=" +
                                std::to_string(k) + ", n=" +
                                std::to_string(n));
}

}  // namespace

Problem random_kcnf(std::uint32_t n, std::uint32_t m, std::uint32_t k,
                    std::uint64_t seed) {
  check_kcnf_args(n, k);
  Rng rng(seed);
  std::vector<VarId> pool(n);
  for (std::uint32_t i = 0; i < n; ++i) pool[i] = i;

  std::vector<Formula> clauses;
  clauses.reserve(m);
  for (std::uint32_t c = 0; c < m; ++c) {
    std::vector<VarId> vars = draw_vars(pool, k, rng);
    std::vector<bool> negs(k);
    for (std::uint32_t i = 0; i < k; ++i) negs[i] = rng.bit();
    clauses.push_back(clause_formula(vars, negs));
  }
  return Problem{Formula::conjunction(std::move(clauses)), default_names(n)};
}

PlantedCnf random_kcnf_planted(std::uint32_t n, std::uint32_t m,
                               std::uint32_t k, std::uint64_t seed) {
  check_kcnf_args(n, k);
  Rng rng(seed);
  Assignment hidden(n);
  for (std::uint32_t v = 0; v < n; ++v) hidden.set(v, rng.bit());

  std::vector<VarId> pool(n);
  for (std::uint32_t i = 0; i < n; ++i) pool[i] = i;

  std::vector<Formula> clauses;
  clauses.reserve(m);
  for (std::uint32_t c = 0; c < m; ++c) {
    for (;;) {
      std::vector<VarId> vars = draw_vars(pool, k, rng);
      std::vector<bool> negs(k);
      bool satisfied = false;
      for (std::uint32_t i = 0; i < k; ++i) {
        negs[i] = rng.bit();
        satisfied = satisfied || hidden.get(vars[i]) != negs[i];
      }
      if (!satisfied) continue;  // resample; rejects 2^-k of draws
      clauses.push_back(clause_formula(vars, negs));
      break;
    }
  }
  return PlantedCnf{
      Problem{Formula::conjunction(std::move(clauses)), default_names(n)},
      std::move(hidden)};
}

namespace {

enum class Op : std::uint8_t { And, Or, Not, Implies, Iff };

Op draw_op(const OpWeights& w, Rng& rng) {
  double total = w.and_w + w.or_w + w.not_w + w.implies_w + w.iff_w;
  if (total <= 0) throw std::invalid_argument("operator weights sum to zero");
  double x = static_cast<double>(rng.next() >> 11) * 0x1.0p-53 * total;
  if ((x -= w.and_w) < 0) return Op::And;
  if ((x -= w.or_w) < 0) return Op::Or;
  if ((x -= w.not_w) < 0) return Op::Not;
  if ((x -= w.implies_w) < 0) return Op::Implies;
  return Op::Iff;
}

Formula random_literal(std::uint32_t n_vars, Rng& rng) {
  Formula leaf = Formula::var(static_cast<VarId>(rng.below(n_vars)));
  return rng.bit() ? Formula::negation(std::move(leaf)) : std::move(leaf);
}

Formula random_tree(std::uint32_t depth, std::uint32_t max_arity,
                    std::uint32_t n_vars, const OpWeights& w, Rng& rng) {
  if (depth <= 1) return random_literal(n_vars, rng);
  auto subtree = [&] {
    return random_tree(1 + static_cast<std::uint32_t>(rng.below(depth - 1)),
                       max_arity, n_vars, w, rng);
  };
  Op op = draw_op(w, rng);
  switch (op) {
    case Op::Not:
      return Formula::negation(
          random_tree(depth - 1, max_arity, n_vars, w, rng));
    case Op::Implies: {
      Formula lhs = subtree();
      Formula rhs = subtree();
      return Formula::implies(std::move(lhs), std::move(rhs));
    }
    case Op::Iff: {
      Formula lhs = subtree();
      Formula rhs = subtree();
      return Formula::iff(std::move(lhs), std::move(rhs));
    }
    case Op::And:
    case Op::Or: {
      std::uint32_t arity =
          2 + static_cast<std::uint32_t>(
                  max_arity > 2 ? rng.below(max_arity - 1) : 0);
      std::vector<Formula> parts;
      parts.reserve(arity);
      for (std::uint32_t i = 0; i < arity; ++i) parts.push_back(subtree());
      // Flattening may splice same-kind children, so the realized arity can
      // exceed max_arity; sizes stay bounded by the depth budget.
      return op == Op::And ? Formula::conjunction(std::move(parts))
                           : Formula::disjunction(std::move(parts));
    }
  }
  return random_literal(n_vars, rng);
}

}  // namespace

Problem random_formula(std::uint32_t max_depth, std::uint32_t max_arity,
                       std::uint32_t n_vars, const OpWeights& weights,
                       std::uint64_t seed) {
  if (max_depth < 1) throw std::invalid_argument("depth must be >= 1");
  if (max_arity < 2) throw std::invalid_argument("max arity must be >= 2");
  if (n_vars < 1) throw std::invalid_argument("need at least one variable");
  Rng rng(seed);
  return Problem{random_tree(max_depth, max_arity, n_vars, weights, rng),
                 default_names(n_vars)};
}

}  // namespace gen
}  // namespace ncgsat
