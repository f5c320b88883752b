#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ncgsat/formula.hpp"

namespace ncgsat {

struct Literal {
  VarId var;
  bool negated;
  auto operator<=>(const Literal&) const = default;
};

/// A clause is a set of literals: duplicates collapse, order is (var, sign).
/// The empty clause is the always-false clause.
class Clause {
public:
  Clause() = default;
  explicit Clause(std::vector<Literal> lits);

  void add(Literal lit);
  const std::vector<Literal>& lits() const { return lits_; }
  std::size_t size() const { return lits_.size(); }
  bool empty() const { return lits_.empty(); }

  bool operator==(const Clause&) const = default;

private:
  std::vector<Literal> lits_;  // sorted, unique
};

struct ClauseSet {
  std::vector<Clause> clauses;  // ordered list; duplicate clauses retained
  std::uint32_t var_count = 0;
};

struct GuardExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Exact clause count of the standard conversion of f, saturated at cap + 1.
/// Runs in linear time; no clauses are materialized.
std::uint64_t standard_cnf_clause_count(const Formula& f, std::uint64_t cap);

/// Standard clausal conversion: implications and equivalences are rewritten
/// by the frozen conventions
///   a -> b   as  !a | b
///   a <-> b  as  (!a | b) & (!b | a)
///   !(a <-> b) as (a | b) & (!a | !b)
/// negation is pushed inward, and disjunction is distributed over
/// conjunction. No simplification is performed: tautological and duplicate
/// clauses are retained (duplicate literals inside one clause collapse via
/// the set representation). Output size is worst-case exponential in the
/// formula size; throws GuardExceeded when the exact clause count would
/// exceed `guard`.
ClauseSet cnf_standard(const Formula& f, std::uint32_t var_count,
                       std::uint64_t guard = 1'000'000);
ClauseSet cnf_standard(const Problem& p, std::uint64_t guard = 1'000'000);

struct DefinitionalCnf {
  ClauseSet clauses;
  std::uint32_t original_vars = 0;
  std::uint32_t fresh_vars = 0;
  /// Names for every output variable; the first original_vars entries are
  /// the input problem's names, fresh definition variables follow.
  std::vector<std::string> names;
  /// fresh variable name -> text of the subformula it stands for.
  std::vector<std::pair<std::string, std::string>> definitions;
};

/// Structure-preserving conversion: every non-literal subformula below the
/// root is named by a fresh variable appended after the original ids, so a
/// model projects onto the original formula by a prefix slice. With
/// polarity_optimized set, defining clauses are emitted only for the
/// polarities under which the subformula occurs; otherwise both directions
/// are always emitted. The root connective is asserted directly instead of
/// being named. Output is equisatisfiable with f and polynomial in its size.
DefinitionalCnf cnf_definitional(const Problem& p, bool polarity_optimized);

/// Number of clauses with every literal false under t; 0 iff t satisfies cs.
std::uint64_t count_false_clauses(const ClauseSet& cs, const Assignment& t);

/// True iff every clause has a true literal. Cheaper than counting.
bool satisfies(const ClauseSet& cs, const Assignment& t);

/// DIMACS CNF text; each entry of `comments` becomes a "c " header line.
std::string to_dimacs(const ClauseSet& cs,
                      std::span<const std::string> comments = {});

}  // namespace ncgsat
