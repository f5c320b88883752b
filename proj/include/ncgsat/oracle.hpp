#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "ncgsat/cnf.hpp"
#include "ncgsat/formula.hpp"

namespace ncgsat {
namespace oracle {

// Deliberately naive exhaustive ground truth for the test suites. Nothing
// here touches the incremental score machinery; only Formula and ClauseSet
// are shared with the engine under test.

inline constexpr std::uint32_t kVarGuard = 20;          // 2^20 assignments
inline constexpr std::uint64_t kClauseGuard = 1'000'000;

struct Enumeration {
  bool satisfiable = false;
  std::uint64_t model_count = 0;
  std::optional<Assignment> first_model;
};

/// Evaluates f under all 2^var_count assignments in lexicographic order
/// (variable 0 is the least significant bit).
Enumeration enumerate_models(const Formula& f, std::uint32_t var_count);
Enumeration enumerate_models(const Problem& p);

/// Same exhaustive sweep over a clause set.
Enumeration enumerate_models(const ClauseSet& cs);

/// Calls fn for every satisfying assignment of cs, lexicographic order.
void for_each_model(const ClauseSet& cs,
                    const std::function<void(const Assignment&)>& fn);

/// The score by definition: false clauses of the standard conversion.
std::uint64_t score_by_definition(const Formula& f, std::uint32_t var_count,
                                  const Assignment& t,
                                  std::uint64_t guard = kClauseGuard);

/// Delta table by definition: entry i is the score after flipping i minus
/// the score under t. The conversion is built once; only counts repeat.
std::vector<std::int64_t> delta_table_brute(const Formula& f,
                                            std::uint32_t var_count,
                                            const Assignment& t,
                                            std::uint64_t guard = kClauseGuard);

}  // namespace oracle
}  // namespace ncgsat
