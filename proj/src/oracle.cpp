#include "ncgsat/oracle.hpp"

#include <stdexcept>
#include <string>

namespace ncgsat {
namespace oracle {

namespace {

void check_var_guard(std::uint32_t var_count) {
  if (var_count > kVarGuard)
    throw GuardExceeded("exhaustive enumeration limited to " +
                        std::to_string(kVarGuard) + " variables, got " +
                        std::to_string(var_count));
}

Assignment assignment_from_bits(std::uint64_t bits, std::uint32_t var_count) {
  Assignment t(var_count);
  for (std::uint32_t v = 0; v < var_count; ++v)
    t.set(v, (bits >> v) & 1u);
  return t;
}

}  // namespace

Enumeration enumerate_models(const Formula& f, std::uint32_t var_count) {
  check_var_guard(var_count);
  Enumeration result;
  const std::uint64_t total = 1ull << var_count;
  for (std::uint64_t bits = 0; bits < total; ++bits) {
    Assignment t = assignment_from_bits(bits, var_count);
    if (evaluate(f, t)) {
      ++result.model_count;
      if (!result.first_model) {
        result.satisfiable = true;
        result.first_model = t;
      }
    }
  }
  return result;
}

Enumeration enumerate_models(const Problem& p) {
  return enumerate_models(p.root, p.var_count());
}

Enumeration enumerate_models(const ClauseSet& cs) {
  check_var_guard(cs.var_count);
  Enumeration result;
  const std::uint64_t total = 1ull << cs.var_count;
  for (std::uint64_t bits = 0; bits < total; ++bits) {
    Assignment t = assignment_from_bits(bits, cs.var_count);
    if (satisfies(cs, t)) {
      ++result.model_count;
      if (!result.first_model) {
        result.satisfiable = true;
        result.first_model = t;
      }
    }
  }
  return result;
}

void for_each_model(const ClauseSet& cs,
                    const std::function<void(const Assignment&)>& fn) {
  check_var_guard(cs.var_count);
  const std::uint64_t total = 1ull << cs.var_count;
  for (std::uint64_t bits = 0; bits < total; ++bits) {
    Assignment t = assignment_from_bits(bits, cs.var_count);
    if (satisfies(cs, t)) fn(t);
  }
}

std::uint64_t score_by_definition(const Formula& f, std::uint32_t var_count,
                                  const Assignment& t, std::uint64_t guard) {
  return count_false_clauses(cnf_standard(f, var_count, guard), t);
}

std::vector<std::int64_t> delta_table_brute(const Formula& f,
                                            std::uint32_t var_count,
                                            const Assignment& t,
                                            std::uint64_t guard) {
  ClauseSet cs = cnf_standard(f, var_count, guard);
  const std::int64_t base =
      static_cast<std::int64_t>(count_false_clauses(cs, t));
  std::vector<std::int64_t> deltas(var_count);
  Assignment scratch = t;
  for (std::uint32_t v = 0; v < var_count; ++v) {
    scratch.flip(v);
    deltas[v] =
        static_cast<std::int64_t>(count_false_clauses(cs, scratch)) - base;
    scratch.flip(v);
  }
  return deltas;
}

}  // namespace oracle
}  // namespace ncgsat
