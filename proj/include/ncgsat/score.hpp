#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <span>
#include <vector>

#include "ncgsat/formula.hpp"

namespace ncgsat {

/// Scores are exact integers. Clause counts of the standard conversion are
/// products over disjunctions and can exceed any fixed width, and candidate
/// selection compares score deltas exactly, so no saturating mode exists.
using Score = boost::multiprecision::cpp_int;

/// (s, s_neg): the number of false clauses of the standard conversion of a
/// subformula and of its negation under the current assignment. For a total
/// assignment exactly one of the two is zero: s == 0 iff the subformula is
/// satisfied, s_neg == 0 iff it is falsified.
struct ScorePair {
  Score s;
  Score s_neg;
  bool operator==(const ScorePair&) const = default;
};

enum class CKind : std::uint8_t {
  Literal, Not, And, Or, Implies, Iff, True, False
};

/// Formula flattened into a pre-order node array for the score engine.
/// Every node's id is smaller than the ids in its subtree, and each subtree
/// occupies the contiguous id range [i, i + subtree_size(i)). A negation
/// applied directly to a variable is fused into a single negated-literal
/// leaf, so a clausal-form input compiles to root / clause / literal levels
/// only.
class CompiledFormula {
public:
  CompiledFormula(const Formula& f, std::uint32_t var_count);

  std::uint32_t node_count() const {
    return static_cast<std::uint32_t>(nodes_.size());
  }
  std::uint32_t var_count() const { return var_count_; }

  CKind kind(std::uint32_t i) const { return nodes_[i].kind; }
  VarId literal_var(std::uint32_t i) const { return nodes_[i].var; }
  bool literal_negated(std::uint32_t i) const { return nodes_[i].negated; }
  std::int32_t parent(std::uint32_t i) const { return nodes_[i].parent; }
  std::uint32_t child_count(std::uint32_t i) const {
    return nodes_[i].child_count;
  }
  std::uint32_t subtree_size(std::uint32_t i) const {
    return nodes_[i].subtree_size;
  }
  bool subtree_has_vars(std::uint32_t i) const { return nodes_[i].has_vars; }

  std::uint32_t first_child(std::uint32_t i) const { return i + 1; }
  std::uint32_t next_sibling(std::uint32_t c) const {
    return c + nodes_[c].subtree_size;
  }

  /// Leaf node ids of variable v, ascending.
  const std::vector<std::uint32_t>& leaves_of(VarId v) const {
    return leaves_[v];
  }

private:
  struct Node {
    CKind kind;
    bool negated = false;
    bool has_vars = false;
    VarId var = 0;
    std::int32_t parent = -1;
    std::uint32_t child_count = 0;
    std::uint32_t subtree_size = 1;
  };

  std::uint32_t compile(const Formula& f, std::int32_t parent);

  std::vector<Node> nodes_;
  std::vector<std::vector<std::uint32_t>> leaves_;
  std::uint32_t var_count_;
};

/// Bottom-up pair evaluation into `cache` (resized to the node count).
/// Returns the number of node visits, which is exactly the compiled node
/// count and never exceeds the source formula's node count.
std::uint64_t eval_scores(const CompiledFormula& cf, const Assignment& t,
                          std::vector<ScorePair>& cache);

/// Convenience wrapper: compiles f and returns the root pair.
ScorePair eval_scores(const Formula& f, std::uint32_t var_count,
                      const Assignment& t);

/// Per-node score caches over a compiled formula, the current assignment,
/// and the per-variable delta table (delta(v) = score after flipping v minus
/// current score). Incrementally maintained across flips. Single-owner
/// mutable: not safe for concurrent mutation, but independent states over
/// one shared CompiledFormula may live on different threads.
class ScoreState {
public:
  explicit ScoreState(const CompiledFormula& cf);

  /// Full bottom-up evaluation plus a rebuild of the whole delta table.
  void reset(Assignment t);

  const Assignment& assignment() const { return assign_; }
  const ScorePair& pair_at(std::uint32_t node) const { return cache_[node]; }
  const ScorePair& root_pair() const { return cache_[0]; }
  const Score& score() const { return cache_[0].s; }
  const Score& delta(VarId v) const { return delta_[v]; }
  std::span<const Score> delta_table() const { return delta_; }
  const CompiledFormula& compiled() const { return *cf_; }

  /// Inverts assignment bit v and recomputes exactly the cached pairs on the
  /// root paths from v's leaves, each from its children's current caches.
  /// The delta table is then refreshed for every variable whose delta may
  /// have changed: all variables occurring under the parent of any node
  /// whose cached pair changed value, plus v itself.
  void flip(VarId v);

  /// Delta for v under the current assignment, by a tentative flip along
  /// v's root paths using sibling caches. Does not mutate the state.
  Score compute_delta(VarId v) const;

  /// Recomputes the delta table entries for `vars` via compute_delta.
  void refresh_deltas(std::span<const VarId> vars);

  // Instrumentation.
  std::uint64_t nodes_visited() const { return nodes_visited_; }
  std::uint64_t last_flip_recomputed() const { return last_recomputed_; }
  std::uint64_t total_recomputed() const { return total_recomputed_; }

private:
  template <typename Leaf, typename Lookup>
  ScorePair compute_node(std::uint32_t i, Leaf&& leaf_value,
                         Lookup&& child_pair) const;

  void collect_path(VarId v, std::vector<std::uint32_t>& out,
                    std::vector<std::uint64_t>& stamp,
                    std::uint64_t epoch) const;

  const CompiledFormula* cf_;
  Assignment assign_;
  std::vector<ScorePair> cache_;
  std::vector<Score> delta_;

  // flip/tentative scratch
  std::vector<std::uint32_t> path_;
  std::vector<std::uint64_t> path_stamp_;
  std::uint64_t path_epoch_ = 0;
  mutable std::vector<std::uint32_t> tent_nodes_;
  mutable std::vector<std::uint64_t> tent_stamp_;
  mutable std::vector<std::uint32_t> tent_slot_;
  mutable std::uint64_t tent_epoch_ = 0;
  mutable std::vector<ScorePair> tent_vals_;
  std::vector<std::uint64_t> var_stamp_;
  std::uint64_t var_epoch_ = 0;
  std::vector<VarId> dirty_vars_;

  std::uint64_t nodes_visited_ = 0;
  std::uint64_t last_recomputed_ = 0;
  std::uint64_t total_recomputed_ = 0;
};

}  // namespace ncgsat
