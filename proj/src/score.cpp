#include "ncgsat/score.hpp"

#include <algorithm>
#include <cassert>
#include <functional>

namespace ncgsat {

// ---------------------------------------------------------------------------
// CompiledFormula
// ---------------------------------------------------------------------------

CompiledFormula::CompiledFormula(const Formula& f, std::uint32_t var_count)
    : var_count_(var_count) {
  leaves_.resize(var_count);
  compile(f, -1);
}

std::uint32_t CompiledFormula::compile(const Formula& f, std::int32_t parent) {
  const std::uint32_t id = static_cast<std::uint32_t>(nodes_.size());
  nodes_.emplace_back();
  nodes_[id].parent = parent;

  // Fuse a negation applied directly to a variable into one literal leaf.
  if (f.kind() == Kind::Var ||
      (f.kind() == Kind::Not && f.child(0).kind() == Kind::Var)) {
    bool neg = f.kind() == Kind::Not;
    VarId v = neg ? f.child(0).var_id() : f.var_id();
    nodes_[id].kind = CKind::Literal;
    nodes_[id].negated = neg;
    nodes_[id].var = v;
    nodes_[id].has_vars = true;
    leaves_[v].push_back(id);
    return id;
  }

  switch (f.kind()) {
    case Kind::True:
      nodes_[id].kind = CKind::True;
      return id;
    case Kind::False:
      nodes_[id].kind = CKind::False;
      return id;
    case Kind::Not:
      nodes_[id].kind = CKind::Not;
      break;
    case Kind::And:
      nodes_[id].kind = CKind::And;
      break;
    case Kind::Or:
      nodes_[id].kind = CKind::Or;
      break;
    case Kind::Implies:
      nodes_[id].kind = CKind::Implies;
      break;
    case Kind::Iff:
      nodes_[id].kind = CKind::Iff;
      break;
    case Kind::Var:
      break;  // handled above
  }

  bool has_vars = false;
  for (const Formula& c : f.children()) {
    std::uint32_t cid = compile(c, static_cast<std::int32_t>(id));
    has_vars = has_vars || nodes_[cid].has_vars;
  }
  nodes_[id].child_count = static_cast<std::uint32_t>(f.arity());
  nodes_[id].subtree_size = static_cast<std::uint32_t>(nodes_.size()) - id;
  nodes_[id].has_vars = has_vars;
  return id;
}

// ---------------------------------------------------------------------------
// Pair algebra
// ---------------------------------------------------------------------------

namespace {

ScorePair literal_pair(bool value) {
  return value ? ScorePair{0, 1} : ScorePair{1, 0};
}

}  // namespace

// leaf_value(i) gives the truth value of literal node i; child_pair(i) the
// pair of node i. Products scan for a zero factor before multiplying.
template <typename Leaf, typename Lookup>
ScorePair ScoreState::compute_node(std::uint32_t i, Leaf&& leaf_value,
                                   Lookup&& child_pair) const {
  const CompiledFormula& cf = *cf_;
  switch (cf.kind(i)) {
    case CKind::Literal:
      return literal_pair(leaf_value(i));
    case CKind::True:
      return {0, 1};
    case CKind::False:
      return {1, 0};
    case CKind::Not: {
      const ScorePair& c = child_pair(cf.first_child(i));
      return {c.s_neg, c.s};
    }
    case CKind::And: {
      ScorePair out{0, 1};
      bool zero = false;
      for (std::uint32_t c = cf.first_child(i), k = 0; k < cf.child_count(i);
           ++k, c = cf.next_sibling(c)) {
        const ScorePair& p = child_pair(c);
        out.s += p.s;
        zero = zero || p.s_neg == 0;
      }
      if (zero) {
        out.s_neg = 0;
      } else {
        for (std::uint32_t c = cf.first_child(i), k = 0; k < cf.child_count(i);
             ++k, c = cf.next_sibling(c))
          out.s_neg *= child_pair(c).s_neg;
      }
      return out;
    }
    case CKind::Or: {
      ScorePair out{1, 0};
      bool zero = false;
      for (std::uint32_t c = cf.first_child(i), k = 0; k < cf.child_count(i);
           ++k, c = cf.next_sibling(c)) {
        const ScorePair& p = child_pair(c);
        out.s_neg += p.s_neg;
        zero = zero || p.s == 0;
      }
      if (zero) {
        out.s = 0;
      } else {
        for (std::uint32_t c = cf.first_child(i), k = 0; k < cf.child_count(i);
             ++k, c = cf.next_sibling(c))
          out.s *= child_pair(c).s;
      }
      return out;
    }
    case CKind::Implies: {
      std::uint32_t a = cf.first_child(i);
      const ScorePair& pa = child_pair(a);
      const ScorePair& pb = child_pair(cf.next_sibling(a));
      return {pa.s_neg * pb.s, pa.s + pb.s_neg};
    }
    case CKind::Iff: {
      std::uint32_t a = cf.first_child(i);
      const ScorePair& pa = child_pair(a);
      const ScorePair& pb = child_pair(cf.next_sibling(a));
      return {pa.s_neg * pb.s + pb.s_neg * pa.s,
              pa.s * pb.s + pa.s_neg * pb.s_neg};
    }
  }
  return {0, 0};
}

std::uint64_t eval_scores(const CompiledFormula& cf, const Assignment& t,
                          std::vector<ScorePair>& cache) {
  // Descending id order visits children before parents (pre-order layout).
  // Inlined rather than routed through ScoreState so timing callers measure
  // evaluation alone.
  const std::uint32_t n = cf.node_count();
  cache.resize(n);
  for (std::uint32_t step = 0; step < n; ++step) {
    const std::uint32_t i = n - 1 - step;
    switch (cf.kind(i)) {
      case CKind::Literal:
        cache[i] =
            literal_pair(t.get(cf.literal_var(i)) != cf.literal_negated(i));
        break;
      case CKind::True:
        cache[i] = {0, 1};
        break;
      case CKind::False:
        cache[i] = {1, 0};
        break;
      case CKind::Not: {
        const ScorePair& c = cache[cf.first_child(i)];
        cache[i] = {c.s_neg, c.s};
        break;
      }
      case CKind::And: {
        ScorePair out{0, 1};
        bool zero = false;
        for (std::uint32_t c = cf.first_child(i), k = 0;
             k < cf.child_count(i); ++k, c = cf.next_sibling(c)) {
          out.s += cache[c].s;
          zero = zero || cache[c].s_neg == 0;
        }
        if (zero) {
          out.s_neg = 0;
        } else {
          for (std::uint32_t c = cf.first_child(i), k = 0;
               k < cf.child_count(i); ++k, c = cf.next_sibling(c))
            out.s_neg *= cache[c].s_neg;
        }
        cache[i] = std::move(out);
        break;
      }
      case CKind::Or: {
        ScorePair out{1, 0};
        bool zero = false;
        for (std::uint32_t c = cf.first_child(i), k = 0;
             k < cf.child_count(i); ++k, c = cf.next_sibling(c)) {
          out.s_neg += cache[c].s_neg;
          zero = zero || cache[c].s == 0;
        }
        if (zero) {
          out.s = 0;
        } else {
          for (std::uint32_t c = cf.first_child(i), k = 0;
               k < cf.child_count(i); ++k, c = cf.next_sibling(c))
            out.s *= cache[c].s;
        }
        cache[i] = std::move(out);
        break;
      }
      case CKind::Implies: {
        std::uint32_t a = cf.first_child(i);
        const ScorePair& pa = cache[a];
        const ScorePair& pb = cache[cf.next_sibling(a)];
        cache[i] = {pa.s_neg * pb.s, pa.s + pb.s_neg};
        break;
      }
      case CKind::Iff: {
        std::uint32_t a = cf.first_child(i);
        const ScorePair& pa = cache[a];
        const ScorePair& pb = cache[cf.next_sibling(a)];
        cache[i] = {pa.s_neg * pb.s + pb.s_neg * pa.s,
                    pa.s * pb.s + pa.s_neg * pb.s_neg};
        break;
      }
    }
  }
  return n;
}

ScorePair eval_scores(const Formula& f, std::uint32_t var_count,
                      const Assignment& t) {
  CompiledFormula cf(f, var_count);
  std::vector<ScorePair> cache;
  eval_scores(cf, t, cache);
  return cache[0];
}

// ---------------------------------------------------------------------------
// ScoreState
// ---------------------------------------------------------------------------

ScoreState::ScoreState(const CompiledFormula& cf)
    : cf_(&cf),
      delta_(cf.var_count()),
      path_stamp_(cf.node_count(), 0),
      tent_stamp_(cf.node_count(), 0),
      tent_slot_(cf.node_count(), 0),
      var_stamp_(cf.var_count(), 0) {}

void ScoreState::reset(Assignment t) {
  assert(t.size() == cf_->var_count());
  assign_ = std::move(t);
  nodes_visited_ += eval_scores(*cf_, assign_, cache_);
  for (VarId v = 0; v < cf_->var_count(); ++v) delta_[v] = compute_delta(v);
}

void ScoreState::collect_path(VarId v, std::vector<std::uint32_t>& out,
                              std::vector<std::uint64_t>& stamp,
                              std::uint64_t epoch) const {
  out.clear();
  for (std::uint32_t leaf : cf_->leaves_of(v)) {
    std::int32_t n = static_cast<std::int32_t>(leaf);
    while (n >= 0 && stamp[static_cast<std::uint32_t>(n)] != epoch) {
      stamp[static_cast<std::uint32_t>(n)] = epoch;
      out.push_back(static_cast<std::uint32_t>(n));
      n = cf_->parent(static_cast<std::uint32_t>(n));
    }
  }
  // Children before parents: descending id order.
  std::sort(out.begin(), out.end(), std::greater<>());
}

void ScoreState::flip(VarId v) {
  assign_.flip(v);
  collect_path(v, path_, path_stamp_, ++path_epoch_);

  // Recompute every path node from its children's current caches, tracking
  // which cached pairs actually changed value.
  auto leaf = [&](std::uint32_t i) {
    return assign_.get(cf_->literal_var(i)) != cf_->literal_negated(i);
  };
  auto lookup = [&](std::uint32_t i) -> const ScorePair& { return cache_[i]; };

  // Parents of changed nodes; delta entries of every variable under one of
  // them may be stale (a changed sibling cache feeds their recomputation).
  std::vector<std::uint32_t> targets;
  for (std::uint32_t i : path_) {
    ScorePair fresh = compute_node(i, leaf, lookup);
    if (fresh != cache_[i]) {
      std::int32_t p = cf_->parent(i);
      targets.push_back(p < 0 ? i : static_cast<std::uint32_t>(p));
      cache_[i] = std::move(fresh);
    }
  }
  last_recomputed_ = path_.size();
  total_recomputed_ += path_.size();

  // Union of the targets' subtrees; pre-order layout makes each subtree a
  // contiguous range, so ascending targets can skip covered ranges.
  std::sort(targets.begin(), targets.end());
  dirty_vars_.clear();
  ++var_epoch_;
  if (var_stamp_[v] != var_epoch_) {
    var_stamp_[v] = var_epoch_;
    dirty_vars_.push_back(v);
  }
  std::uint32_t covered_end = 0;
  for (std::uint32_t t : targets) {
    if (t < covered_end) continue;
    covered_end = t + cf_->subtree_size(t);
    for (std::uint32_t i = t; i < covered_end; ++i) {
      if (cf_->kind(i) != CKind::Literal) continue;
      VarId w = cf_->literal_var(i);
      if (var_stamp_[w] != var_epoch_) {
        var_stamp_[w] = var_epoch_;
        dirty_vars_.push_back(w);
      }
    }
  }
  refresh_deltas(dirty_vars_);
}

Score ScoreState::compute_delta(VarId v) const {
  if (cf_->leaves_of(v).empty()) return 0;
  collect_path(v, tent_nodes_, tent_stamp_, ++tent_epoch_);
  tent_vals_.resize(std::max(tent_vals_.size(), tent_nodes_.size()));
  for (std::size_t slot = 0; slot < tent_nodes_.size(); ++slot)
    tent_slot_[tent_nodes_[slot]] = static_cast<std::uint32_t>(slot);

  // Path literals are exactly v's leaves; evaluate them under the flip.
  auto leaf = [&](std::uint32_t i) {
    return !(assign_.get(cf_->literal_var(i)) != cf_->literal_negated(i));
  };
  auto lookup = [&](std::uint32_t i) -> const ScorePair& {
    return tent_stamp_[i] == tent_epoch_ ? tent_vals_[tent_slot_[i]]
                                         : cache_[i];
  };
  for (std::uint32_t i : tent_nodes_) {
    ScorePair fresh = compute_node(i, leaf, lookup);
    tent_vals_[tent_slot_[i]] = std::move(fresh);
  }
  // The root is on every leaf-to-root path, so slot of node 0 is valid.
  return tent_vals_[tent_slot_[0]].s - cache_[0].s;
}

void ScoreState::refresh_deltas(std::span<const VarId> vars) {
  for (VarId v : vars) delta_[v] = compute_delta(v);
}

}  // namespace ncgsat
