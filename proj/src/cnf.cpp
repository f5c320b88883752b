#include "ncgsat/cnf.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace ncgsat {

Clause::Clause(std::vector<Literal> lits) : lits_(std::move(lits)) {
  std::sort(lits_.begin(), lits_.end());
  lits_.erase(std::unique(lits_.begin(), lits_.end()), lits_.end());
}

void Clause::add(Literal lit) {
  auto it = std::lower_bound(lits_.begin(), lits_.end(), lit);
  if (it == lits_.end() || *it != lit) lits_.insert(it, lit);
}

// ---------------------------------------------------------------------------
// Standard conversion
// ---------------------------------------------------------------------------

namespace {

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b, std::uint64_t cap) {
  return a > cap - b && b <= cap ? cap + 1 : std::min(a + b, cap + 1);
}

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b, std::uint64_t cap) {
  if (a == 0 || b == 0) return 0;
  if (a > (cap + 1) / b + 1) return cap + 1;
  return std::min(a * b, cap + 1);
}

struct CountPair {
  std::uint64_t pos;  // clauses of cnf(f)
  std::uint64_t neg;  // clauses of cnf(!f)
};

CountPair count_clauses(const Formula& f, std::uint64_t cap) {
  switch (f.kind()) {
    case Kind::Var:
      return {1, 1};
    case Kind::True:
      return {0, 1};
    case Kind::False:
      return {1, 0};
    case Kind::Not: {
      CountPair c = count_clauses(f.child(0), cap);
      return {c.neg, c.pos};
    }
    case Kind::And: {
      std::uint64_t pos = 0, neg = 1;
      for (const Formula& c : f.children()) {
        CountPair p = count_clauses(c, cap);
        pos = sat_add(pos, p.pos, cap);
        neg = sat_mul(neg, p.neg, cap);
      }
      return {pos, neg};
    }
    case Kind::Or: {
      std::uint64_t pos = 1, neg = 0;
      for (const Formula& c : f.children()) {
        CountPair p = count_clauses(c, cap);
        pos = sat_mul(pos, p.pos, cap);
        neg = sat_add(neg, p.neg, cap);
      }
      return {pos, neg};
    }
    case Kind::Implies: {
      CountPair a = count_clauses(f.child(0), cap);
      CountPair b = count_clauses(f.child(1), cap);
      return {sat_mul(a.neg, b.pos, cap), sat_add(a.pos, b.neg, cap)};
    }
    case Kind::Iff: {
      CountPair a = count_clauses(f.child(0), cap);
      CountPair b = count_clauses(f.child(1), cap);
      return {sat_add(sat_mul(a.neg, b.pos, cap), sat_mul(b.neg, a.pos, cap),
                      cap),
              sat_add(sat_mul(a.pos, b.pos, cap), sat_mul(a.neg, b.neg, cap),
                      cap)};
    }
  }
  return {0, 0};
}

using ClauseList = std::vector<Clause>;

// Cross product: every clause of a joined with every clause of b, a outer.
ClauseList cross(const ClauseList& a, const ClauseList& b) {
  ClauseList out;
  out.reserve(a.size() * b.size());
  for (const Clause& ca : a) {
    for (const Clause& cb : b) {
      Clause merged = ca;
      for (Literal lit : cb.lits()) merged.add(lit);
      out.push_back(std::move(merged));
    }
  }
  return out;
}

void append(ClauseList& dst, ClauseList src) {
  for (Clause& c : src) dst.push_back(std::move(c));
}

ClauseList convert_pos(const Formula& f);
ClauseList convert_neg(const Formula& f);

ClauseList convert_pos(const Formula& f) {
  switch (f.kind()) {
    case Kind::Var:
      return {Clause({{f.var_id(), false}})};
    case Kind::True:
      return {};
    case Kind::False:
      return {Clause()};
    case Kind::Not:
      return convert_neg(f.child(0));
    case Kind::And: {
      ClauseList out;
      for (const Formula& c : f.children()) append(out, convert_pos(c));
      return out;
    }
    case Kind::Or: {
      ClauseList out = convert_pos(f.child(0));
      for (std::size_t i = 1; i < f.arity(); ++i)
        out = cross(out, convert_pos(f.child(i)));
      return out;
    }
    case Kind::Implies:
      return cross(convert_neg(f.child(0)), convert_pos(f.child(1)));
    case Kind::Iff: {
      ClauseList out = cross(convert_neg(f.child(0)), convert_pos(f.child(1)));
      append(out, cross(convert_neg(f.child(1)), convert_pos(f.child(0))));
      return out;
    }
  }
  return {};
}

ClauseList convert_neg(const Formula& f) {
  switch (f.kind()) {
    case Kind::Var:
      return {Clause({{f.var_id(), true}})};
    case Kind::True:
      return {Clause()};
    case Kind::False:
      return {};
    case Kind::Not:
      return convert_pos(f.child(0));
    case Kind::And: {
      ClauseList out = convert_neg(f.child(0));
      for (std::size_t i = 1; i < f.arity(); ++i)
        out = cross(out, convert_neg(f.child(i)));
      return out;
    }
    case Kind::Or: {
      ClauseList out;
      for (const Formula& c : f.children()) append(out, convert_neg(c));
      return out;
    }
    case Kind::Implies: {
      ClauseList out = convert_pos(f.child(0));
      append(out, convert_neg(f.child(1)));
      return out;
    }
    case Kind::Iff: {
      ClauseList out = cross(convert_pos(f.child(0)), convert_pos(f.child(1)));
      append(out, cross(convert_neg(f.child(0)), convert_neg(f.child(1))));
      return out;
    }
  }
  return {};
}

}  // namespace

std::uint64_t standard_cnf_clause_count(const Formula& f, std::uint64_t cap) {
  return count_clauses(f, cap).pos;
}

ClauseSet cnf_standard(const Formula& f, std::uint32_t var_count,
                       std::uint64_t guard) {
  std::uint64_t estimate = standard_cnf_clause_count(f, guard);
  if (estimate > guard)
    throw GuardExceeded("standard conversion would produce more than " +
                        std::to_string(guard) + " clauses");
  return ClauseSet{convert_pos(f), var_count};
}

ClauseSet cnf_standard(const Problem& p, std::uint64_t guard) {
  return cnf_standard(p.root, p.var_count(), guard);
}

// ---------------------------------------------------------------------------
// Definitional (structure-preserving) conversion
// ---------------------------------------------------------------------------

namespace {

// Literal tokens used while naming subformulas. Constants propagate as
// sentinels so clauses containing a true literal are dropped and false
// literals vanish.
struct DefLit {
  enum class Tag : std::uint8_t { Lit, True, False } tag = Tag::Lit;
  Literal lit{};

  DefLit negated() const {
    switch (tag) {
      case Tag::True:
        return {Tag::False, {}};
      case Tag::False:
        return {Tag::True, {}};
      default:
        return {Tag::Lit, {lit.var, !lit.negated}};
    }
  }
};

struct Polarity {
  bool pos = false;
  bool neg = false;
};

class DefinitionalBuilder {
public:
  DefinitionalBuilder(const Problem& p, bool polarity_optimized)
      : problem_(p), pg_(polarity_optimized) {}

  DefinitionalCnf run() {
    DefinitionalCnf out;
    out.original_vars = problem_.var_count();
    next_var_ = problem_.var_count();
    names_ = problem_.var_names;

    emit_root(problem_.root);

    out.fresh_vars = next_var_ - out.original_vars;
    out.names = std::move(names_);
    out.definitions = std::move(definitions_);
    out.clauses.clauses = std::move(clauses_);
    out.clauses.var_count = next_var_;
    return out;
  }

private:
  // The root connective is asserted directly; no fresh variable names it.
  void emit_root(const Formula& f) {
    switch (f.kind()) {
      case Kind::True:
        return;
      case Kind::False:
        clauses_.push_back(Clause());
        return;
      case Kind::Var:
      case Kind::Not:
        add_clause({literal_for(f, true)});
        return;
      case Kind::And:
        for (const Formula& c : f.children())
          add_clause({literal_for(c, true)});
        return;
      case Kind::Or: {
        std::vector<DefLit> lits;
        for (const Formula& c : f.children())
          lits.push_back(literal_for(c, true));
        add_clause(lits);
        return;
      }
      case Kind::Implies: {
        DefLit a = literal_for(f.child(0), false);
        DefLit b = literal_for(f.child(1), true);
        add_clause({a.negated(), b});
        return;
      }
      case Kind::Iff: {
        DefLit a = literal_for(f.child(0), true);
        DefLit b = literal_for(f.child(1), true);
        request_both(f.child(0));
        request_both(f.child(1));
        add_clause({a.negated(), b});
        add_clause({a, b.negated()});
        return;
      }
    }
  }

  // Returns the literal standing for subformula f occurring with the given
  // polarity, creating a fresh definition variable when f is not a literal.
  DefLit literal_for(const Formula& f, bool positive) {
    switch (f.kind()) {
      case Kind::True:
        return {DefLit::Tag::True, {}};
      case Kind::False:
        return {DefLit::Tag::False, {}};
      case Kind::Var:
        return {DefLit::Tag::Lit, {f.var_id(), false}};
      case Kind::Not:
        return literal_for(f.child(0), !positive).negated();
      default:
        break;
    }
    VarId x = define(f, positive);
    return {DefLit::Tag::Lit, {x, false}};
  }

  void request_both(const Formula& f) {
    if (f.kind() == Kind::Not) {
      request_both(f.child(0));
      return;
    }
    if (f.kind() == Kind::Var || f.kind() == Kind::True ||
        f.kind() == Kind::False)
      return;
    define(f, true);
    define(f, false);
  }

  VarId define(const Formula& f, bool positive) {
    auto [it, fresh] = defs_.try_emplace(&f, Entry{});
    Entry& e = it->second;
    if (fresh) {
      e.var = next_var_++;
      std::string name = fresh_name();
      names_.push_back(name);
      definitions_.emplace_back(std::move(name),
                                render(f, problem_.var_names));
    }
    bool want_pos = positive || !pg_;
    bool want_neg = !positive || !pg_;
    if (want_pos && !e.pol.pos) {
      e.pol.pos = true;
      emit_definition(f, e.var, true);
    }
    if (want_neg && !e.pol.neg) {
      e.pol.neg = true;
      emit_definition(f, e.var, false);
    }
    return e.var;
  }

  // positive: clauses for x -> f; negative: clauses for f -> x.
  void emit_definition(const Formula& f, VarId x, bool positive) {
    DefLit lx{DefLit::Tag::Lit, {x, false}};
    switch (f.kind()) {
      case Kind::And: {
        if (positive) {
          for (const Formula& c : f.children())
            add_clause({lx.negated(), literal_for(c, true)});
        } else {
          std::vector<DefLit> lits{lx};
          for (const Formula& c : f.children())
            lits.push_back(literal_for(c, false).negated());
          add_clause(lits);
        }
        return;
      }
      case Kind::Or: {
        if (positive) {
          std::vector<DefLit> lits{lx.negated()};
          for (const Formula& c : f.children())
            lits.push_back(literal_for(c, true));
          add_clause(lits);
        } else {
          for (const Formula& c : f.children())
            add_clause({lx, literal_for(c, false).negated()});
        }
        return;
      }
      case Kind::Implies: {
        if (positive) {
          DefLit a = literal_for(f.child(0), false);
          DefLit b = literal_for(f.child(1), true);
          add_clause({lx.negated(), a.negated(), b});
        } else {
          DefLit a = literal_for(f.child(0), true);
          DefLit b = literal_for(f.child(1), false);
          add_clause({lx, a});
          add_clause({lx, b.negated()});
        }
        return;
      }
      case Kind::Iff: {
        request_both(f.child(0));
        request_both(f.child(1));
        DefLit a = literal_for(f.child(0), true);
        DefLit b = literal_for(f.child(1), true);
        if (positive) {
          add_clause({lx.negated(), a.negated(), b});
          add_clause({lx.negated(), a, b.negated()});
        } else {
          add_clause({lx, a, b});
          add_clause({lx, a.negated(), b.negated()});
        }
        return;
      }
      default:
        return;  // literals and constants are never defined
    }
  }

  void add_clause(const std::vector<DefLit>& lits) {
    Clause c;
    for (const DefLit& dl : lits) {
      switch (dl.tag) {
        case DefLit::Tag::True:
          return;  // clause is satisfied outright
        case DefLit::Tag::False:
          break;  // literal vanishes
        case DefLit::Tag::Lit:
          c.add(dl.lit);
          break;
      }
    }
    clauses_.push_back(std::move(c));
  }

  std::string fresh_name() {
    for (;;) {
      std::string candidate = "_d" + std::to_string(name_counter_++);
      if (std::find(names_.begin(), names_.end(), candidate) == names_.end())
        return candidate;
    }
  }

  struct Entry {
    VarId var = 0;
    Polarity pol;
  };

  const Problem& problem_;
  bool pg_;
  VarId next_var_ = 0;
  unsigned name_counter_ = 0;
  std::vector<std::string> names_;
  std::vector<std::pair<std::string, std::string>> definitions_;
  std::vector<Clause> clauses_;
  std::map<const Formula*, Entry> defs_;
};

}  // namespace

DefinitionalCnf cnf_definitional(const Problem& p, bool polarity_optimized) {
  return DefinitionalBuilder(p, polarity_optimized).run();
}

// ---------------------------------------------------------------------------
// Clausal scoring
// ---------------------------------------------------------------------------

std::uint64_t count_false_clauses(const ClauseSet& cs, const Assignment& t) {
  if (t.size() != cs.var_count)
    throw std::invalid_argument("assignment covers " +
                                std::to_string(t.size()) + " variables, " +
                                "clause set has " +
                                std::to_string(cs.var_count));
  std::uint64_t count = 0;
  for (const Clause& c : cs.clauses) {
    bool any_true = false;
    for (Literal lit : c.lits()) {
      if (t.get(lit.var) != lit.negated) {
        any_true = true;
        break;
      }
    }
    if (!any_true) ++count;
  }
  return count;
}

bool satisfies(const ClauseSet& cs, const Assignment& t) {
  for (const Clause& c : cs.clauses) {
    bool any_true = false;
    for (Literal lit : c.lits()) {
      if (t.get(lit.var) != lit.negated) {
        any_true = true;
        break;
      }
    }
    if (!any_true) return false;
  }
  return true;
}

std::string to_dimacs(const ClauseSet& cs,
                      std::span<const std::string> comments) {
  std::ostringstream out;
  for (const std::string& c : comments) out << "c " << c << "\n";
  out << "p cnf " << cs.var_count << " " << cs.clauses.size() << "\n";
  for (const Clause& c : cs.clauses) {
    for (Literal lit : c.lits())
      out << (lit.negated ? "-" : "") << lit.var + 1 << " ";
    out << "0\n";
  }
  return out.str();
}

}  // namespace ncgsat
