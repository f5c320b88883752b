#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ncgsat {

using VarId = std::uint32_t;

enum class Kind : std::uint8_t { Var, Not, And, Or, Implies, Iff, True, False };

/// Immutable propositional formula tree.
///
/// And/Or are n-ary with arity >= 2 and are kept flattened: an And node never
/// has an And child and an Or node never has an Or child. The constructors
/// normalize empty and unary connectives (identity element / the child
/// itself) and splice nested same-kind children.
class Formula {
public:
  static Formula var(VarId id);
  static Formula negation(Formula child);
  static Formula conjunction(std::vector<Formula> children);
  static Formula disjunction(std::vector<Formula> children);
  static Formula implies(Formula lhs, Formula rhs);
  static Formula iff(Formula lhs, Formula rhs);
  static Formula constant(bool value);

  Kind kind() const { return kind_; }
  VarId var_id() const { return var_; }
  std::span<const Formula> children() const { return children_; }
  const Formula& child(std::size_t i) const { return children_[i]; }
  std::size_t arity() const { return children_.size(); }

  bool operator==(const Formula& other) const;

private:
  Formula(Kind kind, VarId var, std::vector<Formula> children)
      : kind_(kind), var_(var), children_(std::move(children)) {}

  Kind kind_;
  VarId var_ = 0;
  std::vector<Formula> children_;
};

/// Total truth-value map over variable ids 0..size-1.
class Assignment {
public:
  Assignment() = default;
  explicit Assignment(std::size_t n, bool value = false)
      : bits_(n, value ? 1 : 0) {}

  std::size_t size() const { return bits_.size(); }
  bool get(VarId v) const { return bits_[v] != 0; }
  void set(VarId v, bool value) { bits_[v] = value ? 1 : 0; }
  void flip(VarId v) { bits_[v] ^= 1; }

  bool operator==(const Assignment&) const = default;

private:
  std::vector<std::uint8_t> bits_;
};

/// A formula plus its variable symbol table. Variable ids are dense integers
/// 0..V-1 in first-occurrence order; var_names[i] is the surface name of id i.
struct Problem {
  Formula root = Formula::constant(true);
  std::vector<std::string> var_names;

  std::uint32_t var_count() const {
    return static_cast<std::uint32_t>(var_names.size());
  }
};

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, int line, int col)
      : std::runtime_error(msg + " at line " + std::to_string(line) +
                           ", column " + std::to_string(col)),
        line(line), col(col) {}
  int line;
  int col;
};

/// Parses the infix formula language.
///
/// Grammar:
///   iff  := imp ("<->" imp)?          -- non-associative, chains rejected
///   imp  := or ("->" imp)?            -- right-associative
///   or   := and ("|" and)*
///   and  := not ("&" not)*
///   not  := "!" not | atom
///   atom := ident | "1" | "0" | "(" iff ")"
/// Identifiers are [A-Za-z_][A-Za-z0-9_]*; "#" starts a comment to end of line.
Problem parse_formula(std::string_view text);

/// Parses DIMACS CNF ("p cnf V C" header, zero-terminated clauses).
/// Unit clauses become bare literals, a single clause becomes the formula
/// itself, zero clauses become the constant true. Variable id i is named
/// "x<i+1>" to match the 1-based DIMACS numbering.
Problem parse_dimacs(std::string_view text);

/// Variable ids occurring in f, ascending.
std::vector<VarId> free_vars(const Formula& f);

/// Node count of the (flattened) tree.
std::size_t node_count(const Formula& f);

/// Recursive truth evaluation. T must cover all free variables of f.
bool evaluate(const Formula& f, const Assignment& t);

/// Pretty-prints with minimal parentheses; parse_formula(render(f)) == f.
std::string render(const Formula& f, std::span<const std::string> names);
std::string render(const Problem& p);

}  // namespace ncgsat
