#include "ncgsat/formula.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <set>
#include <sstream>

namespace ncgsat {

Formula Formula::var(VarId id) { return Formula(Kind::Var, id, {}); }

Formula Formula::negation(Formula child) {
  std::vector<Formula> c;
  c.push_back(std::move(child));
  return Formula(Kind::Not, 0, std::move(c));
}

Formula Formula::conjunction(std::vector<Formula> children) {
  if (children.empty()) return constant(true);
  if (children.size() == 1) return std::move(children.front());
  std::vector<Formula> flat;
  flat.reserve(children.size());
  for (Formula& c : children) {
    if (c.kind() == Kind::And) {
      for (const Formula& g : c.children()) flat.push_back(g);
    } else {
      flat.push_back(std::move(c));
    }
  }
  return Formula(Kind::And, 0, std::move(flat));
}

Formula Formula::disjunction(std::vector<Formula> children) {
  if (children.empty()) return constant(false);
  if (children.size() == 1) return std::move(children.front());
  std::vector<Formula> flat;
  flat.reserve(children.size());
  for (Formula& c : children) {
    if (c.kind() == Kind::Or) {
      for (const Formula& g : c.children()) flat.push_back(g);
    } else {
      flat.push_back(std::move(c));
    }
  }
  return Formula(Kind::Or, 0, std::move(flat));
}

Formula Formula::implies(Formula lhs, Formula rhs) {
  std::vector<Formula> c;
  c.push_back(std::move(lhs));
  c.push_back(std::move(rhs));
  return Formula(Kind::Implies, 0, std::move(c));
}

Formula Formula::iff(Formula lhs, Formula rhs) {
  std::vector<Formula> c;
  c.push_back(std::move(lhs));
  c.push_back(std::move(rhs));
  return Formula(Kind::Iff, 0, std::move(c));
}

Formula Formula::constant(bool value) {
  return Formula(value ? Kind::True : Kind::False, 0, {});
}

bool Formula::operator==(const Formula& other) const {
  if (kind_ != other.kind_ || var_ != other.var_ ||
      children_.size() != other.children_.size())
    return false;
  for (std::size_t i = 0; i < children_.size(); ++i)
    if (!(children_[i] == other.children_[i])) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Infix parser
// ---------------------------------------------------------------------------

namespace {

enum class Tok : std::uint8_t {
  Ident, ConstTrue, ConstFalse, Bang, Amp, Pipe, Arrow, DArrow,
  LParen, RParen, End
};

struct Token {
  Tok tok;
  std::string text;
  int line;
  int col;
};

class Lexer {
public:
  explicit Lexer(std::string_view text) : text_(text) { advance(); }

  const Token& peek() const { return current_; }

  Token take() {
    Token t = current_;
    advance();
    return t;
  }

private:
  void advance() {
    skip_ws();
    current_.line = line_;
    current_.col = col_;
    if (pos_ >= text_.size()) {
      current_.tok = Tok::End;
      current_.text = "<end of input>";
      return;
    }
    char c = text_[pos_];
    if (c == '(') { step(); emit(Tok::LParen, "("); return; }
    if (c == ')') { step(); emit(Tok::RParen, ")"); return; }
    if (c == '!') { step(); emit(Tok::Bang, "!"); return; }
    if (c == '&') { step(); emit(Tok::Amp, "&"); return; }
    if (c == '|') { step(); emit(Tok::Pipe, "|"); return; }
    if (c == '-') {
      step();
      if (pos_ < text_.size() && text_[pos_] == '>') {
        step();
        emit(Tok::Arrow, "->");
        return;
      }
      throw ParseError("expected '>' after '-'", line_, col_);
    }
    if (c == '<') {
      step();
      if (pos_ + 1 < text_.size() && text_[pos_] == '-' &&
          text_[pos_ + 1] == '>') {
        step();
        step();
        emit(Tok::DArrow, "<->");
        return;
      }
      throw ParseError("expected '->' after '<'", line_, col_);
    }
    if (c == '0' || c == '1') {
      step();
      if (pos_ < text_.size() && is_ident_char(text_[pos_]))
        throw ParseError("identifiers may not start with a digit",
                         current_.line, current_.col);
      emit(c == '1' ? Tok::ConstTrue : Tok::ConstFalse, std::string(1, c));
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string name;
      while (pos_ < text_.size() && is_ident_char(text_[pos_])) {
        name.push_back(text_[pos_]);
        step();
      }
      emit(Tok::Ident, std::move(name));
      return;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line_,
                     col_);
  }

  static bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  }

  void skip_ws() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') step();
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        step();
      } else {
        break;
      }
    }
  }

  void step() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void emit(Tok tok, std::string text) {
    current_.tok = tok;
    current_.text = std::move(text);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  Token current_;
};

class Parser {
public:
  explicit Parser(std::string_view text) : lex_(text) {}

  Problem run() {
    if (lex_.peek().tok == Tok::End)
      throw ParseError("empty input", 1, 1);
    Formula f = parse_iff();
    const Token& t = lex_.peek();
    if (t.tok != Tok::End)
      throw ParseError("unexpected '" + t.text + "'", t.line, t.col);
    return Problem{std::move(f), std::move(names_)};
  }

private:
  Formula parse_iff() {
    Formula lhs = parse_imp();
    if (lex_.peek().tok == Tok::DArrow) {
      lex_.take();
      Formula rhs = parse_imp();
      const Token& t = lex_.peek();
      if (t.tok == Tok::DArrow)
        throw ParseError("'<->' is non-associative; parenthesize", t.line,
                         t.col);
      return Formula::iff(std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  Formula parse_imp() {
    Formula lhs = parse_or();
    if (lex_.peek().tok == Tok::Arrow) {
      lex_.take();
      return Formula::implies(std::move(lhs), parse_imp());
    }
    return lhs;
  }

  Formula parse_or() {
    std::vector<Formula> parts;
    parts.push_back(parse_and());
    while (lex_.peek().tok == Tok::Pipe) {
      lex_.take();
      parts.push_back(parse_and());
    }
    return Formula::disjunction(std::move(parts));
  }

  Formula parse_and() {
    std::vector<Formula> parts;
    parts.push_back(parse_not());
    while (lex_.peek().tok == Tok::Amp) {
      lex_.take();
      parts.push_back(parse_not());
    }
    return Formula::conjunction(std::move(parts));
  }

  Formula parse_not() {
    if (lex_.peek().tok == Tok::Bang) {
      lex_.take();
      return Formula::negation(parse_not());
    }
    return parse_atom();
  }

  Formula parse_atom() {
    Token t = lex_.take();
    switch (t.tok) {
      case Tok::Ident:
        return Formula::var(intern(t.text));
      case Tok::ConstTrue:
        return Formula::constant(true);
      case Tok::ConstFalse:
        return Formula::constant(false);
      case Tok::LParen: {
        Formula f = parse_iff();
        const Token& r = lex_.peek();
        if (r.tok != Tok::RParen)
          throw ParseError("expected ')'", r.line, r.col);
        lex_.take();
        return f;
      }
      default:
        throw ParseError("expected a formula, got '" + t.text + "'", t.line,
                         t.col);
    }
  }

  VarId intern(const std::string& name) {
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (names_[i] == name) return static_cast<VarId>(i);
    names_.push_back(name);
    return static_cast<VarId>(names_.size() - 1);
  }

  Lexer lex_;
  std::vector<std::string> names_;
};

}  // namespace

Problem parse_formula(std::string_view text) { return Parser(text).run(); }

// ---------------------------------------------------------------------------
// DIMACS parser
// ---------------------------------------------------------------------------

Problem parse_dimacs(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string tok;
  long long var_count = -1, clause_count = -1;
  int line = 1;

  // Header, skipping leading comments.
  std::string hline;
  while (std::getline(in, hline)) {
    if (hline.empty() || hline[0] == 'c') {
      ++line;
      continue;
    }
    std::istringstream hs(hline);
    std::string p, fmt;
    if (!(hs >> p >> fmt >> var_count >> clause_count) || p != "p" ||
        fmt != "cnf" || var_count < 0 || clause_count < 0)
      throw ParseError("malformed DIMACS header '" + hline + "'", line, 1);
    break;
  }
  if (var_count < 0) throw ParseError("missing DIMACS header", line, 1);

  std::vector<std::vector<Formula>> clauses;
  std::vector<Formula> current;
  bool in_clause = false;
  long long lit;
  while (in >> tok) {
    if (tok == "c") {
      std::string rest;
      std::getline(in, rest);
      continue;
    }
    if (tok == "%") break;
    try {
      lit = std::stoll(tok);
    } catch (const std::exception&) {
      throw ParseError("bad literal '" + tok + "'", line, 1);
    }
    if (lit == 0) {
      clauses.push_back(std::move(current));
      current.clear();
      in_clause = false;
      continue;
    }
    long long v = lit > 0 ? lit : -lit;
    if (v > var_count)
      throw ParseError("literal " + std::to_string(lit) +
                           " out of range (header declares " +
                           std::to_string(var_count) + " variables)",
                       line, 1);
    Formula leaf = Formula::var(static_cast<VarId>(v - 1));
    current.push_back(lit > 0 ? std::move(leaf)
                              : Formula::negation(std::move(leaf)));
    in_clause = true;
  }
  if (in_clause)
    throw ParseError("clause missing terminating 0", line, 1);
  if (static_cast<long long>(clauses.size()) != clause_count)
    throw ParseError("header declares " + std::to_string(clause_count) +
                         " clauses, found " + std::to_string(clauses.size()),
                     line, 1);

  std::vector<Formula> conjuncts;
  conjuncts.reserve(clauses.size());
  for (auto& cl : clauses)
    conjuncts.push_back(Formula::disjunction(std::move(cl)));

  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(var_count));
  for (long long i = 1; i <= var_count; ++i)
    names.push_back("x" + std::to_string(i));

  return Problem{Formula::conjunction(std::move(conjuncts)), std::move(names)};
}

// ---------------------------------------------------------------------------
// Queries
// ---------------------------------------------------------------------------

static void collect_vars(const Formula& f, std::set<VarId>& out) {
  if (f.kind() == Kind::Var) {
    out.insert(f.var_id());
    return;
  }
  for (const Formula& c : f.children()) collect_vars(c, out);
}

std::vector<VarId> free_vars(const Formula& f) {
  std::set<VarId> s;
  collect_vars(f, s);
  return {s.begin(), s.end()};
}

std::size_t node_count(const Formula& f) {
  std::size_t n = 1;
  for (const Formula& c : f.children()) n += node_count(c);
  return n;
}

bool evaluate(const Formula& f, const Assignment& t) {
  switch (f.kind()) {
    case Kind::Var:
      return t.get(f.var_id());
    case Kind::Not:
      return !evaluate(f.child(0), t);
    case Kind::And:
      for (const Formula& c : f.children())
        if (!evaluate(c, t)) return false;
      return true;
    case Kind::Or:
      for (const Formula& c : f.children())
        if (evaluate(c, t)) return true;
      return false;
    case Kind::Implies:
      return !evaluate(f.child(0), t) || evaluate(f.child(1), t);
    case Kind::Iff:
      return evaluate(f.child(0), t) == evaluate(f.child(1), t);
    case Kind::True:
      return true;
    case Kind::False:
      return false;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Pretty printer
// ---------------------------------------------------------------------------

namespace {

// Precedence levels: Iff 1 < Implies 2 < Or 3 < And 4 < Not 5 < atom 6.
int precedence(Kind k) {
  switch (k) {
    case Kind::Iff: return 1;
    case Kind::Implies: return 2;
    case Kind::Or: return 3;
    case Kind::And: return 4;
    case Kind::Not: return 5;
    default: return 6;
  }
}

void render_node(const Formula& f, std::span<const std::string> names,
                 int min_prec, std::string& out) {
  int prec = precedence(f.kind());
  bool parens = prec < min_prec;
  if (parens) out.push_back('(');
  switch (f.kind()) {
    case Kind::Var:
      out += names[f.var_id()];
      break;
    case Kind::True:
      out.push_back('1');
      break;
    case Kind::False:
      out.push_back('0');
      break;
    case Kind::Not:
      out.push_back('!');
      render_node(f.child(0), names, 5, out);
      break;
    case Kind::And:
    case Kind::Or: {
      const char* sep = f.kind() == Kind::And ? " & " : " | ";
      for (std::size_t i = 0; i < f.arity(); ++i) {
        if (i) out += sep;
        render_node(f.child(i), names, prec + 1, out);
      }
      break;
    }
    case Kind::Implies:
      render_node(f.child(0), names, 3, out);
      out += " -> ";
      render_node(f.child(1), names, 2, out);  // right-associative
      break;
    case Kind::Iff:
      render_node(f.child(0), names, 2, out);
      out += " <-> ";
      render_node(f.child(1), names, 2, out);
      break;
  }
  if (parens) out.push_back(')');
}

}  // namespace

std::string render(const Formula& f, std::span<const std::string> names) {
  std::string out;
  render_node(f, names, 0, out);
  return out;
}

std::string render(const Problem& p) { return render(p.root, p.var_names); }

}  // namespace ncgsat
