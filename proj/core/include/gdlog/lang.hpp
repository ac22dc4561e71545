#pragma once

// AST, concrete syntax and static validation of the Datalog-with-choice dialect.
//
//   fact.                      st(root, a, 0).
//   rule.                      st(X,Y,C) :- st(_,X,_), g(X,Y,C), Y \= a,
//                                           choice((Y),(X)), choice_least((Y),(C)).
//
// See docs/dialect.md for the full grammar.

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "gdlog/value.hpp"

namespace gdlog {

struct Term {
  enum class Kind { Variable, Constant };

  Kind kind = Kind::Constant;
  std::string name;  // variable name; "_" is anonymous
  Value value;       // constant value

  static Term variable(std::string name) { return {Kind::Variable, std::move(name), {}}; }
  static Term constant(Value v) { return {Kind::Constant, {}, v}; }

  bool is_var() const { return kind == Kind::Variable; }
  bool is_anonymous() const { return is_var() && name == "_"; }

  friend bool operator==(const Term&, const Term&) = default;
};

struct Atom {
  std::string predicate;
  std::vector<Term> args;

  size_t arity() const { return args.size(); }
  bool is_ground() const;

  friend bool operator==(const Atom&, const Atom&) = default;
};

enum class BuiltinOp { Neq, Lt, Le, Gt, Ge, Plus };

/// Comparison `lhs op rhs`, or arithmetic binding `result = lhs + rhs`.
struct BuiltinGoal {
  BuiltinOp op = BuiltinOp::Neq;
  Term lhs;
  Term rhs;
  Term result;  // Plus only

  friend bool operator==(const BuiltinGoal&, const BuiltinGoal&) = default;
};

using Literal = std::variant<Atom, BuiltinGoal>;

enum class ChoiceKind { Choice, Least, Most };

/// choice((X...),(Y...)) declares the functional dependency X -> Y over the
/// tuples derived by its rule. For Least/Most, `right` holds the single cost
/// variable.
struct ChoiceGoal {
  ChoiceKind kind = ChoiceKind::Choice;
  std::vector<std::string> left;
  std::vector<std::string> right;

  friend bool operator==(const ChoiceGoal&, const ChoiceGoal&) = default;
};

struct Rule {
  std::string id;  // "r1", "r2", ... in program order
  Atom head;
  std::vector<Literal> body;
  std::vector<ChoiceGoal> choices;
  int line = 0;

  bool is_choice_rule() const { return !choices.empty(); }
  const ChoiceGoal* greedy_goal() const;

  /// Named variables of the non-choice body, in first-occurrence order.
  std::vector<std::string> body_variables() const;

  friend bool operator==(const Rule& a, const Rule& b) {
    return a.head == b.head && a.body == b.body && a.choices == b.choices;
  }
};

struct Program {
  std::vector<Rule> rules;
  std::vector<Atom> facts;

  const Rule* find_rule(std::string_view id) const;
  /// Predicates occurring anywhere, with arities.
  std::vector<std::pair<std::string, size_t>> predicates() const;
  /// Predicates defined by at least one rule head.
  std::set<std::string> idb_predicates() const;

  friend bool operator==(const Program&, const Program&) = default;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line, int column)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
        line_(line), column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Parses program text. Throws ParseError on syntax errors, predicate arity
/// clashes and head variables not bound by the body.
Program parse_program(std::string_view text);

/// Parses a single constant (`abc`, `'Jim Black'`, `42`). Used by the fact reader.
std::optional<Value> parse_constant(std::string_view text);

struct Diagnostic {
  std::string rule_id;
  std::string message;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

/// Static checks beyond syntax. An empty result means the program is valid.
std::vector<Diagnostic> validate(const Program& p);

std::string to_string(const Term& t);
std::string to_string(const Atom& a);
std::string to_string(const BuiltinGoal& b);
std::string to_string(const ChoiceGoal& c);
std::string to_string(const Rule& r);
/// Canonical printer: facts first, then rules, one clause per line.
std::string print_program(const Program& p);

}  // namespace gdlog
