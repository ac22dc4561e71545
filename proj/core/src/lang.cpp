#include "gdlog/lang.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <sstream>

namespace gdlog {

bool Atom::is_ground() const {
  return std::none_of(args.begin(), args.end(), [](const Term& t) { return t.is_var(); });
}

const ChoiceGoal* Rule::greedy_goal() const {
  for (const auto& c : choices)
    if (c.kind != ChoiceKind::Choice) return &c;
  return nullptr;
}

std::vector<std::string> Rule::body_variables() const {
  std::vector<std::string> out;
  auto add = [&](const Term& t) {
    if (t.is_var() && !t.is_anonymous() && std::find(out.begin(), out.end(), t.name) == out.end())
      out.push_back(t.name);
  };
  for (const auto& lit : body) {
    if (const auto* a = std::get_if<Atom>(&lit)) {
      for (const auto& t : a->args) add(t);
    } else {
      const auto& b = std::get<BuiltinGoal>(lit);
      if (b.op == BuiltinOp::Plus) add(b.result);
      add(b.lhs);
      add(b.rhs);
    }
  }
  return out;
}

const Rule* Program::find_rule(std::string_view id) const {
  for (const auto& r : rules)
    if (r.id == id) return &r;
  return nullptr;
}

std::vector<std::pair<std::string, size_t>> Program::predicates() const {
  std::map<std::string, size_t> seen;
  for (const auto& f : facts) seen.emplace(f.predicate, f.arity());
  for (const auto& r : rules) {
    seen.emplace(r.head.predicate, r.head.arity());
    for (const auto& lit : r.body)
      if (const auto* a = std::get_if<Atom>(&lit)) seen.emplace(a->predicate, a->arity());
  }
  return {seen.begin(), seen.end()};
}

std::set<std::string> Program::idb_predicates() const {
  std::set<std::string> out;
  for (const auto& r : rules) out.insert(r.head.predicate);
  return out;
}

namespace {

enum class Tok {
  Ident, Var, Int, Quoted, LParen, RParen, Comma, Dot, If, Neq, Lt, Le, Gt, Ge, Eq, Plus, Semi, End
};

struct Token {
  Tok kind;
  std::string text;
  int line;
  int col;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      const int l = line_, c = col_;
      if (pos_ >= src_.size()) {
        out.push_back({Tok::End, "", l, c});
        return out;
      }
      const char ch = src_[pos_];
      if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
        std::string word;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
          word += advance();
        const bool var = std::isupper(static_cast<unsigned char>(word[0])) || word[0] == '_';
        out.push_back({var ? Tok::Var : Tok::Ident, word, l, c});
      } else if (std::isdigit(static_cast<unsigned char>(ch)) ||
                 (ch == '-' && pos_ + 1 < src_.size() &&
                  std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
        std::string num(1, advance());
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
          num += advance();
        out.push_back({Tok::Int, num, l, c});
      } else if (ch == '\'' || ch == '"') {
        advance();
        std::string s;
        for (;;) {
          if (pos_ >= src_.size()) throw ParseError("unterminated quoted symbol", l, c);
          char q = advance();
          if (q == ch) break;
          if (q == '\\' && pos_ < src_.size()) q = advance();
          s += q;
        }
        out.push_back({Tok::Quoted, s, l, c});
      } else {
        out.push_back({punct(l, c), "", l, c});
      }
    }
  }

 private:
  char advance() {
    const char ch = src_[pos_++];
    if (ch == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return ch;
  }

  bool match(std::string_view s) {
    if (src_.substr(pos_, s.size()) != s) return false;
    for (size_t i = 0; i < s.size(); ++i) advance();
    return true;
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      if (src_[pos_] == '%') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(src_[pos_]))) {
        advance();
      } else {
        break;
      }
    }
  }

  Tok punct(int l, int c) {
    if (match(":-")) return Tok::If;
    if (match("\\=")) return Tok::Neq;
    if (match("=<")) return Tok::Le;
    if (match(">=")) return Tok::Ge;
    if (match("(")) return Tok::LParen;
    if (match(")")) return Tok::RParen;
    if (match(",")) return Tok::Comma;
    if (match(".")) return Tok::Dot;
    if (match("<")) return Tok::Lt;
    if (match(">")) return Tok::Gt;
    if (match("=")) return Tok::Eq;
    if (match("+")) return Tok::Plus;
    if (match(";")) return Tok::Semi;
    throw ParseError(std::string("unexpected character '") + src_[pos_] + "'", l, c);
  }

  std::string_view src_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

std::optional<int64_t> to_int(std::string_view s) {
  int64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
  return v;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Program run() {
    Program prog;
    while (peek().kind != Tok::End) clause(prog);
    return prog;
  }

 private:
  const Token& peek(size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void fail(const std::string& msg, const Token& t) const {
    throw ParseError(msg, t.line, t.col);
  }

  const Token& expect(Tok k, const char* what) {
    if (peek().kind != k) fail(std::string("expected ") + what, peek());
    return next();
  }

  void check_arity(const Atom& a, const Token& at) {
    auto [it, fresh] = arity_.emplace(a.predicate, a.arity());
    if (!fresh && it->second != a.arity())
      fail("arity clash for predicate " + a.predicate + ": " + std::to_string(a.arity()) +
               " vs " + std::to_string(it->second),
           at);
  }

  void clause(Program& prog) {
    const Token& start = peek();
    Atom head = atom();
    check_arity(head, start);
    if (peek().kind == Tok::Dot) {
      next();
      for (const auto& t : head.args)
        if (t.is_var()) fail("variable " + t.name + " in fact is unbound", start);
      prog.facts.push_back(std::move(head));
      return;
    }
    expect(Tok::If, "':-' or '.'");
    Rule r;
    r.head = std::move(head);
    r.line = start.line;
    for (;;) {
      literal(r);
      if (peek().kind == Tok::Comma) {
        next();
        continue;
      }
      expect(Tok::Dot, "',' or '.'");
      break;
    }
    check_range_restricted(r, start);
    r.id = "r" + std::to_string(prog.rules.size() + 1);
    prog.rules.push_back(std::move(r));
  }

  void check_range_restricted(const Rule& r, const Token& at) {
    std::set<std::string> bound;
    for (const auto& lit : r.body) {
      if (const auto* a = std::get_if<Atom>(&lit)) {
        for (const auto& t : a->args)
          if (t.is_var()) bound.insert(t.name);
      } else if (const auto& b = std::get<BuiltinGoal>(lit); b.op == BuiltinOp::Plus) {
        auto ok = [&](const Term& t) { return !t.is_var() || bound.count(t.name); };
        if (ok(b.lhs) && ok(b.rhs)) bound.insert(b.result.name);
      }
    }
    for (const auto& t : r.head.args) {
      if (t.is_anonymous()) fail("anonymous variable in rule head", at);
      if (t.is_var() && !bound.count(t.name))
        fail("head variable " + t.name + " unbound (not range-restricted)", at);
    }
  }

  Term term() {
    const Token& t = next();
    switch (t.kind) {
      case Tok::Var: return Term::variable(t.text);
      case Tok::Ident:
      case Tok::Quoted: return Term::constant(Value::symbol(t.text));
      case Tok::Int: {
        auto v = to_int(t.text);
        if (!v) fail("integer out of 64-bit range: " + t.text, t);
        return Term::constant(Value::integer(*v));
      }
      default: fail("expected a term", t);
    }
  }

  Atom atom() {
    const Token& name = next();
    if (name.kind != Tok::Ident) fail("expected a predicate name", name);
    Atom a{name.text, {}};
    if (peek().kind == Tok::LParen) {
      next();
      if (peek().kind != Tok::RParen) {
        a.args.push_back(term());
        while (peek().kind == Tok::Comma) {
          next();
          a.args.push_back(term());
        }
      }
      expect(Tok::RParen, "')'");
    }
    return a;
  }

  std::vector<std::string> var_list() {
    std::vector<std::string> vars;
    auto one = [&] {
      const Token& t = expect(Tok::Var, "a variable");
      vars.push_back(t.text);
    };
    if (peek().kind != Tok::LParen) {
      one();
      return vars;
    }
    next();
    if (peek().kind != Tok::RParen) {
      one();
      while (peek().kind == Tok::Comma) {
        next();
        one();
      }
    }
    expect(Tok::RParen, "')'");
    return vars;
  }

  void literal(Rule& r) {
    const Token& t = peek();
    if (t.kind == Tok::Ident &&
        (t.text == "choice" || t.text == "choice_least" || t.text == "choice_most") &&
        peek(1).kind == Tok::LParen) {
      next();
      next();
      ChoiceGoal g;
      g.kind = t.text == "choice" ? ChoiceKind::Choice
               : t.text == "choice_least" ? ChoiceKind::Least
                                          : ChoiceKind::Most;
      g.left = var_list();
      expect(Tok::Comma, "','");
      g.right = var_list();
      expect(Tok::RParen, "')'");
      r.choices.push_back(std::move(g));
      return;
    }
    if (t.kind == Tok::Ident && peek(1).kind != Tok::Neq && peek(1).kind != Tok::Lt &&
        peek(1).kind != Tok::Le && peek(1).kind != Tok::Gt && peek(1).kind != Tok::Ge) {
      const Token& at = peek();
      Atom a = atom();
      check_arity(a, at);
      r.body.emplace_back(std::move(a));
      return;
    }
    Term lhs = term();
    const Token& op = next();
    BuiltinGoal b;
    switch (op.kind) {
      case Tok::Neq: b.op = BuiltinOp::Neq; break;
      case Tok::Lt: b.op = BuiltinOp::Lt; break;
      case Tok::Le: b.op = BuiltinOp::Le; break;
      case Tok::Gt: b.op = BuiltinOp::Gt; break;
      case Tok::Ge: b.op = BuiltinOp::Ge; break;
      case Tok::Eq: {
        if (!lhs.is_var() || lhs.is_anonymous()) fail("left side of '=' must be a variable", op);
        b.op = BuiltinOp::Plus;
        b.result = lhs;
        b.lhs = term();
        expect(Tok::Plus, "'+'");
        b.rhs = term();
        r.body.emplace_back(std::move(b));
        return;
      }
      default: fail("expected a comparison operator", op);
    }
    b.lhs = std::move(lhs);
    b.rhs = term();
    r.body.emplace_back(std::move(b));
  }

  std::vector<Token> toks_;
  size_t pos_ = 0;
  std::map<std::string, size_t> arity_;
};

const char* op_text(BuiltinOp op) {
  switch (op) {
    case BuiltinOp::Neq: return "\\=";
    case BuiltinOp::Lt: return "<";
    case BuiltinOp::Le: return "=<";
    case BuiltinOp::Gt: return ">";
    case BuiltinOp::Ge: return ">=";
    case BuiltinOp::Plus: return "+";
  }
  return "?";
}

std::string var_list_text(const std::vector<std::string>& vs) {
  std::string out = "(";
  for (size_t i = 0; i < vs.size(); ++i) out += (i ? "," : "") + vs[i];
  return out + ")";
}

}  // namespace

Program parse_program(std::string_view text) { return Parser(Lexer(text).run()).run(); }

std::optional<Value> parse_constant(std::string_view text) {
  if (text.empty()) return std::nullopt;
  if (auto v = to_int(text)) return Value::integer(*v);
  if (text.front() == '\'' || text.front() == '"') {
    try {
      auto toks = Lexer(text).run();
      if (toks.size() == 2 && toks[0].kind == Tok::Quoted) return Value::symbol(toks[0].text);
    } catch (const ParseError&) {
    }
    return std::nullopt;
  }
  return Value::symbol(text);
}

std::vector<Diagnostic> validate(const Program& p) {
  std::vector<Diagnostic> out;
  for (const auto& r : p.rules) {
    auto diag = [&](std::string msg) { out.push_back({r.id, std::move(msg)}); };

    auto reserved = [](const std::string& pred) {
      return pred.rfind("chosen_", 0) == 0 || pred.rfind("diffchoice_", 0) == 0;
    };
    if (reserved(r.head.predicate))
      diag("predicate name " + r.head.predicate + " is reserved for the choice rewriting");

    // Left-to-right binding discipline for builtins.
    std::set<std::string> bound;
    for (const auto& lit : r.body) {
      if (const auto* a = std::get_if<Atom>(&lit)) {
        for (const auto& t : a->args)
          if (t.is_var()) bound.insert(t.name);
        continue;
      }
      const auto& b = std::get<BuiltinGoal>(lit);
      auto need = [&](const Term& t) {
        if (t.is_anonymous()) diag("anonymous variable in builtin goal " + to_string(b));
        else if (t.is_var() && !bound.count(t.name))
          diag("variable " + t.name + " in " + to_string(b) + " is not bound by an earlier atom");
      };
      need(b.lhs);
      need(b.rhs);
      if (b.op == BuiltinOp::Plus) {
        if (bound.count(b.result.name))
          diag("arithmetic result " + b.result.name + " must be a fresh variable");
        bound.insert(b.result.name);
      }
    }

    const auto body_vars = r.body_variables();
    auto in_body = [&](const std::string& v) {
      return std::find(body_vars.begin(), body_vars.end(), v) != body_vars.end();
    };
    int greedy = 0;
    for (const auto& g : r.choices) {
      const std::string text = to_string(g);
      if (g.kind != ChoiceKind::Choice) {
        ++greedy;
        if (g.right.size() != 1) diag(text + ": cost side must be a single variable");
      }
      for (const auto& v : g.left)
        if (std::find(g.right.begin(), g.right.end(), v) != g.right.end())
          diag(text + ": X ∩ Y nonempty (" + v + ")");
      for (const auto* side : {&g.left, &g.right})
        for (const auto& v : *side) {
          if (v == "_") diag(text + ": anonymous variable in choice goal");
          else if (!in_body(v)) diag(text + ": variable " + v + " does not occur in the body");
        }
      if (g.right.empty()) diag(text + ": empty right side");
    }
    if (greedy > 1) diag("at most one choice-least or choice-most goal per rule");
  }
  return out;
}

std::string to_string(const Term& t) { return t.is_var() ? t.name : t.value.to_string(); }

std::string to_string(const Atom& a) {
  std::string out = a.predicate;
  if (a.args.empty()) return out;
  out += '(';
  for (size_t i = 0; i < a.args.size(); ++i) out += (i ? "," : "") + to_string(a.args[i]);
  return out + ')';
}

std::string to_string(const BuiltinGoal& b) {
  if (b.op == BuiltinOp::Plus)
    return to_string(b.result) + " = " + to_string(b.lhs) + " + " + to_string(b.rhs);
  return to_string(b.lhs) + " " + op_text(b.op) + " " + to_string(b.rhs);
}

std::string to_string(const ChoiceGoal& c) {
  const char* name = c.kind == ChoiceKind::Choice ? "choice"
                     : c.kind == ChoiceKind::Least ? "choice_least"
                                                   : "choice_most";
  return std::string(name) + "(" + var_list_text(c.left) + "," + var_list_text(c.right) + ")";
}

std::string to_string(const Rule& r) {
  std::string out = to_string(r.head) + " :- ";
  bool first = true;
  auto sep = [&] {
    if (!first) out += ", ";
    first = false;
  };
  for (const auto& lit : r.body) {
    sep();
    out += std::visit([](const auto& l) { return to_string(l); }, lit);
  }
  for (const auto& c : r.choices) {
    sep();
    out += to_string(c);
  }
  return out + ".";
}

std::string print_program(const Program& p) {
  std::ostringstream os;
  for (const auto& f : p.facts) os << to_string(f) << ".\n";
  for (const auto& r : p.rules) os << to_string(r) << "\n";
  return os.str();
}

}  // namespace gdlog
