#include "gdlog/analysis.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace gdlog {

std::vector<std::vector<std::string>> DependencyGraph::recursive_cliques() const {
  std::vector<std::vector<std::string>> out;
  for (const auto& c : components)
    if (c.size() > 1 || depends_on(c.front(), c.front())) out.push_back(c);
  return out;
}

DependencyGraph build_dependency_graph(const Program& p) {
  DependencyGraph g;
  for (const auto& [name, arity] : p.predicates()) g.nodes.push_back(name);
  for (const auto& r : p.rules)
    for (const auto& lit : r.body)
      if (const auto* a = std::get_if<Atom>(&lit)) g.edges.emplace(r.head.predicate, a->predicate);

  std::map<std::string, std::vector<std::string>> succ;
  for (const auto& [from, to] : g.edges) succ[from].push_back(to);

  // Tarjan; components come out with dependencies first.
  std::map<std::string, int> index, low;
  std::set<std::string> on_stack;
  std::vector<std::string> stack;
  int counter = 0;
  std::function<void(const std::string&)> visit = [&](const std::string& v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack.insert(v);
    for (const auto& w : succ[v]) {
      if (!index.count(w)) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack.count(w)) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<std::string> comp;
      std::string w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack.erase(w);
        comp.push_back(w);
      } while (w != v);
      std::sort(comp.begin(), comp.end());
      g.components.push_back(std::move(comp));
    }
  };
  for (const auto& v : g.nodes)
    if (!index.count(v)) visit(v);
  return g;
}

std::optional<size_t> SubprogramPlan::stratum_of_predicate(const std::string& pred) const {
  for (size_t i = 0; i < strata.size(); ++i)
    if (std::find(strata[i].predicates.begin(), strata[i].predicates.end(), pred) !=
        strata[i].predicates.end())
      return i;
  return std::nullopt;
}

std::optional<size_t> SubprogramPlan::stratum_of_rule(const std::string& rule_id) const {
  for (size_t i = 0; i < strata.size(); ++i)
    if (std::find(strata[i].rule_ids.begin(), strata[i].rule_ids.end(), rule_id) !=
        strata[i].rule_ids.end())
      return i;
  return std::nullopt;
}

SubprogramPlan plan_subprograms(const DependencyGraph& g, const Program& p) {
  SubprogramPlan plan;
  for (const auto& comp : g.components) {
    Stratum s;
    s.predicates = comp;
    s.recursive = comp.size() > 1 || g.depends_on(comp.front(), comp.front());
    for (const auto& r : p.rules)
      if (std::binary_search(comp.begin(), comp.end(), r.head.predicate)) s.rule_ids.push_back(r.id);
    plan.strata.push_back(std::move(s));
  }
  return plan;
}

const char* to_string(RuleKind k) {
  switch (k) {
    case RuleKind::NonChoice: return "non-choice";
    case RuleKind::PureChoice: return "pure-choice";
    case RuleKind::ChoiceLeast: return "choice-least";
    case RuleKind::ChoiceMost: return "choice-most";
  }
  return "?";
}

RuleKind classify_rule(const Rule& r) {
  if (r.choices.empty()) return RuleKind::NonChoice;
  if (const auto* g = r.greedy_goal())
    return g->kind == ChoiceKind::Least ? RuleKind::ChoiceLeast : RuleKind::ChoiceMost;
  return RuleKind::PureChoice;
}

std::vector<RuleKind> classify_rules(const Program& p) {
  std::vector<RuleKind> out;
  out.reserve(p.rules.size());
  for (const auto& r : p.rules) out.push_back(classify_rule(r));
  return out;
}

std::vector<std::string> choice_schema(const Rule& r) {
  std::set<std::string> in_goals;
  for (const auto& g : r.choices) {
    in_goals.insert(g.left.begin(), g.left.end());
    in_goals.insert(g.right.begin(), g.right.end());
  }
  std::vector<std::string> w;
  for (const auto& v : r.body_variables())
    if (in_goals.count(v)) w.push_back(v);
  return w;
}

FDSet extract_fds(const Program& p) {
  FDSet out;
  for (const auto& r : p.rules) {
    if (!r.is_choice_rule()) continue;
    RuleFDs entry{r.id, choice_schema(r), {}};
    auto pos = [&](const std::string& v) {
      return static_cast<size_t>(std::find(entry.schema.begin(), entry.schema.end(), v) -
                                 entry.schema.begin());
    };
    for (const auto& g : r.choices) {
      FunctionalDependency fd;
      for (const auto& v : g.left) fd.lhs.push_back(pos(v));
      for (const auto& v : g.right) fd.rhs.push_back(pos(v));
      entry.fds.push_back(std::move(fd));
    }
    out.push_back(std::move(entry));
  }
  return out;
}

std::string chosen_predicate(const std::string& rule_id) { return "chosen_" + rule_id; }
std::string diffchoice_predicate(const std::string& rule_id) { return "diffchoice_" + rule_id; }

namespace {

Atom var_atom(std::string pred, const std::vector<std::string>& vars) {
  Atom a{std::move(pred), {}};
  for (const auto& v : vars) a.args.push_back(Term::variable(v));
  return a;
}

}  // namespace

FoeProgram foe_transform(const Program& p) {
  FoeProgram out;
  out.facts = p.facts;
  out.fds = extract_fds(p);
  for (const auto& r : p.rules) {
    if (!r.is_choice_rule()) {
      out.rules.push_back({FoeRule::Role::Plain, r.id, r.head, r.body, {}, {}, 0});
      continue;
    }
    const auto w = choice_schema(r);
    const Atom chosen = var_atom(chosen_predicate(r.id), w);
    const Atom diff = var_atom(diffchoice_predicate(r.id), w);

    FoeRule rewritten{FoeRule::Role::Rewritten, r.id, r.head, r.body, {}, {}, 0};
    rewritten.body.emplace_back(chosen);
    out.rules.push_back(std::move(rewritten));

    out.rules.push_back({FoeRule::Role::Chosen, r.id, chosen, r.body, {diff}, {}, 0});

    const auto used = r.body_variables();
    auto fresh = [&](const std::string& v) {
      for (int i = 1;; ++i) {
        std::string cand = v + std::to_string(i);
        if (std::find(used.begin(), used.end(), cand) == used.end() &&
            std::find(w.begin(), w.end(), cand) == w.end())
          return cand;
      }
    };
    for (size_t i = 0; i < r.choices.size(); ++i) {
      const auto& g = r.choices[i];
      std::vector<std::string> primed;
      std::map<std::string, std::string> prime_of;
      for (const auto& v : w) {
        const bool in_x = std::find(g.left.begin(), g.left.end(), v) != g.left.end();
        primed.push_back(in_x ? v : fresh(v));
        prime_of[v] = primed.back();
      }
      FoeRule d{FoeRule::Role::Diffchoice, r.id, diff, {}, {}, {}, i};
      d.body.emplace_back(var_atom(chosen_predicate(r.id), primed));
      for (const auto& y : g.right) d.differ.emplace_back(y, prime_of[y]);
      out.rules.push_back(std::move(d));
    }
  }
  return out;
}

std::string to_string(const FoeRule& r) {
  std::string out = to_string(r.head) + " :- ";
  std::vector<std::string> parts;
  for (const auto& lit : r.body) parts.push_back(std::visit([](const auto& l) { return to_string(l); }, lit));
  for (const auto& n : r.negated) parts.push_back("not " + to_string(n));
  if (!r.differ.empty()) {
    std::string d;
    for (size_t i = 0; i < r.differ.size(); ++i)
      d += (i ? " ; " : "") + r.differ[i].first + " \\= " + r.differ[i].second;
    parts.push_back(r.differ.size() > 1 ? "(" + d + ")" : d);
  }
  for (size_t i = 0; i < parts.size(); ++i) out += (i ? ", " : "") + parts[i];
  return out + ".";
}

std::string print_foe(const FoeProgram& f) {
  std::ostringstream os;
  for (const auto& a : f.facts) os << to_string(a) << ".\n";
  for (const auto& r : f.rules) os << to_string(r) << "\n";
  return os.str();
}

}  // namespace gdlog
