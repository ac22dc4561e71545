// Reference implementation of the lazy and least/most-cost immediate
// consequence operators. Candidates are recomputed from scratch at every step
// and checked against the FDs by value, not through table keys.

#include <algorithm>
#include <chrono>
#include <ostream>

#include "gdlog/engine.hpp"

namespace gdlog {

namespace {

bool violates_fds(const RuleFDs& fds, const Relation* chosen, const Tuple& t) {
  if (!chosen) return false;
  for (size_t i = 0; i < chosen->size(); ++i) {
    const auto c = chosen->row(i);
    for (const auto& fd : fds.fds) {
      bool same_lhs = true;
      for (size_t col : fd.lhs) same_lhs = same_lhs && c[col] == t[col];
      if (!same_lhs) continue;
      for (size_t col : fd.rhs)
        if (c[col] != t[col]) return true;
    }
  }
  return false;
}

struct Candidate {
  size_t stratum = 0;
  int klass = 0;
  size_t rule_index = 0;
  std::optional<Value> cost;
  bool descending = false;
  Tuple t;
};

bool precedes(const Candidate& a, const Candidate& b) {
  if (a.stratum != b.stratum) return a.stratum < b.stratum;
  if (a.klass != b.klass) return a.klass < b.klass;
  if (a.rule_index != b.rule_index) return a.rule_index < b.rule_index;
  if (a.cost && b.cost && *a.cost != *b.cost) return a.descending ? *a.cost > *b.cost : *a.cost < *b.cost;
  return compare_tuples(a.t, b.t) < 0;
}

}  // namespace

RunResult run_lico_reference(const Program& p, const FactSet& edb, LicoMode mode,
                             EngineOptions opts) {
  const auto t0 = std::chrono::steady_clock::now();
  if (auto diags = validate(p); !diags.empty())
    throw EngineError(diags.front().rule_id, diags.front().message);

  const auto plan = plan_subprograms(build_dependency_graph(p), p);
  const auto fdset = extract_fds(p);
  const auto kinds = classify_rules(p);

  struct ChoiceRule {
    const Rule* rule;
    size_t index;
    RuleKind kind;
    const RuleFDs* fds;
    Rule generator;  // chosen_r(W) :- B(Z)
    std::optional<size_t> cost_col;
  };
  std::vector<ChoiceRule> choice;
  for (size_t i = 0; i < p.rules.size(); ++i) {
    const Rule& r = p.rules[i];
    if (!r.is_choice_rule()) continue;
    const RuleFDs* f = &*std::find_if(fdset.begin(), fdset.end(),
                                      [&](const RuleFDs& x) { return x.rule_id == r.id; });
    Rule gen;
    gen.id = r.id;
    gen.head.predicate = chosen_predicate(r.id);
    for (const auto& v : f->schema) gen.head.args.push_back(Term::variable(v));
    gen.body = r.body;
    std::optional<size_t> cost_col;
    if (const ChoiceGoal* g = r.greedy_goal())
      cost_col = static_cast<size_t>(
          std::find(f->schema.begin(), f->schema.end(), g->right.front()) - f->schema.begin());
    choice.push_back({&r, i, kinds[i], f, std::move(gen), cost_col});
  }

  RunResult out;
  Interpretation i;
  {
    FactSet facts;
    for (const auto& a : p.facts) {
      Tuple t;
      for (const auto& term : a.args) t.push_back(term.value);
      facts[a.predicate].push_back(std::move(t));
    }
    i.load(facts);
    i.load(edb);
  }
  for (const auto& c : choice) i.get_or_create(chosen_predicate(c.rule->id), c.fds->schema.size());
  i = closure_nonchoice(p, std::move(i), false, &out.counters);

  const RuleKind greedy_kind = mode == LicoMode::Most ? RuleKind::ChoiceMost : RuleKind::ChoiceLeast;
  for (;;) {
    // Theta_I: candidates not in I whose addition keeps every FD.
    std::vector<Candidate> theta;
    for (const auto& c : choice) {
      const DeltaSet d = immediate_consequence(std::span<const Rule>(&c.generator, 1), i);
      auto it = d.find(c.generator.head.predicate);
      if (it == d.end()) continue;
      const Relation* chosen = i.find(c.generator.head.predicate);
      for (const auto& t : it->second) {
        ++out.counters.conflict_checks;
        if (violates_fds(*c.fds, chosen, t)) continue;
        Candidate cand;
        cand.stratum = plan.stratum_of_rule(c.rule->id).value_or(0);
        const bool greedy = mode != LicoMode::Lazy && c.kind == greedy_kind;
        cand.klass = opts.schedule == Schedule::GreedyFirst && !greedy ? 1 : 0;
        cand.rule_index = c.index;
        if (greedy) {
          cand.cost = t[*c.cost_col];
          cand.descending = mode == LicoMode::Most;
        }
        cand.t = t;
        theta.push_back(std::move(cand));
      }
    }
    if (mode != LicoMode::Lazy) {
      // least(Theta): drop greedy-rule tuples beaten by another greedy-rule tuple.
      std::optional<Value> best;
      for (const auto& c : theta)
        if (c.cost && (!best || (mode == LicoMode::Most ? *c.cost > *best : *c.cost < *best)))
          best = c.cost;
      std::erase_if(theta, [&](const Candidate& c) { return c.cost && *c.cost != *best; });
    }
    if (theta.empty()) break;
    const Candidate& delta = *std::min_element(theta.begin(), theta.end(), precedes);
    const Rule* src = p.rules.data() + delta.rule_index;
    ++out.counters.iterations;
    if (opts.trace)
      *opts.trace << out.counters.iterations << '\t' << src->id << '\t' << theta.size() << '\t'
                  << format_tuple(delta.t) << '\n';
    i.get_or_create(chosen_predicate(src->id), delta.t.size()).insert(delta.t);
    i = closure_nonchoice(p, std::move(i), false, &out.counters);
  }
  out.model = std::move(i);
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace gdlog
