#include "gdlog/engine.hpp"

#include <algorithm>
#include <chrono>
#include <memory>
#include <ostream>
#include <random>
#include <unordered_set>

#include "eval.hpp"

namespace gdlog {

using detail::Arg;
using detail::CompiledBody;
using detail::DerivationRule;
using detail::IncrementalBody;
using detail::Range;

// ---------------------------------------------------------------------------
// Interpretation

Relation& Interpretation::get_or_create(const std::string& pred, size_t arity) {
  auto it = rels_.find(pred);
  if (it == rels_.end()) return rels_.emplace(pred, Relation(pred, arity)).first->second;
  if (it->second.arity() != arity)
    throw EngineError("", "predicate " + pred + " used with arity " + std::to_string(arity) +
                              " and " + std::to_string(it->second.arity()));
  return it->second;
}

Relation* Interpretation::find(const std::string& pred) {
  auto it = rels_.find(pred);
  return it == rels_.end() ? nullptr : &it->second;
}

const Relation* Interpretation::find(const std::string& pred) const {
  auto it = rels_.find(pred);
  return it == rels_.end() ? nullptr : &it->second;
}

bool Interpretation::contains(const std::string& pred, TupleView t) const {
  const Relation* r = find(pred);
  return r && r->arity() == t.size() && r->contains(t);
}

size_t Interpretation::total_tuples() const {
  size_t n = 0;
  for (const auto& [p, r] : rels_) n += r.size();
  return n;
}

Model Interpretation::to_model() const {
  Model m;
  for (const auto& [p, r] : rels_) {
    if (r.empty()) continue;
    auto& rows = m[p];
    for (size_t i = 0; i < r.size(); ++i) {
      auto row = r.row(i);
      rows.emplace(row.begin(), row.end());
    }
  }
  return m;
}

void Interpretation::load(const FactSet& facts) {
  for (const auto& [pred, rows] : facts) {
    if (rows.empty()) continue;
    Relation& r = get_or_create(pred, rows.front().size());
    for (const auto& t : rows) {
      if (t.size() != r.arity())
        throw EngineError("", "fact " + pred + "(" + format_tuple(t) + ") has the wrong arity");
      r.insert(t);
    }
  }
}

const char* to_string(PqPolicy p) {
  switch (p) {
    case PqPolicy::On: return "on";
    case PqPolicy::Off: return "off";
    case PqPolicy::Auto: return "auto";
  }
  return "?";
}

const char* to_string(Schedule s) {
  return s == Schedule::GreedyFirst ? "greedy-first" : "program-order";
}

const char* to_string(PickPolicy p) {
  switch (p) {
    case PickPolicy::Lex: return "lex";
    case PickPolicy::Fifo: return "fifo";
    case PickPolicy::Random: return "random";
  }
  return "?";
}

namespace {

FactSet program_facts(const Program& p) {
  FactSet out;
  for (const auto& a : p.facts) {
    Tuple t;
    for (const auto& term : a.args) t.push_back(term.value);
    out[a.predicate].push_back(std::move(t));
  }
  return out;
}

void load_inputs(Interpretation& i, const Program& p, const FactSet& edb) {
  i.load(program_facts(p));
  i.load(edb);
}

std::vector<Literal> rewritten_body(const Rule& r, const std::vector<std::string>& schema) {
  std::vector<Literal> body = r.body;
  Atom chosen{chosen_predicate(r.id), {}};
  for (const auto& v : schema) chosen.args.push_back(Term::variable(v));
  body.emplace_back(std::move(chosen));
  return body;
}

void require_valid(const Program& p) {
  auto diags = validate(p);
  if (!diags.empty()) throw EngineError(diags.front().rule_id, diags.front().message);
}

std::optional<size_t> cost_position(const Rule& r, const std::vector<std::string>& schema) {
  const ChoiceGoal* g = r.greedy_goal();
  if (!g) return std::nullopt;
  auto it = std::find(schema.begin(), schema.end(), g->right.front());
  return static_cast<size_t>(it - schema.begin());
}

// ---------------------------------------------------------------------------
// Runner: lazy and greedy selection, stratum by stratum.

struct Factorized {
  CartesianPattern pattern;
  std::unique_ptr<ThetaTable> open_x;  // pi_X of the delta of the recursive goal
  std::unique_ptr<ThetaTable> domain;  // dom minus pi_Y chosen
  std::unordered_set<Value> chosen_x, chosen_y;
  size_t rec_seen = 0, dom_seen = 0;
  Counters local;
};

struct ChoiceState {
  const Rule* rule = nullptr;
  RuleKind kind = RuleKind::PureChoice;
  RuleFDs fds;
  std::unique_ptr<ChosenTable> chosen;
  std::unique_ptr<ThetaTable> theta;
  std::unique_ptr<IncrementalBody> cand;
  std::vector<Arg> w_args;
  std::vector<bool> base_atoms;
  std::vector<Tuple> pending;
  std::optional<size_t> cost_col;
  std::unique_ptr<Factorized> fact;
  bool marked = false;

  bool theta_empty() const {
    if (fact) return fact->open_x->empty() || fact->domain->empty();
    return theta->empty();
  }
  size_t theta_size() const {
    if (fact) return fact->open_x->size() * fact->domain->size();
    return theta->size();
  }
};

class Runner {
 public:
  Runner(const Program& p, const FactSet& edb, EngineOptions opts, bool greedy)
      : p_(p), opts_(opts), greedy_(greedy), rng_(opts.seed) {
    require_valid(p);
    load_inputs(result_.model, p, edb);
  }

  RunResult run() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto graph = build_dependency_graph(p_);
    plan_ = plan_subprograms(graph, p_);
    const auto fdset = extract_fds(p_);
    for (const auto& rf : fdset) fds_by_rule_.emplace(rf.rule_id, rf);
    if (opts_.trace) *opts_.trace << "iter\trule\ttheta_new\ttheta_size\tdelta\tpurged\n";

    for (size_t s = 0; s < plan_.strata.size(); ++s) run_stratum(s);

    for (auto& st : states_) {
      const Relation& rel = st->chosen->relation();
      Relation& out = result_.model.get_or_create(rel.name(), rel.arity());
      for (size_t i = 0; i < rel.size(); ++i) out.insert(rel.row(i));
    }
    result_.counters = counters_;
    result_.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return std::move(result_);
  }

 private:
  Relation* resolve(const Atom& a) {
    auto it = chosen_rel_.find(a.predicate);
    if (it != chosen_rel_.end()) return it->second;
    return &result_.model.get_or_create(a.predicate, a.arity());
  }

  void run_stratum(size_t s) {
    const Stratum& stratum = plan_.strata[s];
    if (stratum.rule_ids.empty()) return;
    auto resolver = [this](const Atom& a) { return resolve(a); };

    std::vector<ChoiceState*> choice;
    for (const auto& id : stratum.rule_ids) {
      const Rule& r = *p_.find_rule(id);
      if (r.is_choice_rule()) choice.push_back(make_state(r, s));
    }
    std::vector<DerivationRule> derive;
    for (const auto& id : stratum.rule_ids) {
      const Rule& r = *p_.find_rule(id);
      if (r.is_choice_rule())
        derive.push_back(detail::make_derivation(r.id, r.head,
                                                 rewritten_body(r, fds_by_rule_.at(r.id).schema),
                                                 result_.model, resolver));
      else
        derive.push_back(detail::make_derivation(r.id, r.head, r.body, result_.model, resolver));
    }
    if (opts_.schedule == Schedule::GreedyFirst)
      std::stable_partition(choice.begin(), choice.end(), [](const ChoiceState* c) {
        return c->kind == RuleKind::ChoiceLeast || c->kind == RuleKind::ChoiceMost;
      });

    detail::close_rules(derive, opts_.semi_naive, counters_);
    for (;;) {
      for (auto* c : choice) c->marked = false;
      ChoiceState* selected = nullptr;
      size_t fresh = 0;
      for (auto* c : choice) {
        c->marked = true;
        fresh = refresh(*c);
        if (!c->theta_empty()) {
          selected = c;
          break;
        }
      }
      // Every rule is marked and every theta_r is empty.
      if (!selected) break;
      choose(*selected, fresh);
      detail::close_rules(derive, opts_.semi_naive, counters_);
    }
  }

  ChoiceState* make_state(const Rule& r, size_t stratum) {
    auto st = std::make_unique<ChoiceState>();
    st->rule = &r;
    st->kind = classify_rule(r);
    st->fds = fds_by_rule_.at(r.id);
    const size_t arity = st->fds.schema.size();
    st->chosen = std::make_unique<ChosenTable>(chosen_predicate(r.id), arity, st->fds.fds);
    chosen_rel_[chosen_predicate(r.id)] = &st->chosen->relation();

    const bool greedy_rule =
        greedy_ && (st->kind == RuleKind::ChoiceLeast || st->kind == RuleKind::ChoiceMost);
    ThetaOptions to;
    to.unique_key_pruning = opts_.unique_key_pruning;
    to.pick = opts_.pick;
    to.seed = opts_.seed;
    if (greedy_rule) {
      to.mode = st->kind == RuleKind::ChoiceLeast ? SelectMode::Least : SelectMode::Most;
      st->cost_col = cost_position(r, st->fds.schema);
      to.cost_column = st->cost_col;
      to.priority_queue = opts_.pq != PqPolicy::Off;
    } else {
      to.priority_queue = opts_.pq == PqPolicy::On;
    }
    st->theta = std::make_unique<ThetaTable>(st->fds.fds, arity, to, &counters_);

    auto resolver = [this](const Atom& a) { return resolve(a); };
    st->cand = std::make_unique<IncrementalBody>(r.id, r.body, resolver);
    for (const auto& v : st->fds.schema)
      st->w_args.push_back(st->cand->body().arg_for(Term::variable(v)));
    for (const auto& a : st->cand->body().atoms()) {
      auto ps = plan_.stratum_of_predicate(a.pred);
      st->base_atoms.push_back(!ps || *ps < stratum);
    }

    if (opts_.factorize) {
      std::string why;
      if (auto pat = detect_cartesian_pattern(r, plan_, &why)) {
        auto f = std::make_unique<Factorized>();
        f->pattern = *pat;
        ThetaOptions xo;
        xo.pick = PickPolicy::Lex;
        f->open_x = std::make_unique<ThetaTable>(
            std::vector<FunctionalDependency>{{{0}, {}}}, 1, xo, &f->local);
        ThetaOptions yo = to;
        if (st->cost_col) yo.cost_column = 0;
        f->domain = std::make_unique<ThetaTable>(
            std::vector<FunctionalDependency>{{{0}, {}}}, 1, yo, &counters_);
        st->fact = std::move(f);
      } else {
        result_.diagnostics.push_back(r.id + ": pattern not applicable (" + why + ")");
      }
    }
    states_.push_back(std::move(st));
    return states_.back().get();
  }

  bool before(const ChoiceState& st, const Tuple& a, const Tuple& b) const {
    if (st.cost_col) {
      const Value& ca = a[*st.cost_col];
      const Value& cb = b[*st.cost_col];
      if (ca != cb) return st.kind == RuleKind::ChoiceLeast ? ca < cb : ca > cb;
    }
    return compare_tuples(a, b) < 0;
  }

  // Step 1(ii)-(iii). Returns |theta_r new|.
  size_t refresh(ChoiceState& st) {
    if (st.fact) return refresh_factorized(st);
    buffer_.clear();
    const CompiledBody& body = st.cand->body();
    st.cand->step(
        opts_.semi_naive, counters_,
        [&](const std::vector<Value>& slots) { buffer_.push_back(body.project(st.w_args, slots)); },
        &st.base_atoms);
    std::vector<Tuple> fresh;
    std::unordered_set<Tuple, TupleHash, TupleEq> seen;
    for (auto& t : buffer_) {
      if (st.theta->contains(t)) continue;
      if (st.chosen->conflicts(t, &counters_)) continue;
      if (!seen.insert(t).second) continue;
      fresh.push_back(std::move(t));
    }
    if (fresh.empty()) return 0;
    if (!greedy_) {
      for (const auto& t : fresh) st.theta->insert(t);
      return fresh.size();
    }
    // Greedy: one extreme tuple now, the rest after the choice.
    size_t pick = 0;
    if (st.cost_col || opts_.pick == PickPolicy::Lex) {
      for (size_t i = 1; i < fresh.size(); ++i)
        if (before(st, fresh[i], fresh[pick])) pick = i;
    } else if (opts_.pick == PickPolicy::Random) {
      pick = std::uniform_int_distribution<size_t>(0, fresh.size() - 1)(rng_);
    }
    st.theta->insert(fresh[pick]);
    const size_t n = fresh.size();
    fresh.erase(fresh.begin() + static_cast<std::ptrdiff_t>(pick));
    st.pending = std::move(fresh);
    return n;
  }

  size_t refresh_factorized(ChoiceState& st) {
    Factorized& f = *st.fact;
    const auto& atoms = st.cand->body().atoms();
    const Relation& rec = *atoms[f.pattern.rec_atom].rel;
    const Relation& dom = *atoms[f.pattern.dom_atom].rel;
    size_t fresh = 0;
    for (; f.dom_seen < dom.size(); ++f.dom_seen) {
      ++counters_.tuples_scanned;
      ++counters_.arcs_explored;
      const Value y = dom.row(f.dom_seen)[f.pattern.y_col];
      if (f.chosen_y.count(y)) continue;
      if (f.domain->insert(std::span<const Value>(&y, 1)) == ThetaEffect::Added) ++fresh;
    }
    for (; f.rec_seen < rec.size(); ++f.rec_seen) {
      ++counters_.tuples_scanned;
      const Value x = rec.row(f.rec_seen)[f.pattern.x_col];
      if (f.chosen_x.count(x)) continue;
      f.open_x->insert(std::span<const Value>(&x, 1));
    }
    return fresh;
  }

  // Steps 3 (i)-(iii).
  void choose(ChoiceState& st, size_t fresh) {
    ++counters_.iterations;
    Tuple delta;
    size_t purged = 0;
    if (st.fact) {
      Factorized& f = *st.fact;
      const Value x = f.open_x->select_extreme()->front();
      const Value y = f.domain->select_extreme()->front();
      delta.resize(2);
      delta[f.pattern.x_pos] = x;
      delta[f.pattern.y_pos] = y;
      f.chosen_x.insert(x);
      f.chosen_y.insert(y);
      st.chosen->insert(delta);
    } else {
      delta = *st.theta->select_extreme();
      st.chosen->insert(delta);
      purged = st.theta->purge_conflicting(delta);
      for (auto& t : st.pending) {
        if (st.chosen->conflicts(t, &counters_)) {
          ++purged;
          continue;
        }
        st.theta->insert(t);
      }
      st.pending.clear();
    }
    if (opts_.audit) audit(st);
    if (opts_.trace)
      *opts_.trace << counters_.iterations << '\t' << st.rule->id << '\t' << fresh << '\t'
                   << st.theta_size() << '\t' << format_tuple(delta) << '\t' << purged << '\n';
  }

  void audit(const ChoiceState& st) const {
    if (!st.chosen->satisfies_fds())
      throw std::logic_error(st.rule->id + ": chosen table violates its FDs");
    if (!st.fact) {
      if (!st.theta->heap_ok()) throw std::logic_error(st.rule->id + ": theta heap order broken");
      if (st.theta->conflicts_with(*st.chosen))
        throw std::logic_error(st.rule->id + ": theta conflicts with chosen");
    }
  }

  const Program& p_;
  EngineOptions opts_;
  bool greedy_;
  std::mt19937_64 rng_;
  RunResult result_;
  Counters counters_;
  SubprogramPlan plan_;
  std::map<std::string, RuleFDs> fds_by_rule_;
  std::map<std::string, Relation*> chosen_rel_;
  std::vector<std::unique_ptr<ChoiceState>> states_;
  std::vector<Tuple> buffer_;
};

bool has_greedy_rule(const Program& p) {
  for (const auto& k : classify_rules(p))
    if (k == RuleKind::ChoiceLeast || k == RuleKind::ChoiceMost) return true;
  return false;
}

}  // namespace

// ---------------------------------------------------------------------------

DeltaSet immediate_consequence(std::span<const Rule> rules, const Interpretation& i,
                               const Interpretation* delta) {
  // Rebuild each relation with its delta rows last so the delta is a row suffix.
  Interpretation work;
  std::map<std::string, size_t> old_rows;
  for (const auto& [pred, rel] : i.relations()) {
    Relation& w = work.get_or_create(pred, rel.arity());
    const Relation* d = delta ? delta->find(pred) : nullptr;
    std::vector<Tuple> late;
    for (size_t r = 0; r < rel.size(); ++r) {
      auto row = rel.row(r);
      if (d && d->contains(row))
        late.emplace_back(row.begin(), row.end());
      else
        w.insert(row);
    }
    old_rows[pred] = w.size();
    for (const auto& t : late) w.insert(t);
  }

  Model derived;
  Counters c;
  auto resolver = [&](const Atom& a) { return &work.get_or_create(a.predicate, a.arity()); };
  for (const auto& r : rules) {
    CompiledBody body(r.id, r.body, resolver);
    std::vector<Arg> head;
    for (const auto& t : r.head.args) head.push_back(body.arg_for(t));
    auto emit = [&](const std::vector<Value>& slots) {
      Tuple t = body.project(head, slots);
      if (!i.contains(r.head.predicate, t)) derived[r.head.predicate].insert(std::move(t));
    };
    const auto& atoms = body.atoms();
    const size_t n = atoms.size();
    std::vector<Range> ranges(n);
    if (!delta || n == 0) {
      if (delta) continue;  // no atom can use a delta tuple
      for (size_t j = 0; j < n; ++j) ranges[j] = {0, atoms[j].rel->size()};
      body.run(body.plan(0), ranges, c, emit);
      continue;
    }
    for (size_t j = 0; j < n; ++j) {
      const size_t wj = old_rows.count(atoms[j].pred) ? old_rows[atoms[j].pred] : 0;
      if (atoms[j].rel->size() <= wj) continue;
      for (size_t k = 0; k < n; ++k) {
        const size_t wk = old_rows.count(atoms[k].pred) ? old_rows[atoms[k].pred] : 0;
        ranges[k] = k < j ? Range{0, wk} : k == j ? Range{wj, atoms[k].rel->size()}
                                                  : Range{0, atoms[k].rel->size()};
      }
      body.run(body.plan(j), ranges, c, emit);
    }
  }
  DeltaSet out;
  for (auto& [pred, rows] : derived) out[pred].assign(rows.begin(), rows.end());
  return out;
}

Interpretation closure_nonchoice(const Program& p, Interpretation i, bool semi_naive,
                                 Counters* counters) {
  Counters local;
  Counters& c = counters ? *counters : local;
  const auto fdset = extract_fds(p);
  auto resolver = [&](const Atom& a) { return &i.get_or_create(a.predicate, a.arity()); };
  std::vector<DerivationRule> rules;
  for (const auto& r : p.rules) {
    if (!r.is_choice_rule()) {
      rules.push_back(detail::make_derivation(r.id, r.head, r.body, i, resolver));
      continue;
    }
    auto it = std::find_if(fdset.begin(), fdset.end(),
                           [&](const RuleFDs& f) { return f.rule_id == r.id; });
    rules.push_back(
        detail::make_derivation(r.id, r.head, rewritten_body(r, it->schema), i, resolver));
  }
  detail::close_rules(rules, semi_naive, c);
  return i;
}

RunResult run_choice_fixpoint(const Program& p, const FactSet& edb, EngineOptions opts) {
  return Runner(p, edb, opts, false).run();
}

RunResult run_greedy_fixpoint(const Program& p, const FactSet& edb, EngineOptions opts) {
  return Runner(p, edb, opts, true).run();
}

RunResult run_factorized_sort(const Program& p, const FactSet& edb, EngineOptions opts) {
  opts.factorize = true;
  return Runner(p, edb, opts, true).run();
}

RunResult run_with_counters(const Program& p, const FactSet& edb, EngineOptions opts) {
  return Runner(p, edb, opts, has_greedy_rule(p)).run();
}

std::optional<CartesianPattern> detect_cartesian_pattern(const Rule& r, const SubprogramPlan& plan,
                                                         std::string* why) {
  auto fail = [&](const char* msg) -> std::optional<CartesianPattern> {
    if (why) *why = msg;
    return std::nullopt;
  };
  if (!r.is_choice_rule()) return fail("not a choice rule");
  std::vector<const Atom*> atoms;
  for (const auto& lit : r.body) {
    if (!std::holds_alternative<Atom>(lit)) return fail("body has a builtin goal");
    atoms.push_back(&std::get<Atom>(lit));
  }
  if (atoms.size() != 2) return fail("body does not have exactly two goals");

  // The single named variable of an atom whose other arguments are anonymous.
  auto single_var = [](const Atom& a) -> std::optional<std::pair<std::string, size_t>> {
    std::optional<std::pair<std::string, size_t>> v;
    for (size_t c = 0; c < a.args.size(); ++c) {
      const Term& t = a.args[c];
      if (t.is_anonymous()) continue;
      if (!t.is_var() || v) return std::nullopt;
      v = {{t.name, c}};
    }
    return v;
  };
  const auto head_stratum = plan.stratum_of_predicate(r.head.predicate);
  std::optional<size_t> rec, dom;
  for (size_t j = 0; j < 2; ++j) {
    const auto s = plan.stratum_of_predicate(atoms[j]->predicate);
    if (s && head_stratum && *s == *head_stratum)
      rec = j;
    else
      dom = j;
  }
  if (!rec || !dom) return fail("no recursive goal paired with a domain goal");
  const auto xv = single_var(*atoms[*rec]);
  const auto yv = single_var(*atoms[*dom]);
  if (!xv || !yv || xv->first == yv->first)
    return fail("goals do not each bind one distinct variable");

  const auto schema = choice_schema(r);
  if (schema.size() != 2) return fail("chosen schema is not the pair of goal variables");
  CartesianPattern pat;
  pat.rec_atom = *rec;
  pat.dom_atom = *dom;
  pat.x_col = xv->second;
  pat.y_col = yv->second;
  pat.x_pos = static_cast<size_t>(std::find(schema.begin(), schema.end(), xv->first) - schema.begin());
  pat.y_pos = static_cast<size_t>(std::find(schema.begin(), schema.end(), yv->first) - schema.begin());
  if (pat.x_pos >= 2 || pat.y_pos >= 2) return fail("chosen schema is not the pair of goal variables");

  bool x_to_y = false, y_to_x = false;
  for (const auto& g : r.choices) {
    if (g.left == std::vector<std::string>{xv->first} && g.right == std::vector<std::string>{yv->first})
      x_to_y = true;
    else if (g.left == std::vector<std::string>{yv->first} &&
             g.right == std::vector<std::string>{xv->first})
      y_to_x = true;
    else
      return fail("choice goals are not X -> Y and Y -> X");
  }
  if (!x_to_y || !y_to_x) return fail("choice goals are not X -> Y and Y -> X");
  if (const ChoiceGoal* g = r.greedy_goal(); g && g->right.front() != yv->first)
    return fail("cost variable is not the domain variable");
  return pat;
}

}  // namespace gdlog
