#include "gdlog/oracle.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>

namespace gdlog {

std::string to_string(const GroundAtom& a) { return a.pred + "(" + format_tuple(a.args) + ")"; }

std::optional<uint32_t> GroundProgram::find(const GroundAtom& a) const {
  auto it = ids.find(a);
  if (it == ids.end()) return std::nullopt;
  return it->second;
}

uint32_t GroundProgram::intern(const GroundAtom& a) {
  auto [it, fresh] = ids.emplace(a, static_cast<uint32_t>(atoms.size()));
  if (fresh) atoms.push_back(a);
  return it->second;
}

namespace {

bool starts_with(const std::string& s, const char* prefix) { return s.rfind(prefix, 0) == 0; }

// A naive matcher over a Model: substitutions are maps from variable names.
using Subst = std::map<std::string, Value>;

std::optional<Value> term_value(const Term& t, const Subst& s) {
  if (!t.is_var()) return t.value;
  auto it = s.find(t.name);
  if (it == s.end()) return std::nullopt;
  return it->second;
}

// `trail` holds the rows matched by the atoms of body[0..k).
using Trail = std::vector<const Tuple*>;

void match(const std::vector<Literal>& body, size_t k, Subst& s, const Model& m, Trail& trail,
           const std::function<void(const Subst&, const Trail&)>& cb) {
  if (k == body.size()) {
    cb(s, trail);
    return;
  }
  if (const auto* a = std::get_if<Atom>(&body[k])) {
    auto it = m.find(a->predicate);
    if (it == m.end()) return;
    for (const auto& row : it->second) {
      if (row.size() != a->args.size()) continue;
      std::vector<std::string> bound_here;
      bool ok = true;
      for (size_t c = 0; c < row.size() && ok; ++c) {
        const Term& t = a->args[c];
        if (t.is_anonymous()) continue;
        if (!t.is_var()) {
          ok = t.value == row[c];
          continue;
        }
        auto b = s.find(t.name);
        if (b != s.end()) {
          ok = b->second == row[c];
        } else {
          s.emplace(t.name, row[c]);
          bound_here.push_back(t.name);
        }
      }
      if (ok) {
        trail.push_back(&row);
        match(body, k + 1, s, m, trail, cb);
        trail.pop_back();
      }
      for (const auto& v : bound_here) s.erase(v);
    }
    return;
  }
  const auto& b = std::get<BuiltinGoal>(body[k]);
  const auto l = term_value(b.lhs, s);
  const auto r = term_value(b.rhs, s);
  if (!l || !r) throw OracleError("builtin " + to_string(b) + " evaluated with unbound operands");
  bool pass = false;
  switch (b.op) {
    case BuiltinOp::Neq: pass = *l != *r; break;
    case BuiltinOp::Lt: pass = *l < *r; break;
    case BuiltinOp::Le: pass = *l <= *r; break;
    case BuiltinOp::Gt: pass = *l > *r; break;
    case BuiltinOp::Ge: pass = *l >= *r; break;
    case BuiltinOp::Plus: {
      if (!l->is_int() || !r->is_int()) throw OracleError("non-integer operand in " + to_string(b));
      int64_t sum = 0;
      if (__builtin_add_overflow(l->as_int(), r->as_int(), &sum))
        throw OracleError("integer overflow in " + to_string(b));
      const Value v = Value::integer(sum);
      if (auto res = term_value(b.result, s)) {
        pass = *res == v;
      } else {
        s.emplace(b.result.name, v);
        match(body, k + 1, s, m, trail, cb);
        s.erase(b.result.name);
        return;
      }
      break;
    }
  }
  if (pass) match(body, k + 1, s, m, trail, cb);
}

void match(const std::vector<Literal>& body, const Model& m,
           const std::function<void(const Subst&, const Trail&)>& cb) {
  Subst s;
  Trail trail;
  match(body, 0, s, m, trail, cb);
}

Tuple instantiate(const Atom& a, const Subst& s) {
  Tuple t;
  t.reserve(a.args.size());
  for (const auto& term : a.args) {
    auto v = term_value(term, s);
    if (!v) throw OracleError("unbound variable in " + to_string(a));
    t.push_back(*v);
  }
  return t;
}

Model initial_model(const std::vector<Atom>& facts, const FactSet& edb) {
  Model m;
  for (const auto& a : facts) m[a.predicate].insert(instantiate(a, {}));
  for (const auto& [pred, rows] : edb)
    for (const auto& t : rows) m[pred].insert(t);
  return m;
}

struct PositiveRule {
  Atom head;
  const std::vector<Literal>* body;
};

// Least model of positive rules by naive iteration. Throws past `cap` atoms.
void naive_closure(const std::vector<PositiveRule>& rules, Model& m, size_t cap = SIZE_MAX) {
  for (bool changed = true; changed;) {
    if (model_size(m) > cap)
      throw OracleError("relevant Herbrand base exceeds " + std::to_string(cap) + " atoms");
    changed = false;
    std::vector<std::pair<const std::string*, Tuple>> fresh;
    for (const auto& r : rules) {
      match(*r.body, m, [&](const Subst& sub, const Trail&) {
        Tuple t = instantiate(r.head, sub);
        auto it = m.find(r.head.predicate);
        if (it == m.end() || !it->second.count(t)) fresh.emplace_back(&r.head.predicate, std::move(t));
      });
    }
    for (auto& [pred, t] : fresh) changed |= m[*pred].insert(std::move(t)).second;
  }
}

std::vector<bool> membership(const GroundProgram& g, const Model& m, size_t* outside) {
  std::vector<bool> in(g.atoms.size(), false);
  *outside = 0;
  for (const auto& [pred, rows] : m)
    for (const auto& t : rows) {
      if (auto id = g.find({pred, t}))
        in[*id] = true;
      else
        ++*outside;
    }
  return in;
}

Model model_of(const GroundProgram& g, const std::vector<bool>& in) {
  Model m;
  for (size_t i = 0; i < in.size(); ++i)
    if (in[i]) m[g.atoms[i].pred].insert(g.atoms[i].args);
  return m;
}

std::optional<std::string> unsatisfied_rule(const GroundProgram& g, const std::vector<bool>& in) {
  for (const auto& r : g.rules) {
    bool fires = std::all_of(r.pos.begin(), r.pos.end(), [&](uint32_t a) { return in[a]; }) &&
                 std::none_of(r.neg.begin(), r.neg.end(), [&](uint32_t a) { return in[a]; });
    if (fires && !in[r.head]) return "rule with head " + to_string(g.atoms[r.head]) + " is violated";
  }
  return std::nullopt;
}

bool in_reduct(const GroundRule& r, const std::vector<bool>& in) {
  return std::none_of(r.neg.begin(), r.neg.end(), [&](uint32_t a) { return in[a]; });
}

}  // namespace

namespace {

// Instances of the foe rules whose positive body holds in `base`. Diffchoice
// rules are restricted to heads in `base`'s chosen relations.
GroundProgram ground_over(const FoeProgram& foe, const FactSet& edb, const Model& base, size_t cap) {
  GroundProgram g;
  size_t instances = 0;
  auto bump = [&] {
    if (++instances > cap)
      throw OracleError("grounding exceeds " + std::to_string(cap) + " rule instances");
  };
  for (const auto& [pred, rows] : initial_model(foe.facts, edb))
    for (const auto& t : rows) {
      bump();
      g.rules.push_back({g.intern({pred, t}), {}, {}});
    }

  for (const auto& r : foe.rules) {
    std::vector<Literal> body = r.body;
    if (r.role == FoeRule::Role::Diffchoice) {
      // Restrict the unprimed variables to candidate chosen tuples.
      Atom self = r.head;
      self.predicate = chosen_predicate(r.source_rule);
      body.emplace_back(self);
    }
    match(body, base, [&](const Subst& sub, const Trail& rows) {
      if (r.role == FoeRule::Role::Diffchoice) {
        bool differs = false;
        for (const auto& [y, y1] : r.differ) differs |= sub.at(y) != sub.at(y1);
        if (!differs) return;
      }
      bump();
      GroundRule gr;
      gr.head = g.intern({r.head.predicate, instantiate(r.head, sub)});
      size_t j = 0;
      for (const auto& lit : r.body)
        if (const auto* a = std::get_if<Atom>(&lit)) gr.pos.push_back(g.intern({a->predicate, *rows[j++]}));
      for (const auto& a : r.negated) gr.neg.push_back(g.intern({a.predicate, instantiate(a, sub)}));
      g.rules.push_back(std::move(gr));
    });
  }
  return g;
}

}  // namespace

GroundProgram ground(const FoeProgram& foe, const FactSet& edb, size_t cap) {
  Model base = initial_model(foe.facts, edb);
  std::vector<PositiveRule> positive;
  for (const auto& r : foe.rules)
    if (r.role != FoeRule::Role::Diffchoice) positive.push_back({r.head, &r.body});
  naive_closure(positive, base, cap);
  return ground_over(foe, edb, base, cap);
}

GroundProgram ground_for_model(const FoeProgram& foe, const FactSet& edb, const Model& m, size_t cap) {
  Model base = initial_model(foe.facts, edb);
  for (const auto& [pred, ts] : m)
    if (!starts_with(pred, "chosen_") && !starts_with(pred, "diffchoice_")) base[pred].insert(ts.begin(), ts.end());
  // Chosen candidates: bodies of the chosen rules that hold in m.
  Model extended = base;
  for (const auto& r : foe.rules) {
    if (r.role != FoeRule::Role::Chosen) continue;
    match(r.body, base, [&](const Subst& sub, const Trail&) {
      extended[r.head.predicate].insert(instantiate(r.head, sub));
    });
  }
  return ground_over(foe, edb, extended, cap);
}

StableCheckResult check_stable_model(const GroundProgram& g, const Model& m) {
  StableCheckResult res;
  size_t outside = 0;
  const auto in = membership(g, m, &outside);
  if (auto why = unsatisfied_rule(g, in)) {
    res.reason = *why;
    return res;
  }
  res.is_model = true;

  std::vector<const GroundRule*> reduct;
  for (const auto& r : g.rules)
    if (in_reduct(r, in)) reduct.push_back(&r);
  std::vector<bool> least(g.atoms.size(), false);
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto* r : reduct) {
      if (least[r->head]) continue;
      if (std::all_of(r->pos.begin(), r->pos.end(), [&](uint32_t a) { return least[a]; })) {
        least[r->head] = true;
        changed = true;
      }
    }
  }
  if (least == in && outside == 0) {
    res.is_stable = true;
    return res;
  }
  res.witness = model_of(g, least);
  res.reason = outside ? "atoms outside the ground program are unsupported"
                       : "not the least model of its reduct";
  return res;
}

bool check_stable_model_by_support(const GroundProgram& g, const Model& m) {
  size_t outside = 0;
  const auto in = membership(g, m, &outside);
  if (outside || unsatisfied_rule(g, in)) return false;

  std::vector<uint32_t> missing(g.rules.size());
  std::vector<std::vector<uint32_t>> watchers(g.atoms.size());
  std::vector<bool> derived(g.atoms.size(), false);
  std::deque<uint32_t> queue;
  for (uint32_t i = 0; i < g.rules.size(); ++i) {
    const auto& r = g.rules[i];
    if (!in_reduct(r, in)) {
      missing[i] = std::numeric_limits<uint32_t>::max();
      continue;
    }
    missing[i] = static_cast<uint32_t>(r.pos.size());
    for (uint32_t a : r.pos) watchers[a].push_back(i);
    if (r.pos.empty() && !derived[r.head]) {
      derived[r.head] = true;
      queue.push_back(r.head);
    }
  }
  while (!queue.empty()) {
    const uint32_t a = queue.front();
    queue.pop_front();
    for (uint32_t ri : watchers[a]) {
      if (--missing[ri] != 0) continue;
      const uint32_t h = g.rules[ri].head;
      if (!derived[h]) {
        derived[h] = true;
        queue.push_back(h);
      }
    }
  }
  return derived == in;
}

Model complete_with_diffchoice(const GroundProgram& g, const Model& m) {
  size_t outside = 0;
  const auto in = membership(g, m, &outside);
  Model out = m;
  for (const auto& r : g.rules) {
    const auto& head = g.atoms[r.head];
    if (!starts_with(head.pred, "diffchoice_")) continue;
    if (std::all_of(r.pos.begin(), r.pos.end(), [&](uint32_t a) { return in[a]; }))
      out[head.pred].insert(head.args);
  }
  return out;
}

Model strip_diffchoice(const Model& m) {
  Model out;
  for (const auto& [pred, rows] : m)
    if (!starts_with(pred, "diffchoice_")) out.emplace(pred, rows);
  return out;
}

size_t count_choice_candidates(const Program& p, const FactSet& edb) {
  const auto g = ground(foe_transform(p), edb);
  return static_cast<size_t>(std::count_if(g.atoms.begin(), g.atoms.end(), [](const GroundAtom& a) {
    return starts_with(a.pred, "chosen_");
  }));
}

std::vector<Model> enumerate_choice_models(const Program& p, const FactSet& edb,
                                           EnumerateOptions opts) {
  const FoeProgram foe = foe_transform(p);
  const GroundProgram g = ground(foe, edb, opts.ground_cap);
  const size_t candidates = static_cast<size_t>(std::count_if(
      g.atoms.begin(), g.atoms.end(), [](const GroundAtom& a) { return starts_with(a.pred, "chosen_"); }));
  if (candidates > opts.candidate_cap)
    throw OracleError(std::to_string(candidates) + " chosen candidates exceed the cap of " +
                      std::to_string(opts.candidate_cap));

  std::vector<PositiveRule> derive;
  struct Generator {
    Atom head;
    const std::vector<Literal>* body;
    const RuleFDs* fds;
  };
  std::vector<Generator> generators;
  for (const auto& r : foe.rules) {
    if (r.role == FoeRule::Role::Plain || r.role == FoeRule::Role::Rewritten)
      derive.push_back({r.head, &r.body});
    if (r.role == FoeRule::Role::Chosen) {
      const RuleFDs* f = &*std::find_if(foe.fds.begin(), foe.fds.end(),
                                        [&](const RuleFDs& x) { return x.rule_id == r.source_rule; });
      generators.push_back({r.head, &r.body, f});
    }
  }
  const Model start = initial_model(foe.facts, edb);

  auto keeps_fds = [](const RuleFDs& fds, const std::set<Tuple, TupleLess>* chosen, const Tuple& t) {
    if (!chosen) return true;
    for (const auto& c : *chosen)
      for (const auto& fd : fds.fds) {
        bool same = true;
        for (size_t col : fd.lhs) same = same && c[col] == t[col];
        if (!same) continue;
        for (size_t col : fd.rhs)
          if (c[col] != t[col]) return false;
      }
    return true;
  };

  std::set<std::set<GroundAtom>> visited;
  std::set<Model> found;
  std::function<void(const std::set<GroundAtom>&)> visit = [&](const std::set<GroundAtom>& chosen) {
    if (opts.max_models && found.size() >= opts.max_models) return;
    Model m = start;
    for (const auto& a : chosen) m[a.pred].insert(a.args);
    naive_closure(derive, m);

    std::vector<GroundAtom> theta;
    for (const auto& gen : generators) {
      auto it = m.find(gen.head.predicate);
      const auto* existing = it == m.end() ? nullptr : &it->second;
      std::set<Tuple, TupleLess> seen;
      match(*gen.body, m, [&](const Subst& sub, const Trail&) {
        Tuple t = instantiate(gen.head, sub);
        if (existing && existing->count(t)) return;
        if (!seen.insert(t).second) return;
        if (keeps_fds(*gen.fds, existing, t)) theta.push_back({gen.head.predicate, t});
      });
    }
    if (theta.empty()) {
      Model full = complete_with_diffchoice(g, m);
      if (check_stable_model(g, full).is_stable) found.insert(std::move(full));
      return;
    }
    for (const auto& delta : theta) {
      auto next = chosen;
      next.insert(delta);
      if (visited.insert(next).second) visit(next);
    }
  };
  visit({});
  return {found.begin(), found.end()};
}

StableCheckResult check_choice_model(const Program& p, const FactSet& edb, const Model& m,
                                     EnumerateOptions opts) {
  const FoeProgram foe = foe_transform(p);
  const GroundProgram g = ground(foe, edb, opts.ground_cap);

  Model base = initial_model(foe.facts, edb);
  for (const auto& [pred, rows] : m)
    if (!starts_with(pred, "diffchoice_")) base[pred].insert(rows.begin(), rows.end());
  const bool has_chosen = std::any_of(base.begin(), base.end(), [](const auto& kv) {
    return starts_with(kv.first, "chosen_") && !kv.second.empty();
  });
  if (has_chosen) return check_stable_model(g, complete_with_diffchoice(g, base));

  // Candidates: chosen_r(W) whose body holds in m and whose rewritten head is in m.
  struct Cand {
    GroundAtom atom;
    const RuleFDs* fds;
  };
  std::vector<Cand> cands;
  for (const auto& r : foe.rules) {
    if (r.role != FoeRule::Role::Chosen) continue;
    const RuleFDs* f = &*std::find_if(foe.fds.begin(), foe.fds.end(),
                                      [&](const RuleFDs& x) { return x.rule_id == r.source_rule; });
    const auto rw = std::find_if(foe.rules.begin(), foe.rules.end(), [&](const FoeRule& x) {
      return x.role == FoeRule::Role::Rewritten && x.source_rule == r.source_rule;
    });
    std::set<Tuple, TupleLess> seen;
    match(r.body, base, [&](const Subst& sub, const Trail&) {
      Tuple t = instantiate(r.head, sub);
      if (!seen.insert(t).second) return;
      if (rw != foe.rules.end()) {
        auto it = base.find(rw->head.predicate);
        if (it == base.end() || !it->second.count(instantiate(rw->head, sub))) return;
      }
      cands.push_back({{r.head.predicate, std::move(t)}, f});
    });
  }
  if (cands.size() > opts.candidate_cap)
    throw OracleError(std::to_string(cands.size()) + " chosen candidates exceed the cap of " +
                      std::to_string(opts.candidate_cap));

  auto agree = [](const Cand& a, const Cand& b) {
    if (a.atom.pred != b.atom.pred) return true;
    for (const auto& fd : a.fds->fds) {
      bool same = true;
      for (size_t col : fd.lhs) same = same && a.atom.args[col] == b.atom.args[col];
      if (!same) continue;
      for (size_t col : fd.rhs)
        if (a.atom.args[col] != b.atom.args[col]) return false;
    }
    return true;
  };

  StableCheckResult last;
  last.reason = "no FD-consistent chosen set supported by the model is stable";
  std::vector<size_t> picked;
  std::function<bool(size_t)> search = [&](size_t k) -> bool {
    if (k == cands.size()) {
      // Maximal: every skipped candidate conflicts with a picked one.
      for (size_t i = 0; i < cands.size(); ++i) {
        if (std::find(picked.begin(), picked.end(), i) != picked.end()) continue;
        bool blocked = false;
        for (size_t j : picked) blocked = blocked || !agree(cands[i], cands[j]);
        if (!blocked) return false;
      }
      Model full = base;
      for (size_t j : picked) full[cands[j].atom.pred].insert(cands[j].atom.args);
      full = complete_with_diffchoice(g, full);
      StableCheckResult r = check_stable_model(g, full);
      if (r.is_stable) {
        r.witness = std::move(full);
        last = std::move(r);
        return true;
      }
      return false;
    }
    bool fits = true;
    for (size_t j : picked) fits = fits && agree(cands[k], cands[j]);
    if (fits) {
      picked.push_back(k);
      if (search(k + 1)) return true;
      picked.pop_back();
    }
    return search(k + 1);
  };
  if (search(0)) return last;
  last.is_model = false;
  last.is_stable = false;
  return last;
}

// ---------------------------------------------------------------------------

namespace {

template <class Rows>
void collect_arcs(const Rows& rows, std::vector<Arc>& out) {
  for (const auto& t : rows)
    if (t.size() == 3 && t[2].is_int()) out.push_back({t[0], t[1], t[2].as_int()});
}

}  // namespace

std::vector<Arc> arcs_of(const FactSet& facts, const std::string& pred) {
  std::vector<Arc> out;
  if (auto it = facts.find(pred); it != facts.end()) collect_arcs(it->second, out);
  return out;
}

std::vector<Arc> arcs_of(const Model& m, const std::string& pred) {
  std::vector<Arc> out;
  if (auto it = m.find(pred); it != m.end()) collect_arcs(it->second, out);
  return out;
}

std::map<Value, int64_t> shortest_paths(const std::vector<Arc>& arcs, const Value& source) {
  std::map<Value, std::vector<std::pair<Value, int64_t>>> adj;
  for (const auto& a : arcs) adj[a.from].emplace_back(a.to, a.cost);
  std::map<Value, int64_t> dist;
  using Item = std::pair<int64_t, Value>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  pq.emplace(0, source);
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (dist.count(u)) continue;
    dist[u] = d;
    for (const auto& [v, c] : adj[u])
      if (!dist.count(v)) pq.emplace(d + c, v);
  }
  return dist;
}

int64_t mst_weight(const std::vector<Arc>& arcs) {
  std::map<Value, size_t> index;
  for (const auto& a : arcs) {
    index.emplace(a.from, index.size());
    index.emplace(a.to, index.size());
  }
  std::vector<size_t> parent(index.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<size_t(size_t)> root = [&](size_t x) {
    return parent[x] == x ? x : parent[x] = root(parent[x]);
  };
  std::vector<const Arc*> sorted;
  for (const auto& a : arcs) sorted.push_back(&a);
  std::sort(sorted.begin(), sorted.end(), [](const Arc* a, const Arc* b) { return a->cost < b->cost; });
  int64_t total = 0;
  for (const Arc* a : sorted) {
    const size_t x = root(index[a->from]), y = root(index[a->to]);
    if (x == y) continue;
    parent[x] = y;
    total += a->cost;
  }
  return total;
}

int64_t prim_weight(const std::vector<Arc>& arcs, const Value& source) {
  std::map<Value, size_t> index;
  index.emplace(source, 0);
  for (const auto& a : arcs) {
    index.emplace(a.from, index.size());
    index.emplace(a.to, index.size());
  }
  const size_t n = index.size();
  constexpr int64_t inf = std::numeric_limits<int64_t>::max();
  std::vector<std::vector<int64_t>> w(n, std::vector<int64_t>(n, inf));
  for (const auto& a : arcs) {
    auto& x = w[index[a.from]][index[a.to]];
    auto& y = w[index[a.to]][index[a.from]];
    x = y = std::min({x, y, a.cost});
  }
  std::vector<int64_t> best(n, inf);
  std::vector<bool> in(n, false);
  best[0] = 0;
  int64_t total = 0;
  for (size_t step = 0; step < n; ++step) {
    size_t u = n;
    for (size_t v = 0; v < n; ++v)
      if (!in[v] && best[v] != inf && (u == n || best[v] < best[u])) u = v;
    if (u == n) break;
    in[u] = true;
    total += best[u];
    for (size_t v = 0; v < n; ++v)
      if (!in[v] && w[u][v] < best[v]) best[v] = w[u][v];
  }
  return total;
}

std::set<Value> reachable(const std::vector<Arc>& arcs, const Value& source) {
  std::map<Value, std::vector<Value>> adj;
  for (const auto& a : arcs) adj[a.from].push_back(a.to);
  std::set<Value> seen{source};
  std::deque<Value> queue{source};
  while (!queue.empty()) {
    const Value u = queue.front();
    queue.pop_front();
    for (const auto& v : adj[u])
      if (seen.insert(v).second) queue.push_back(v);
  }
  return seen;
}

bool is_matching(const std::vector<Arc>& arcs, const std::vector<std::pair<Value, Value>>& pairs) {
  std::set<std::pair<Value, Value>> arc_set;
  for (const auto& a : arcs) arc_set.emplace(a.from, a.to);
  std::set<Value> left, right;
  for (const auto& [x, y] : pairs) {
    if (!arc_set.count({x, y})) return false;
    if (!left.insert(x).second || !right.insert(y).second) return false;
  }
  return true;
}

bool is_maximal_matching(const std::vector<Arc>& arcs,
                         const std::vector<std::pair<Value, Value>>& pairs) {
  if (!is_matching(arcs, pairs)) return false;
  std::set<Value> left, right;
  for (const auto& [x, y] : pairs) {
    left.insert(x);
    right.insert(y);
  }
  return std::all_of(arcs.begin(), arcs.end(),
                     [&](const Arc& a) { return left.count(a.from) || right.count(a.to); });
}

bool is_chain(const std::vector<std::pair<Value, Value>>& succ, const Value& root,
              const std::set<Value>& domain, bool decreasing) {
  std::map<Value, Value> next;
  std::set<Value> targets;
  size_t arcs = 0;
  for (const auto& [x, y] : succ) {
    if (x == root && y == root) continue;
    ++arcs;
    if (!next.emplace(x, y).second || !targets.insert(y).second) return false;
  }
  if (arcs != domain.size()) return false;
  std::set<Value> visited;
  Value cur = root;
  for (size_t i = 0; i < arcs; ++i) {
    auto it = next.find(cur);
    if (it == next.end()) return false;
    const Value nxt = it->second;
    if (!domain.count(nxt) || !visited.insert(nxt).second) return false;
    if (decreasing && i > 0 && !(nxt < cur)) return false;
    cur = nxt;
  }
  return visited.size() == domain.size();
}

bool is_hamiltonian_path(const std::vector<std::pair<Value, Value>>& path,
                         const std::set<Value>& nodes) {
  if (path.empty()) return nodes.size() <= 1;
  if (path.size() + 1 != nodes.size()) return false;
  std::map<Value, Value> next;
  std::set<Value> has_pred;
  for (const auto& [x, y] : path) {
    if (!nodes.count(x) || !nodes.count(y)) return false;
    if (!next.emplace(x, y).second || !has_pred.insert(y).second) return false;
  }
  std::optional<Value> start;
  for (const auto& [x, y] : next)
    if (!has_pred.count(x)) {
      if (start) return false;
      start = x;
    }
  if (!start) return false;
  std::set<Value> visited{*start};
  Value cur = *start;
  while (next.count(cur)) {
    cur = next[cur];
    if (!visited.insert(cur).second) return false;
  }
  return visited == nodes;
}

}  // namespace gdlog
