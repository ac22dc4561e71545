// Oracle checks against hand-derived values. These run first: every
// other suite trusts the oracle.

#include <gtest/gtest.h>

#include <functional>

#include "gdlog/analysis.hpp"
#include "gdlog/corpus.hpp"
#include "gdlog/lang.hpp"
#include "gdlog/oracle.hpp"
#include "test_util.hpp"

namespace gdlog {
namespace {

using namespace test;

std::set<Tuple, TupleLess> st_arcs(const Model& m) {
  auto st = rows(m, "st");
  st.erase({S("root"), S("a"), I(0)});
  return st;
}

TEST(Enumerate, SpanningTreeToyGraphHasThreeModels) {
  const auto models = enumerate_choice_models(corpus_program("spantree"), toy_graph());
  ASSERT_EQ(models.size(), 3u);
  std::set<std::set<Tuple, TupleLess>> got;
  for (const auto& m : models) {
    EXPECT_TRUE(rows(m, "st").count({S("root"), S("a"), I(0)}));
    EXPECT_EQ(rows(m, "g").size(), 6u);
    got.insert(st_arcs(m));
  }
  const std::set<std::set<Tuple, TupleLess>> want = {
      rows({{S("a"), S("b"), I(1)}, {S("b"), S("c"), I(2)}}),
      rows({{S("a"), S("b"), I(1)}, {S("a"), S("c"), I(3)}}),
      rows({{S("a"), S("c"), I(3)}, {S("c"), S("b"), I(2)}}),
  };
  EXPECT_EQ(got, want);
}

TEST(Enumerate, AdvisorHasTwoModels) {
  const auto models = enumerate_choice_models(corpus_program("advisor"), {});
  ASSERT_EQ(models.size(), 2u);
  std::set<std::set<Tuple, TupleLess>> got;
  for (const auto& m : models) got.insert(rows(m, "actual_adv"));
  const std::set<std::set<Tuple, TupleLess>> want = {rows({{S("Jim Black"), S("ohm")}}),
                                                     rows({{S("Jim Black"), S("bell")}})};
  EXPECT_EQ(got, want);
}

TEST(Enumerate, ProgramWithoutChoiceHasOneModel) {
  const Program p = parse_program("tc(X, Y) :- e(X, Y).\ntc(X, Z) :- tc(X, Y), e(Y, Z).\n");
  FactSet edb;
  edb["e"] = {{S("a"), S("b")}, {S("b"), S("c")}};
  const auto models = enumerate_choice_models(p, edb);
  ASSERT_EQ(models.size(), 1u);
  EXPECT_EQ(rows(models[0], "tc"),
            rows({{S("a"), S("b")}, {S("a"), S("c")}, {S("b"), S("c")}}));
}

TEST(Enumerate, MaxModelsStopsEarly) {
  EnumerateOptions o;
  o.max_models = 1;
  EXPECT_EQ(enumerate_choice_models(corpus_program("spantree"), toy_graph(), o).size(), 1u);
}

TEST(Enumerate, CandidateCapIsEnforced) {
  EnumerateOptions o;
  o.candidate_cap = 2;
  EXPECT_THROW(enumerate_choice_models(corpus_program("spantree"), toy_graph(), o), OracleError);
}

TEST(Ground, AdvisorHasBothChosenCandidates) {
  const GroundProgram g = ground(foe_transform(corpus_program("advisor")), {});
  EXPECT_TRUE(g.find({"chosen_r1", {S("Jim Black"), S("ohm")}}));
  EXPECT_TRUE(g.find({"chosen_r1", {S("Jim Black"), S("bell")}}));
  EXPECT_EQ(count_choice_candidates(corpus_program("advisor"), {}), 2u);
}

TEST(Ground, EmptyEdbLeavesOnlyProgramFacts) {
  const GroundProgram g = ground(foe_transform(corpus_program("sequence")), {});
  ASSERT_EQ(g.rules.size(), 1u);
  EXPECT_TRUE(g.rules[0].pos.empty());
  EXPECT_EQ(to_string(g.atoms[g.rules[0].head]), "succ(root,root)");
}

TEST(Ground, CapIsEnforced) {
  EXPECT_THROW(ground(foe_transform(corpus_program("spantree")), toy_graph(), 5), OracleError);
}

// Counts relevant instances by substituting every active-domain constant for
// every variable, anonymous ones included.
size_t brute_force_instances(const FoeProgram& foe, const FactSet& edb) {
  std::set<Value> domain;
  Model base;
  for (const auto& a : foe.facts) {
    Tuple t;
    for (const auto& term : a.args) {
      t.push_back(term.value);
      domain.insert(term.value);
    }
    base[a.predicate].insert(t);
  }
  for (const auto& [pred, ts] : edb)
    for (const auto& t : ts) {
      base[pred].insert(t);
      domain.insert(t.begin(), t.end());
    }
  const size_t fact_count = model_size(base);
  const std::vector<Value> dom(domain.begin(), domain.end());

  auto for_each_instance = [&](const FoeRule& r, const Model& over,
                               const std::function<void(const std::map<std::string, Value>&)>& cb) {
    // Rename anonymous variables apart.
    std::vector<std::string> vars;
    std::vector<std::vector<std::string>> names;  // per literal per arg
    size_t anon = 0;
    auto name_of = [&](const Term& t) -> std::string {
      if (!t.is_var()) return "";
      std::string n = t.is_anonymous() ? "_" + std::to_string(anon++) : t.name;
      if (std::find(vars.begin(), vars.end(), n) == vars.end()) vars.push_back(n);
      return n;
    };
    std::vector<const Atom*> atoms;
    for (const auto& lit : r.body)
      if (const auto* a = std::get_if<Atom>(&lit)) {
        atoms.push_back(a);
        names.emplace_back();
        for (const auto& t : a->args) names.back().push_back(name_of(t));
      }
    for (const auto& t : r.head.args) name_of(t);
    std::map<std::string, Value> sub;
    std::function<void(size_t)> go = [&](size_t k) {
      if (k == vars.size()) {
        auto val = [&](const Term& t, const std::string& n) { return t.is_var() ? sub.at(n) : t.value; };
        for (size_t j = 0; j < atoms.size(); ++j) {
          Tuple t;
          for (size_t c = 0; c < atoms[j]->args.size(); ++c) t.push_back(val(atoms[j]->args[c], names[j][c]));
          auto it = over.find(atoms[j]->predicate);
          if (it == over.end() || !it->second.count(t)) return;
        }
        for (const auto& lit : r.body)
          if (const auto* b = std::get_if<BuiltinGoal>(&lit)) {
            const Value l = val(b->lhs, b->lhs.name), rr = val(b->rhs, b->rhs.name);
            bool ok = true;
            switch (b->op) {
              case BuiltinOp::Neq: ok = l != rr; break;
              case BuiltinOp::Lt: ok = l < rr; break;
              case BuiltinOp::Le: ok = l <= rr; break;
              case BuiltinOp::Gt: ok = l > rr; break;
              case BuiltinOp::Ge: ok = l >= rr; break;
              case BuiltinOp::Plus: ok = false; break;  // not used by the tested programs
            }
            if (!ok) return;
          }
        if (r.role == FoeRule::Role::Diffchoice) {
          bool differs = false;
          for (const auto& [y, y1] : r.differ) differs |= sub.at(y) != sub.at(y1);
          if (!differs) return;
          Tuple self;
          for (const auto& t : r.head.args) self.push_back(val(t, t.name));
          auto it = over.find(chosen_predicate(r.source_rule));
          if (it == over.end() || !it->second.count(self)) return;
        }
        cb(sub);
        return;
      }
      for (const auto& v : dom) {
        sub[vars[k]] = v;
        go(k + 1);
      }
      sub.erase(vars[k]);
    };
    go(0);
  };

  // Over-approximation: least model of the rules without diffchoice, negation ignored.
  Model over = base;
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& r : foe.rules) {
      if (r.role == FoeRule::Role::Diffchoice) continue;
      std::vector<Tuple> fresh;
      for_each_instance(r, over, [&](const std::map<std::string, Value>& sub) {
        Tuple t;
        for (const auto& term : r.head.args) t.push_back(term.is_var() ? sub.at(term.name) : term.value);
        fresh.push_back(t);
      });
      for (auto& t : fresh) changed |= over[r.head.predicate].insert(t).second;
    }
  }
  size_t count = fact_count;
  for (const auto& r : foe.rules) for_each_instance(r, over, [&](const auto&) { ++count; });
  return count;
}

TEST(Ground, InstanceCountMatchesBruteForce) {
  const FactSet edb = graph({{"a", "b", 1}, {"b", "c", 2}, {"c", "d", 1}, {"d", "e", 4},
                             {"a", "e", 2}, {"b", "d", 3}},
                            true);
  const FoeProgram foe = foe_transform(corpus_program("spantree"));
  EXPECT_EQ(ground(foe, edb).rules.size(), brute_force_instances(foe, edb));
}

Model advisor_model(bool ohm, bool bell, bool diff_bell, bool diff_ohm) {
  Model m;
  m["student"] = rows({{S("Jim Black"), S("ee"), S("senior")}});
  m["professor"] = rows({{S("ohm"), S("ee")}, {S("bell"), S("ee")}});
  auto add = [&](const char* p) {
    m["chosen_r1"].insert({S("Jim Black"), S(p)});
    m["actual_adv"].insert({S("Jim Black"), S(p)});
  };
  if (ohm) add("ohm");
  if (bell) add("bell");
  if (diff_bell) m["diffchoice_r1"].insert({S("Jim Black"), S("bell")});
  if (diff_ohm) m["diffchoice_r1"].insert({S("Jim Black"), S("ohm")});
  return m;
}

TEST(StableCheck, AdvisorOhmIsStable) {
  const GroundProgram g = ground(foe_transform(corpus_program("advisor")), {});
  const Model m = advisor_model(true, false, true, false);
  const auto r = check_stable_model(g, m);
  EXPECT_TRUE(r.is_model);
  EXPECT_TRUE(r.is_stable);
  EXPECT_TRUE(check_stable_model_by_support(g, m));
}

TEST(StableCheck, BothAdvisorsIsNotAModel) {
  const GroundProgram g = ground(foe_transform(corpus_program("advisor")), {});
  // Without diffchoice atoms the diffchoice rules are violated.
  const Model bare = advisor_model(true, true, false, false);
  EXPECT_FALSE(check_stable_model(g, bare).is_model);
  EXPECT_FALSE(check_stable_model_by_support(g, bare));
  // With them every rule holds, but the chosen atoms lose their support.
  const Model full = advisor_model(true, true, true, true);
  const auto r = check_stable_model(g, full);
  EXPECT_TRUE(r.is_model);
  EXPECT_FALSE(r.is_stable);
  EXPECT_FALSE(check_stable_model_by_support(g, full));
}

TEST(StableCheck, NoChoiceMadeIsNotStable) {
  const GroundProgram g = ground(foe_transform(corpus_program("advisor")), {});
  const Model m = advisor_model(false, false, false, false);
  const auto r = check_stable_model(g, m);
  EXPECT_FALSE(r.is_stable);
  EXPECT_FALSE(check_stable_model_by_support(g, m));
}

TEST(StableCheck, UnsupportedAtomIsNotStable) {
  const GroundProgram g = ground(foe_transform(corpus_program("advisor")), {});
  Model m = advisor_model(true, false, true, true);  // diffchoice(ohm) has no support
  const auto r = check_stable_model(g, m);
  EXPECT_TRUE(r.is_model);
  EXPECT_FALSE(r.is_stable);
  ASSERT_TRUE(r.witness);
  EXPECT_FALSE(rows(*r.witness, "diffchoice_r1").count({S("Jim Black"), S("ohm")}));
  EXPECT_FALSE(check_stable_model_by_support(g, m));
}

TEST(StableCheck, LeastModelOfPositiveProgramIsStable) {
  const Program p = parse_program("tc(X, Y) :- e(X, Y).\ntc(X, Z) :- tc(X, Y), e(Y, Z).\n");
  FactSet edb;
  edb["e"] = {{S("a"), S("b")}, {S("b"), S("a")}};
  const GroundProgram g = ground(foe_transform(p), edb);
  Model m;
  m["e"] = rows({{S("a"), S("b")}, {S("b"), S("a")}});
  m["tc"] = rows({{S("a"), S("a")}, {S("a"), S("b")}, {S("b"), S("a")}, {S("b"), S("b")}});
  EXPECT_TRUE(check_stable_model(g, m).is_stable);
  m["tc"].erase({S("a"), S("a")});
  EXPECT_FALSE(check_stable_model(g, m).is_stable);
}

TEST(StableCheck, CompletionAddsDiffchoiceAtoms) {
  const GroundProgram g = ground(foe_transform(corpus_program("advisor")), {});
  const Model full = complete_with_diffchoice(g, advisor_model(true, false, false, false));
  EXPECT_EQ(rows(full, "diffchoice_r1"), rows({{S("Jim Black"), S("bell")}}));
  EXPECT_EQ(strip_diffchoice(full).count("diffchoice_r1"), 0u);
}

TEST(ChoiceModelCheck, InfersChosenAtoms) {
  Model m;
  m["st"] = rows({{S("root"), S("a"), I(0)}, {S("a"), S("b"), I(1)}, {S("b"), S("c"), I(2)}});
  EXPECT_TRUE(check_choice_model(corpus_program("spantree"), toy_graph(), m).is_stable);
  m["st"] = rows({{S("root"), S("a"), I(0)}, {S("a"), S("b"), I(1)}});
  EXPECT_FALSE(check_choice_model(corpus_program("spantree"), toy_graph(), m).is_stable);
  m["st"] = rows({{S("root"), S("a"), I(0)}, {S("a"), S("b"), I(1)}, {S("b"), S("c"), I(2)},
                  {S("a"), S("c"), I(3)}});
  EXPECT_FALSE(check_choice_model(corpus_program("spantree"), toy_graph(), m).is_stable);
}

// Reference graph algorithms.

TEST(Reference, ShortestPaths) {
  const auto arcs = arcs_of(graph({{"a", "b", 1}, {"b", "c", 2}, {"a", "c", 5}}));
  const auto d = shortest_paths(arcs, S("a"));
  const std::map<Value, int64_t> want = {{S("a"), 0}, {S("b"), 1}, {S("c"), 3}};
  EXPECT_EQ(d, want);
}

TEST(Reference, UnreachableNodesAreAbsent) {
  const auto d = shortest_paths(arcs_of(graph({{"b", "a", 1}})), S("a"));
  EXPECT_EQ(d.size(), 1u);
  EXPECT_EQ(d.at(S("a")), 0);
}

TEST(Reference, MstOfToyGraph) {
  const auto arcs = arcs_of(toy_graph());
  EXPECT_EQ(mst_weight(arcs), 3);
  EXPECT_EQ(prim_weight(arcs, S("a")), 3);
}

TEST(Reference, SingleNode) {
  EXPECT_EQ(shortest_paths({}, S("a")).size(), 1u);
  EXPECT_EQ(mst_weight({}), 0);
  EXPECT_EQ(prim_weight({}, S("a")), 0);
}

TEST(Reference, KruskalAndPrimAgreeOnSquare) {
  const auto arcs = arcs_of(graph({{"a", "b", 4}, {"b", "c", 1}, {"c", "d", 2}, {"d", "a", 3}, {"a", "c", 5}}, true));
  EXPECT_EQ(mst_weight(arcs), 6);
  EXPECT_EQ(prim_weight(arcs, S("a")), 6);
}

TEST(Reference, Reachable) {
  const auto r = reachable(arcs_of(graph({{"a", "b", 1}, {"b", "c", 1}, {"d", "a", 1}})), S("a"));
  EXPECT_EQ(r, (std::set<Value>{S("a"), S("b"), S("c")}));
}

TEST(Reference, Matchings) {
  const auto arcs = arcs_of(graph({{"x1", "y1", 1}, {"x1", "y2", 1}, {"x2", "y1", 1}}));
  EXPECT_TRUE(is_matching(arcs, {{S("x1"), S("y2")}, {S("x2"), S("y1")}}));
  EXPECT_FALSE(is_matching(arcs, {{S("x1"), S("y1")}, {S("x2"), S("y1")}}));
  EXPECT_FALSE(is_matching(arcs, {{S("x2"), S("y2")}}));
  EXPECT_TRUE(is_maximal_matching(arcs, {{S("x1"), S("y1")}}));
  EXPECT_FALSE(is_maximal_matching(arcs, {{S("x1"), S("y2")}}));
}

TEST(Reference, Chains) {
  const std::set<Value> dom = {I(1), I(2), I(3)};
  EXPECT_TRUE(is_chain({{S("root"), I(3)}, {I(3), I(2)}, {I(2), I(1)}}, S("root"), dom, true));
  EXPECT_FALSE(is_chain({{S("root"), I(3)}, {I(3), I(1)}, {I(1), I(2)}}, S("root"), dom, true));
  EXPECT_TRUE(is_chain({{S("root"), I(3)}, {I(3), I(1)}, {I(1), I(2)}}, S("root"), dom, false));
  EXPECT_FALSE(is_chain({{S("root"), I(3)}, {I(3), I(2)}}, S("root"), dom, false));
  EXPECT_TRUE(is_chain({{S("root"), S("root")}, {S("root"), I(1)}, {I(1), I(2)}, {I(2), I(3)}},
                       S("root"), dom, false));
}

TEST(Reference, HamiltonianPaths) {
  const std::set<Value> nodes = {S("a"), S("b"), S("c")};
  EXPECT_TRUE(is_hamiltonian_path({{S("b"), S("a")}, {S("a"), S("c")}}, nodes));
  EXPECT_FALSE(is_hamiltonian_path({{S("b"), S("a")}, {S("a"), S("b")}}, nodes));
  EXPECT_FALSE(is_hamiltonian_path({{S("a"), S("b")}}, nodes));
  EXPECT_FALSE(is_hamiltonian_path({{S("a"), S("b")}, {S("a"), S("c")}}, nodes));
}

}  // namespace
}  // namespace gdlog
