// Acceptance checks. One line per criterion:
//
//   criterion N: PASS|FAIL  detail
//
// Usage: gdlog_acceptance [--criterion N]... (all when none given)

#include <CLI11.hpp>

#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "gdlog/analysis.hpp"
#include "gdlog/bench.hpp"
#include "gdlog/corpus.hpp"
#include "gdlog/engine.hpp"
#include "gdlog/gen.hpp"
#include "gdlog/oracle.hpp"
#include "instances.hpp"

using namespace gdlog;

namespace {

const std::vector<std::string> kCorpus = {"advisor", "sequence", "matching", "spantree",
                                          "reach",   "simplepath", "prim",   "dijkstra",
                                          "sort",    "tsp",        "optmatching"};

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int prec = 3) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(prec);
  s << v;
  return s.str();
}

std::set<Tuple, TupleLess> rows(const Model& m, const std::string& pred) {
  auto it = m.find(pred);
  return it == m.end() ? std::set<Tuple, TupleLess>{} : it->second;
}

std::vector<std::pair<Value, Value>> pairs(const Model& m, const std::string& pred) {
  std::vector<std::pair<Value, Value>> out;
  for (const auto& t : rows(m, pred)) out.emplace_back(t[0], t[1]);
  return out;
}

bool has_most(const Program& p) {
  for (const auto& r : p.rules)
    for (const auto& c : r.choices)
      if (c.kind == ChoiceKind::Most) return true;
  return false;
}

// Toy graph: a-b 1, b-c 2, a-c 3, both directions.
FactSet toy_graph() {
  FactSet f;
  auto edge = [&](const char* x, const char* y, int64_t c) {
    f["g"].push_back({Value::symbol(x), Value::symbol(y), Value::integer(c)});
    f["g"].push_back({Value::symbol(y), Value::symbol(x), Value::integer(c)});
  };
  edge("a", "b", 1);
  edge("b", "c", 2);
  edge("a", "c", 3);
  return f;
}

Outcome criterion_1() {
  const auto t0 = Clock::now();
  const auto models = enumerate_choice_models(corpus_program("spantree"), toy_graph());
  const double secs = since(t0);
  auto arc = [](const char* x, const char* y, int64_t c) {
    return Tuple{Value::symbol(x), Value::symbol(y), Value::integer(c)};
  };
  const std::set<std::set<Tuple, TupleLess>> want = {
      {arc("a", "b", 1), arc("b", "c", 2)},
      {arc("a", "b", 1), arc("a", "c", 3)},
      {arc("a", "c", 3), arc("c", "b", 2)},
  };
  std::set<std::set<Tuple, TupleLess>> got;
  bool edb_intact = true;
  for (const auto& m : models) {
    auto st = rows(m, "st");
    st.erase(arc("root", "a", 0));
    got.insert(st);
    edb_intact = edb_intact && rows(m, "g").size() == 6;
  }
  const bool ok = models.size() == 3 && got == want && edb_intact && secs < 1.0;
  return {ok, std::to_string(models.size()) + " models, set " + (got == want ? "equal" : "differs") +
                  ", " + fmt(secs) + " s"};
}

Outcome criterion_2() {
  const auto t0 = Clock::now();
  size_t instances = 0, checks = 0, failures = 0;
  std::string first_failure;
  std::mt19937_64 rng(2024);
  for (int round = 0; round < 50; ++round) {
    for (const auto& ex : kCorpus) {
      const Program p = corpus_program(ex);
      const FoeProgram foe = foe_transform(p);
      const FactSet f = test::small_instance(ex, rng, 12);
      const GroundProgram g = ground(foe, f);
      ++instances;
      std::vector<Model> models = {run_greedy_fixpoint(p, f).model.to_model()};
      for (auto pick : {PickPolicy::Lex, PickPolicy::Fifo, PickPolicy::Random}) {
        EngineOptions o;
        o.pick = pick;
        o.seed = rng();
        models.push_back(run_choice_fixpoint(p, f, o).model.to_model());
      }
      if (ex == "sort" || ex == "sequence") {
        EngineOptions o;
        o.factorize = true;
        models.push_back((ex == "sort" ? run_factorized_sort(p, f, o) : run_choice_fixpoint(p, f, o))
                             .model.to_model());
      }
      for (const auto& m : models) {
        ++checks;
        const auto r = check_stable_model(g, complete_with_diffchoice(g, m));
        if (!r.is_stable) {
          ++failures;
          if (first_failure.empty()) first_failure = ex + ": " + r.reason;
        }
      }
    }
  }
  const double secs = since(t0);
  const bool ok = instances >= 500 && failures == 0 && secs < 120;
  return {ok, std::to_string(instances) + " instances, " + std::to_string(checks) + " models, " +
                  std::to_string(failures) + " failures" +
                  (first_failure.empty() ? "" : " (" + first_failure + ")") + ", " + fmt(secs, 1) +
                  " s"};
}

// Moderate inputs with cycles, ties and several components.
FactSet fd_input(const std::string& ex, std::mt19937_64& rng) {
  const size_t n = static_cast<size_t>(test::pick(rng, 2, 24));
  GraphSpec s;
  s.n = n;
  s.seed = rng();
  s.cost_max = test::pick(rng, 1, 20);
  if (ex == "advisor") return test::random_small_input(ex, rng);
  if (ex == "sequence" || ex == "sort") return generate_domain(n, rng());
  if (ex == "matching" || ex == "optmatching") {
    s.family = GraphFamily::Bipartite;
    s.edges = static_cast<size_t>(test::pick(rng, 1, static_cast<int64_t>(n * n / 4 + 1)));
    return generate_graph(s);
  }
  if (ex == "tsp") s.family = GraphFamily::Complete;
  else s.edges = static_cast<size_t>(test::pick(rng, static_cast<int64_t>(n - 1), static_cast<int64_t>(3 * n)));
  s.directed = (ex == "reach" || ex == "dijkstra") && test::pick(rng, 0, 1);
  return generate_graph(s);
}

// Checks every choice goal of every rule directly on the chosen_r table.
std::string fd_violation(const Program& p, const Model& m, size_t& checked) {
  for (const auto& rule : p.rules) {
    if (!rule.is_choice_rule()) continue;
    // chosen_r columns: the choice variables in first body occurrence order.
    std::set<std::string> in_goals;
    for (const auto& goal : rule.choices) {
      in_goals.insert(goal.left.begin(), goal.left.end());
      in_goals.insert(goal.right.begin(), goal.right.end());
    }
    std::vector<std::string> w;
    for (const auto& v : rule.body_variables())
      if (in_goals.count(v)) w.push_back(v);
    auto col = [&](const std::string& v) {
      return static_cast<size_t>(std::find(w.begin(), w.end(), v) - w.begin());
    };
    const auto chosen = rows(m, chosen_predicate(rule.id));
    checked += chosen.size();
    for (const auto& goal : rule.choices) {
      std::map<Tuple, Tuple, TupleLess> image;
      for (const auto& t : chosen) {
        Tuple l, r;
        for (const auto& v : goal.left) l.push_back(t.at(col(v)));
        for (const auto& v : goal.right) r.push_back(t.at(col(v)));
        auto [it, fresh] = image.emplace(l, r);
        if (!fresh && it->second != r) return rule.id + " violates its FD on " + format_tuple(t, ",");
      }
    }
  }
  return {};
}

Outcome criterion_3() {
  const auto t0 = Clock::now();
  size_t runs = 0, violations = 0, tuples = 0;
  std::string first;
  std::mt19937_64 rng(7);
  while (runs < 10'000) {
    for (const auto& ex : kCorpus) {
      const Program p = corpus_program(ex);
      const FactSet f = fd_input(ex, rng);
      EngineOptions o;
      o.pick = static_cast<PickPolicy>(test::pick(rng, 0, 2));
      o.seed = rng();
      o.pq = static_cast<PqPolicy>(test::pick(rng, 0, 2));
      o.schedule = static_cast<Schedule>(test::pick(rng, 0, 1));
      o.factorize = test::pick(rng, 0, 1) == 1;
      RunResult r;
      switch (runs % 3) {
        case 0: r = run_greedy_fixpoint(p, f, o); break;
        case 1: r = run_choice_fixpoint(p, f, o); break;
        default:
          r = run_lico_reference(p, f, static_cast<LicoMode>(test::pick(rng, 0, 2)), o);
          break;
      }
      ++runs;
      const std::string v = fd_violation(p, r.model.to_model(), tuples);
      if (!v.empty()) {
        ++violations;
        if (first.empty()) first = ex + ": " + v;
      }
    }
  }
  return {violations == 0, std::to_string(runs) + " runs, " + std::to_string(tuples) + " chosen tuples, " + std::to_string(violations) +
                               " violations" + (first.empty() ? "" : " (" + first + ")") + ", " +
                               fmt(since(t0), 1) + " s"};
}

Outcome criterion_4() {
  const Program p = corpus_program("dijkstra");
  std::mt19937_64 rng(4);
  size_t mismatches = 0;
  for (int i = 0; i < 100; ++i) {
    GraphSpec s;
    s.n = static_cast<size_t>(test::pick(rng, 2, 200));
    s.edges = s.n * static_cast<size_t>(test::pick(rng, 1, 4));
    s.directed = true;
    s.cost_min = 0;
    s.cost_max = 1000;
    s.seed = rng();
    const FactSet f = generate_graph(s);
    const auto want = shortest_paths(arcs_of(f), node_name(0));
    std::map<Value, int64_t> got;
    for (const auto& t : rows(run_greedy_fixpoint(p, f).model.to_model(), "dj"))
      got[t[0]] = t[1].as_int();
    if (got != want) ++mismatches;
  }
  return {mismatches == 0, "100 digraphs, " + std::to_string(mismatches) + " mismatching distance maps"};
}

Outcome criterion_5() {
  const Program p = corpus_program("prim");
  std::mt19937_64 rng(5);
  size_t mismatches = 0;
  for (int i = 0; i < 100; ++i) {
    GraphSpec s;
    s.n = static_cast<size_t>(test::pick(rng, 2, 200));
    s.family = i % 4 == 0 ? GraphFamily::Complete : GraphFamily::SparseConnected;
    if (s.family == GraphFamily::Complete) s.n = std::min<size_t>(s.n, 60);
    s.edges = s.n * static_cast<size_t>(test::pick(rng, 1, 4));
    s.cost_max = i % 2 ? 1000 : 10;  // small ranges give ties
    s.seed = rng();
    const FactSet f = generate_graph(s);
    int64_t cost = 0;
    for (const auto& t : rows(run_greedy_fixpoint(p, f).model.to_model(), "st")) cost += t[2].as_int();
    if (cost != mst_weight(arcs_of(f))) ++mismatches;
  }
  return {mismatches == 0, "100 graphs, " + std::to_string(mismatches) + " cost mismatches"};
}

Outcome criterion_6() {
  const Program p = corpus_program("sort");
  std::mt19937_64 rng(6);
  size_t bad_chain = 0, disagree = 0;
  for (int i = 0; i < 30; ++i) {
    const size_t n = i == 0 ? 1000 : static_cast<size_t>(test::pick(rng, 0, 1000));
    const FactSet f = generate_domain(n, rng());
    std::set<Value> dom;
    if (auto it = f.find("d"); it != f.end())
      for (const auto& t : it->second) dom.insert(t[0]);
    const Model plain = run_greedy_fixpoint(p, f).model.to_model();
    EngineOptions o;
    o.factorize = true;
    const Model fact = run_factorized_sort(p, f, o).model.to_model();
    if (!is_chain(pairs(plain, "succ"), Value::symbol("root"), dom, true)) ++bad_chain;
    if (rows(plain, "succ") != rows(fact, "succ")) ++disagree;
  }
  return {bad_chain == 0 && disagree == 0, "30 domains up to n=1000, " + std::to_string(bad_chain) +
                                               " bad chains, " + std::to_string(disagree) +
                                               " factorized disagreements"};
}

struct Ladder {
  std::string label;
  BenchSpec spec;
};

std::vector<Ladder> ladders() {
  std::vector<Ladder> out;
  auto add = [&](std::string label, std::string ex, std::vector<size_t> sizes,
                 const std::function<void(EngineOptions&)>& set) {
    BenchSpec s;
    s.example = std::move(ex);
    s.sizes = std::move(sizes);
    s.reps = 5;
    set(s.opts);
    out.push_back({std::move(label), std::move(s)});
  };
  add("prim pq=off complete", "prim", {64, 128, 256, 512}, [](auto& o) { o.pq = PqPolicy::Off; });
  add("dijkstra pq=off complete", "dijkstra", {64, 128, 256, 512}, [](auto& o) { o.pq = PqPolicy::Off; });
  add("prim pq=on sparse e=4n", "prim", {256, 512, 1024, 2048, 4096}, [](auto& o) { o.pq = PqPolicy::On; });
  add("dijkstra pq=on sparse e=4n", "dijkstra", {256, 512, 1024, 2048, 4096},
      [](auto& o) { o.pq = PqPolicy::On; });
  add("matching pure choice", "matching", {256, 512, 1024, 2048, 4096},
      [](auto& o) { o.pick = PickPolicy::Fifo; });
  add("sort factorized pq=on", "sort", {256, 512, 1024, 2048, 4096}, [](auto& o) {
    o.factorize = true;
    o.pq = PqPolicy::On;
  });
  add("sequence factorized", "sequence", {256, 512, 1024, 2048, 4096}, [](auto& o) {
    o.factorize = true;
    o.pick = PickPolicy::Fifo;
  });
  return out;
}

std::string describe(const BenchReport& r) {
  if (r.target.kind == BenchTarget::Kind::PqBound)
    return "c " + fmt(r.c_min.value_or(0)) + ".." + fmt(r.c_max.value_or(0));
  return "slope " + (r.slope ? fmt(*r.slope) : std::string("n/a")) + " (want " +
         fmt(r.target.slope, 1) + "+-" + fmt(r.target.tolerance, 1) + ")";
}

Outcome criterion_7() {
  bool ok = true;
  std::string detail;
  for (const auto& l : ladders()) {
    const auto r = run_bench(l.spec);
    const bool pass = r.pass.value_or(false) && r.seconds <= 60;
    ok = ok && pass;
    detail += "\n    " + l.label + ": " + describe(r) + ", " + fmt(r.seconds, 2) + " s " +
              (pass ? "ok" : "FAIL");
  }
  return {ok, "7 ladders" + detail};
}

Outcome criterion_8() {
  const Program p = corpus_program("tsp");
  std::mt19937_64 rng(8);
  size_t broken = 0;
  for (int i = 0; i < 20; ++i) {
    GraphSpec s;
    s.family = GraphFamily::Complete;
    s.n = static_cast<size_t>(test::pick(rng, 2, 100));
    s.cost_max = i % 2 ? 1000 : 5;
    s.seed = rng();
    FactSet f = generate_graph(s);
    std::set<Value> nodes;
    for (const auto& t : f.at("node")) nodes.insert(t[0]);
    std::vector<std::pair<Value, Value>> path;
    for (const auto& t : rows(run_greedy_fixpoint(p, f).model.to_model(), "s_path"))
      if (t[0] != Value::symbol("root")) path.emplace_back(t[0], t[1]);
    if (!is_hamiltonian_path(path, nodes)) ++broken;
  }
  BenchSpec b;
  b.example = "tsp";
  b.sizes = {12, 25, 50, 100};
  b.reps = 5;
  const auto r = run_bench(b);
  const bool ok = broken == 0 && r.pass.value_or(false);
  return {ok, "20 complete graphs, " + std::to_string(broken) + " non-Hamiltonian paths; " + describe(r)};
}

FactSet agreement_input(const std::string& ex, std::mt19937_64& rng) {
  const size_t n = static_cast<size_t>(test::pick(rng, 1, 8));
  GraphSpec s;
  s.n = n;
  s.seed = rng();
  s.cost_max = test::pick(rng, 1, 10);
  if (ex == "advisor") return test::random_small_input(ex, rng);
  if (ex == "sequence" || ex == "sort") return generate_domain(n, rng());
  if (ex == "matching" || ex == "optmatching") s.family = GraphFamily::Bipartite;
  else if (ex == "tsp" || test::pick(rng, 0, 2) == 0) s.family = GraphFamily::Complete;
  else s.edges = std::max<size_t>(n - 1, static_cast<size_t>(test::pick(rng, 0, 2 * static_cast<int64_t>(n))));
  s.directed = (ex == "reach" || ex == "dijkstra") && s.family == GraphFamily::SparseConnected;
  return generate_graph(s);
}

Outcome criterion_9() {
  std::mt19937_64 rng(9);
  size_t runs = 0, differ = 0;
  std::string first;
  for (const auto& ex : kCorpus) {
    const Program p = corpus_program(ex);
    const LicoMode mode = has_most(p) ? LicoMode::Most : LicoMode::Least;
    for (int i = 0; i < 40; ++i) {
      const FactSet f = agreement_input(ex, rng);
      ++runs;
      if (run_greedy_fixpoint(p, f).model.to_model() !=
          run_lico_reference(p, f, mode).model.to_model()) {
        ++differ;
        if (first.empty()) first = ex;
      }
    }
  }
  return {differ == 0, std::to_string(runs) + " runs over " + std::to_string(kCorpus.size()) +
                           " programs, " + std::to_string(differ) + " differing models" +
                           (first.empty() ? "" : " (first: " + first + ")")};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gdlog acceptance checks"};
  std::vector<int> selected;
  app.add_option("--criterion", selected, "Criterion number, 1-9")->check(CLI::Range(1, 9));
  CLI11_PARSE(app, argc, argv);
  if (selected.empty()) selected = {1, 2, 3, 4, 5, 6, 7, 8, 9};

  const std::vector<std::function<Outcome()>> checks = {criterion_1, criterion_2, criterion_3,
                                                        criterion_4, criterion_5, criterion_6,
                                                        criterion_7, criterion_8, criterion_9};
  int failed = 0;
  for (int c : selected) {
    Outcome o;
    try {
      o = checks[static_cast<size_t>(c - 1)]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << "criterion " << c << ": " << (o.pass ? "PASS" : "FAIL") << "  " << o.detail << "\n"
              << std::flush;
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
