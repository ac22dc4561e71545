#pragma once

// Small random inputs for every corpus program, sized for exhaustive
// enumeration.

#include <random>
#include <string>

#include "gdlog/corpus.hpp"
#include "gdlog/gen.hpp"
#include "gdlog/model.hpp"
#include "gdlog/oracle.hpp"

namespace gdlog::test {

inline int64_t pick(std::mt19937_64& rng, int64_t lo, int64_t hi) {
  return std::uniform_int_distribution<int64_t>(lo, hi)(rng);
}

inline Value node(int64_t i) { return node_name(static_cast<size_t>(i)); }

/// Undirected graph on n nodes, arcs in both directions.
inline FactSet random_undirected(std::mt19937_64& rng, int64_t n, double p, int64_t cmax) {
  FactSet f;
  for (int64_t i = 0; i < n; ++i)
    for (int64_t j = i + 1; j < n; ++j)
      if (std::bernoulli_distribution(p)(rng)) {
        const int64_t c = pick(rng, 1, cmax);
        f["g"].push_back({node(i), node(j), Value::integer(c)});
        f["g"].push_back({node(j), node(i), Value::integer(c)});
      }
  return f;
}

/// Acyclic digraph: arcs only from lower to higher node index.
inline FactSet random_dag(std::mt19937_64& rng, int64_t n, double p, int64_t cmax) {
  FactSet f;
  for (int64_t i = 0; i < n; ++i)
    for (int64_t j = i + 1; j < n; ++j)
      if (std::bernoulli_distribution(p)(rng))
        f["g"].push_back({node(i), node(j), Value::integer(pick(rng, 1, cmax))});
  return f;
}

inline FactSet random_bipartite(std::mt19937_64& rng, int64_t left, int64_t right, double p, int64_t cmax) {
  FactSet f;
  for (int64_t i = 0; i < left; ++i)
    for (int64_t j = 0; j < right; ++j)
      if (std::bernoulli_distribution(p)(rng))
        f["g"].push_back({Value::symbol("l" + std::to_string(i)), Value::symbol("r" + std::to_string(j)),
                          Value::integer(pick(rng, 1, cmax))});
  return f;
}

/// One random input for `example`; may have more candidates than wanted.
inline FactSet random_small_input(const std::string& example, std::mt19937_64& rng) {
  const int64_t cmax = pick(rng, 1, 6);  // small ranges give cost ties
  if (example == "advisor") {
    FactSet f;
    const int64_t majors = pick(rng, 1, 2);
    for (int64_t s = 0, n = pick(rng, 1, 3); s < n; ++s)
      f["student"].push_back({Value::symbol("s" + std::to_string(s)),
                              Value::symbol("m" + std::to_string(pick(rng, 0, majors - 1))),
                              Value::symbol(pick(rng, 0, 1) ? "senior" : "junior")});
    for (int64_t p = 0, n = pick(rng, 1, 3); p < n; ++p)
      f["professor"].push_back({Value::symbol("p" + std::to_string(p)),
                                Value::symbol("m" + std::to_string(pick(rng, 0, majors - 1)))});
    return f;
  }
  if (example == "sequence" || example == "sort")
    return generate_domain(static_cast<size_t>(pick(rng, 0, 3)), rng());
  if (example == "matching" || example == "optmatching")
    return random_bipartite(rng, pick(rng, 1, 3), pick(rng, 1, 3), 0.6, cmax);
  if (example == "spantree" || example == "prim") return random_undirected(rng, pick(rng, 2, 4), 0.6, cmax);
  if (example == "reach" || example == "dijkstra") return random_dag(rng, pick(rng, 2, 5), 0.5, cmax);
  // simplepath, tsp
  FactSet f = random_undirected(rng, pick(rng, 1, 3), 0.8, cmax);
  if (example == "tsp") {
    std::set<Value> nodes;
    for (const auto& t : f["g"]) nodes.insert(t[0]);
    if (nodes.empty()) nodes.insert(node(0));
    for (const auto& v : nodes) f["node"].push_back({v});
  }
  return f;
}

/// A random input with at most `max_candidates` ground chosen candidates.
inline FactSet small_instance(const std::string& example, std::mt19937_64& rng, size_t max_candidates = 12) {
  for (;;) {
    FactSet f = random_small_input(example, rng);
    if (count_choice_candidates(corpus_program(example), f) <= max_candidates) return f;
  }
}

}  // namespace gdlog::test
