#pragma once

#include <initializer_list>
#include <string>
#include <tuple>
#include <vector>

#include "gdlog/model.hpp"
#include "gdlog/value.hpp"

namespace gdlog::test {

inline Value S(const char* s) { return Value::symbol(s); }
inline Value I(int64_t v) { return Value::integer(v); }

/// g(From, To, Cost) rows.
inline FactSet graph(std::initializer_list<std::tuple<const char*, const char*, int64_t>> arcs,
                     bool symmetric = false) {
  FactSet f;
  for (const auto& [a, b, c] : arcs) {
    f["g"].push_back({S(a), S(b), I(c)});
    if (symmetric) f["g"].push_back({S(b), S(a), I(c)});
  }
  return f;
}

/// The toy graph with arcs a-b 1, b-c 2, a-c 3 in both directions.
inline FactSet toy_graph() { return graph({{"a", "b", 1}, {"b", "c", 2}, {"a", "c", 3}}, true); }

inline std::set<Tuple, TupleLess> rows(const Model& m, const std::string& pred) {
  auto it = m.find(pred);
  return it == m.end() ? std::set<Tuple, TupleLess>{} : it->second;
}

inline std::set<Tuple, TupleLess> rows(std::initializer_list<Tuple> ts) { return {ts.begin(), ts.end()}; }

}  // namespace gdlog::test
