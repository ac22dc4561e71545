#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "gdlog/value.hpp"

namespace gdlog {

struct TupleLess {
  bool operator()(const Tuple& a, const Tuple& b) const { return compare_tuples(a, b) < 0; }
};

/// Extensional input: predicate -> rows.
using FactSet = std::map<std::string, std::vector<Tuple>>;

/// A set of ground atoms grouped by predicate, ordered for stable output.
/// Predicates with no tuples are absent.
using Model = std::map<std::string, std::set<Tuple, TupleLess>>;

inline size_t model_size(const Model& m) {
  size_t n = 0;
  for (const auto& [pred, rows] : m) n += rows.size();
  return n;
}

inline Model restrict_model(const Model& m, const std::set<std::string>& preds) {
  Model out;
  for (const auto& [pred, rows] : m)
    if (preds.count(pred)) out.emplace(pred, rows);
  return out;
}

}  // namespace gdlog
