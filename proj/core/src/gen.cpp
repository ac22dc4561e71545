#include "gdlog/gen.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

namespace gdlog {

const char* to_string(GraphFamily f) {
  switch (f) {
    case GraphFamily::Complete: return "complete";
    case GraphFamily::SparseConnected: return "sparse-connected";
    case GraphFamily::Bipartite: return "bipartite";
  }
  return "?";
}

std::optional<GraphFamily> parse_family(std::string_view s) {
  if (s == "complete") return GraphFamily::Complete;
  if (s == "sparse-connected" || s == "sparse") return GraphFamily::SparseConnected;
  if (s == "bipartite") return GraphFamily::Bipartite;
  return std::nullopt;
}

Value node_name(size_t i) {
  return i == 0 ? Value::symbol("a") : Value::symbol("v" + std::to_string(i));
}

FactSet generate_graph(const GraphSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  std::uniform_int_distribution<int64_t> cost(spec.cost_min, spec.cost_max);
  FactSet out;
  auto& g = out["g"];
  auto& node = out["node"];
  auto arc = [&](const Value& x, const Value& y, int64_t c) {
    g.push_back({x, y, Value::integer(c)});
  };
  auto edge = [&](const Value& x, const Value& y) {
    const int64_t c = cost(rng);
    arc(x, y, c);
    arc(y, x, c);
  };

  switch (spec.family) {
    case GraphFamily::Complete: {
      for (size_t i = 0; i < spec.n; ++i) node.push_back({node_name(i)});
      for (size_t i = 0; i < spec.n; ++i)
        for (size_t j = i + 1; j < spec.n; ++j) edge(node_name(i), node_name(j));
      break;
    }
    case GraphFamily::SparseConnected: {
      for (size_t i = 0; i < spec.n; ++i) node.push_back({node_name(i)});
      // Random spanning tree: each node attaches to an earlier node of a
      // random order that starts at a.
      std::vector<size_t> order(spec.n);
      std::iota(order.begin(), order.end(), 0);
      if (spec.n > 1) std::shuffle(order.begin() + 1, order.end(), rng);
      std::set<std::pair<size_t, size_t>> used;
      auto add = [&](size_t x, size_t y) {
        if (x == y) return false;
        const auto key = spec.directed ? std::pair{x, y} : std::pair{std::min(x, y), std::max(x, y)};
        if (!used.insert(key).second) return false;
        if (spec.directed)
          arc(node_name(x), node_name(y), cost(rng));
        else
          edge(node_name(x), node_name(y));
        return true;
      };
      for (size_t k = 1; k < spec.n; ++k) {
        const size_t parent = order[std::uniform_int_distribution<size_t>(0, k - 1)(rng)];
        add(parent, order[k]);
      }
      const size_t max_edges = spec.directed ? spec.n * (spec.n - 1) : spec.n * (spec.n - 1) / 2;
      const size_t target = std::min(std::max(spec.edges, spec.n ? spec.n - 1 : 0), max_edges);
      std::uniform_int_distribution<size_t> pick(0, spec.n ? spec.n - 1 : 0);
      while (used.size() < target) add(pick(rng), pick(rng));
      break;
    }
    case GraphFamily::Bipartite: {
      const size_t left = (spec.n + 1) / 2, right = spec.n / 2;
      auto l = [](size_t i) { return Value::symbol("l" + std::to_string(i)); };
      auto r = [](size_t i) { return Value::symbol("r" + std::to_string(i)); };
      for (size_t i = 0; i < left; ++i) node.push_back({l(i)});
      for (size_t i = 0; i < right; ++i) node.push_back({r(i)});
      if (right == 0) break;
      if (spec.edges == 0 || spec.edges >= left * right) {
        for (size_t i = 0; i < left; ++i)
          for (size_t j = 0; j < right; ++j) arc(l(i), r(j), cost(rng));
        break;
      }
      std::set<std::pair<size_t, size_t>> used;
      std::uniform_int_distribution<size_t> pl(0, left - 1), pr(0, right - 1);
      while (used.size() < spec.edges) {
        const size_t i = pl(rng), j = pr(rng);
        if (used.emplace(i, j).second) arc(l(i), r(j), cost(rng));
      }
      break;
    }
  }
  return out;
}

FactSet generate_domain(size_t n, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int64_t> v(1, static_cast<int64_t>(10 * std::max<size_t>(n, 1)));
  std::set<int64_t> seen;
  FactSet out;
  auto& d = out["d"];
  while (seen.size() < n) {
    const int64_t x = v(rng);
    if (seen.insert(x).second) d.push_back({Value::integer(x)});
  }
  return out;
}

}  // namespace gdlog
