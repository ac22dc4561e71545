#pragma once

// Random inputs for the example programs.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "gdlog/model.hpp"

namespace gdlog {

enum class GraphFamily { Complete, SparseConnected, Bipartite };

const char* to_string(GraphFamily f);
std::optional<GraphFamily> parse_family(std::string_view s);

struct GraphSpec {
  GraphFamily family = GraphFamily::SparseConnected;
  size_t n = 8;
  /// SparseConnected: total edges, at least n-1. Bipartite: edges across the
  /// parts, 0 for all pairs. Ignored for Complete.
  size_t edges = 0;
  /// SparseConnected only: one arc per edge, oriented away from node a.
  bool directed = false;
  int64_t cost_min = 1;
  int64_t cost_max = 100;
  uint64_t seed = 1;
};

/// Node i: `a` for 0, `v<i>` otherwise. Bipartite parts use `l<i>` and `r<i>`.
Value node_name(size_t i);

/// g(From, To, Cost) and node(X) facts. Undirected edges become two arcs with
/// the same cost.
FactSet generate_graph(const GraphSpec& spec);

/// d(X) facts: n distinct integers drawn from [1, 10n].
FactSet generate_domain(size_t n, uint64_t seed);

}  // namespace gdlog
