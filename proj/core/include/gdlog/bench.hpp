#pragma once

// Doubling-ladder complexity checks over operation counters.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gdlog/engine.hpp"
#include "gdlog/gen.hpp"

namespace gdlog {

enum class BenchAxis { Nodes, Edges };

struct BenchTarget {
  enum class Kind { None, Slope, PqBound };
  Kind kind = Kind::None;
  BenchAxis axis = BenchAxis::Nodes;
  /// Slope: the metric is work / log2(x) instead of work.
  bool divide_by_log = false;
  double slope = 1.0;
  double tolerance = 0.3;
  /// PqBound: (pq_ops + pq_steps) <= c * e * log2(n), c <= c_max and
  /// max(c) / min(c) <= c_ratio_max over the ladder.
  double c_max = 4.0;
  double c_ratio_max = 2.0;
  std::string claim;
};

struct BenchSpec {
  std::string example;
  std::vector<size_t> sizes;
  std::optional<GraphFamily> family;  // default depends on the example
  double edge_factor = 4.0;           // sparse and bipartite inputs: arcs = factor * n
  size_t reps = 5;
  int64_t cost_min = 1;
  int64_t cost_max = 1000;
  uint64_t seed = 1;
  EngineOptions opts;
  std::optional<BenchTarget> target;  // default depends on the example and options
};

struct BenchRow {
  size_t n = 0;
  size_t e = 0;  // g facts
  std::map<std::string, uint64_t> median;  // per counter
  double seconds = 0;                      // median wall time
  double metric = 0;
};

struct BenchReport {
  BenchSpec spec;
  GraphFamily family = GraphFamily::Complete;
  BenchTarget target;
  std::vector<BenchRow> rows;
  std::optional<double> slope;
  std::optional<double> c_min, c_max;
  std::optional<bool> pass;  // nullopt: no target, or a degenerate ladder
  std::string verdict;
  double seconds = 0;
};

GraphFamily default_family(const std::string& example, const EngineOptions& opts);
BenchTarget default_target(const std::string& example, const EngineOptions& opts);

/// Input facts for one run of an example at size n.
FactSet bench_input(const std::string& example, size_t n, GraphFamily family, double edge_factor,
                    int64_t cost_min, int64_t cost_max, uint64_t seed);

/// Least-squares slope of log2(y) against log2(x). nullopt with fewer than two
/// distinct x values.
std::optional<double> loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Throws std::invalid_argument for an unknown example, sizes that are not
/// strictly increasing, or fewer than 3 repetitions.
BenchReport run_bench(const BenchSpec& spec);

std::string format_bench_tsv(const BenchReport& r);
std::string format_bench_csv(const BenchReport& r);

}  // namespace gdlog
