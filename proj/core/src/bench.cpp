#include "gdlog/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "gdlog/corpus.hpp"

namespace gdlog {

GraphFamily default_family(const std::string& example, const EngineOptions& opts) {
  if (example == "matching" || example == "optmatching") return GraphFamily::Bipartite;
  if (example == "prim" || example == "dijkstra")
    return opts.pq == PqPolicy::Off ? GraphFamily::Complete : GraphFamily::SparseConnected;
  if (example == "spantree" || example == "reach") return GraphFamily::SparseConnected;
  return GraphFamily::Complete;
}

BenchTarget default_target(const std::string& example, const EngineOptions& opts) {
  BenchTarget t;
  t.kind = BenchTarget::Kind::Slope;
  if (example == "prim" || example == "dijkstra") {
    if (opts.pq == PqPolicy::Off) {
      t.slope = 2;
      t.claim = "O(n^2) without a priority queue";
    } else {
      t.kind = BenchTarget::Kind::PqBound;
      t.claim = "O(e log n) with a priority queue";
    }
  } else if (example == "matching" || example == "spantree" || example == "reach" ||
             example == "simplepath") {
    t.axis = BenchAxis::Edges;
    t.claim = "O(e)";
  } else if (example == "optmatching") {
    t.axis = BenchAxis::Edges;
    t.divide_by_log = opts.pq != PqPolicy::Off;
    t.claim = t.divide_by_log ? "O(e log e) with a priority queue" : "O(e)";
    if (!t.divide_by_log) t.kind = BenchTarget::Kind::None;
  } else if (example == "sequence") {
    t.slope = opts.factorize ? 1 : 2;
    t.claim = opts.factorize ? "linear when factorized" : "O(n^2)";
  } else if (example == "sort") {
    const bool fast = opts.factorize && opts.pq != PqPolicy::Off;
    t.slope = fast ? 1 : 2;
    t.divide_by_log = fast;
    t.claim = fast ? "O(n log n) when factorized" : "O(n^2)";
  } else if (example == "tsp") {
    t.slope = 2;
    t.claim = "O(n^2)";
  } else {
    t.kind = BenchTarget::Kind::None;
  }
  return t;
}

FactSet bench_input(const std::string& example, size_t n, GraphFamily family, double edge_factor,
                    int64_t cost_min, int64_t cost_max, uint64_t seed) {
  if (example == "sequence" || example == "sort") return generate_domain(n, seed);
  if (example == "advisor") {
    FactSet f;
    const size_t profs = std::max<size_t>(2, n / 4);
    for (size_t i = 0; i < n; ++i)
      f["student"].push_back({Value::symbol("s" + std::to_string(i)),
                              Value::symbol("m" + std::to_string(i % 4)),
                              Value::symbol(i % 2 ? "junior" : "senior")});
    for (size_t j = 0; j < profs; ++j)
      f["professor"].push_back(
          {Value::symbol("p" + std::to_string(j)), Value::symbol("m" + std::to_string(j % 4))});
    return f;
  }
  GraphSpec g;
  g.family = family;
  g.n = n;
  g.cost_min = cost_min;
  g.cost_max = cost_max;
  g.seed = seed;
  const auto arcs = static_cast<size_t>(std::llround(edge_factor * static_cast<double>(n)));
  g.directed = example == "reach" || example == "dijkstra";
  if (family == GraphFamily::SparseConnected) g.edges = g.directed ? arcs : arcs / 2;
  if (family == GraphFamily::Bipartite) g.edges = arcs;
  return generate_graph(g);
}

std::optional<double> loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) return std::nullopt;
  std::vector<double> lx, ly;
  for (size_t i = 0; i < x.size(); ++i) {
    if (x[i] <= 0 || y[i] <= 0) return std::nullopt;
    lx.push_back(std::log2(x[i]));
    ly.push_back(std::log2(y[i]));
  }
  const double n = static_cast<double>(lx.size());
  double mx = 0, my = 0;
  for (size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i] / n;
    my += ly[i] / n;
  }
  double sxy = 0, sxx = 0;
  for (size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  if (sxx == 0) return std::nullopt;
  return sxy / sxx;
}

namespace {

template <class T>
T median_of(std::vector<T> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(4);
  s << v;
  return s.str();
}

}  // namespace

BenchReport run_bench(const BenchSpec& spec) {
  if (!find_corpus(spec.example)) throw std::invalid_argument("unknown example: " + spec.example);
  if (spec.sizes.empty()) throw std::invalid_argument("empty size ladder");
  for (size_t i = 1; i < spec.sizes.size(); ++i)
    if (spec.sizes[i] <= spec.sizes[i - 1])
      throw std::invalid_argument("sizes must be strictly increasing");
  if (spec.reps < 3) throw std::invalid_argument("at least 3 repetitions are required");

  const auto t0 = std::chrono::steady_clock::now();
  BenchReport rep;
  rep.spec = spec;
  rep.family = spec.family.value_or(default_family(spec.example, spec.opts));
  rep.target = spec.target.value_or(default_target(spec.example, spec.opts));
  const Program p = corpus_program(spec.example);

  for (size_t n : spec.sizes) {
    BenchRow row;
    row.n = n;
    std::map<std::string, std::vector<uint64_t>> samples;
    std::vector<double> secs;
    for (size_t r = 0; r < spec.reps; ++r) {
      const uint64_t seed = spec.seed * 1000003ULL + n * 7919ULL + r;
      const FactSet edb = bench_input(spec.example, n, rep.family, spec.edge_factor, spec.cost_min,
                                      spec.cost_max, seed);
      auto g = edb.find("g");
      row.e = g == edb.end() ? 0 : g->second.size();
      EngineOptions opts = spec.opts;
      opts.trace = nullptr;
      const RunResult res = run_with_counters(p, edb, opts);
      for (const auto& [k, v] : res.counters.as_map()) samples[k].push_back(v);
      secs.push_back(res.seconds);
    }
    for (auto& [k, v] : samples) row.median[k] = median_of(v);
    row.seconds = median_of(secs);

    const double x = rep.target.axis == BenchAxis::Edges ? static_cast<double>(row.e)
                                                         : static_cast<double>(n);
    const double work = static_cast<double>(row.median["work"]);
    if (rep.target.kind == BenchTarget::Kind::PqBound) {
      const double denom = static_cast<double>(row.e) * std::log2(std::max<double>(n, 2));
      row.metric = static_cast<double>(row.median["pq_ops"] + row.median["pq_steps"]) / denom;
    } else {
      row.metric = rep.target.divide_by_log ? work / std::log2(std::max(x, 2.0)) : work;
    }
    rep.rows.push_back(std::move(row));
  }

  std::vector<double> xs, ys;
  for (const auto& row : rep.rows) {
    xs.push_back(rep.target.axis == BenchAxis::Edges ? static_cast<double>(row.e)
                                                     : static_cast<double>(row.n));
    ys.push_back(row.metric);
  }
  switch (rep.target.kind) {
    case BenchTarget::Kind::None:
      rep.slope = loglog_slope(xs, ys);
      rep.verdict = "no complexity target for this example";
      break;
    case BenchTarget::Kind::Slope:
      rep.slope = loglog_slope(xs, ys);
      if (!rep.slope) {
        rep.verdict = "slope undefined: the ladder needs at least two sizes";
      } else {
        rep.pass = std::abs(*rep.slope - rep.target.slope) <= rep.target.tolerance;
        rep.verdict = "slope " + fmt(*rep.slope) + ", expected " + fmt(rep.target.slope) + " +- " +
                      fmt(rep.target.tolerance);
      }
      break;
    case BenchTarget::Kind::PqBound: {
      rep.c_min = *std::min_element(ys.begin(), ys.end());
      rep.c_max = *std::max_element(ys.begin(), ys.end());
      rep.slope = loglog_slope(xs, ys);
      const double ratio = *rep.c_min > 0 ? *rep.c_max / *rep.c_min : INFINITY;
      rep.pass = *rep.c_max <= rep.target.c_max && ratio <= rep.target.c_ratio_max;
      rep.verdict = "c in [" + fmt(*rep.c_min) + ", " + fmt(*rep.c_max) + "], bound " +
                    fmt(rep.target.c_max) + ", spread " + fmt(ratio) + " (max " +
                    fmt(rep.target.c_ratio_max) + ")";
      break;
    }
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

std::string format_bench_tsv(const BenchReport& r) {
  std::ostringstream out;
  out << "# example\t" << r.spec.example << "\n# family\t" << to_string(r.family) << "\n# pq\t"
      << to_string(r.spec.opts.pq) << "\n# factorize\t" << (r.spec.opts.factorize ? "on" : "off")
      << "\n# pick\t" << to_string(r.spec.opts.pick) << "\n# reps\t" << r.spec.reps
      << "\n# claim\t" << (r.target.claim.empty() ? "-" : r.target.claim) << "\n";
  out << "n\te\tmetric\tseconds";
  if (!r.rows.empty())
    for (const auto& [k, v] : r.rows.front().median) out << '\t' << k;
  out << '\n';
  for (const auto& row : r.rows) {
    out << row.n << '\t' << row.e << '\t' << fmt(row.metric) << '\t' << fmt(row.seconds);
    for (const auto& [k, v] : row.median) out << '\t' << v;
    out << '\n';
  }
  out << "# slope\t" << (r.slope ? fmt(*r.slope) : "undefined") << "\n# verdict\t" << r.verdict
      << "\n# result\t" << (!r.pass ? "n/a" : *r.pass ? "pass" : "fail") << "\n";
  return out.str();
}

std::string format_bench_csv(const BenchReport& r) {
  std::ostringstream out;
  out << "n,e,metric,seconds";
  if (!r.rows.empty())
    for (const auto& [k, v] : r.rows.front().median) out << ',' << k;
  out << '\n';
  for (const auto& row : r.rows) {
    out << row.n << ',' << row.e << ',' << row.metric << ',' << row.seconds;
    for (const auto& [k, v] : row.median) out << ',' << v;
    out << '\n';
  }
  return out.str();
}

}  // namespace gdlog
