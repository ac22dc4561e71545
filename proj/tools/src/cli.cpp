#include "cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "gdlog/analysis.hpp"
#include "gdlog/bench.hpp"
#include "gdlog/corpus.hpp"
#include "gdlog/engine.hpp"
#include "gdlog/gen.hpp"
#include "gdlog/io.hpp"
#include "gdlog/lang.hpp"
#include "gdlog/oracle.hpp"

namespace gdlog::cli {

namespace {

constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kRuntimeError = 2;
constexpr int kCheckFailed = 3;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Source {
  std::string program_path;
  std::string example;
  std::string facts_dir;

  void add_to(CLI::App& sub) {
    sub.add_option("program", program_path, "Program file");
    sub.add_option("--example", example, "Corpus program instead of a file");
    sub.add_option("--facts", facts_dir, "Directory of <pred>.facts files")->check(CLI::ExistingDirectory);
  }

  Program program() const {
    if (!example.empty()) {
      if (!find_corpus(example)) throw InputError("unknown example: " + example);
      return corpus_program(example);
    }
    if (program_path.empty()) throw InputError("a program file or --example is required");
    Program p;
    try {
      p = parse_program(read_file(program_path));
    } catch (const ParseError& e) {
      throw InputError(program_path + ":" + e.what());
    }
    if (auto diags = validate(p); !diags.empty()) {
      std::string msg;
      for (const auto& d : diags) msg += (msg.empty() ? "" : "\n") + d.rule_id + ": " + d.message;
      throw InputError(msg);
    }
    return p;
  }

  FactSet facts() const { return facts_dir.empty() ? FactSet{} : read_facts_dir(facts_dir); }
};

struct EngineFlags {
  uint64_t seed = 0;
  std::string pq = "auto";
  std::string schedule = "greedy-first";
  std::string pick = "lex";
  bool factorize = false;
  bool naive = false;
  bool audit = false;

  void add_to(CLI::App& sub) {
    sub.add_option("--seed", seed, "Seed for --pick random");
    sub.add_option("--pq", pq, "Heap-ordered theta tables")->check(CLI::IsMember({"on", "off", "auto"}));
    sub.add_option("--schedule", schedule, "Choice rule order")
        ->check(CLI::IsMember({"greedy-first", "program-order"}));
    sub.add_option("--pick", pick, "Pure-choice selection")->check(CLI::IsMember({"lex", "fifo", "random"}));
    sub.add_flag("--factorize", factorize, "Factorize Cartesian-product choice rules");
    sub.add_flag("--naive", naive, "Naive instead of semi-naive closure");
    sub.add_flag("--audit", audit, "Check table invariants after every step");
  }

  EngineOptions options() const {
    EngineOptions o;
    o.seed = seed;
    o.pq = pq == "on" ? PqPolicy::On : pq == "off" ? PqPolicy::Off : PqPolicy::Auto;
    o.schedule = schedule == "program-order" ? Schedule::ProgramOrder : Schedule::GreedyFirst;
    o.pick = pick == "fifo" ? PickPolicy::Fifo : pick == "random" ? PickPolicy::Random : PickPolicy::Lex;
    o.factorize = factorize;
    o.semi_naive = !naive;
    o.audit = audit;
    return o;
  }
};

/// Opens the trace sink: "-" is stderr.
struct TraceSink {
  std::unique_ptr<std::ofstream> file;
  std::ostream* stream = nullptr;

  TraceSink(const std::string& path, std::ostream& err) {
    if (path.empty()) return;
    if (path == "-") {
      stream = &err;
      return;
    }
    file = std::make_unique<std::ofstream>(path);
    if (!*file) throw InputError("cannot open trace file " + path);
    stream = file.get();
  }
};

Model visible(const Model& m, bool show_chosen) {
  Model out;
  for (const auto& [pred, rows] : m) {
    if (pred.rfind("diffchoice_", 0) == 0) continue;
    if (!show_chosen && pred.rfind("chosen_", 0) == 0) continue;
    out[pred] = rows;
  }
  return out;
}

RunResult run_mode(const std::string& mode, const Program& p, const FactSet& edb, const EngineOptions& o) {
  if (mode == "greedy") return run_greedy_fixpoint(p, edb, o);
  if (mode == "lazy") return run_choice_fixpoint(p, edb, o);
  if (mode == "lico-lazy") return run_lico_reference(p, edb, LicoMode::Lazy, o);
  if (mode == "lico-least") return run_lico_reference(p, edb, LicoMode::Least, o);
  if (mode == "lico-most") return run_lico_reference(p, edb, LicoMode::Most, o);
  return run_with_counters(p, edb, o);
}

std::vector<size_t> parse_sizes(const std::string& text) {
  std::vector<size_t> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    try {
      size_t used = 0;
      const long long v = std::stoll(item, &used);
      if (used != item.size() || v <= 0) throw std::invalid_argument(item);
      out.push_back(static_cast<size_t>(v));
    } catch (const std::exception&) {
      throw InputError("bad size: " + item);
    }
  }
  return out;
}

void print_plan(const Program& p, const EngineOptions& o, std::ostream& out) {
  const auto plan = plan_subprograms(build_dependency_graph(p), p);
  const auto kinds = classify_rules(p);
  const auto fds = extract_fds(p);
  for (size_t s = 0; s < plan.strata.size(); ++s) {
    const auto& st = plan.strata[s];
    out << "stratum " << s << (st.recursive ? " recursive" : "") << ":";
    for (const auto& pred : st.predicates) out << ' ' << pred;
    out << '\n';
    for (const auto& id : st.rule_ids) {
      const Rule* r = p.find_rule(id);
      const size_t idx = static_cast<size_t>(r - p.rules.data());
      out << "  " << id << '\t' << to_string(kinds[idx]);
      if (r->is_choice_rule()) {
        const auto& f = *std::find_if(fds.begin(), fds.end(), [&](const RuleFDs& x) { return x.rule_id == id; });
        out << "\tW=(";
        for (size_t i = 0; i < f.schema.size(); ++i) out << (i ? "," : "") << f.schema[i];
        out << ')';
        for (const auto& fd : f.fds) {
          out << "\t";
          for (size_t i = 0; i < fd.lhs.size(); ++i) out << (i ? "," : "") << f.schema[fd.lhs[i]];
          out << "->";
          for (size_t i = 0; i < fd.rhs.size(); ++i) out << (i ? "," : "") << f.schema[fd.rhs[i]];
        }
        const bool greedy = kinds[idx] == RuleKind::ChoiceLeast || kinds[idx] == RuleKind::ChoiceMost;
        const bool heap = o.pq == PqPolicy::On || (o.pq == PqPolicy::Auto && greedy);
        out << "\ttheta=" << (heap ? "heap" : "list");
        if (o.factorize) {
          std::string why;
          if (detect_cartesian_pattern(*r, plan, &why))
            out << "\tfactorized";
          else
            out << "\tnot factorized (" << why << ')';
        }
      }
      out << '\n';
    }
  }
}

}  // namespace

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"gdlog: greedy Datalog with choice"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "Compute one choice model");
  Source run_src;
  EngineFlags run_flags;
  std::string run_mode_name = "auto", run_output, run_trace;
  bool run_show_chosen = false, run_counters = false;
  run_src.add_to(*run);
  run_flags.add_to(*run);
  run->add_option("--mode", run_mode_name, "auto, greedy, lazy, lico-lazy, lico-least or lico-most")
      ->check(CLI::IsMember({"auto", "greedy", "lazy", "lico-lazy", "lico-least", "lico-most"}));
  run->add_option("-o,--output", run_output, "Write <pred>.facts files to this directory");
  run->add_option("--trace", run_trace, "Per-choice trace file (- for stderr)")->envname("GDLOG_TRACE");
  run->add_flag("--show-chosen", run_show_chosen, "Include chosen_r relations");
  run->add_flag("--counters", run_counters, "Print operation counters to stderr");

  // enumerate
  auto* en = app.add_subcommand("enumerate", "List every choice model (small inputs)");
  Source en_src;
  size_t en_max = 0, en_cap = EnumerateOptions{}.candidate_cap;
  bool en_show_chosen = false;
  en_src.add_to(*en);
  en->add_option("--max-models", en_max, "Stop after K models (0: all)");
  en->add_option("--candidate-cap", en_cap, "Refuse inputs with more ground chosen candidates");
  en->add_flag("--show-chosen", en_show_chosen, "Include chosen_r relations");

  // check
  auto* ck = app.add_subcommand("check", "Check that a model is a choice model");
  Source ck_src;
  std::string ck_model;
  size_t ck_cap = 24;
  ck_src.add_to(*ck);
  ck->add_option("--model", ck_model, "Model file (blocks) or facts directory")->required();
  ck->add_option("--candidate-cap", ck_cap, "Refuse models with more chosen candidates");

  // explain
  auto* ex = app.add_subcommand("explain", "Show the rewritten program, the plan or a trace");
  Source ex_src;
  EngineFlags ex_flags;
  bool ex_foe = false, ex_plan = false, ex_trace = false;
  ex_src.add_to(*ex);
  ex_flags.add_to(*ex);
  ex->add_flag("--foe", ex_foe, "Print the chosen/diffchoice rewriting");
  ex->add_flag("--plan", ex_plan, "Print strata, rule kinds, FDs and table choices");
  ex->add_flag("--trace", ex_trace, "Run and print the per-choice trace");

  // bench
  auto* be = app.add_subcommand("bench", "Counter-based complexity ladder for a corpus example");
  std::string be_example, be_sizes = "64,128,256,512", be_family, be_csv, be_output;
  BenchSpec be_spec;
  EngineFlags be_flags;
  be->add_option("example", be_example, "Corpus example")->required();
  be->add_option("--sizes", be_sizes, "Comma-separated, strictly increasing");
  be->add_option("--family", be_family, "complete, sparse-connected or bipartite");
  be->add_option("--reps", be_spec.reps, "Repetitions per size (>= 3)");
  be->add_option("--cost-min", be_spec.cost_min);
  be->add_option("--cost-max", be_spec.cost_max);
  be->add_option("--edge-factor", be_spec.edge_factor, "Arcs per node for sparse and bipartite graphs");
  be->add_option("--input-seed", be_spec.seed, "Seed for generated inputs");
  be->add_option("-o,--output", be_output, "TSV report file (default stdout)");
  be->add_option("--csv", be_csv, "Plot-ready CSV file");
  be_flags.add_to(*be);

  // gen
  auto* gn = app.add_subcommand("gen", "Generate input facts");
  std::string gn_family = "complete", gn_output;
  GraphSpec gn_spec;
  bool gn_domain = false;
  gn->add_option("--family", gn_family, "complete, sparse-connected or bipartite");
  gn->add_option("-n", gn_spec.n, "Nodes (or domain size)")->required();
  gn->add_option("--edges", gn_spec.edges, "Edges for sparse and bipartite graphs");
  gn->add_flag("--directed", gn_spec.directed, "One arc per edge");
  gn->add_option("--cost-min", gn_spec.cost_min);
  gn->add_option("--cost-max", gn_spec.cost_max);
  gn->add_option("--seed", gn_spec.seed);
  gn->add_flag("--domain", gn_domain, "Emit d(X) facts with distinct integers instead of a graph");
  gn->add_option("-o,--output", gn_output, "Facts directory (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*run) {
      const Program p = run_src.program();
      const FactSet edb = run_src.facts();
      EngineOptions o = run_flags.options();
      TraceSink trace(run_trace, err);
      o.trace = trace.stream;
      RunResult r = run_mode(run_mode_name, p, edb, o);
      for (const auto& d : r.diagnostics) err << "note: " << d << '\n';
      const Model m = visible(r.model.to_model(), run_show_chosen);
      if (run_output.empty())
        out << format_model(m);
      else
        write_facts_dir(m, run_output);
      if (run_counters)
        for (const auto& [k, v] : r.counters.as_map()) err << k << '\t' << v << '\n';
      return kOk;
    }
    if (*en) {
      const Program p = en_src.program();
      EnumerateOptions eo;
      eo.max_models = en_max;
      eo.candidate_cap = en_cap;
      const auto models = enumerate_choice_models(p, en_src.facts(), eo);
      for (size_t i = 0; i < models.size(); ++i)
        out << "## model " << i + 1 << '\n' << format_model(visible(models[i], en_show_chosen));
      err << models.size() << " model(s)\n";
      return kOk;
    }
    if (*ck) {
      const Program p = ck_src.program();
      const Model m = std::filesystem::is_directory(ck_model) ? to_model(read_facts_dir(ck_model))
                                                              : parse_model(read_file(ck_model));
      EnumerateOptions eo;
      eo.candidate_cap = ck_cap;
      const auto res = check_choice_model(p, ck_src.facts(), m, eo);
      if (res.is_stable) {
        out << "stable\n";
        return kOk;
      }
      out << "not a choice model: " << res.reason << '\n';
      return kCheckFailed;
    }
    if (*ex) {
      const Program p = ex_src.program();
      const EngineOptions o = ex_flags.options();
      if (!ex_foe && !ex_plan && !ex_trace) out << print_program(p);
      if (ex_foe) out << print_foe(foe_transform(p));
      if (ex_plan) print_plan(p, o, out);
      if (ex_trace) {
        EngineOptions t = o;
        t.trace = &out;
        run_with_counters(p, ex_src.facts(), t);
      }
      return kOk;
    }
    if (*be) {
      be_spec.example = be_example;
      be_spec.sizes = parse_sizes(be_sizes);
      be_spec.opts = be_flags.options();
      if (!be_family.empty()) {
        auto f = parse_family(be_family);
        if (!f) throw InputError("unknown family: " + be_family);
        be_spec.family = *f;
      }
      BenchReport rep;
      try {
        rep = run_bench(be_spec);
      } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
      }
      if (be_output.empty())
        out << format_bench_tsv(rep);
      else
        write_file(be_output, format_bench_tsv(rep));
      if (!be_csv.empty()) write_file(be_csv, format_bench_csv(rep));
      return kOk;
    }
    if (*gn) {
      if (gn_spec.n < 1) throw InputError("-n must be at least 1");
      FactSet f;
      if (gn_domain) {
        f = generate_domain(gn_spec.n, gn_spec.seed);
      } else {
        auto fam = parse_family(gn_family);
        if (!fam) throw InputError("unknown family: " + gn_family);
        gn_spec.family = *fam;
        f = generate_graph(gn_spec);
      }
      if (gn_output.empty())
        out << format_model(to_model(f));
      else
        write_facts_dir(f, gn_output);
      return kOk;
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kOk;
}

}  // namespace gdlog::cli
