#pragma once

// Bottom-up evaluation of choice programs.
//
// Non-choice rules and the rewritten rules `A :- B(Z), chosen_r(W)` are closed
// with a differential fixpoint. Choice rules feed a per-rule candidate table
// (theta_r); one candidate at a time moves into chosen_r, conflicting
// candidates are purged, and the closure resumes. Strata of the predicate
// dependency graph are evaluated in topological order.

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gdlog/analysis.hpp"
#include "gdlog/counters.hpp"
#include "gdlog/lang.hpp"
#include "gdlog/model.hpp"
#include "gdlog/storage.hpp"

namespace gdlog {

class EngineError : public std::runtime_error {
 public:
  EngineError(const std::string& rule_id, const std::string& msg)
      : std::runtime_error(rule_id.empty() ? msg : rule_id + ": " + msg), rule_id_(rule_id) {}
  const std::string& rule_id() const { return rule_id_; }

 private:
  std::string rule_id_;
};

/// Per-predicate relations of a run: EDB, IDB and chosen_r.
class Interpretation {
 public:
  Relation& get_or_create(const std::string& pred, size_t arity);
  Relation* find(const std::string& pred);
  const Relation* find(const std::string& pred) const;
  const std::map<std::string, Relation>& relations() const { return rels_; }

  bool contains(const std::string& pred, TupleView t) const;
  size_t total_tuples() const;
  Model to_model() const;
  void load(const FactSet& facts);

 private:
  std::map<std::string, Relation> rels_;
};

using DeltaSet = FactSet;

enum class PqPolicy { On, Off, Auto };
enum class Schedule { GreedyFirst, ProgramOrder };

const char* to_string(PqPolicy p);
const char* to_string(Schedule s);
const char* to_string(PickPolicy p);

struct EngineOptions {
  /// Heap-ordered theta tables. Auto: on for choice-least/most rules only.
  PqPolicy pq = PqPolicy::Auto;
  Schedule schedule = Schedule::GreedyFirst;
  /// Selection among pure-choice candidates.
  PickPolicy pick = PickPolicy::Lex;
  uint64_t seed = 0;
  /// Store only the domain column of theta for Cartesian-product rules.
  bool factorize = false;
  bool unique_key_pruning = true;
  /// false: naive closure (full re-evaluation every round).
  bool semi_naive = true;
  /// Check table invariants after every mutation (slow).
  bool audit = false;
  /// Per-choice trace lines, TSV.
  std::ostream* trace = nullptr;
};

struct RunResult {
  Interpretation model;
  Counters counters;
  double seconds = 0;
  std::vector<std::string> diagnostics;
};

/// Heads of fireable instances of `rules` over `i` that are not in `i`. With
/// `delta`, only instances using at least one delta tuple are considered
/// (`i` must already contain `delta`). Choice goals are ignored.
DeltaSet immediate_consequence(std::span<const Rule> rules, const Interpretation& i,
                               const Interpretation* delta = nullptr);

/// Least fixpoint of the non-choice part of foe(P) (plain rules plus rewritten
/// rules over the chosen_r relations present in `i`).
Interpretation closure_nonchoice(const Program& p, Interpretation i, bool semi_naive = true,
                                 Counters* counters = nullptr);

/// Choice model by the semi-naive lazy computation. Every choice rule, greedy
/// or not, selects by `opts.pick`.
RunResult run_choice_fixpoint(const Program& p, const FactSet& edb, EngineOptions opts = {});

/// Greedy choice model: choice-least/most rules select an extreme-cost
/// candidate; pure choice rules select by `opts.pick`.
RunResult run_greedy_fixpoint(const Program& p, const FactSet& edb, EngineOptions opts = {});

enum class LicoMode { Lazy, Least, Most };

/// Direct implementation of the lazy / least-cost / most-cost immediate
/// consequence operators: candidates are recomputed from scratch every step.
/// Deterministic: the selected candidate is the first in (stratum, schedule
/// class, program order, cost, lexicographic) order among the admissible ones.
RunResult run_lico_reference(const Program& p, const FactSet& edb, LicoMode mode,
                             EngineOptions opts = {});

/// Greedy run with Cartesian-product factorization enabled. Rules that do not
/// match the pattern fall back to the general tables with a diagnostic.
RunResult run_factorized_sort(const Program& p, const FactSet& edb, EngineOptions opts = {});

/// Greedy run when the program has a choice-least/most rule, lazy otherwise.
RunResult run_with_counters(const Program& p, const FactSet& edb, EngineOptions opts = {});

/// A choice rule whose candidates are `pi_x(rec) x pi_y(dom)`.
struct CartesianPattern {
  size_t rec_atom = 0;  // body atom index of the recursive goal
  size_t dom_atom = 0;  // body atom index of the domain goal
  size_t x_col = 0;     // column of X in the recursive goal
  size_t y_col = 0;     // column of Y in the domain goal
  size_t x_pos = 0;     // positions in W
  size_t y_pos = 0;
};

/// Why a rule does not match, or the matched pattern.
std::optional<CartesianPattern> detect_cartesian_pattern(const Rule& r, const SubprogramPlan& plan,
                                                         std::string* why = nullptr);

}  // namespace gdlog
