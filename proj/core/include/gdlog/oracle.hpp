#pragma once

// Ground-level semantics oracle. Independent of the engine's tables: it
// grounds foe(P), checks stable models through the Gelfond-Lifschitz reduct and
// enumerates choice models by exhaustive search. Also hosts textbook graph
// algorithms used to cross-check the greedy programs.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "gdlog/analysis.hpp"
#include "gdlog/lang.hpp"
#include "gdlog/model.hpp"

namespace gdlog {

struct GroundAtom {
  std::string pred;
  Tuple args;
  friend bool operator==(const GroundAtom&, const GroundAtom&) = default;
  friend bool operator<(const GroundAtom& a, const GroundAtom& b) {
    if (a.pred != b.pred) return a.pred < b.pred;
    return compare_tuples(a.args, b.args) < 0;
  }
};

std::string to_string(const GroundAtom& a);

struct GroundRule {
  uint32_t head = 0;
  std::vector<uint32_t> pos;
  std::vector<uint32_t> neg;
};

/// Ground rules over interned atoms. Facts are rules with an empty body.
struct GroundProgram {
  std::vector<GroundAtom> atoms;
  std::map<GroundAtom, uint32_t> ids;
  std::vector<GroundRule> rules;

  std::optional<uint32_t> find(const GroundAtom& a) const;
  uint32_t intern(const GroundAtom& a);
};

class OracleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Relevant grounding: rule instances whose positive body holds in the least
/// model of the positive part of foe(P). Diffchoice rules range over pairs of
/// candidate chosen tuples. Throws OracleError past `cap` instances.
GroundProgram ground(const FoeProgram& foe, const FactSet& edb, size_t cap = 1'000'000);

/// Grounding relative to a candidate model m: instances whose positive body
/// holds in m, diffchoice rules restricted to chosen candidates supported by m.
/// Finite even when the relevant base of the program is not, and complete for
/// checking whether m is stable.
GroundProgram ground_for_model(const FoeProgram& foe, const FactSet& edb, const Model& m,
                               size_t cap = 1'000'000);

struct StableCheckResult {
  bool is_model = false;
  bool is_stable = false;
  /// Least model of the reduct when it differs from the candidate.
  std::optional<Model> witness;
  std::string reason;
};

/// Reduct, then least model by naive iteration, compared with m.
StableCheckResult check_stable_model(const GroundProgram& g, const Model& m);

/// Second path: every rule is satisfied by m, and every atom of m is derivable
/// in the reduct (counter-based unit propagation).
bool check_stable_model_by_support(const GroundProgram& g, const Model& m);

/// Adds the diffchoice atoms implied by the chosen atoms of m.
Model complete_with_diffchoice(const GroundProgram& g, const Model& m);

/// Drops diffchoice_r predicates.
Model strip_diffchoice(const Model& m);

struct EnumerateOptions {
  size_t candidate_cap = 20;    // ground chosen candidates
  size_t max_models = 0;        // 0: unlimited
  size_t ground_cap = 1'000'000;
};

/// All choice models of p over edb, as stable models of foe(p) (with chosen_r
/// and diffchoice_r atoms), sorted. Throws OracleError when a cap is exceeded.
std::vector<Model> enumerate_choice_models(const Program& p, const FactSet& edb,
                                           EnumerateOptions opts = {});

/// Whether m (plus EDB) is a choice model of p. When m has no chosen_r atoms,
/// searches the FD-consistent chosen sets that m supports for one whose
/// completion is stable; the witness is then that completed model.
StableCheckResult check_choice_model(const Program& p, const FactSet& edb, const Model& m,
                                     EnumerateOptions opts = {});

/// Number of ground chosen candidates of p over edb.
size_t count_choice_candidates(const Program& p, const FactSet& edb);

// ---------------------------------------------------------------------------
// Reference graph algorithms.

struct Arc {
  Value from;
  Value to;
  int64_t cost = 0;
};

/// Arcs of a ternary g(From, To, Cost) relation. Rows with a non-integer cost are skipped.
std::vector<Arc> arcs_of(const FactSet& facts, const std::string& pred = "g");
std::vector<Arc> arcs_of(const Model& m, const std::string& pred = "g");

/// Shortest distances from source; unreachable nodes are absent.
std::map<Value, int64_t> shortest_paths(const std::vector<Arc>& arcs, const Value& source);

/// Minimum spanning forest weight (Kruskal), arcs read as undirected edges.
int64_t mst_weight(const std::vector<Arc>& arcs);

/// Weight of the tree grown from source by the O(n^2) array version of Prim's
/// algorithm. Covers only the component of source.
int64_t prim_weight(const std::vector<Arc>& arcs, const Value& source);

/// Nodes reachable from source.
std::set<Value> reachable(const std::vector<Arc>& arcs, const Value& source);

/// Every pair is an arc and no node occurs twice on the same side.
bool is_matching(const std::vector<Arc>& arcs, const std::vector<std::pair<Value, Value>>& pairs);

/// A matching to which no arc can be added.
bool is_maximal_matching(const std::vector<Arc>& arcs,
                         const std::vector<std::pair<Value, Value>>& pairs);

/// succ pairs form one chain from root through every element of domain
/// exactly once. With `decreasing`, successive elements strictly decrease.
bool is_chain(const std::vector<std::pair<Value, Value>>& succ, const Value& root,
              const std::set<Value>& domain, bool decreasing);

/// The arcs form one simple path visiting every node of `nodes` once.
bool is_hamiltonian_path(const std::vector<std::pair<Value, Value>>& path,
                         const std::set<Value>& nodes);

}  // namespace gdlog
