#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gdlog/lang.hpp"

namespace gdlog {

/// Predicate dependency graph: edge (p, q) iff some rule with head p has q in its body.
struct DependencyGraph {
  std::vector<std::string> nodes;
  std::set<std::pair<std::string, std::string>> edges;
  /// Maximal strongly connected components, dependencies before dependents.
  std::vector<std::vector<std::string>> components;

  bool depends_on(const std::string& p, const std::string& q) const {
    return edges.count({p, q}) > 0;
  }
  /// Components that are recursive cliques (size > 1 or a self-loop).
  std::vector<std::vector<std::string>> recursive_cliques() const;
};

DependencyGraph build_dependency_graph(const Program& p);

struct Stratum {
  std::vector<std::string> predicates;
  std::vector<std::string> rule_ids;  // rules whose head is in this stratum, program order
  bool recursive = false;
};

/// Strata in a topological order of the clique condensation. Results of
/// earlier strata are plain facts for later ones.
struct SubprogramPlan {
  std::vector<Stratum> strata;

  std::optional<size_t> stratum_of_predicate(const std::string& pred) const;
  std::optional<size_t> stratum_of_rule(const std::string& rule_id) const;
};

SubprogramPlan plan_subprograms(const DependencyGraph& g, const Program& p);

enum class RuleKind { NonChoice, PureChoice, ChoiceLeast, ChoiceMost };

const char* to_string(RuleKind k);

RuleKind classify_rule(const Rule& r);
/// One entry per rule, in program order.
std::vector<RuleKind> classify_rules(const Program& p);

/// X -> Y with both sides given as column positions in the chosen schema W.
struct FunctionalDependency {
  std::vector<size_t> lhs;
  std::vector<size_t> rhs;

  friend bool operator==(const FunctionalDependency&, const FunctionalDependency&) = default;
};

struct RuleFDs {
  std::string rule_id;
  std::vector<std::string> schema;  // W
  std::vector<FunctionalDependency> fds;  // one per choice goal, goal order
};

using FDSet = std::vector<RuleFDs>;

/// W: variables of the rule's choice goals in first-body-occurrence order.
std::vector<std::string> choice_schema(const Rule& r);
FDSet extract_fds(const Program& p);

std::string chosen_predicate(const std::string& rule_id);
std::string diffchoice_predicate(const std::string& rule_id);

/// A rule of the rewritten program. Beyond ordinary literals it may carry
/// negated atoms and one disjunctive disequality (some pair differs).
struct FoeRule {
  enum class Role { Plain, Rewritten, Chosen, Diffchoice };

  Role role = Role::Plain;
  std::string source_rule;
  Atom head;
  std::vector<Literal> body;
  std::vector<Atom> negated;
  std::vector<std::pair<std::string, std::string>> differ;
  size_t goal_index = 0;  // Diffchoice: which choice goal
};

struct FoeProgram {
  std::vector<FoeRule> rules;
  std::vector<Atom> facts;
  FDSet fds;
};

FoeProgram foe_transform(const Program& p);

std::string to_string(const FoeRule& r);
std::string print_foe(const FoeProgram& f);

}  // namespace gdlog
