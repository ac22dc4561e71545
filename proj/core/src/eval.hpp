#pragma once

// Compiled rule bodies and the differential join. Internal to the core library.

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gdlog/counters.hpp"
#include "gdlog/engine.hpp"
#include "gdlog/lang.hpp"
#include "gdlog/storage.hpp"

namespace gdlog::detail {

struct Arg {
  enum class Kind { Const, Slot, Ignore };
  Kind kind = Kind::Ignore;
  Value value;
  int slot = -1;
};

struct BodyAtom {
  std::string pred;
  Relation* rel = nullptr;
  std::vector<Arg> args;
};

struct BodyBuiltin {
  BuiltinOp op = BuiltinOp::Neq;
  Arg lhs;
  Arg rhs;
  int result = -1;
  std::string text;
};

struct Step {
  bool is_atom = true;
  size_t idx = 0;
  bool use_index = false;
  size_t index_id = 0;
  std::vector<Arg> key;                          // index column order
  std::vector<std::pair<size_t, int>> binds;     // column -> slot
  std::vector<std::pair<size_t, int>> checks;    // repeated variable within the atom
  bool result_bound = false;                     // Plus with an already bound result
};

struct Plan {
  std::vector<Step> steps;
};

struct Range {
  size_t lo = 0;
  size_t hi = 0;
};

using Resolver = std::function<Relation*(const Atom&)>;

/// A rule body compiled to slot-based join plans, one per choice of leading atom.
class CompiledBody {
 public:
  CompiledBody(std::string rule_id, const std::vector<Literal>& body, const Resolver& resolve);

  const std::string& rule_id() const { return rule_id_; }
  const std::vector<BodyAtom>& atoms() const { return atoms_; }
  size_t slot_count() const { return slot_count_; }
  int slot_of(const std::string& var) const;
  Arg arg_for(const Term& t) const;
  Tuple project(const std::vector<Arg>& args, const std::vector<Value>& slots) const;

  /// Plan that scans atom `lead` first (index 0 when the body has no atoms).
  const Plan& plan(size_t lead) const { return plans_[lead]; }

  /// Runs `plan` with per-atom row ranges, calling emit(slots) per match.
  /// `base_scan` (optional) counts rows visited for atoms flagged in `base_atoms`.
  void run(const Plan& plan, std::span<const Range> ranges, Counters& c,
           const std::function<void(const std::vector<Value>&)>& emit,
           const std::vector<bool>* base_atoms = nullptr);

 private:
  Plan build_plan(std::optional<size_t> lead);
  bool eval_builtin(const Step& s);
  void go(size_t k);

  std::string rule_id_;
  std::map<std::string, int> slots_by_name_;
  size_t slot_count_ = 0;
  std::vector<BodyAtom> atoms_;
  std::vector<BodyBuiltin> builtins_;
  std::vector<Plan> plans_;

  // State of the current run().
  const Plan* cur_plan_ = nullptr;
  std::span<const Range> cur_ranges_;
  Counters* cur_counters_ = nullptr;
  const std::function<void(const std::vector<Value>&)>* cur_emit_ = nullptr;
  const std::vector<bool>* cur_base_ = nullptr;
  std::vector<Value> slots_;
  std::vector<Tuple> key_buf_;
};

/// A compiled body plus per-atom watermarks: each call evaluates exactly the
/// instances that use at least one row added since the previous call.
class IncrementalBody {
 public:
  IncrementalBody(std::string rule_id, const std::vector<Literal>& body, const Resolver& resolve)
      : body_(std::move(rule_id), body, resolve), watermark_(body_.atoms().size(), 0) {}

  CompiledBody& body() { return body_; }
  const CompiledBody& body() const { return body_; }

  bool has_new_input() const;
  void step(bool semi_naive, Counters& c, const std::function<void(const std::vector<Value>&)>& emit,
            const std::vector<bool>* base_atoms = nullptr);

 private:
  CompiledBody body_;
  std::vector<size_t> watermark_;
  bool evaluated_ = false;
};

/// A derivation rule: head projection over an incremental body.
struct DerivationRule {
  std::string rule_id;
  Relation* head = nullptr;
  std::vector<Arg> head_args;
  std::unique_ptr<IncrementalBody> body;
};

DerivationRule make_derivation(const std::string& rule_id, const Atom& head,
                               const std::vector<Literal>& body, Interpretation& interp,
                               const Resolver& resolve);

/// Closes `rules` to a fixpoint. Returns the number of new tuples.
size_t close_rules(std::vector<DerivationRule>& rules, bool semi_naive, Counters& c);

}  // namespace gdlog::detail
