#include "eval.hpp"

#include <algorithm>
#include <set>

namespace gdlog::detail {

CompiledBody::CompiledBody(std::string rule_id, const std::vector<Literal>& body,
                           const Resolver& resolve)
    : rule_id_(std::move(rule_id)) {
  auto slot = [&](const Term& t) {
    Arg a;
    if (!t.is_var()) {
      a.kind = Arg::Kind::Const;
      a.value = t.value;
    } else if (!t.is_anonymous()) {
      auto [it, fresh] = slots_by_name_.emplace(t.name, static_cast<int>(slot_count_));
      if (fresh) ++slot_count_;
      a.kind = Arg::Kind::Slot;
      a.slot = it->second;
    }
    return a;
  };
  for (const auto& lit : body) {
    if (const auto* atom = std::get_if<Atom>(&lit)) {
      BodyAtom ba{atom->predicate, resolve(*atom), {}};
      for (const auto& t : atom->args) ba.args.push_back(slot(t));
      atoms_.push_back(std::move(ba));
    } else {
      const auto& b = std::get<BuiltinGoal>(lit);
      BodyBuiltin bb{b.op, slot(b.lhs), slot(b.rhs), -1, to_string(b)};
      if (b.op == BuiltinOp::Plus) bb.result = slot(b.result).slot;
      builtins_.push_back(std::move(bb));
    }
  }
  slots_.resize(slot_count_);
  if (atoms_.empty()) {
    plans_.push_back(build_plan(std::nullopt));
  } else {
    for (size_t j = 0; j < atoms_.size(); ++j) plans_.push_back(build_plan(j));
  }
}

int CompiledBody::slot_of(const std::string& var) const {
  auto it = slots_by_name_.find(var);
  return it == slots_by_name_.end() ? -1 : it->second;
}

Arg CompiledBody::arg_for(const Term& t) const {
  Arg a;
  if (!t.is_var()) {
    a.kind = Arg::Kind::Const;
    a.value = t.value;
  } else {
    a.kind = Arg::Kind::Slot;
    a.slot = slot_of(t.name);
    if (a.slot < 0) throw EngineError(rule_id_, "variable " + t.name + " is not bound by the body");
  }
  return a;
}

Tuple CompiledBody::project(const std::vector<Arg>& args, const std::vector<Value>& slots) const {
  Tuple t;
  t.reserve(args.size());
  for (const auto& a : args) t.push_back(a.kind == Arg::Kind::Const ? a.value : slots[a.slot]);
  return t;
}

Plan CompiledBody::build_plan(std::optional<size_t> lead) {
  Plan plan;
  std::vector<bool> bound(slot_count_, false);
  std::vector<bool> atom_done(atoms_.size(), false), builtin_done(builtins_.size(), false);

  auto is_bound = [&](const Arg& a) {
    return a.kind == Arg::Kind::Const || (a.kind == Arg::Kind::Slot && bound[a.slot]);
  };
  auto emit_atom = [&](size_t j) {
    Step s;
    s.idx = j;
    std::vector<size_t> key_cols;
    std::vector<bool> seen_here(slot_count_, false);
    const auto& args = atoms_[j].args;
    for (size_t c = 0; c < args.size(); ++c) {
      const Arg& a = args[c];
      if (is_bound(a)) {
        key_cols.push_back(c);
        s.key.push_back(a);
      } else if (a.kind == Arg::Kind::Slot) {
        if (seen_here[a.slot]) {
          s.checks.emplace_back(c, a.slot);
        } else {
          seen_here[a.slot] = true;
          s.binds.emplace_back(c, a.slot);
        }
      }
    }
    if (!key_cols.empty()) {
      s.use_index = true;
      s.index_id = atoms_[j].rel->ensure_index(key_cols);
    }
    for (const auto& [c, sl] : s.binds) bound[sl] = true;
    atom_done[j] = true;
    plan.steps.push_back(std::move(s));
  };
  auto emit_ready_builtins = [&] {
    for (size_t b = 0; b < builtins_.size(); ++b) {
      if (builtin_done[b]) continue;
      const auto& bb = builtins_[b];
      if (!is_bound(bb.lhs) || !is_bound(bb.rhs)) continue;
      if (bb.op != BuiltinOp::Plus &&
          (bb.lhs.kind == Arg::Kind::Ignore || bb.rhs.kind == Arg::Kind::Ignore))
        continue;
      Step s;
      s.is_atom = false;
      s.idx = b;
      if (bb.op == BuiltinOp::Plus) {
        s.result_bound = bound[bb.result];
        bound[bb.result] = true;
      }
      builtin_done[b] = true;
      plan.steps.push_back(std::move(s));
    }
  };

  emit_ready_builtins();
  if (lead) {
    emit_atom(*lead);
    emit_ready_builtins();
  }
  for (;;) {
    std::optional<size_t> best;
    size_t best_bound = 0;
    for (size_t j = 0; j < atoms_.size(); ++j) {
      if (atom_done[j]) continue;
      size_t nb = 0;
      for (const auto& a : atoms_[j].args) nb += is_bound(a) ? 1 : 0;
      if (!best || nb > best_bound) {
        best = j;
        best_bound = nb;
      }
    }
    if (!best) break;
    emit_atom(*best);
    emit_ready_builtins();
  }
  for (size_t b = 0; b < builtins_.size(); ++b)
    if (!builtin_done[b])
      throw EngineError(rule_id_, "builtin " + builtins_[b].text + " has unbound operands");
  return plan;
}

bool CompiledBody::eval_builtin(const Step& s) {
  const auto& b = builtins_[s.idx];
  auto val = [&](const Arg& a) -> const Value& {
    return a.kind == Arg::Kind::Const ? a.value : slots_[a.slot];
  };
  const Value& l = val(b.lhs);
  const Value& r = val(b.rhs);
  switch (b.op) {
    case BuiltinOp::Neq: return l != r;
    case BuiltinOp::Lt: return l < r;
    case BuiltinOp::Le: return l <= r;
    case BuiltinOp::Gt: return l > r;
    case BuiltinOp::Ge: return l >= r;
    case BuiltinOp::Plus: {
      if (!l.is_int() || !r.is_int())
        throw EngineError(rule_id_, "non-integer operand in " + b.text);
      int64_t sum = 0;
      if (__builtin_add_overflow(l.as_int(), r.as_int(), &sum))
        throw EngineError(rule_id_, "integer overflow in " + b.text);
      if (s.result_bound) return slots_[b.result] == Value::integer(sum);
      slots_[b.result] = Value::integer(sum);
      return true;
    }
  }
  return false;
}

void CompiledBody::go(size_t k) {
  const auto& steps = cur_plan_->steps;
  if (k == steps.size()) {
    ++cur_counters_->rule_firings;
    (*cur_emit_)(slots_);
    return;
  }
  const Step& s = steps[k];
  if (!s.is_atom) {
    if (eval_builtin(s)) go(k + 1);
    return;
  }
  const Range rg = cur_ranges_[s.idx];
  if (rg.lo >= rg.hi) return;
  const Relation& rel = *atoms_[s.idx].rel;
  const bool base = cur_base_ && (*cur_base_)[s.idx];

  auto visit = [&](uint32_t r) {
    ++cur_counters_->tuples_scanned;
    if (base) ++cur_counters_->arcs_explored;
    const TupleView row = rel.row(r);
    for (const auto& [c, sl] : s.binds) slots_[sl] = row[c];
    for (const auto& [c, sl] : s.checks)
      if (row[c] != slots_[sl]) return;
    go(k + 1);
  };

  if (s.use_index) {
    Tuple& key = key_buf_[k];
    key.clear();
    for (const auto& a : s.key) key.push_back(a.kind == Arg::Kind::Const ? a.value : slots_[a.slot]);
    ++cur_counters_->index_probes;
    const auto ids = rel.lookup(s.index_id, key);
    for (auto it = std::lower_bound(ids.begin(), ids.end(), static_cast<uint32_t>(rg.lo));
         it != ids.end() && *it < rg.hi; ++it)
      visit(*it);
  } else {
    for (size_t r = rg.lo; r < rg.hi; ++r) visit(static_cast<uint32_t>(r));
  }
}

void CompiledBody::run(const Plan& plan, std::span<const Range> ranges, Counters& c,
                       const std::function<void(const std::vector<Value>&)>& emit,
                       const std::vector<bool>* base_atoms) {
  cur_plan_ = &plan;
  cur_ranges_ = ranges;
  cur_counters_ = &c;
  cur_emit_ = &emit;
  cur_base_ = base_atoms;
  key_buf_.resize(plan.steps.size());
  go(0);
}

bool IncrementalBody::has_new_input() const {
  if (!evaluated_) return true;
  const auto& atoms = body_.atoms();
  for (size_t j = 0; j < atoms.size(); ++j)
    if (atoms[j].rel->size() > watermark_[j]) return true;
  return false;
}

void IncrementalBody::step(bool semi_naive, Counters& c,
                           const std::function<void(const std::vector<Value>&)>& emit,
                           const std::vector<bool>* base_atoms) {
  const auto& atoms = body_.atoms();
  const size_t n = atoms.size();
  if (n == 0) {
    if (!evaluated_) body_.run(body_.plan(0), {}, c, emit, base_atoms);
    evaluated_ = true;
    return;
  }
  std::vector<size_t> sizes(n);
  for (size_t j = 0; j < n; ++j) sizes[j] = atoms[j].rel->size();
  std::vector<Range> ranges(n);
  if (!semi_naive) {
    for (size_t j = 0; j < n; ++j) ranges[j] = {0, sizes[j]};
    body_.run(body_.plan(0), ranges, c, emit, base_atoms);
  } else {
    // New instances = union over j of: atoms < j old, atom j new, atoms > j all.
    for (size_t j = 0; j < n; ++j) {
      if (sizes[j] <= watermark_[j]) continue;
      bool empty = false;
      for (size_t i = 0; i < n; ++i) {
        ranges[i] = i < j ? Range{0, watermark_[i]} : i == j ? Range{watermark_[j], sizes[j]}
                                                             : Range{0, sizes[i]};
        empty = empty || ranges[i].lo >= ranges[i].hi;
      }
      if (!empty) body_.run(body_.plan(j), ranges, c, emit, base_atoms);
    }
  }
  watermark_ = std::move(sizes);
  evaluated_ = true;
}

DerivationRule make_derivation(const std::string& rule_id, const Atom& head,
                               const std::vector<Literal>& body, Interpretation& interp,
                               const Resolver& resolve) {
  DerivationRule d;
  d.rule_id = rule_id;
  d.head = &interp.get_or_create(head.predicate, head.arity());
  d.body = std::make_unique<IncrementalBody>(rule_id, body, resolve);
  for (const auto& t : head.args) d.head_args.push_back(d.body->body().arg_for(t));
  return d;
}

size_t close_rules(std::vector<DerivationRule>& rules, bool semi_naive, Counters& c) {
  size_t added = 0;
  std::vector<Tuple> buffer;
  for (;;) {
    ++c.closure_rounds;
    size_t round_added = 0;
    for (auto& r : rules) {
      if (semi_naive && !r.body->has_new_input()) continue;
      buffer.clear();
      const auto& body = r.body->body();
      r.body->step(semi_naive, c, [&](const std::vector<Value>& slots) {
        buffer.push_back(body.project(r.head_args, slots));
      });
      for (const auto& t : buffer)
        if (r.head->insert(t)) ++round_added;
    }
    added += round_added;
    if (round_added == 0) {
      bool pending = false;
      if (semi_naive)
        for (const auto& r : rules) pending = pending || r.body->has_new_input();
      if (!pending) break;
    }
  }
  return added;
}

}  // namespace gdlog::detail
