#include "gdlog/storage.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace gdlog {
namespace {

constexpr uint32_t kEmpty = UINT32_MAX;

Tuple project_cols(TupleView t, const std::vector<size_t>& cols) {
  Tuple key;
  key.reserve(cols.size());
  for (size_t c : cols) key.push_back(t[c]);
  return key;
}

}  // namespace

// ---------------------------------------------------------------- Relation

void Relation::grow_slots() {
  const size_t cap = std::max<size_t>(16, slots_.size() * 2);
  slots_.assign(cap, kEmpty);
  const size_t mask = cap - 1;
  for (uint32_t r = 0; r < hashes_.size(); ++r) {
    size_t i = hashes_[r] & mask;
    while (slots_[i] != kEmpty) i = (i + 1) & mask;
    slots_[i] = r;
  }
}

std::optional<uint32_t> Relation::find_row(TupleView t) const {
  if (slots_.empty() || t.size() != arity_) return std::nullopt;
  const size_t h = hash_values(t), mask = slots_.size() - 1;
  for (size_t i = h & mask; slots_[i] != kEmpty; i = (i + 1) & mask) {
    const uint32_t r = slots_[i];
    if (hashes_[r] == h && std::equal(t.begin(), t.end(), row(r).begin())) return r;
  }
  return std::nullopt;
}

bool Relation::insert(TupleView t) {
  if (t.size() != arity_)
    throw std::invalid_argument("arity mismatch inserting into " + name_ + ": expected " +
                                std::to_string(arity_) + ", got " + std::to_string(t.size()));
  if ((hashes_.size() + 1) * 2 > slots_.size()) grow_slots();
  const size_t h = hash_values(t), mask = slots_.size() - 1;
  size_t i = h & mask;
  for (; slots_[i] != kEmpty; i = (i + 1) & mask) {
    const uint32_t r = slots_[i];
    if (hashes_[r] == h && std::equal(t.begin(), t.end(), row(r).begin())) return false;
  }
  const auto r = static_cast<uint32_t>(hashes_.size());
  cells_.insert(cells_.end(), t.begin(), t.end());
  hashes_.push_back(h);
  slots_[i] = r;
  for (auto& ix : indexes_) add_to_index(ix, r);
  return true;
}

void Relation::add_to_index(Index& ix, uint32_t r) {
  ix.buckets[project_cols(row(r), ix.cols)].push_back(r);
}

size_t Relation::ensure_index(const std::vector<size_t>& cols) {
  for (size_t i = 0; i < indexes_.size(); ++i)
    if (indexes_[i].cols == cols) return i;
  for (size_t c : cols)
    if (c >= arity_) throw std::out_of_range("index column out of range for " + name_);
  indexes_.push_back({cols, {}});
  for (uint32_t r = 0; r < size(); ++r) add_to_index(indexes_.back(), r);
  return indexes_.size() - 1;
}

std::span<const uint32_t> Relation::lookup(size_t index_id, TupleView key) const {
  const auto& b = indexes_[index_id].buckets;
  auto it = b.find(key);
  if (it == b.end()) return {};
  return it->second;
}

std::vector<Tuple> Relation::tuples() const {
  std::vector<Tuple> out;
  out.reserve(size());
  for (size_t r = 0; r < size(); ++r) out.emplace_back(row(r).begin(), row(r).end());
  return out;
}

// ---------------------------------------------------------------- conflict

std::vector<Tuple> conflict(const std::vector<FunctionalDependency>& fds,
                            std::span<const Tuple> s, std::span<const Tuple> against) {
  std::vector<std::unordered_set<Tuple, TupleHash, TupleEq>> keys(fds.size());
  for (size_t k = 0; k < fds.size(); ++k)
    for (const auto& t : against) keys[k].insert(project_cols(t, fds[k].lhs));
  std::vector<Tuple> out;
  for (const auto& t : s)
    for (size_t k = 0; k < fds.size(); ++k)
      if (keys[k].count(project_cols(t, fds[k].lhs))) {
        out.push_back(t);
        break;
      }
  return out;
}

// ---------------------------------------------------------------- ChosenTable

ChosenTable::ChosenTable(std::string name, size_t arity, std::vector<FunctionalDependency> fds)
    : rel_(std::move(name), arity), fds_(std::move(fds)) {
  for (const auto& fd : fds_) fd_index_.push_back(rel_.ensure_index(fd.lhs));
}

bool ChosenTable::conflicts(TupleView t, Counters* counters) const {
  if (counters) ++counters->conflict_checks;
  for (size_t k = 0; k < fds_.size(); ++k)
    if (!rel_.lookup(fd_index_[k], project_cols(t, fds_[k].lhs)).empty()) return true;
  return false;
}

void ChosenTable::insert(TupleView t) {
  if (conflicts(t))
    throw std::logic_error("chosen tuple " + format_tuple(t) + " violates an FD of " + rel_.name());
  rel_.insert(t);
}

bool ChosenTable::satisfies_fds() const {
  for (size_t r = 0; r < rel_.size(); ++r)
    for (size_t k = 0; k < fds_.size(); ++k)
      if (rel_.lookup(fd_index_[k], project_cols(rel_.row(r), fds_[k].lhs)).size() != 1)
        return false;
  return true;
}

// ---------------------------------------------------------------- ThetaTable

const char* to_string(ThetaEffect e) {
  switch (e) {
    case ThetaEffect::Added: return "added";
    case ThetaEffect::ReplacedWorse: return "replaced-worse";
    case ThetaEffect::RejectedWorse: return "rejected-worse";
    case ThetaEffect::RejectedDuplicate: return "rejected-duplicate";
  }
  return "?";
}

ThetaTable::ThetaTable(std::vector<FunctionalDependency> fds, size_t arity, ThetaOptions opts,
                       Counters* counters)
    : fds_(std::move(fds)),
      arity_(arity),
      opts_(opts),
      counters_(counters ? counters : &local_),
      fd_buckets_(fds_.size()),
      rng_(opts.seed) {
  if (opts_.mode != SelectMode::Arbitrary) {
    if (!opts_.cost_column || *opts_.cost_column >= arity_)
      throw std::invalid_argument("least/most theta table needs a cost column");
    if (opts_.unique_key_pruning) {
      std::vector<bool> in(arity_, false);
      for (const auto& fd : fds_)
        for (size_t c : fd.lhs) in[c] = true;
      for (size_t c = 0; c < arity_; ++c)
        if (in[c]) unique_cols_.push_back(c);
      use_unique_ = true;
    }
  }
}

Tuple ThetaTable::project(TupleView t, const std::vector<size_t>& cols) const {
  return project_cols(t, cols);
}

bool ThetaTable::better(const Tuple& a, const Tuple& b) const {
  if (opts_.mode != SelectMode::Arbitrary) {
    const Value& ca = a[*opts_.cost_column];
    const Value& cb = b[*opts_.cost_column];
    if (ca != cb) return opts_.mode == SelectMode::Least ? ca < cb : ca > cb;
  }
  return compare_tuples(a, b) < 0;
}

ThetaEffect ThetaTable::insert(TupleView t) {
  if (t.size() != arity_) throw std::invalid_argument("theta insert: arity mismatch");
  ++counters_->theta_inserts;
  if (by_tuple_.count(t)) return ThetaEffect::RejectedDuplicate;

  Tuple key;
  if (use_unique_) {
    key = project(t, unique_cols_);
    if (auto it = unique_.find(key); it != unique_.end()) {
      Entry& e = entries_[it->second];
      Tuple cand(t.begin(), t.end());
      if (!better(cand, e.t)) return ThetaEffect::RejectedWorse;
      // Same unique key implies same FD keys: update in place.
      by_tuple_.erase(e.t);
      e.t = std::move(cand);
      by_tuple_.emplace(e.t, it->second);
      if (e.heap_pos >= 0) heap_fix(it->second);
      return ThetaEffect::ReplacedWorse;
    }
  }

  const auto id = static_cast<uint32_t>(entries_.size());
  entries_.push_back({Tuple(t.begin(), t.end()), true, -1, static_cast<uint32_t>(live_.size())});
  const Tuple& stored = entries_.back().t;
  by_tuple_.emplace(stored, id);
  for (size_t k = 0; k < fds_.size(); ++k) fd_buckets_[k][project(stored, fds_[k].lhs)].push_back(id);
  if (use_unique_) unique_.emplace(std::move(key), id);
  live_.push_back(id);
  if (opts_.mode == SelectMode::Arbitrary && opts_.pick == PickPolicy::Fifo) fifo_.push_back(id);
  if (opts_.priority_queue &&
      (opts_.mode != SelectMode::Arbitrary || opts_.pick == PickPolicy::Lex))
    heap_push(id);
  return ThetaEffect::Added;
}

void ThetaTable::remove(uint32_t id) {
  Entry& e = entries_[id];
  e.alive = false;
  ++counters_->theta_deletes;
  by_tuple_.erase(e.t);
  if (use_unique_) {
    auto it = unique_.find(project(e.t, unique_cols_));
    if (it != unique_.end() && it->second == id) unique_.erase(it);
  }
  const uint32_t last = live_.back();
  live_[e.live_pos] = last;
  entries_[last].live_pos = e.live_pos;
  live_.pop_back();
  if (e.heap_pos >= 0) heap_erase(id);
  e.t.clear();
  e.t.shrink_to_fit();
}

std::optional<Tuple> ThetaTable::select_extreme() {
  if (live_.empty()) return std::nullopt;
  uint32_t id = 0;
  if (opts_.mode == SelectMode::Arbitrary && opts_.pick == PickPolicy::Fifo) {
    while (!entries_[fifo_.front()].alive) fifo_.pop_front();
    id = fifo_.front();
    fifo_.pop_front();
  } else if (opts_.mode == SelectMode::Arbitrary && opts_.pick == PickPolicy::Random) {
    id = live_[std::uniform_int_distribution<size_t>(0, live_.size() - 1)(rng_)];
  } else if (opts_.priority_queue) {
    id = heap_.front();
  } else {
    id = live_.front();
    for (uint32_t cand : live_) {
      ++counters_->select_scan_steps;
      if (better(entries_[cand].t, entries_[id].t)) id = cand;
    }
  }
  Tuple out = entries_[id].t;
  remove(id);
  return out;
}

size_t ThetaTable::purge_conflicting(TupleView delta) {
  size_t removed = 0;
  for (size_t k = 0; k < fds_.size(); ++k) {
    auto it = fd_buckets_[k].find(project(delta, fds_[k].lhs));
    if (it == fd_buckets_[k].end()) continue;
    const std::vector<uint32_t> ids = std::move(it->second);
    fd_buckets_[k].erase(it);
    for (uint32_t id : ids) {
      ++counters_->conflict_checks;
      if (entries_[id].alive) {
        remove(id);
        ++removed;
      }
    }
  }
  return removed;
}

std::vector<Tuple> ThetaTable::tuples() const {
  std::vector<Tuple> out;
  out.reserve(live_.size());
  for (uint32_t id : live_) out.push_back(entries_[id].t);
  std::sort(out.begin(), out.end(), [](const Tuple& a, const Tuple& b) { return compare_tuples(a, b) < 0; });
  return out;
}

bool ThetaTable::conflicts_with(const ChosenTable& chosen) const {
  for (uint32_t id : live_)
    if (chosen.conflicts(entries_[id].t)) return true;
  return false;
}

bool ThetaTable::heap_ok() const {
  for (size_t i = 0; i < heap_.size(); ++i) {
    const Entry& e = entries_[heap_[i]];
    if (!e.alive || e.heap_pos != static_cast<int32_t>(i)) return false;
    if (i > 0 && better(e.t, entries_[heap_[(i - 1) / 2]].t)) return false;
  }
  return true;
}

void ThetaTable::heap_swap(size_t a, size_t b) {
  std::swap(heap_[a], heap_[b]);
  entries_[heap_[a]].heap_pos = static_cast<int32_t>(a);
  entries_[heap_[b]].heap_pos = static_cast<int32_t>(b);
}

void ThetaTable::sift_up(size_t pos) {
  while (pos > 0) {
    const size_t parent = (pos - 1) / 2;
    ++counters_->pq_steps;
    if (!better(entries_[heap_[pos]].t, entries_[heap_[parent]].t)) break;
    heap_swap(pos, parent);
    pos = parent;
  }
}

void ThetaTable::sift_down(size_t pos) {
  for (;;) {
    size_t best = pos;
    for (size_t child : {2 * pos + 1, 2 * pos + 2}) {
      if (child >= heap_.size()) continue;
      ++counters_->pq_steps;
      if (better(entries_[heap_[child]].t, entries_[heap_[best]].t)) best = child;
    }
    if (best == pos) return;
    heap_swap(pos, best);
    pos = best;
  }
}

void ThetaTable::heap_push(uint32_t id) {
  ++counters_->pq_ops;
  heap_.push_back(id);
  entries_[id].heap_pos = static_cast<int32_t>(heap_.size() - 1);
  sift_up(heap_.size() - 1);
}

void ThetaTable::heap_erase(uint32_t id) {
  ++counters_->pq_ops;
  const auto pos = static_cast<size_t>(entries_[id].heap_pos);
  const size_t last = heap_.size() - 1;
  if (pos != last) heap_swap(pos, last);
  heap_.pop_back();
  entries_[id].heap_pos = -1;
  if (pos < heap_.size()) {
    const uint32_t moved = heap_[pos];
    sift_up(pos);
    sift_down(static_cast<size_t>(entries_[moved].heap_pos));
  }
}

void ThetaTable::heap_fix(uint32_t id) {
  ++counters_->pq_ops;
  const auto pos = static_cast<size_t>(entries_[id].heap_pos);
  sift_up(pos);
  sift_down(static_cast<size_t>(entries_[id].heap_pos));
}

}  // namespace gdlog
