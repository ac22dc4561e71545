#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "gdlog/analysis.hpp"
#include "gdlog/counters.hpp"
#include "gdlog/value.hpp"

namespace gdlog {

/// Append-only set of fixed-arity tuples with hash indexes on column subsets.
/// Row ids are dense and increase in insertion order, so a row range
/// [lo, hi) is a snapshot of the relation at some earlier point.
class Relation {
 public:
  Relation() = default;
  Relation(std::string name, size_t arity) : name_(std::move(name)), arity_(arity) {}

  const std::string& name() const { return name_; }
  size_t arity() const { return arity_; }
  size_t size() const { return hashes_.size(); }
  bool empty() const { return size() == 0; }

  /// Returns false iff the tuple was already present. Throws
  /// std::invalid_argument on arity mismatch.
  bool insert(TupleView t);
  bool contains(TupleView t) const { return find_row(t).has_value(); }
  std::optional<uint32_t> find_row(TupleView t) const;

  TupleView row(size_t i) const { return {cells_.data() + i * arity_, arity_}; }

  /// Index on the given columns; reuses an existing one. Returns its id.
  size_t ensure_index(const std::vector<size_t>& cols);
  const std::vector<size_t>& index_columns(size_t id) const { return indexes_[id].cols; }
  size_t index_count() const { return indexes_.size(); }

  /// Row ids (ascending) whose projection on the index columns equals key.
  std::span<const uint32_t> lookup(size_t index_id, TupleView key) const;

  std::vector<Tuple> tuples() const;

 private:
  struct Index {
    std::vector<size_t> cols;
    std::unordered_map<Tuple, std::vector<uint32_t>, TupleHash, TupleEq> buckets;
  };

  void add_to_index(Index& ix, uint32_t row);
  void grow_slots();

  std::string name_;
  size_t arity_ = 0;
  std::vector<Value> cells_;
  std::vector<size_t> hashes_;
  std::vector<uint32_t> slots_;  // open addressing over row ids
  std::vector<Index> indexes_;
};

/// Tuples of `s` agreeing with some tuple of `against` on the left side of at
/// least one FD. Linear in |s| + |against|.
std::vector<Tuple> conflict(const std::vector<FunctionalDependency>& fds,
                            std::span<const Tuple> s, std::span<const Tuple> against);

/// The chosen_r table: one hash index per FD left side. Each left-side key maps
/// to at most one tuple.
class ChosenTable {
 public:
  ChosenTable(std::string name, size_t arity, std::vector<FunctionalDependency> fds);

  const Relation& relation() const { return rel_; }
  Relation& relation() { return rel_; }
  const std::vector<FunctionalDependency>& fds() const { return fds_; }

  /// True iff t agrees with a chosen tuple on some FD left side.
  bool conflicts(TupleView t, Counters* counters = nullptr) const;
  /// Inserts a tuple that does not conflict. Throws std::logic_error otherwise.
  void insert(TupleView t);
  /// Audit: every FD holds and every left-side key is unique.
  bool satisfies_fds() const;

 private:
  Relation rel_;
  std::vector<FunctionalDependency> fds_;
  std::vector<size_t> fd_index_;
};

enum class SelectMode { Arbitrary, Least, Most };
enum class PickPolicy { Lex, Fifo, Random };
enum class ThetaEffect { Added, ReplacedWorse, RejectedWorse, RejectedDuplicate };

const char* to_string(ThetaEffect e);

struct ThetaOptions {
  SelectMode mode = SelectMode::Arbitrary;
  std::optional<size_t> cost_column;  // required for Least/Most
  bool priority_queue = false;
  /// Least/Most only: the union of the FD left sides is a unique key and only
  /// the best tuple per key value is kept.
  bool unique_key_pruning = true;
  PickPolicy pick = PickPolicy::Lex;  // Arbitrary mode only
  uint64_t seed = 0;
};

/// The theta_r candidate table. Every live tuple is indexed by each FD left
/// side so conflicting tuples can be removed in time proportional to their
/// number. Extreme selection uses a binary heap with per-entry positions when
/// `priority_queue` is set, a linear scan otherwise.
///
/// Ties are broken by lexicographic tuple order, so heap and scan agree.
class ThetaTable {
 public:
  ThetaTable(std::vector<FunctionalDependency> fds, size_t arity, ThetaOptions opts,
             Counters* counters = nullptr);

  ThetaEffect insert(TupleView t);
  /// Removes and returns an extreme tuple (or the pick-policy choice in
  /// Arbitrary mode). nullopt iff empty.
  std::optional<Tuple> select_extreme();
  /// Removes every tuple agreeing with delta on some FD left side, delta included.
  size_t purge_conflicting(TupleView delta);

  bool contains(TupleView t) const { return by_tuple_.count(t) > 0; }
  size_t size() const { return live_.size(); }
  bool empty() const { return live_.empty(); }
  std::vector<Tuple> tuples() const;  // sorted
  const ThetaOptions& options() const { return opts_; }

  /// Structural audit: heap order and position back-pointers.
  bool heap_ok() const;
  /// True iff some live tuple conflicts with the chosen table.
  bool conflicts_with(const ChosenTable& chosen) const;

 private:
  struct Entry {
    Tuple t;
    bool alive = false;
    int32_t heap_pos = -1;
    uint32_t live_pos = 0;
  };

  Tuple project(TupleView t, const std::vector<size_t>& cols) const;
  bool better(const Tuple& a, const Tuple& b) const;  // a should be selected before b
  void remove(uint32_t id);

  void heap_push(uint32_t id);
  void heap_erase(uint32_t id);
  void heap_fix(uint32_t id);
  void sift_up(size_t pos);
  void sift_down(size_t pos);
  void heap_swap(size_t a, size_t b);

  std::vector<FunctionalDependency> fds_;
  size_t arity_;
  ThetaOptions opts_;
  Counters* counters_;
  Counters local_;
  std::vector<size_t> unique_cols_;
  bool use_unique_ = false;

  std::vector<Entry> entries_;
  std::unordered_map<Tuple, uint32_t, TupleHash, TupleEq> by_tuple_;
  std::vector<std::unordered_map<Tuple, std::vector<uint32_t>, TupleHash, TupleEq>> fd_buckets_;
  std::unordered_map<Tuple, uint32_t, TupleHash, TupleEq> unique_;
  std::vector<uint32_t> heap_;
  std::vector<uint32_t> live_;
  std::deque<uint32_t> fifo_;
  std::mt19937_64 rng_;
};

}  // namespace gdlog
