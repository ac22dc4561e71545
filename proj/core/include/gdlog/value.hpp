#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gdlog {

/// A ground constant: a 64-bit signed integer or an interned symbol.
///
/// Integers order before symbols; integers compare numerically and symbols
/// compare by their text, so the order is independent of interning order.
class Value {
 public:
  constexpr Value() = default;

  static constexpr Value integer(int64_t v) { return Value(v, false); }
  static Value symbol(std::string_view text);

  bool is_int() const { return !sym_; }
  bool is_symbol() const { return sym_; }
  int64_t as_int() const { return bits_; }
  uint32_t symbol_id() const { return static_cast<uint32_t>(bits_); }
  const std::string& text() const;

  std::string to_string() const;

  friend bool operator==(const Value& a, const Value& b) {
    return a.bits_ == b.bits_ && a.sym_ == b.sym_;
  }
  friend std::strong_ordering operator<=>(const Value& a, const Value& b);

  size_t hash() const {
    uint64_t x = static_cast<uint64_t>(bits_) ^ (sym_ ? 0x9e3779b97f4a7c15ULL : 0);
    x ^= x >> 33;
    x *= 0xff51afd7ed558ccdULL;
    x ^= x >> 33;
    return static_cast<size_t>(x);
  }

 private:
  constexpr Value(int64_t bits, bool sym) : bits_(bits), sym_(sym) {}

  int64_t bits_ = 0;
  bool sym_ = false;
};

using Tuple = std::vector<Value>;
using TupleView = std::span<const Value>;

inline size_t hash_values(TupleView vs) {
  size_t h = 0xcbf29ce484222325ULL ^ vs.size();
  for (const Value& v : vs) h = (h ^ v.hash()) * 0x100000001b3ULL + (h >> 29);
  return h;
}

/// Lexicographic tuple order over Value order.
inline std::strong_ordering compare_tuples(TupleView a, TupleView b) {
  const size_t n = std::min(a.size(), b.size());
  for (size_t i = 0; i < n; ++i)
    if (auto c = a[i] <=> b[i]; c != 0) return c;
  return a.size() <=> b.size();
}

/// Transparent hash/equality so maps keyed by Tuple can be probed with a span.
struct TupleHash {
  using is_transparent = void;
  size_t operator()(const Tuple& t) const { return hash_values(t); }
  size_t operator()(TupleView t) const { return hash_values(t); }
};

struct TupleEq {
  using is_transparent = void;
  template <class A, class B>
  bool operator()(const A& a, const B& b) const {
    return std::equal(std::begin(a), std::end(a), std::begin(b), std::end(b));
  }
};

/// Quotes a symbol for output when it is not a bare lowercase identifier.
std::string quote_symbol(std::string_view text);

std::string format_tuple(TupleView t, std::string_view sep = ",");

}  // namespace gdlog

template <>
struct std::hash<gdlog::Value> {
  size_t operator()(const gdlog::Value& v) const { return v.hash(); }
};
