#include "gdlog/value.hpp"

#include <cctype>
#include <deque>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

namespace gdlog {
namespace {

class SymbolTable {
 public:
  static SymbolTable& instance() {
    static SymbolTable table;
    return table;
  }

  uint32_t intern(std::string_view text) {
    {
      std::shared_lock lock(mu_);
      if (auto it = ids_.find(text); it != ids_.end()) return it->second;
    }
    std::unique_lock lock(mu_);
    if (auto it = ids_.find(text); it != ids_.end()) return it->second;
    const auto id = static_cast<uint32_t>(texts_.size());
    texts_.emplace_back(text);
    ids_.emplace(texts_.back(), id);
    return id;
  }

  const std::string& text(uint32_t id) {
    std::shared_lock lock(mu_);
    return texts_[id];
  }

 private:
  struct Hash {
    using is_transparent = void;
    size_t operator()(std::string_view s) const { return std::hash<std::string_view>{}(s); }
  };

  std::shared_mutex mu_;
  std::deque<std::string> texts_;
  std::unordered_map<std::string, uint32_t, Hash, std::equal_to<>> ids_;
};

bool is_bare_symbol(std::string_view s) {
  if (s.empty() || !std::islower(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

}  // namespace

Value Value::symbol(std::string_view text) {
  return Value(static_cast<int64_t>(SymbolTable::instance().intern(text)), true);
}

const std::string& Value::text() const { return SymbolTable::instance().text(symbol_id()); }

std::string Value::to_string() const {
  return sym_ ? quote_symbol(text()) : std::to_string(bits_);
}

std::strong_ordering operator<=>(const Value& a, const Value& b) {
  if (a.sym_ != b.sym_) return a.sym_ ? std::strong_ordering::greater : std::strong_ordering::less;
  if (!a.sym_ || a.bits_ == b.bits_) return a.bits_ <=> b.bits_;
  const int c = a.text().compare(b.text());
  return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
}

std::string quote_symbol(std::string_view text) {
  if (is_bare_symbol(text)) return std::string(text);
  std::string out = "'";
  for (char c : text) {
    if (c == '\'' || c == '\\') out += '\\';
    out += c;
  }
  out += '\'';
  return out;
}

std::string format_tuple(TupleView t, std::string_view sep) {
  std::string out;
  for (size_t i = 0; i < t.size(); ++i) {
    if (i) out += sep;
    out += t[i].to_string();
  }
  return out;
}

}  // namespace gdlog
