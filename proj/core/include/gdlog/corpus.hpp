#pragma once

// The example programs, compiled into the library.

#include <span>
#include <string>
#include <string_view>

#include "gdlog/lang.hpp"

namespace gdlog {

struct CorpusEntry {
  std::string_view name;
  std::string_view source;
};

std::span<const CorpusEntry> corpus();

/// nullptr when unknown.
const CorpusEntry* find_corpus(std::string_view name);

/// Parsed program. Throws std::invalid_argument for an unknown name.
Program corpus_program(std::string_view name);

}  // namespace gdlog
