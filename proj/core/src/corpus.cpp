#include "gdlog/corpus.hpp"

#include <algorithm>
#include <stdexcept>

namespace gdlog {

namespace {

constexpr CorpusEntry kCorpus[] = {
#include "corpus_data.inc"
};

}  // namespace

std::span<const CorpusEntry> corpus() { return kCorpus; }

const CorpusEntry* find_corpus(std::string_view name) {
  auto it = std::find_if(std::begin(kCorpus), std::end(kCorpus),
                         [&](const CorpusEntry& e) { return e.name == name; });
  return it == std::end(kCorpus) ? nullptr : it;
}

Program corpus_program(std::string_view name) {
  const CorpusEntry* e = find_corpus(name);
  if (!e) throw std::invalid_argument("unknown example: " + std::string(name));
  return parse_program(e->source);
}

}  // namespace gdlog
