#pragma once

// Fact files and model text.
//
// A facts directory holds one `<pred>.facts` file per predicate: one tuple per
// line, columns separated by tabs, integers unquoted, symbols bare or
// single-quoted. A model is written as blocks:
//
//   # st/3
//   a	b	1
//   b	c	2

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "gdlog/model.hpp"

namespace gdlog {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses the rows of one facts file. `origin` prefixes error messages.
std::vector<Tuple> parse_facts(std::string_view text, const std::string& origin = "facts");

/// Reads every `*.facts` file of a directory.
FactSet read_facts_dir(const std::filesystem::path& dir);

std::string format_row(TupleView t);

/// Writes `<pred>.facts` for every predicate of m, rows sorted.
void write_facts_dir(const Model& m, const std::filesystem::path& dir);
void write_facts_dir(const FactSet& f, const std::filesystem::path& dir);

std::string format_model(const Model& m);
Model parse_model(std::string_view text);

std::string read_file(const std::filesystem::path& p);
void write_file(const std::filesystem::path& p, std::string_view text);

Model to_model(const FactSet& f);

}  // namespace gdlog
