#include "gdlog/io.hpp"

#include <fstream>
#include <sstream>

#include "gdlog/lang.hpp"

namespace gdlog {

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  size_t start = 0;
  for (;;) {
    const size_t tab = line.find('\t', start);
    out.push_back(line.substr(start, tab == std::string_view::npos ? tab : tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return out;
}

std::string_view chomp(std::string_view line) {
  while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.remove_suffix(1);
  return line;
}

}  // namespace

std::vector<Tuple> parse_facts(std::string_view text, const std::string& origin) {
  std::vector<Tuple> rows;
  size_t line_no = 0;
  size_t arity = 0;
  std::istringstream in{std::string(text)};
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    const std::string_view line = chomp(raw);
    if (line.empty()) continue;
    Tuple t;
    for (auto field : split_tabs(line)) {
      auto v = parse_constant(field);
      if (!v)
        throw IoError(origin + ":" + std::to_string(line_no) + ": bad constant '" +
                      std::string(field) + "'");
      t.push_back(*v);
    }
    if (rows.empty()) arity = t.size();
    if (t.size() != arity)
      throw IoError(origin + ":" + std::to_string(line_no) + ": expected " + std::to_string(arity) +
                    " columns, found " + std::to_string(t.size()));
    rows.push_back(std::move(t));
  }
  return rows;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot read " + p.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::filesystem::path& p, std::string_view text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw IoError("cannot write " + p.string());
  out << text;
}

FactSet read_facts_dir(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw IoError(dir.string() + " is not a directory");
  FactSet out;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".facts") continue;
    const std::string pred = entry.path().stem().string();
    out[pred] = parse_facts(read_file(entry.path()), entry.path().string());
  }
  return out;
}

std::string format_row(TupleView t) { return format_tuple(t, "\t"); }

Model to_model(const FactSet& f) {
  Model m;
  for (const auto& [pred, rows] : f)
    for (const auto& t : rows) m[pred].insert(t);
  return m;
}

void write_facts_dir(const Model& m, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& [pred, rows] : m) {
    std::string text;
    for (const auto& t : rows) text += format_row(t) + "\n";
    write_file(dir / (pred + ".facts"), text);
  }
}

void write_facts_dir(const FactSet& f, const std::filesystem::path& dir) {
  write_facts_dir(to_model(f), dir);
}

std::string format_model(const Model& m) {
  std::string out;
  for (const auto& [pred, rows] : m) {
    if (rows.empty()) continue;
    out += "# " + pred + "/" + std::to_string(rows.begin()->size()) + "\n";
    for (const auto& t : rows) out += format_row(t) + "\n";
  }
  return out;
}

Model parse_model(std::string_view text) {
  Model m;
  std::string current;
  size_t line_no = 0;
  std::istringstream in{std::string(text)};
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    const std::string_view line = chomp(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      auto spec = line.substr(1);
      while (!spec.empty() && spec.front() == ' ') spec.remove_prefix(1);
      current = std::string(spec.substr(0, spec.find('/')));
      if (current.empty()) throw IoError("model:" + std::to_string(line_no) + ": empty predicate");
      m[current];
      continue;
    }
    if (current.empty())
      throw IoError("model:" + std::to_string(line_no) + ": row before any '# pred/arity' header");
    auto rows = parse_facts(line, "model:" + std::to_string(line_no));
    m[current].insert(rows.front());
  }
  std::erase_if(m, [](const auto& kv) { return kv.second.empty(); });
  return m;
}

}  // namespace gdlog
