#include <gtest/gtest.h>

#include <filesystem>

#include "gdlog/io.hpp"
#include "test_util.hpp"

namespace gdlog {
namespace {

using namespace test;

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("gdlog_io_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

TEST(Facts, ParsesTabSeparatedRows) {
  const auto rows = parse_facts("a\tb\t1\nb\tc\t-2\n\n");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0], (Tuple{S("a"), S("b"), I(1)}));
  EXPECT_EQ(rows[1], (Tuple{S("b"), S("c"), I(-2)}));
}

TEST(Facts, QuotedSymbols) {
  const auto rows = parse_facts("'New York'\t'Bob'\r\n");
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0], (Tuple{S("New York"), S("Bob")}));
}

TEST(Facts, ArityMismatchNamesTheLine) {
  try {
    parse_facts("a\tb\nc\n", "g.facts");
    FAIL();
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("g.facts:2"), std::string::npos);
  }
}

TEST(Facts, BadConstant) { EXPECT_THROW(parse_facts("'open\n"), IoError); }

TEST(Facts, DirectoryRoundTrip) {
  const auto dir = scratch("roundtrip");
  FactSet f = toy_graph();
  f["who"] = {{S("New York")}, {S("Bob")}, {I(7)}};
  write_facts_dir(f, dir);
  EXPECT_TRUE(std::filesystem::exists(dir / "g.facts"));
  EXPECT_EQ(to_model(read_facts_dir(dir)), to_model(f));
  std::filesystem::remove_all(dir);
}

TEST(Facts, MissingDirectory) { EXPECT_THROW(read_facts_dir(scratch("absent")), IoError); }

TEST(ModelText, RoundTrip) {
  Model m;
  m["st"] = rows({{S("a"), S("b"), I(1)}, {S("b"), S("c"), I(2)}});
  m["q"] = rows({{S("Mixed Case")}});
  const std::string text = format_model(m);
  EXPECT_NE(text.find("# st/3\n"), std::string::npos);
  EXPECT_EQ(parse_model(text), m);
}

TEST(ModelText, RowBeforeHeaderIsAnError) { EXPECT_THROW(parse_model("a\tb\n"), IoError); }

}  // namespace
}  // namespace gdlog
