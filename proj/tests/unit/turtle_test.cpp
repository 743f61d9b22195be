#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "provio/errors.hpp"
#include "provio/turtle.hpp"
#include "test_support.hpp"

using namespace provio;
using provio::testing::random_graph;
using provio::testing::TempDir;

namespace {

const char* kPrefixes =
    "@prefix prov: <http://www.w3.org/ns/prov#> .\n"
    "@prefix provio: <http://provio.dev/ns#> .\n"
    "@prefix ns1: <http://provio.dev/ext#> .\n";

}  // namespace

TEST(Turtle, EmptyGraphIsPrefixBlock) {
  EXPECT_EQ(serialize_turtle(ProvGraph()), kPrefixes);
  EXPECT_TRUE(parse_turtle(kPrefixes).empty());
}

TEST(Turtle, RecordLayout) {
  ProvGraph g;
  AgentContext ctx{"Bob", "p", 0, ""};
  ProvNode act = make_node(SubClass::Write, "posix_write", ctx, 2);
  ProvNode file = make_node(SubClass::File, "out \"1\".h5", ctx);
  g.add_node(act);
  g.add_node(file);
  g.add_triple({act.guid, Predicate::Elapsed, Literal::integer(40)});
  g.add_triple({file.guid, Predicate::WasWrittenBy, act.guid});
  std::string expected = std::string(kPrefixes) +
                         "\n<out\\u0020\\u00221\\u0022.h5> prov:wasMemberOf prov:Entity ;\n"
                         "    provio:subClass \"File\" ;\n"
                         "    provio:wasWrittenBy <posix_write--b0.2> .\n"
                         "\n<posix_write--b0.2> prov:wasMemberOf prov:Activity ;\n"
                         "    provio:subClass \"Write\" ;\n"
                         "    provio:elapsed 40 .\n";
  EXPECT_EQ(serialize_turtle(g), expected);
  EXPECT_TRUE(parse_turtle(expected) == g);
}

TEST(Turtle, RoundTripRandomGraphs) {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 150; ++i) {
    ProvGraph g = random_graph(rng, {1 + rng() % 40, rng() % 200, 0, true});
    std::string text = serialize_turtle(g);
    ProvGraph back = parse_turtle(text);
    ASSERT_TRUE(back == g) << text;
    EXPECT_EQ(serialize_turtle(back), text);
  }
}

TEST(Turtle, ParserAcceptsLooserLayout) {
  std::string text = std::string(kPrefixes) +
                     "# comment\n"
                     "<a> prov:wasMemberOf prov:Entity; provio:subClass \"File\";\n"
                     "  ns1:hasValue 1, 2.5, \"x\\n\" .\n"
                     "<http://provio.dev/ns#x> <http://www.w3.org/ns/prov#wasMemberOf> "
                     "<http://provio.dev/ns#Extensible> ;\n"
                     "  provio:subClass \"Metrics\" .\n";
  ProvGraph g = parse_turtle(text);
  EXPECT_TRUE(g.contains({Guid("a"), Predicate::HasValue, Literal::decimal(2.5)}));
  EXPECT_TRUE(g.contains({Guid("a"), Predicate::HasValue, Literal::string("x\n")}));
  EXPECT_TRUE(g.contains({Guid("a"), Predicate::HasValue, Literal::integer(1)}));
  ASSERT_NE(g.find_node(Guid("http://provio.dev/ns#x")), nullptr);
}

TEST(Turtle, ErrorsCarryPositions) {
  auto error_of = [](const std::string& text) -> SyntaxError {
    try {
      parse_turtle(text);
    } catch (const SyntaxError& e) {
      return e;
    }
    ADD_FAILURE() << "no error for: " << text;
    return SyntaxError("", 0, 0);
  };
  auto e = error_of(std::string(kPrefixes) + "<a> foo:bar prov:Entity .\n");
  EXPECT_EQ(e.line(), 4u);
  EXPECT_EQ(e.column(), 5u);
  EXPECT_NE(e.message().find("foo"), std::string::npos);

  e = error_of(std::string(kPrefixes) + "<a> provio:wasEatenBy <b> .\n");
  EXPECT_EQ(e.line(), 4u);
  EXPECT_NE(e.message().find("wasEatenBy"), std::string::npos);

  e = error_of(std::string(kPrefixes) + "<a> prov:wasMemberOf prov:Entity ;\n  provio:subClass \"File\"\n");
  EXPECT_EQ(e.line(), 6u);  // runs into end of input

  e = error_of("<a> prov:wasMemberOf prov:Entity .\n");
  EXPECT_EQ(e.line(), 1u);

  e = error_of(std::string(kPrefixes) + "<a> provio:subClass \"unterminated .\n");
  EXPECT_EQ(e.line(), 4u);

  // Structurally fine but the node has no class.
  EXPECT_THROW(parse_turtle(std::string(kPrefixes) + "<a> ns1:hasValue 1 .\n"), SyntaxError);
}

TEST(Turtle, SubgraphFilesAndDirectoryMerge) {
  TempDir dir("ttl");
  EXPECT_EQ(subgraph_file_name("tdms2h5", 3), "prov_tdms2h5_3.ttl");
  EXPECT_TRUE(merge_directory(dir.path()).empty());

  std::mt19937_64 rng(9);
  ProvGraph whole = random_graph(rng, {20, 100, 0, true});
  std::vector<ProvGraph> parts(4);
  for (const auto& n : whole.nodes()) parts[rng() % 4].add_node(n);
  for (auto& p : parts) {
    for (const auto& n : whole.nodes()) p.add_node(n);
  }
  for (const auto& t : whole.triples()) parts[rng() % 4].add_triple(t);
  for (unsigned i = 0; i < parts.size(); ++i) {
    write_turtle_file(dir / subgraph_file_name("prog", i), parts[i]);
  }
  provio::testing::write_file(dir / "notes.txt", "ignored");
  EXPECT_EQ(list_subgraph_files(dir.path()).size(), 4u);
  EXPECT_TRUE(merge_directory(dir.path()) == whole);

  provio::testing::write_file(dir / "prov_bad_0.ttl", "<a> nonsense");
  try {
    merge_directory(dir.path());
    FAIL();
  } catch (const SyntaxError& e) {
    EXPECT_NE(std::string(e.what()).find("prov_bad_0.ttl"), std::string::npos);
  }
}

TEST(Turtle, FormatTerm) {
  EXPECT_EQ(format_term(Guid("a b")), "<a\\u0020b>");
  EXPECT_EQ(format_term(SuperClass::Activity), "prov:Activity");
  EXPECT_EQ(format_term(Literal::string("q\"")), "\"q\\\"\"");
  EXPECT_EQ(format_term(Literal::integer(256)), "256");
  EXPECT_EQ(format_term(Literal::decimal(0.5)), "0.5");
}
