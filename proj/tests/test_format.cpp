#include <doctest.h>

#include "dyck/format.hpp"
#include "dyck/gen.hpp"
#include "dyck/reductions.hpp"
#include "test_support.hpp"

using namespace dyck;

namespace {

ErrorKind kind_of(const std::string& text) {
  try {
    read_graph(text);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::ParseError;
}

} // namespace

TEST_CASE("read_graph parses a minimal general file") {
  LabeledGraph g = read_graph("dyckgraph 1\nk 1\nmode general\nedge a b o1\n");
  CHECK(g.node_count() == 2);
  CHECK(g.edge_count() == 1);
  CHECK(g.alphabet_size() == 1);
  CHECK(g.mode() == GraphMode::General);
  CHECK(g.has_edge(g.node_or_throw("a"), g.node_or_throw("b"), Label::open(1)));
}

TEST_CASE("bidirected mode synthesizes mirrors") {
  LabeledGraph g = read_graph("dyckgraph 1\nk 1\nmode bidirected\nedge a b o1\n");
  CHECK(g.edge_count() == 2);
  CHECK(g.has_edge(g.node_or_throw("a"), g.node_or_throw("b"), Label::open(1)));
  CHECK(g.has_edge(g.node_or_throw("b"), g.node_or_throw("a"), Label::close(1)));
}

TEST_CASE("label index beyond k is rejected") {
  CHECK(kind_of("dyckgraph 1\nk 2\nmode general\nedge a b o9\n") ==
        ErrorKind::BadLabelIndex);
}

TEST_CASE("parse errors carry line numbers") {
  try {
    read_graph("dyckgraph 1\nk 2\nmode general\nedge a b\n");
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ParseError);
    CHECK(std::string(e.what()).find("line 4") != std::string::npos);
  }
}

TEST_CASE("header, k and mode are required") {
  CHECK(kind_of("k 1\nmode general\n") == ErrorKind::ParseError);
  CHECK(kind_of("dyckgraph 1\nmode general\n") == ErrorKind::ParseError);
  CHECK(kind_of("dyckgraph 1\nk 1\n") == ErrorKind::ParseError);
}

TEST_CASE("duplicate edges are rejected with the offending line") {
  CHECK(kind_of("dyckgraph 1\nk 1\nmode general\nedge a b o1\nedge a b o1\n") ==
        ErrorKind::DuplicateEdge);
  CHECK(kind_of("dyckgraph 1\nk 2\nmode general\nedge a b o1\nedge a b o2\n") ==
        ErrorKind::DuplicateEdge);
}

TEST_CASE("comments, node declarations and method tags parse") {
  LabeledGraph g = read_graph(
      "# a comment\n"
      "dyckgraph 1\n"
      "k 1\n"
      "mode general\n"
      "node lonely\n"
      "node tagged method=3\n"
      "edge tagged lonely eps  # trailing comment\n");
  CHECK(g.node_count() == 2);
  CHECK(g.method_of(g.node_or_throw("tagged")) == 3);
  CHECK(g.method_of(g.node_or_throw("lonely")) == -1);
}

TEST_CASE("write/read round trip on fixtures and generated graphs") {
  for (const char* text : {test::kFanoutGraphText, test::kCallbackGraphText}) {
    LabeledGraph g = read_graph(text);
    CHECK(test::same_graph(g, read_graph(write_graph(g))));
  }
  for (uint64_t seed = 1; seed <= 25; seed++) {
    BidirectedGenSpec spec;
    spec.n = 14;
    spec.m = 30;
    spec.k = 3;
    spec.seed = seed;
    LabeledGraph g = gen_bidirected(spec);
    CHECK(test::same_graph(g, read_graph(write_graph(g))));

    ProgramValidGenSpec pv;
    pv.seed = seed;
    LabeledGraph p = gen_program_valid(pv);
    CHECK(test::same_graph(p, read_graph(write_graph(p))));

    LabeledGraph kt = gen_ktree_labeled({12, 2, 0.2, seed});
    CHECK(test::same_graph(kt, read_graph(write_graph(kt))));

    LabeledGraph ug = union_graph(gen_union_sequence({10, 12, seed}));
    CHECK(test::same_graph(ug, read_graph(write_graph(ug))));
  }
}
