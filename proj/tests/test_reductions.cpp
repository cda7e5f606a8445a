#include <doctest.h>

#include <optional>
#include <string>

#include "dyck/bidirected.hpp"
#include "dyck/gen.hpp"
#include "dyck/oracle.hpp"
#include "dyck/reductions.hpp"

using namespace dyck;

namespace {

const char* kAnBnGrammar =
    "cnf 1\n"
    "start S\n"
    "rule S -> A B\n"
    "rule S -> T B\n"
    "rule T -> A S\n"
    "rule A -> 'a'\n"
    "rule B -> 'b'\n";

// Checks that a closing-label sequence spells a pre-order derivation of s:
// each nonterminal expansion closes its head's parenthesis, each consumed
// character closes its terminal's parenthesis, children left to right.
struct PreorderChecker {
  const CnfGrammar& g;
  const std::vector<int>& seq;  // parenthesis indices of closing labels
  const std::string& s;

  // Tries to derive nonterminal `nt` starting at seq[pos] / s[spos];
  // returns {pos', spos'} on success.
  std::optional<std::pair<int, int>> derive(int nt, int pos, int spos) const {
    if (pos >= static_cast<int>(seq.size())) return std::nullopt;
    if (seq[pos] != g.paren_of_nonterminal(nt)) return std::nullopt;
    for (const auto& rule : g.rules()) {
      if (rule.head != nt) continue;
      if (rule.terminal) {
        if (spos < static_cast<int>(s.size()) &&
            g.terminal_index(s[spos]) == rule.a &&
            pos + 1 < static_cast<int>(seq.size()) &&
            seq[pos + 1] == g.paren_of_terminal(rule.a))
          return std::make_pair(pos + 2, spos + 1);
      } else {
        if (auto left = derive(rule.a, pos + 1, spos))
          if (auto right = derive(rule.b, left->first, left->second))
            return right;
      }
    }
    return std::nullopt;
  }

  bool matches() const {
    auto result = derive(g.start(), 0, 0);
    return result && result->first == static_cast<int>(seq.size()) &&
           result->second == static_cast<int>(s.size());
  }
};

} // namespace

TEST_CASE("union sequences validate their operations") {
  CHECK_NOTHROW(UnionSequence(3, {{0, 1}, {1, 2}}));
  CHECK_THROWS_AS(UnionSequence(3, {{0, 1}, {1, 0}}), Error);
  CHECK_THROWS_AS(UnionSequence(2, {{0, 5}}), Error);
}

TEST_CASE("empty union sequence yields isolated singletons") {
  LabeledGraph g = union_graph(UnionSequence(4, {}));
  CHECK(g.node_count() == 4);
  CHECK(g.edge_count() == 0);
  auto [partition, stats] = bidirected_reach(g);
  CHECK(partition.class_count() == 4);
}

TEST_CASE("single union merges exactly its operands") {
  LabeledGraph g = union_graph(UnionSequence(2, {{0, 1}}, {"a", "b"}));
  auto partition = dsccs_from_closure(dyck_closure(g));
  NodeId a = g.node_or_throw("a"), b = g.node_or_throw("b"),
         z1 = g.node_or_throw("z1");
  CHECK(partition.same_class(a, b));
  CHECK_FALSE(partition.same_class(a, z1));
}

TEST_CASE("union-find sets equal union-graph DSCCs over random sequences") {
  for (uint64_t seed = 1; seed <= 60; seed++) {
    UnionSeqGenSpec spec;
    spec.universe = 5 + static_cast<int>(seed % 46);
    spec.ops = static_cast<int>(seed % 80);
    spec.seed = seed;
    UnionSequence seq = gen_union_sequence(spec);
    std::vector<int> sets = seq.final_sets();
    LabeledGraph g = union_graph(seq);
    auto [partition, stats] = bidirected_reach(g);
    for (int a = 0; a < seq.universe(); a++)
      for (int b = 0; b < seq.universe(); b++)
        REQUIRE((sets[a] == sets[b]) ==
                partition.same_class(g.node_or_throw(seq.element_name(a)),
                                     g.node_or_throw(seq.element_name(b))));
  }
}

TEST_CASE("gadget graph shape for the four-rule grammar") {
  // S -> T B, T -> A S, A -> 'a', B -> 'b': two binary rules bring two
  // intermediate nodes, so 4 rule nodes + x + y + 2 = 8 nodes.
  CnfGrammar g = CnfGrammar::parse(
      "cnf 1\nstart S\nrule S -> T B\nrule T -> A S\nrule A -> 'a'\nrule B -> 'b'\n");
  LabeledGraph gg = gadget_graph(g);
  CHECK(gg.node_count() == 8);
  CHECK(gg.edge_count() == 4 + 2 * 2 + 2);
  NodeId x = gg.node_or_throw("x");
  CHECK(gg.out(x).size() == 4);
  for (const Edge& e : gg.out(x)) CHECK(e.label.is_close());
}

TEST_CASE("one-rule gadgets") {
  CnfGrammar term = CnfGrammar::parse("cnf 1\nstart A\nrule A -> 'a'\n");
  LabeledGraph gt = gadget_graph(term);
  CHECK(gt.node_count() == 3);  // x, r1, y
  CHECK(gt.edge_count() == 2);

  CnfGrammar bin = CnfGrammar::parse("cnf 1\nstart A\nrule A -> A A\n");
  LabeledGraph gb = gadget_graph(bin);
  CHECK(gb.node_count() == 4);  // x, r1, m1, y
  CHECK(gb.edge_count() == 3);
}

TEST_CASE("parse graph shape") {
  CnfGrammar g = CnfGrammar::parse(kAnBnGrammar);
  ParseGraph pg = parse_graph(g, "ab");
  // Line v,u0,u1,u2 plus two gadget copies; the corrected grammar has 5
  // rules, 3 of them binary: x,y + 5 rule nodes + 3 intermediates = 10.
  CHECK(pg.graph.node_count() == 4 + 2 * 10);
  CHECK(pg.graph.name(pg.source) == "v");
  CHECK(pg.graph.name(pg.sink) == "u2");

  ParseGraph single = parse_graph(g, "a");
  CHECK(single.graph.node_count() == 3 + 10);

  CHECK_THROWS_AS(parse_graph(g, "ax"), Error);
  try {
    parse_graph(g, "xq");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnknownTerminal);
  }
}

TEST_CASE("cky hand checks on the anbn grammar") {
  CnfGrammar g = CnfGrammar::parse(kAnBnGrammar);
  CHECK(cky(g, "ab"));
  CHECK(cky(g, "aabb"));
  CHECK_FALSE(cky(g, "ba"));
  CHECK_FALSE(cky(g, "aab"));
  CHECK_FALSE(cky(g, ""));
}

TEST_CASE("dyck parsing equals cky on the anbn grammar") {
  CnfGrammar g = CnfGrammar::parse(kAnBnGrammar);
  CHECK(cfl_parse_via_dyck(g, "ab"));
  CHECK(cfl_parse_via_dyck(g, "aabb"));
  CHECK_FALSE(cfl_parse_via_dyck(g, "ba"));
  CHECK_FALSE(cfl_parse_via_dyck(g, ""));

  // All strings of length <= 6 over {a,b}.
  for (int len = 0; len <= 6; len++)
    for (int bits = 0; bits < (1 << len); bits++) {
      std::string s;
      for (int i = 0; i < len; i++) s.push_back((bits >> i) & 1 ? 'b' : 'a');
      REQUIRE(cfl_parse_via_dyck(g, s) == cky(g, s));
    }
}

TEST_CASE("dyck parsing equals cky on random grammars") {
  for (uint64_t seed = 1; seed <= 3; seed++) {
    CnfGenSpec spec;
    spec.nonterminals = 3 + static_cast<int>(seed % 3);
    spec.terminals = 2;
    spec.seed = seed;
    CnfGrammar g = gen_cnf(spec);
    for (int len = 0; len <= 5; len++)
      for (int bits = 0; bits < (1 << len); bits++) {
        std::string s;
        for (int i = 0; i < len; i++) s.push_back((bits >> i) & 1 ? 'b' : 'a');
        REQUIRE(cfl_parse_via_dyck(g, s) == cky(g, s));
      }
  }
}

TEST_CASE("witness paths spell pre-order derivations") {
  CnfGrammar g = CnfGrammar::parse(kAnBnGrammar);
  for (const std::string s : {"ab", "aabb"}) {
    ParseGraph pg = parse_graph(g, s);
    auto rel = dyck_closure(pg.graph, /*record_derivations=*/true);
    REQUIRE(rel.s_pair(pg.source, pg.sink));
    std::vector<int> closings;
    for (const Edge& e : rel.witness(pg.source, pg.sink))
      if (e.label.is_close()) closings.push_back(e.label.index);
    PreorderChecker checker{g, closings, s};
    CHECK(checker.matches());
  }
}

TEST_CASE("grammar files round trip") {
  CnfGrammar g = CnfGrammar::parse(kAnBnGrammar);
  CnfGrammar reparsed = CnfGrammar::parse(g.write());
  CHECK(g.write() == reparsed.write());
  CHECK_THROWS_AS(CnfGrammar::parse("cnf 1\nrule S -> 'a'\n"), Error);
  CHECK_THROWS_AS(CnfGrammar::parse("cnf 1\nstart S\nrule S -> 'a' B\n"), Error);
}
