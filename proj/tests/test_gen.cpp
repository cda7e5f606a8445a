#include <doctest.h>

#include "dyck/format.hpp"
#include "dyck/gen.hpp"
#include "dyck/libclient.hpp"

using namespace dyck;

TEST_CASE("generators are deterministic under a seed") {
  BidirectedGenSpec bi;
  bi.seed = 42;
  CHECK(write_graph(gen_bidirected(bi)) == write_graph(gen_bidirected(bi)));
  bi.seed = 43;
  CHECK(write_graph(gen_bidirected({20, 40, 2, 0.15, 42})) !=
        write_graph(gen_bidirected(bi)));

  ProgramValidGenSpec pv;
  pv.seed = 42;
  CHECK(write_graph(gen_program_valid(pv)) == write_graph(gen_program_valid(pv)));

  UnionSeqGenSpec us;
  us.seed = 42;
  CHECK(write_union_sequence(gen_union_sequence(us)) ==
        write_union_sequence(gen_union_sequence(us)));

  CnfGenSpec cg;
  cg.seed = 42;
  CHECK(gen_cnf(cg).write() == gen_cnf(cg).write());
}

TEST_CASE("generated bidirected graphs validate") {
  for (uint64_t seed = 1; seed <= 30; seed++) {
    BidirectedGenSpec spec;
    spec.n = 30;
    spec.m = 70;
    spec.k = 4;
    spec.seed = seed;
    LabeledGraph g = gen_bidirected(spec);
    CHECK(g.mode() == GraphMode::Bidirected);
    CHECK(validate_bidirected(g).empty());
  }
}

TEST_CASE("generated program-valid graphs validate") {
  for (uint64_t seed = 1; seed <= 30; seed++) {
    ProgramValidGenSpec spec;
    spec.methods = 2 + static_cast<int>(seed % 6);
    spec.call_sites = static_cast<int>(seed % 9);
    spec.b = 1 + static_cast<int>(seed % 3);
    spec.seed = seed;
    LabeledGraph g = gen_program_valid(spec);
    ProgramValidGraph pvg = ProgramValidGraph::validate(std::move(g));
    CHECK(pvg.measured_b() <= spec.b);
  }
}

TEST_CASE("generated union sequences are valid and parse back") {
  for (uint64_t seed = 1; seed <= 20; seed++) {
    UnionSeqGenSpec spec;
    spec.universe = 20;
    spec.ops = 25;
    spec.seed = seed;
    UnionSequence seq = gen_union_sequence(spec);
    CHECK(static_cast<int>(seq.ops().size()) <= spec.universe - 1);
    UnionSequence reread = read_union_sequence(write_union_sequence(seq));
    CHECK(reread.universe() == seq.universe());
    CHECK(reread.ops() == seq.ops());
  }
}

TEST_CASE("generated grammars parse back") {
  for (uint64_t seed = 1; seed <= 10; seed++) {
    CnfGenSpec spec;
    spec.seed = seed;
    CnfGrammar g = gen_cnf(spec);
    CHECK(CnfGrammar::parse(g.write()).write() == g.write());
  }
}

TEST_CASE("planted ktrees respect their width parameter") {
  for (uint64_t seed = 1; seed <= 15; seed++) {
    KTreeGenSpec spec;
    spec.n = 40;
    spec.width = 2;
    spec.seed = seed;
    UndirectedGraph g = gen_ktree(spec);
    CHECK(g.n == 40);
    LabeledGraph lg = gen_ktree_labeled(spec);
    CHECK(lg.node_count() == 40);
    CHECK(validate_bidirected(lg).empty());
  }
}
