#include <doctest.h>

#include "dyck/bidirected.hpp"
#include "dyck/format.hpp"
#include "dyck/gen.hpp"
#include "dyck/oracle.hpp"
#include "dyck/reductions.hpp"
#include "test_support.hpp"

using namespace dyck;

TEST_CASE("densify merges same-label fanout targets") {
  LabeledGraph g = read_graph(
      "dyckgraph 1\nk 1\nmode bidirected\n"
      "edge a u o1\n"   // u -> a c1
      "edge b u o1\n"); // u -> b c1
  auto [g2, seeds] = densify_reduce(g);
  NodeId a = g.node_or_throw("a"), b = g.node_or_throw("b"),
         u = g.node_or_throw("u");
  CHECK(seeds.find(a) == seeds.find(b));
  CHECK(seeds.find(a) != seeds.find(u));
  int closing_out = 0;
  for (const Edge& e : g2.out(u))
    if (e.label.is_close()) closing_out++;
  CHECK(closing_out == 1);
}

TEST_CASE("densify leaves single-target labels unchanged") {
  LabeledGraph g = read_graph(
      "dyckgraph 1\nk 2\nmode bidirected\n"
      "edge a u o1\n"
      "edge b u o2\n");
  auto [g2, seeds] = densify_reduce(g);
  CHECK(test::same_graph(g, g2));
  for (NodeId v = 0; v < g.node_count(); v++) CHECK(seeds.find(v) == v);
}

TEST_CASE("densify requires eps-free bidirected input") {
  LabeledGraph with_eps = read_graph(
      "dyckgraph 1\nk 1\nmode bidirected\nedge a b eps\n");
  CHECK_THROWS_AS(densify_reduce(with_eps), Error);
  GraphBuilder asym(1, GraphMode::General);
  asym.add_edge("a", "b", Label::close(1));
  CHECK_THROWS_AS(densify_reduce(asym.build()), Error);
}

TEST_CASE("densify keeps the partition and caps closing degree") {
  for (uint64_t seed = 1; seed <= 20; seed++) {
    BidirectedGenSpec spec;
    spec.n = 25;
    spec.m = 10 * spec.n / 2;  // dense: ~10n directed edges with mirrors
    spec.k = 2;
    spec.eps_frac = 0.0;
    spec.seed = seed;
    LabeledGraph g = gen_bidirected(spec);
    auto [g2, seeds] = densify_reduce(g);
    for (NodeId u = 0; u < g2.node_count(); u++) {
      int closing = 0;
      for (const Edge& e : g2.out(u))
        if (e.label.is_close()) closing++;
      CHECK(closing <= g.alphabet_size());
    }
    auto with = bidirected_reach(g, {.densify = true});
    auto without = bidirected_reach(g, {.densify = false});
    CHECK(with.partition == without.partition);
  }
}

TEST_CASE("fanout fixture forms the expected classes") {
  LabeledGraph g = read_graph(test::kFanoutGraphText);
  auto [partition, stats] = bidirected_reach(g);
  NodeId u = g.node_or_throw("u"), v = g.node_or_throw("v"),
         x = g.node_or_throw("x"), z = g.node_or_throw("z");
  CHECK(partition.class_count() == 2);
  CHECK(partition.same_class(u, v));
  CHECK(partition.same_class(u, z));
  CHECK_FALSE(partition.same_class(x, u));
  CHECK(partition == dsccs_from_closure(dyck_closure(g)));
  CHECK(stats.classes == 2);
}

TEST_CASE("no shared-label fanout means singletons") {
  LabeledGraph g = read_graph(
      "dyckgraph 1\nk 2\nmode bidirected\n"
      "edge a b o1\n"
      "edge b c o2\n"
      "edge c d o1\n");
  auto [partition, stats] = bidirected_reach(g);
  CHECK(partition.class_count() == g.node_count());
  // Idempotence: the partition stays all-singletons on a rerun.
  CHECK(bidirected_reach(g).partition == partition);
}

TEST_CASE("dscc_query answers pair queries") {
  LabeledGraph g = read_graph(test::kFanoutGraphText);
  auto [partition, stats] = bidirected_reach(g);
  NodeId u = g.node_or_throw("u"), x = g.node_or_throw("x"),
         z = g.node_or_throw("z");
  CHECK(dscc_query(partition, u, u));
  CHECK(dscc_query(partition, u, z));
  CHECK_FALSE(dscc_query(partition, x, u));
  CHECK_THROWS_AS(dscc_query(partition, u, 999), Error);
}

TEST_CASE("worked four-step trace from a mid-algorithm state") {
  // Three trees: s (9 nodes, rank 2), v (7 nodes, rank 1), z (7 nodes,
  // rank 1). Closing edges: s->u c1, s->w c2, s->z c1, v->t c2, z->x c3,
  // z->y c3, z->z c2. Queue: (z,c3) then (s,c1).
  const int s = 0, t = 1, u = 2, v = 9, w = 10, x = 11, y = 12, z = 16;
  BidirectedEngine eng(23, 3);
  auto& ds = eng.sets();
  ds.union_sets({s, 3}, s);
  ds.union_sets({s, 4}, s);
  ds.union_sets({s, 5}, s);
  ds.union_sets({s, t}, s);
  ds.union_sets({s, u}, s);
  ds.union_sets({6, 7}, 6);
  ds.union_sets({6, 8}, 6);
  ds.union_sets({s, 6}, s);  // two rank-1 trees -> s has rank 2
  ds.union_sets({v, 13}, v);
  ds.union_sets({v, w}, v);
  ds.union_sets({v, x}, v);
  ds.union_sets({v, y}, v);
  ds.union_sets({v, 14}, v);
  ds.union_sets({v, 15}, v);
  ds.union_sets({z, 17}, z);
  ds.union_sets({z, 18}, z);
  ds.union_sets({z, 19}, z);
  ds.union_sets({z, 20}, z);
  ds.union_sets({z, 21}, z);
  ds.union_sets({z, 22}, z);

  eng.append_edge(s, 1, u);
  eng.append_edge(s, 2, w);
  eng.append_edge(s, 1, z);
  eng.append_edge(v, 2, t);
  eng.append_edge(z, 3, x);
  eng.append_edge(z, 3, y);
  eng.append_edge(z, 2, z);
  eng.enqueue(z, 3);
  eng.enqueue(s, 1);

  // Step 1: (z,c3); x and y are both in v's set, so the list collapses.
  REQUIRE(eng.step_one());
  CHECK(eng.list_contents(z, 3) == std::vector<int>{v});
  CHECK(eng.stats().unions == 0);

  // Step 2: (s,c1) merges {s,z}, named z; rank keeps s as physical root.
  REQUIRE(eng.step_one());
  CHECK(eng.sets().find(s) == z);
  CHECK(eng.sets().find_root(z) == s);
  CHECK(eng.list_contents(z, 2) == std::vector<int>{z, w});
  CHECK(eng.list_contents(z, 1) == std::vector<int>{z});
  CHECK(eng.queue_size() == 1);  // (z,c2)

  // Step 3: (z,c2) merges {z,v}, named v; v's tree hangs under s's root.
  REQUIRE(eng.step_one());
  CHECK(eng.sets().find(z) == v);
  CHECK(eng.sets().find_root(v) == s);
  CHECK(eng.list_contents(v, 2) == std::vector<int>{t, v});
  CHECK(eng.list_contents(v, 1) == std::vector<int>{z});
  CHECK(eng.list_contents(v, 3) == std::vector<int>{v});
  CHECK(eng.queue_size() == 1);  // (v,c2)

  // Step 4: (v,c2); t is already in v's set, list collapses, done.
  REQUIRE(eng.step_one());
  CHECK(eng.list_contents(v, 2) == std::vector<int>{v});
  CHECK_FALSE(eng.step_one());
  CHECK(eng.stats().iterations == 4);
  CHECK(eng.stats().unions == 2);
  for (int node : {s, t, u, v, w, x, y, z}) CHECK(eng.sets().find(node) == v);
}

TEST_CASE("union graph of the four-union sequence") {
  UnionSequence seq(5, {{0, 1}, {3, 4}, {2, 1}, {2, 3}},
                    {"u", "v", "w", "x", "y"});
  LabeledGraph g = union_graph(seq);
  REQUIRE(g.node_count() == 9);
  auto [partition, stats] = bidirected_reach(g);
  auto oracle = dsccs_from_closure(dyck_closure(g));
  CHECK(partition == oracle);
  for (const char* a : {"v", "w", "x", "y"})
    CHECK(partition.same_class(g.node_or_throw("u"), g.node_or_throw(a)));
  for (const char* zn : {"z1", "z2", "z3", "z4"}) {
    NodeId zi = g.node_or_throw(zn);
    CHECK(partition.members(partition.class_of(zi)).size() == 1);
  }
}

TEST_CASE("partition equals the oracle over a random corpus") {
  for (uint64_t seed = 1; seed <= 150; seed++) {
    BidirectedGenSpec spec;
    spec.n = 5 + static_cast<int>(seed % 36);
    spec.m = 2 * spec.n;
    spec.k = 1 + static_cast<int>(seed % 4);
    spec.eps_frac = (seed % 3) * 0.1;
    spec.seed = seed;
    LabeledGraph g = gen_bidirected(spec);
    auto fast = bidirected_reach(g);
    auto slow = dsccs_from_closure(dyck_closure(g));
    REQUIRE(fast.partition == slow);

    // Counter bounds, k <= 4.
    CHECK(fast.stats.iterations <= 4 * static_cast<uint64_t>(g.node_count()));
    CHECK(fast.stats.sum_sprime <= 2 * static_cast<uint64_t>(g.edge_count()));

    // Worklist order does not affect the result.
    auto lifo = bidirected_reach(g, {.densify = true, .lifo = true});
    CHECK(lifo.partition == fast.partition);
  }
}

TEST_CASE("non-bidirected input is rejected") {
  GraphBuilder b(1, GraphMode::General);
  b.add_edge("a", "b", Label::open(1));
  try {
    bidirected_reach(b.build());
    FAIL("expected NotBidirected");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotBidirected);
  }
}

TEST_CASE("work counters grow subquadratically") {
  uint64_t previous = 0;
  for (int n : {2000, 4000, 8000, 16000}) {
    BidirectedGenSpec spec;
    spec.n = n;
    spec.m = 3 * n;
    spec.k = 3;
    spec.eps_frac = 0.1;
    spec.seed = 99;
    auto result = bidirected_reach(gen_bidirected(spec));
    uint64_t work =
        result.stats.splices + result.stats.finds + result.stats.unions;
    if (previous > 0) CHECK(work <= 3 * previous);
    previous = work;
  }
}
