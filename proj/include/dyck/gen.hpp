#pragma once

#include <cstdint>
#include <random>

#include "dyck/graph.hpp"
#include "dyck/reductions.hpp"
#include "dyck/treedec.hpp"

namespace dyck {

/// Seeded instance generators. A given spec produces the same instance on
/// every run and platform (mt19937_64 semantics are fixed by the standard).

struct BidirectedGenSpec {
  int n = 20;
  int m = 40;           // target stored edges (mirrors come on top)
  int k = 2;
  double eps_frac = 0.15;  // fraction of eps edges
  uint64_t seed = 1;
};
LabeledGraph gen_bidirected(const BidirectedGenSpec& spec);

struct KTreeGenSpec {
  int n = 50;
  int width = 3;           // planted treewidth
  double drop_prob = 0.2;  // edge removal from the full k-tree
  uint64_t seed = 1;
};
UndirectedGraph gen_ktree(const KTreeGenSpec& spec);
/// Same instance as a labeled graph (eps edges, bidirected mode).
LabeledGraph gen_ktree_labeled(const KTreeGenSpec& spec);

struct ProgramValidGenSpec {
  int methods = 6;
  int max_nodes_per_method = 12;
  int call_sites = 6;
  int b = 2;                 // per-method entry/exit bound
  int treewidth_target = 3;  // local graphs drawn from partial k-trees
  uint64_t seed = 1;
};
LabeledGraph gen_program_valid(const ProgramValidGenSpec& spec);

struct UnionSeqGenSpec {
  int universe = 50;
  int ops = 60;  // capped by universe-1 nontrivial unions
  uint64_t seed = 1;
};
UnionSequence gen_union_sequence(const UnionSeqGenSpec& spec);

struct CnfGenSpec {
  int nonterminals = 4;
  int terminals = 2;
  uint64_t seed = 1;
};
CnfGrammar gen_cnf(const CnfGenSpec& spec);

/// Text form of a union sequence, for `gen --family union-seq-random`:
///   unionseq 1
///   universe <n>
///   union <a> <b>
std::string write_union_sequence(const UnionSequence& seq);
UnionSequence read_union_sequence(const std::string& text);

} // namespace dyck
