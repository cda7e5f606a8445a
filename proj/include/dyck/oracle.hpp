#pragma once

#include <cstdint>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "dyck/graph.hpp"

namespace dyck {

/// All-pairs Dyck closure of an arbitrary labeled graph, computed by
/// worklist saturation over the Dyck grammar
///
///   S -> S S | A_1 Abar_1 | ... | A_k Abar_k | eps
///   A_i -> o_i S          Abar_i -> S c_i
///
/// One derivation per discovered pair can be recorded so that explicit
/// witness paths are reconstructible. This is the reference engine: clarity
/// over speed, intended for graphs up to a few hundred nodes.
class ClosureRelation {
public:
  /// v is Dyck-reachable from u.
  bool s_pair(NodeId u, NodeId v) const;
  /// Pair derivable by A_i (resp. Abar_i): path label o_i w (resp. w c_i)
  /// with w balanced.
  bool a_pair(int i, NodeId u, NodeId v) const;
  bool abar_pair(int i, NodeId u, NodeId v) const;

  int node_count() const { return n_; }
  /// Nodes Dyck-reachable from u, unsorted.
  const std::vector<NodeId>& s_successors(NodeId u) const;
  const std::vector<NodeId>& s_predecessors(NodeId v) const;

  /// Witness path for an S-pair; requires record_derivations at build time.
  /// The returned edge sequence starts at u, ends at v, and its label is a
  /// Dyck word (empty for u == v with no better witness).
  std::vector<Edge> witness(NodeId u, NodeId v) const;
  bool has_derivations() const { return !derivations_.empty() || n_ == 0; }

private:
  friend ClosureRelation dyck_closure(const LabeledGraph&, bool);

  struct Deriv {
    uint8_t rule;        // see oracle.cpp
    uint64_t a = 0, b = 0;
    Edge edge;
  };

  uint64_t key(int nt, NodeId u, NodeId v) const;
  void append_witness(uint64_t fact, std::vector<Edge>& out) const;

  int n_ = 0;
  int k_ = 0;
  std::unordered_set<uint64_t> facts_;
  std::vector<std::vector<NodeId>> s_succ_, s_pred_;
  std::unordered_map<uint64_t, Deriv> derivations_;
};

ClosureRelation dyck_closure(const LabeledGraph& g,
                             bool record_derivations = false);

/// (u,v) in the S-relation of dyck_closure(g).
bool dyck_reachable(const LabeledGraph& g, NodeId u, NodeId v);

/// u,v share a class iff both (u,v) and (v,u) are S-pairs. Mutual
/// S-reachability is transitive (S is closed under concatenation), so the
/// result is a partition.
DsccPartition dsccs_from_closure(const ClosureRelation& rel);

} // namespace dyck
