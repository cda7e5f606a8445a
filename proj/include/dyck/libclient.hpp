#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "dyck/graph.hpp"
#include "dyck/treedec.hpp"

namespace dyck {

/// A labeled graph partitioned into per-method local subgraphs. Local edges
/// are eps-only; each parenthesis index forms one call site whose opening
/// edges run caller -> callee entries and closing edges callee exits ->
/// caller return targets.
class ProgramValidGraph {
public:
  /// Checks the partitioning induced by the graph's method tags (which must
  /// be total). Throws MixedLocalEdge for an intra-method non-eps edge or a
  /// cross-method eps edge, SplitCallSite when a call site's endpoint sets
  /// straddle methods.
  static ProgramValidGraph validate(LabeledGraph g);

  const LabeledGraph& base() const { return base_; }
  const std::vector<int>& methods() const { return method_ids_; }
  const std::vector<NodeId>& nodes_of(int method) const;
  int method_of(NodeId u) const { return base_.method_of(u); }

  struct CallSite {
    int index = 0;    // parenthesis index
    int caller = -1;  // method ids; -1 when the index is unused
    int callee = -1;
    std::vector<Edge> call_edges;    // (x, u, o_i)
    std::vector<Edge> return_edges;  // (v, y, c_i)
  };
  const std::vector<CallSite>& call_sites() const { return call_sites_; }

  /// Entries (targets of opening edges) and exits (sources of closing
  /// edges) within a method, sorted.
  const std::vector<NodeId>& entries_of(int method) const;
  const std::vector<NodeId>& exits_of(int method) const;

  /// The largest per-method entry/exit set size.
  int measured_b() const { return measured_b_; }

  /// The method's directed eps-local edges.
  std::vector<Edge> local_edges(int method) const;

  /// Induced subgraph on a set of methods (nodes keep names and tags).
  LabeledGraph restrict_to(const std::vector<int>& methods) const;

private:
  LabeledGraph base_;
  std::vector<int> method_ids_;  // sorted distinct tags
  std::map<int, std::vector<NodeId>> nodes_by_method_;
  std::map<int, std::vector<NodeId>> entries_by_method_;
  std::map<int, std::vector<NodeId>> exits_by_method_;
  std::vector<CallSite> call_sites_;
  int measured_b_ = 0;
};

/// Undirected maximal local graph G'_j over local indices: eps edges plus a
/// potential summary edge for every (call source, return target) pair of
/// the method, so future update insertions stay bag-covered. `global_of`
/// maps local index -> graph node.
struct MaximalLocalGraph {
  UndirectedGraph graph;
  std::vector<NodeId> global_of;
};
MaximalLocalGraph maximal_local_graph(const ProgramValidGraph& pvg, int method);

/// Per-method reachability structure D: a tree decomposition of the maximal
/// local graph plus the reachability set R, stored as per-node forward and
/// backward sets against root-bag members.
class ReachIndex {
public:
  struct OpStats {
    uint64_t updates = 0;
    uint64_t queries = 0;
    uint64_t bags_visited_updates = 0;
    uint64_t bags_visited_queries = 0;
    uint64_t max_bags_per_op = 0;
  };

  /// Seeds R with the directed local edges and closes bags bottom-up.
  static ReachIndex build(const std::vector<NodeId>& nodes,
                          const std::vector<Edge>& local_edges,
                          TreeDecomposition td);

  /// Inserts edge (x,y) and re-closes the bags from B_(x,y) to the root.
  /// Throws NotCoResident when x,y share no bag.
  void update(NodeId x, NodeId y);

  /// True iff y is reachable from x given all updates so far; walks both
  /// root-bag paths collecting forward/backward frontiers.
  bool query(NodeId x, NodeId y);

  bool pair_co_resident(NodeId x, NodeId y) const;
  bool knows(NodeId u) const { return local_of_.count(u) != 0; }

  const TreeDecomposition& td() const { return td_; }
  const std::vector<NodeId>& nodes() const { return global_of_; }
  const std::vector<std::pair<NodeId, NodeId>>& applied_updates() const {
    return applied_updates_;
  }
  const OpStats& op_stats() const { return stats_; }

  /// Rebinds the index to new node ids (same local order); used when a
  /// summary built against the library graph is resolved against the full
  /// graph of the client phase.
  ReachIndex with_nodes(std::vector<NodeId> new_nodes) const;

  /// Raw R access for serialization and invariant checks (local indices).
  const std::vector<std::vector<int>>& forward_sets() const { return rf_; }
  const std::vector<std::vector<int>>& backward_sets() const { return rb_; }
  void seed_pair_raw(int lu, int lv);  // deserialization only

private:
  friend class SummaryReader;
  ReachIndex() = default;

  int local(NodeId u) const;
  bool r_contains(int lu, int lv) const;
  void r_insert(int lu, int lv);
  void close_bag(int b);

  TreeDecomposition td_;
  std::vector<NodeId> global_of_;
  std::unordered_map<NodeId, int> local_of_;
  std::vector<std::vector<int>> rf_, rb_;  // sorted, local indices
  std::vector<std::pair<NodeId, NodeId>> applied_updates_;
  OpStats stats_;
};

/// Result of the saturation: one index per method, queryable afterwards.
using ReachIndexMap = std::map<int, ReachIndex>;

struct ProcessStats {
  uint64_t pool_extractions = 0;
  uint64_t summary_insertions = 0;
  uint64_t rebuilds = 0;  // prebuilt indexes rebuilt for unseen call sites
};

/// The saturation loop: builds indexes for methods without prebuilt ones,
/// then repeatedly fires entry->exit facts through matching call sites,
/// inserting caller summary edges until a fixpoint. At the fixpoint,
/// query(u,v) on a method index equals whole-graph Dyck reachability for
/// same-method pairs.
///
/// A prebuilt index lacking co-residency for a summary pair (a call site
/// that did not exist when the library was preprocessed, i.e. a callback)
/// is rebuilt from the current graph with its applied updates replayed.
ReachIndexMap process(const ProgramValidGraph& pvg,
                      ReachIndexMap prebuilt = {},
                      ProcessStats* stats = nullptr);

struct SummaryArtifact {
  std::string digest;             // canonical-text digest of the library graph
  std::vector<int> methods;       // library method ids
  ReachIndexMap indexes;          // ids relative to the preprocessed graph
  // Node names per method in local-index order; what ties the indexes to a
  // later graph whose interning differs.
  std::map<int, std::vector<std::string>> node_names;
};

/// Runs process on the library graph and packages the per-method indexes
/// together with the inserted summary edges.
SummaryArtifact preprocess_library(const ProgramValidGraph& library);

/// Client phase: reuses the library indexes (no rebuild of their Build
/// step), builds client indexes, and saturates over the whole graph.
/// Throws StaleSummary when the library subgraph's digest changed.
ReachIndexMap analyze_client(const SummaryArtifact& summary,
                             const ProgramValidGraph& full,
                             ProcessStats* stats = nullptr);

/// Canonical text form (nodes and edges sorted by name) and its FNV-1a
/// 64-bit digest; what summaries pin the library graph with.
std::string canonical_graph_text(const LabeledGraph& g);
std::string graph_digest(const LabeledGraph& g);

} // namespace dyck
