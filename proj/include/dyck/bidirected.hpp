#pragma once

#include <cstdint>
#include <deque>
#include <vector>

#include "dyck/disjoint_sets.hpp"
#include "dyck/graph.hpp"

namespace dyck {

/// Counters kept by the DSCC engine. Cheap and always on, so the intended
/// complexity bounds are testable assertions:
///   iterations <= 4*n for k <= 4, sum_sprime <= 2*m.
struct RunStats {
  int n = 0;          // input nodes
  int m = 0;          // input edges (mirrors counted)
  int k = 0;
  int classes = 0;
  uint64_t iterations = 0;   // main-loop passes (queue extractions)
  uint64_t sum_sprime = 0;   // total size of processed lists with >= 2 entries
  uint64_t unions = 0;
  uint64_t finds = 0;
  uint64_t splices = 0;      // O(1) list moves
};

struct BidirectedReachOptions {
  bool densify = true;   // dense-graph pre-reduction
  bool lifo = false;     // worklist order; FIFO matches the queue semantics
};

struct BidirectedReachResult {
  DsccPartition partition;  // over the input graph's nodes
  RunStats stats;
};

/// DSCCs of a bidirected graph in O(m + n*alpha(n)):
/// (1) eps-contraction, (2) dense-graph reduction, (3) union-find driven
/// merging of closing-edge fanouts. Throws NotBidirected.
BidirectedReachResult bidirected_reach(
    const LabeledGraph& g, const BidirectedReachOptions& options = {});

struct DensifyResult {
  LabeledGraph graph;     // <= k closing out-edges per node
  DisjointSets seeds;     // classes pre-merged by the reduction
};

/// Pre-merges, for every node u and closing index i with >= 2 outgoing
/// c_i edges, the targets of those edges; u keeps a single c_i edge to the
/// merged class. Input must be bidirected without eps edges
/// (PreconditionViolated otherwise). Linear time.
DensifyResult densify_reduce(const LabeledGraph& g);

/// Constant-time pair query against a computed partition.
bool dscc_query(const DsccPartition& p, NodeId u, NodeId v);

/// The merging engine behind bidirected_reach, exposed so tests can drive
/// it from an arbitrary intermediate state (trees + edge lists + queue).
/// Edge lists are pooled singly linked lists supporting O(1) splice;
/// duplicate targets are allowed and filtered through Find when a merge
/// set is built.
class BidirectedEngine {
public:
  BidirectedEngine(int node_count, int alphabet_size, bool lifo = false);

  /// Adopts pre-merged sets; all node ids must already be present.
  BidirectedEngine(DisjointSets seeds, int alphabet_size, bool lifo = false);

  DisjointSets& sets() { return ds_; }
  const DisjointSets& sets() const { return ds_; }

  void append_edge(int u, int close_index, int target);
  void enqueue(int u, int close_index);
  size_t queue_size() const { return queue_.size(); }

  void run();
  /// Processes a single queue extraction; false when the queue was empty.
  bool step_one();

  uint64_t list_size(int u, int close_index) const {
    return list(u, close_index).size;
  }
  std::vector<int> list_contents(int u, int close_index) const;
  const RunStats& stats() const { return stats_; }

private:
  struct Cell {
    int target;
    int next;
  };
  struct List {
    int head = -1;
    int tail = -1;
    uint64_t size = 0;
  };

  List& list(int u, int i) { return lists_[static_cast<size_t>(u) * k_ + (i - 1)]; }
  const List& list(int u, int i) const {
    return lists_[static_cast<size_t>(u) * k_ + (i - 1)];
  }
  void splice(List& from, List& onto);
  void step(int u, int i);

  int n_;
  int k_;
  bool lifo_;
  DisjointSets ds_;
  std::vector<Cell> pool_;
  std::vector<List> lists_;
  std::deque<std::pair<int, int>> queue_;
  std::vector<int> scratch_;
  RunStats stats_;
};

} // namespace dyck
