#pragma once

#include <string>
#include <vector>

#include "dyck/graph.hpp"

namespace dyck {

/// Plain undirected graph for decomposition purposes. Adjacency lists are
/// sorted and free of duplicates and self-loops after finalize().
struct UndirectedGraph {
  int n = 0;
  std::vector<std::vector<int>> adj;

  explicit UndirectedGraph(int nodes = 0) : n(nodes), adj(nodes) {}
  void add_edge(int u, int v);
  void finalize();
  bool has_edge(int u, int v) const;
  int edge_count() const;
};

/// Ignores labels and directions; one undirected edge per connected pair.
UndirectedGraph undirected_view(const LabeledGraph& g);

/// Rooted tree of bags satisfying
///   C1: bags cover all nodes,
///   C2: every edge's endpoints co-occur in some bag,
///   C3: bags containing a fixed node form a connected subtree.
/// root_bag(u) is the unique minimum-level bag containing u (unique by C3).
class TreeDecomposition {
public:
  int bag_count() const { return static_cast<int>(bags_.size()); }
  const std::vector<int>& bag(int b) const { return bags_[b]; }
  int parent(int b) const { return parent_[b]; }
  const std::vector<int>& children(int b) const { return children_[b]; }
  int root() const { return root_; }
  int level(int b) const { return level_[b]; }

  int root_bag(int node) const { return root_bag_[node]; }
  int node_count() const { return static_cast<int>(root_bag_.size()); }
  bool bag_contains(int b, int node) const;

  int width() const { return width_; }
  int height() const { return height_; }

  /// Builds levels, root bags, width, height from bags + parent links.
  /// Throws InvalidDecomposition if the parent links do not form one tree.
  static TreeDecomposition assemble(std::vector<std::vector<int>> bags,
                                    std::vector<int> parent, int node_count);

private:
  std::vector<std::vector<int>> bags_;  // sorted member lists
  std::vector<int> parent_;
  std::vector<std::vector<int>> children_;
  std::vector<int> level_;
  std::vector<int> root_bag_;
  int root_ = -1;
  int width_ = -1;
  int height_ = 0;
};

enum class TdCondition { C1, C2, C3 };

struct TdViolation {
  TdCondition condition;
  std::string detail;  // names the witness node or edge
};

enum class DecomposeHeuristic { MinDegree, MinFill };

/// Heuristic tree decomposition by greedy elimination. Valid (C1-C3) but
/// with no width optimality guarantee. Subset bags are pruned.
TreeDecomposition decompose(const UndirectedGraph& g,
                            DecomposeHeuristic heuristic = DecomposeHeuristic::MinDegree);

std::vector<TdViolation> validate(const TreeDecomposition& td,
                                  const UndirectedGraph& g);

/// Height-rebalanced equivalent decomposition:
///   height <= 2*ceil(log2(bags)) + 2  (well under the 4*(log2(bags)+1) target)
///   width  <= 3t + 2 for input width t.
/// Recursive centroid splitting; every new bag is an original bag plus the
/// interface of at most two boundary edges.
TreeDecomposition rebalance(const TreeDecomposition& td);

/// The deeper of root_bag(u), root_bag(v); they co-occur in it.
/// Throws NotCoResident when u,v share no bag.
int bag_of_edge(const TreeDecomposition& td, int u, int v);
bool co_resident(const TreeDecomposition& td, int u, int v);

/// One line per bag: `bag <id> parent=<id|-> : <members...>`.
/// Member ids are printed via `names` when given.
std::string dump_td(const TreeDecomposition& td,
                    const std::vector<std::string>* names = nullptr);

} // namespace dyck
