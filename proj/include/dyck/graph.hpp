#pragma once

#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "dyck/errors.hpp"
#include "dyck/label.hpp"

namespace dyck {

using NodeId = int;

struct Edge {
  NodeId src = 0;
  NodeId dst = 0;
  Label label;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// How a graph is stored on disk. Bidirected files keep one direction per
/// mirror pair; the builder synthesizes the mirrors.
enum class GraphMode : uint8_t { General, Bidirected };

const char* to_string(GraphMode mode);

/// An immutable Sigma_k-labeled directed graph. Node names are interned to
/// dense ids in first-appearance order; all algorithms work on ids.
/// Safe to share across threads once built.
class LabeledGraph {
public:
  int node_count() const { return static_cast<int>(names_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  int alphabet_size() const { return k_; }
  GraphMode mode() const { return mode_; }

  const std::string& name(NodeId u) const { return names_[u]; }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<NodeId> find_node(const std::string& name) const;
  NodeId node_or_throw(const std::string& name) const;

  std::span<const Edge> edges() const { return edges_; }
  /// Out-edges of u, sorted by (dst, label).
  std::span<const Edge> out(NodeId u) const;
  bool has_edge(NodeId u, NodeId v, const Label& l) const;

  /// Method tag of u, or -1 when untagged.
  int method_of(NodeId u) const { return methods_[u]; }
  bool has_method_tags() const;

private:
  friend class GraphBuilder;
  std::vector<std::string> names_;
  std::unordered_map<std::string, NodeId> ids_;
  std::vector<int> methods_;
  std::vector<Edge> edges_;      // sorted by (src, dst, label)
  std::vector<int> out_begin_;   // CSR offsets into edges_
  int k_ = 0;
  GraphMode mode_ = GraphMode::General;
};

/// Single-use builder. In bidirected mode every added edge also yields its
/// mirror; exact duplicates produced that way are dropped.
class GraphBuilder {
public:
  GraphBuilder(int k, GraphMode mode);

  NodeId add_node(const std::string& name);
  NodeId add_node(const std::string& name, int method);

  /// Adds (u,v,label); in bidirected mode also (v,u,mirror).
  /// Throws BadLabelIndex when label.index > k, DuplicateEdge when the
  /// ordered pair (u,v) would carry a second label. A pair (v,v) may carry
  /// both o_i and c_i, which mirror synthesis produces for self-loops.
  void add_edge(NodeId u, NodeId v, Label label);
  void add_edge(const std::string& u, const std::string& v, Label label);

  /// Like add_edge but silently ignores edges already present and permits
  /// several labels per pair. Used when merging graphs (eps contraction).
  void add_edge_dedup(NodeId u, NodeId v, Label label);

  LabeledGraph build();

private:
  void check_label(const Label& l) const;
  bool insert(NodeId u, NodeId v, Label label, bool dedup);

  LabeledGraph g_;
  std::unordered_map<uint64_t, std::vector<Label>> by_pair_;
  bool built_ = false;
};

struct BidirectednessViolation {
  Edge edge;          // the edge present
  Edge missing;       // the mirror that should exist
  std::string describe(const LabeledGraph& g) const;
};

/// Empty iff for all u,v: (u,v,eps) <=> (v,u,eps) and (u,v,o_i) <=> (v,u,c_i).
std::vector<BidirectednessViolation> validate_bidirected(const LabeledGraph& g);

struct EpsContraction {
  LabeledGraph graph;              // no eps edges remain
  std::vector<NodeId> node_map;    // old id -> new id, total and surjective
};

/// Merges the connected components of the eps-subgraph, the standard
/// preprocessing for bidirected graphs. Parallel duplicates created by the
/// merge are deduplicated. Throws NotBidirected when the input is not.
EpsContraction contract_epsilon(const LabeledGraph& g);

/// Partition of nodes into Dyck strongly connected components.
/// Class ids are dense; each class lists its members sorted ascending and is
/// represented by its smallest member.
class DsccPartition {
public:
  DsccPartition() = default;
  /// Builds from per-node class keys (nodes with equal key share a class).
  static DsccPartition from_class_keys(const std::vector<int>& key);

  int class_count() const { return static_cast<int>(classes_.size()); }
  int class_of(NodeId u) const;
  const std::vector<NodeId>& members(int cls) const { return classes_[cls]; }
  NodeId representative(int cls) const { return classes_[cls].front(); }

  /// Constant-time co-membership query.
  bool same_class(NodeId u, NodeId v) const;

  friend bool operator==(const DsccPartition&, const DsccPartition&) = default;

private:
  std::vector<int> class_of_;
  std::vector<std::vector<NodeId>> classes_;  // sorted by representative
};

} // namespace dyck
