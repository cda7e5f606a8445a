#include "dyck/graph.hpp"

#include <algorithm>
#include <numeric>

#include "dyck/errors.hpp"

namespace dyck {

const char* to_string(ErrorKind kind) {
  switch (kind) {
  case ErrorKind::ParseError: return "ParseError";
  case ErrorKind::DuplicateEdge: return "DuplicateEdge";
  case ErrorKind::BadLabelIndex: return "BadLabelIndex";
  case ErrorKind::NotBidirected: return "NotBidirected";
  case ErrorKind::AlreadyPresent: return "AlreadyPresent";
  case ErrorKind::UnknownElement: return "UnknownElement";
  case ErrorKind::NotDisjoint: return "NotDisjoint";
  case ErrorKind::PreconditionViolated: return "PreconditionViolated";
  case ErrorKind::InvalidDecomposition: return "InvalidDecomposition";
  case ErrorKind::NotCoResident: return "NotCoResident";
  case ErrorKind::UnknownNode: return "UnknownNode";
  case ErrorKind::MixedLocalEdge: return "MixedLocalEdge";
  case ErrorKind::SplitCallSite: return "SplitCallSite";
  case ErrorKind::StaleSummary: return "StaleSummary";
  case ErrorKind::InvalidSequence: return "InvalidSequence";
  case ErrorKind::UnknownTerminal: return "UnknownTerminal";
  }
  return "Error";
}

const char* to_string(GraphMode mode) {
  return mode == GraphMode::General ? "general" : "bidirected";
}

std::optional<NodeId> LabeledGraph::find_node(const std::string& name) const {
  auto it = ids_.find(name);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

NodeId LabeledGraph::node_or_throw(const std::string& name) const {
  auto id = find_node(name);
  if (!id) fail(ErrorKind::UnknownNode, "unknown node '" + name + "'");
  return *id;
}

std::span<const Edge> LabeledGraph::out(NodeId u) const {
  return std::span<const Edge>(edges_.data() + out_begin_[u],
                               edges_.data() + out_begin_[u + 1]);
}

bool LabeledGraph::has_edge(NodeId u, NodeId v, const Label& l) const {
  Edge probe{u, v, l};
  auto range = out(u);
  return std::binary_search(range.begin(), range.end(), probe);
}

bool LabeledGraph::has_method_tags() const {
  return std::any_of(methods_.begin(), methods_.end(),
                     [](int m) { return m >= 0; });
}

GraphBuilder::GraphBuilder(int k, GraphMode mode) {
  g_.k_ = k;
  g_.mode_ = mode;
}

NodeId GraphBuilder::add_node(const std::string& name) {
  auto it = g_.ids_.find(name);
  if (it != g_.ids_.end()) return it->second;
  NodeId id = static_cast<NodeId>(g_.names_.size());
  g_.ids_.emplace(name, id);
  g_.names_.push_back(name);
  g_.methods_.push_back(-1);
  return id;
}

NodeId GraphBuilder::add_node(const std::string& name, int method) {
  NodeId id = add_node(name);
  g_.methods_[id] = method;
  return id;
}

void GraphBuilder::check_label(const Label& l) const {
  if (l.is_eps()) return;
  if (l.index < 1 || l.index > g_.k_)
    fail(ErrorKind::BadLabelIndex,
         "label " + to_string(l) + " out of range for k=" + std::to_string(g_.k_));
}

static uint64_t pair_key(NodeId u, NodeId v) {
  return (static_cast<uint64_t>(static_cast<uint32_t>(u)) << 32) |
         static_cast<uint32_t>(v);
}

bool GraphBuilder::insert(NodeId u, NodeId v, Label label, bool dedup) {
  auto& labels = by_pair_[pair_key(u, v)];
  for (const Label& l : labels) {
    if (l == label) {
      if (dedup) return false;
      fail(ErrorKind::DuplicateEdge,
           "duplicate edge " + g_.names_[u] + " -> " + g_.names_[v] + " " +
               to_string(label));
    }
  }
  if (!dedup && !labels.empty()) {
    // A self-loop legitimately carries both o_i and c_i (its own mirror).
    bool complementary_self_loop =
        u == v && labels.size() == 1 && labels.front() == label.mirror();
    if (!complementary_self_loop)
      fail(ErrorKind::DuplicateEdge,
           "second label on edge pair " + g_.names_[u] + " -> " + g_.names_[v]);
  }
  labels.push_back(label);
  g_.edges_.push_back(Edge{u, v, label});
  return true;
}

void GraphBuilder::add_edge(NodeId u, NodeId v, Label label) {
  check_label(label);
  insert(u, v, label, false);
  if (g_.mode_ == GraphMode::Bidirected) {
    Label m = label.mirror();
    if (!(u == v && m == label)) insert(v, u, m, true);
  }
}

void GraphBuilder::add_edge(const std::string& u, const std::string& v,
                            Label label) {
  NodeId ui = add_node(u);  // intern src first: ids follow appearance order
  NodeId vi = add_node(v);
  add_edge(ui, vi, label);
}

void GraphBuilder::add_edge_dedup(NodeId u, NodeId v, Label label) {
  check_label(label);
  insert(u, v, label, true);
  if (g_.mode_ == GraphMode::Bidirected) {
    Label m = label.mirror();
    if (!(u == v && m == label)) insert(v, u, m, true);
  }
}

LabeledGraph GraphBuilder::build() {
  if (built_) fail(ErrorKind::PreconditionViolated, "builder already consumed");
  built_ = true;
  std::sort(g_.edges_.begin(), g_.edges_.end());
  int n = g_.node_count();
  g_.out_begin_.assign(n + 1, 0);
  for (const Edge& e : g_.edges_) g_.out_begin_[e.src + 1]++;
  std::partial_sum(g_.out_begin_.begin(), g_.out_begin_.end(),
                   g_.out_begin_.begin());
  return std::move(g_);
}

std::string BidirectednessViolation::describe(const LabeledGraph& g) const {
  return "edge " + g.name(edge.src) + " -> " + g.name(edge.dst) + " " +
         to_string(edge.label) + " lacks mirror " + g.name(missing.src) +
         " -> " + g.name(missing.dst) + " " + to_string(missing.label);
}

std::vector<BidirectednessViolation> validate_bidirected(const LabeledGraph& g) {
  std::vector<BidirectednessViolation> out;
  for (const Edge& e : g.edges()) {
    Edge mirror{e.dst, e.src, e.label.mirror()};
    if (!g.has_edge(mirror.src, mirror.dst, mirror.label))
      out.push_back({e, mirror});
  }
  return out;
}

EpsContraction contract_epsilon(const LabeledGraph& g) {
  if (!validate_bidirected(g).empty())
    fail(ErrorKind::NotBidirected, "contract_epsilon requires a bidirected graph");

  int n = g.node_count();
  // Union eps-connected components, rank-linked.
  std::vector<NodeId> parent(n);
  std::vector<int> rank(n, 0);
  std::iota(parent.begin(), parent.end(), 0);
  auto root = [&](NodeId u) {
    while (parent[u] != u) {
      parent[u] = parent[parent[u]];
      u = parent[u];
    }
    return u;
  };
  for (const Edge& e : g.edges())
    if (e.label.is_eps()) {
      NodeId a = root(e.src), b = root(e.dst);
      if (a == b) continue;
      if (rank[a] < rank[b]) std::swap(a, b);
      parent[b] = a;
      if (rank[a] == rank[b]) rank[a]++;
    }

  // New ids in first-appearance order; each merged node keeps the name and
  // tag of its smallest member.
  std::vector<NodeId> node_map(n, -1);
  std::vector<NodeId> rep_of_root(n, -1);
  GraphBuilder builder(g.alphabet_size(), g.mode());
  for (NodeId u = 0; u < n; u++) {
    NodeId r = root(u);
    if (rep_of_root[r] < 0) {
      rep_of_root[r] = u;  // ids ascend, first hit is the smallest member
      node_map[u] = g.method_of(u) >= 0 ? builder.add_node(g.name(u), g.method_of(u))
                                        : builder.add_node(g.name(u));
    } else {
      node_map[u] = node_map[rep_of_root[r]];
    }
  }
  for (const Edge& e : g.edges()) {
    if (e.label.is_eps()) continue;
    builder.add_edge_dedup(node_map[e.src], node_map[e.dst], e.label);
  }
  return EpsContraction{builder.build(), std::move(node_map)};
}

DsccPartition DsccPartition::from_class_keys(const std::vector<int>& key) {
  int n = static_cast<int>(key.size());
  std::unordered_map<int, std::vector<NodeId>> groups;
  for (NodeId u = 0; u < n; u++) groups[key[u]].push_back(u);

  std::vector<std::vector<NodeId>> classes;
  classes.reserve(groups.size());
  for (auto& [_, members] : groups) {
    std::sort(members.begin(), members.end());
    classes.push_back(std::move(members));
  }
  std::sort(classes.begin(), classes.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });

  DsccPartition p;
  p.class_of_.assign(n, -1);
  for (int c = 0; c < static_cast<int>(classes.size()); c++)
    for (NodeId u : classes[c]) p.class_of_[u] = c;
  p.classes_ = std::move(classes);
  return p;
}

int DsccPartition::class_of(NodeId u) const {
  if (u < 0 || u >= static_cast<int>(class_of_.size()))
    fail(ErrorKind::UnknownNode, "node id out of range: " + std::to_string(u));
  return class_of_[u];
}

bool DsccPartition::same_class(NodeId u, NodeId v) const {
  return class_of(u) == class_of(v);
}

} // namespace dyck
