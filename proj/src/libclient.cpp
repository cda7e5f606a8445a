#include "dyck/libclient.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "dyck/errors.hpp"

namespace dyck {

ProgramValidGraph ProgramValidGraph::validate(LabeledGraph g) {
  ProgramValidGraph pvg;
  const int n = g.node_count();
  for (NodeId u = 0; u < n; u++)
    if (g.method_of(u) < 0)
      fail(ErrorKind::PreconditionViolated,
           "node '" + g.name(u) + "' lacks a method tag");

  for (NodeId u = 0; u < n; u++)
    pvg.nodes_by_method_[g.method_of(u)].push_back(u);
  for (auto& [id, nodes] : pvg.nodes_by_method_) {
    std::sort(nodes.begin(), nodes.end());
    pvg.method_ids_.push_back(id);
  }

  const int k = g.alphabet_size();
  pvg.call_sites_.assign(k, {});
  for (int i = 1; i <= k; i++) pvg.call_sites_[i - 1].index = i;

  auto bind_method = [&](int& slot, NodeId node, int i, const char* role) {
    int m = g.method_of(node);
    if (slot < 0) slot = m;
    else if (slot != m)
      fail(ErrorKind::SplitCallSite,
           "call site " + std::to_string(i) + ": " + role + " nodes span methods " +
               std::to_string(slot) + " and " + std::to_string(m));
  };

  for (const Edge& e : g.edges()) {
    int ms = g.method_of(e.src), md = g.method_of(e.dst);
    if (e.label.is_eps()) {
      if (ms != md)
        fail(ErrorKind::MixedLocalEdge,
             "eps edge " + g.name(e.src) + " -> " + g.name(e.dst) +
                 " crosses methods");
      continue;
    }
    if (ms == md)
      fail(ErrorKind::MixedLocalEdge,
           "intra-method edge " + g.name(e.src) + " -> " + g.name(e.dst) +
               " is labeled " + to_string(e.label));
    CallSite& cs = pvg.call_sites_[e.label.index - 1];
    if (e.label.is_open()) {
      bind_method(cs.caller, e.src, e.label.index, "call");
      bind_method(cs.callee, e.dst, e.label.index, "entry");
      cs.call_edges.push_back(e);
    } else {
      bind_method(cs.callee, e.src, e.label.index, "exit");
      bind_method(cs.caller, e.dst, e.label.index, "return");
      cs.return_edges.push_back(e);
    }
  }

  for (CallSite& cs : pvg.call_sites_) {
    std::sort(cs.call_edges.begin(), cs.call_edges.end());
    std::sort(cs.return_edges.begin(), cs.return_edges.end());
    for (const Edge& e : cs.call_edges)
      pvg.entries_by_method_[cs.callee].push_back(e.dst);
    for (const Edge& e : cs.return_edges)
      pvg.exits_by_method_[cs.callee].push_back(e.src);
  }
  pvg.measured_b_ = 0;
  for (auto* table : {&pvg.entries_by_method_, &pvg.exits_by_method_})
    for (auto& [m, nodes] : *table) {
      std::sort(nodes.begin(), nodes.end());
      nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
      pvg.measured_b_ = std::max(pvg.measured_b_, static_cast<int>(nodes.size()));
    }

  pvg.base_ = std::move(g);
  return pvg;
}

const std::vector<NodeId>& ProgramValidGraph::nodes_of(int method) const {
  auto it = nodes_by_method_.find(method);
  if (it == nodes_by_method_.end())
    fail(ErrorKind::UnknownElement, "unknown method " + std::to_string(method));
  return it->second;
}

const std::vector<NodeId>& ProgramValidGraph::entries_of(int method) const {
  static const std::vector<NodeId> empty;
  auto it = entries_by_method_.find(method);
  return it == entries_by_method_.end() ? empty : it->second;
}

const std::vector<NodeId>& ProgramValidGraph::exits_of(int method) const {
  static const std::vector<NodeId> empty;
  auto it = exits_by_method_.find(method);
  return it == exits_by_method_.end() ? empty : it->second;
}

std::vector<Edge> ProgramValidGraph::local_edges(int method) const {
  std::vector<Edge> out;
  for (NodeId u : nodes_of(method))
    for (const Edge& e : base_.out(u))
      if (e.label.is_eps()) out.push_back(e);
  return out;
}

LabeledGraph ProgramValidGraph::restrict_to(const std::vector<int>& methods) const {
  std::vector<char> in_set(base_.node_count(), 0);
  std::vector<int> sorted = methods;
  std::sort(sorted.begin(), sorted.end());
  for (NodeId u = 0; u < base_.node_count(); u++)
    if (std::binary_search(sorted.begin(), sorted.end(), base_.method_of(u)))
      in_set[u] = 1;

  GraphBuilder builder(base_.alphabet_size(), base_.mode());
  for (NodeId u = 0; u < base_.node_count(); u++)
    if (in_set[u]) builder.add_node(base_.name(u), base_.method_of(u));
  for (const Edge& e : base_.edges())
    if (in_set[e.src] && in_set[e.dst]) {
      NodeId src = builder.add_node(base_.name(e.src));
      NodeId dst = builder.add_node(base_.name(e.dst));
      builder.add_edge(src, dst, e.label);
    }
  return builder.build();
}

MaximalLocalGraph maximal_local_graph(const ProgramValidGraph& pvg, int method) {
  const auto& nodes = pvg.nodes_of(method);
  MaximalLocalGraph out;
  out.global_of = nodes;
  std::unordered_map<NodeId, int> local;
  for (size_t i = 0; i < nodes.size(); i++) local[nodes[i]] = static_cast<int>(i);

  out.graph = UndirectedGraph(static_cast<int>(nodes.size()));
  for (const Edge& e : pvg.local_edges(method))
    out.graph.add_edge(local[e.src], local[e.dst]);
  for (const auto& cs : pvg.call_sites()) {
    if (cs.caller != method) continue;
    for (const Edge& call : cs.call_edges)
      for (const Edge& ret : cs.return_edges)
        out.graph.add_edge(local[call.src], local[ret.dst]);
  }
  out.graph.finalize();
  return out;
}

int ReachIndex::local(NodeId u) const {
  auto it = local_of_.find(u);
  if (it == local_of_.end())
    fail(ErrorKind::UnknownNode, "node not in this local graph: " + std::to_string(u));
  return it->second;
}

bool ReachIndex::r_contains(int lu, int lv) const {
  return std::binary_search(rf_[lu].begin(), rf_[lu].end(), lv) ||
         std::binary_search(rb_[lv].begin(), rb_[lv].end(), lu);
}

void ReachIndex::r_insert(int lu, int lv) {
  if (r_contains(lu, lv)) return;
  // Deeper root bag picks the side; the shallower endpoint is then a member
  // of the deeper one's root bag.
  auto sorted_insert = [](std::vector<int>& v, int x) {
    v.insert(std::lower_bound(v.begin(), v.end(), x), x);
  };
  if (td_.level(td_.root_bag(lu)) >= td_.level(td_.root_bag(lv)))
    sorted_insert(rf_[lu], lv);
  else
    sorted_insert(rb_[lv], lu);
}

void ReachIndex::seed_pair_raw(int lu, int lv) { r_insert(lu, lv); }

void ReachIndex::close_bag(int b) {
  const std::vector<int>& members = td_.bag(b);
  const int s = static_cast<int>(members.size());
  if (s == 0) return;
  std::vector<char> reach(static_cast<size_t>(s) * s, 0);
  for (int a = 0; a < s; a++)
    for (int c = 0; c < s; c++)
      if (a == c || r_contains(members[a], members[c]))
        reach[a * s + c] = 1;
  for (int w = 0; w < s; w++)
    for (int a = 0; a < s; a++) {
      if (!reach[a * s + w]) continue;
      for (int c = 0; c < s; c++)
        if (reach[w * s + c]) reach[a * s + c] = 1;
    }
  for (int a = 0; a < s; a++)
    for (int c = 0; c < s; c++)
      if (reach[a * s + c] && a != c) r_insert(members[a], members[c]);
}

ReachIndex ReachIndex::build(const std::vector<NodeId>& nodes,
                             const std::vector<Edge>& local_edges,
                             TreeDecomposition td) {
  ReachIndex idx;
  idx.td_ = std::move(td);
  idx.global_of_ = nodes;
  for (size_t i = 0; i < nodes.size(); i++)
    idx.local_of_[nodes[i]] = static_cast<int>(i);
  idx.rf_.assign(nodes.size(), {});
  idx.rb_.assign(nodes.size(), {});

  for (size_t i = 0; i < nodes.size(); i++)
    idx.rf_[i].push_back(static_cast<int>(i));  // reflexive pairs
  for (const Edge& e : local_edges)
    idx.r_insert(idx.local(e.src), idx.local(e.dst));

  // Bottom-up pass: children before parents.
  std::vector<int> order;
  order.reserve(idx.td_.bag_count());
  std::deque<int> bfs;
  if (idx.td_.bag_count() > 0) bfs.push_back(idx.td_.root());
  while (!bfs.empty()) {
    int b = bfs.front();
    bfs.pop_front();
    order.push_back(b);
    for (int c : idx.td_.children(b)) bfs.push_back(c);
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) idx.close_bag(*it);
  return idx;
}

bool ReachIndex::pair_co_resident(NodeId x, NodeId y) const {
  int lx = local(x), ly = local(y);
  return td_.bag_contains(td_.root_bag(lx), ly) ||
         td_.bag_contains(td_.root_bag(ly), lx);
}

void ReachIndex::update(NodeId x, NodeId y) {
  int lx = local(x), ly = local(y);
  int start = bag_of_edge(td_, lx, ly);  // throws NotCoResident
  r_insert(lx, ly);
  applied_updates_.push_back({x, y});

  uint64_t visited = 0;
  for (int b = start; b >= 0; b = td_.parent(b)) {
    close_bag(b);
    visited++;
  }
  stats_.updates++;
  stats_.bags_visited_updates += visited;
  stats_.max_bags_per_op = std::max(stats_.max_bags_per_op, visited);
}

bool ReachIndex::query(NodeId x, NodeId y) {
  int lx = local(x), ly = local(y);
  stats_.queries++;

  uint64_t visited_fwd = 0, visited_bwd = 0;
  std::vector<char> in_x(global_of_.size(), 0), in_y(global_of_.size(), 0);
  in_x[lx] = 1;
  for (int b = td_.root_bag(lx); b >= 0; b = td_.parent(b)) {
    visited_fwd++;
    // Iterate to a local fixpoint: later updates may leave a bag's pairs
    // not transitively closed.
    bool grew = true;
    while (grew) {
      grew = false;
      for (int u : td_.bag(b)) {
        if (!in_x[u]) continue;
        for (int v : td_.bag(b))
          if (!in_x[v] && r_contains(u, v)) {
            in_x[v] = 1;
            grew = true;
          }
      }
    }
  }
  in_y[ly] = 1;
  for (int b = td_.root_bag(ly); b >= 0; b = td_.parent(b)) {
    visited_bwd++;
    bool grew = true;
    while (grew) {
      grew = false;
      for (int v : td_.bag(b)) {
        if (!in_y[v]) continue;
        for (int u : td_.bag(b))
          if (!in_y[u] && r_contains(u, v)) {
            in_y[u] = 1;
            grew = true;
          }
      }
    }
  }
  stats_.bags_visited_queries += visited_fwd + visited_bwd;
  stats_.max_bags_per_op =
      std::max({stats_.max_bags_per_op, visited_fwd, visited_bwd});

  for (size_t i = 0; i < global_of_.size(); i++)
    if (in_x[i] && in_y[i]) return true;
  return false;
}

ReachIndex ReachIndex::with_nodes(std::vector<NodeId> new_nodes) const {
  if (new_nodes.size() != global_of_.size())
    fail(ErrorKind::PreconditionViolated, "node count mismatch in rebind");
  ReachIndex out = *this;
  out.global_of_ = std::move(new_nodes);
  out.local_of_.clear();
  for (size_t i = 0; i < out.global_of_.size(); i++)
    out.local_of_[out.global_of_[i]] = static_cast<int>(i);
  for (auto& [x, y] : out.applied_updates_) {
    x = out.global_of_[local_of_.at(x)];
    y = out.global_of_[local_of_.at(y)];
  }
  return out;
}

namespace {

ReachIndex build_method_index(const ProgramValidGraph& pvg, int method) {
  MaximalLocalGraph mg = maximal_local_graph(pvg, method);
  TreeDecomposition td = rebalance(decompose(mg.graph));
  return ReachIndex::build(mg.global_of, pvg.local_edges(method), std::move(td));
}

ReachIndex rebuild_with_updates(const ProgramValidGraph& pvg, int method,
                                const ReachIndex& old) {
  ReachIndex fresh = build_method_index(pvg, method);
  for (auto [x, y] : old.applied_updates()) fresh.update(x, y);
  return fresh;
}

} // namespace

ReachIndexMap process(const ProgramValidGraph& pvg, ReachIndexMap prebuilt,
                      ProcessStats* stats) {
  ProcessStats local_stats;
  if (!stats) stats = &local_stats;

  for (auto& [method, idx] : prebuilt)
    if (!std::binary_search(pvg.methods().begin(), pvg.methods().end(), method))
      fail(ErrorKind::UnknownElement,
           "prebuilt index for unknown method " + std::to_string(method));

  ReachIndexMap indexes = std::move(prebuilt);
  for (int method : pvg.methods())
    if (!indexes.count(method))
      indexes.emplace(method, build_method_index(pvg, method));

  // Call pairs keyed by (entry, exit) of the callee.
  struct CallPair {
    NodeId x, y;
    int caller;
  };
  std::map<std::pair<NodeId, NodeId>, std::vector<CallPair>> by_entry_exit;
  for (const auto& cs : pvg.call_sites()) {
    if (cs.caller < 0) continue;
    for (const Edge& call : cs.call_edges)
      for (const Edge& ret : cs.return_edges)
        by_entry_exit[{call.dst, ret.src}].push_back(
            {call.src, ret.dst, cs.caller});
  }

  std::deque<int> pool(pvg.methods().begin(), pvg.methods().end());
  std::map<int, bool> queued;
  for (int m : pvg.methods()) queued[m] = true;

  while (!pool.empty()) {
    int j = pool.front();
    pool.pop_front();
    queued[j] = false;
    stats->pool_extractions++;

    ReachIndex& idx = indexes.at(j);
    for (NodeId u : pvg.entries_of(j)) {
      for (NodeId v : pvg.exits_of(j)) {
        if (!idx.query(u, v)) continue;
        auto it = by_entry_exit.find({u, v});
        if (it == by_entry_exit.end()) continue;
        for (const CallPair& cp : it->second) {
          ReachIndex& caller_idx = indexes.at(cp.caller);
          if (caller_idx.query(cp.x, cp.y)) continue;
          if (!caller_idx.pair_co_resident(cp.x, cp.y)) {
            // The call site postdates the caller's decomposition (callback
            // into a preprocessed library method).
            stats->rebuilds++;
            caller_idx = rebuild_with_updates(pvg, cp.caller, caller_idx);
            if (caller_idx.query(cp.x, cp.y)) continue;
          }
          caller_idx.update(cp.x, cp.y);
          stats->summary_insertions++;
          if (!queued[cp.caller]) {
            queued[cp.caller] = true;
            pool.push_back(cp.caller);
          }
        }
      }
    }
  }
  return indexes;
}

SummaryArtifact preprocess_library(const ProgramValidGraph& library) {
  SummaryArtifact artifact;
  artifact.digest = graph_digest(library.base());
  artifact.methods = library.methods();
  artifact.indexes = process(library);
  for (const auto& [method, idx] : artifact.indexes) {
    std::vector<std::string> names;
    names.reserve(idx.nodes().size());
    for (NodeId u : idx.nodes()) names.push_back(library.base().name(u));
    artifact.node_names[method] = std::move(names);
  }
  return artifact;
}

ReachIndexMap analyze_client(const SummaryArtifact& summary,
                             const ProgramValidGraph& full,
                             ProcessStats* stats) {
  LabeledGraph library_now = full.restrict_to(summary.methods);
  if (graph_digest(library_now) != summary.digest)
    fail(ErrorKind::StaleSummary,
         "library subgraph changed since the summary was built");

  // Rebind the preserved indexes to the full graph's interning.
  ReachIndexMap prebuilt;
  for (const auto& [method, idx] : summary.indexes) {
    std::vector<NodeId> nodes;
    for (const std::string& name : summary.node_names.at(method))
      nodes.push_back(full.base().node_or_throw(name));
    prebuilt.emplace(method, idx.with_nodes(std::move(nodes)));
  }
  return process(full, std::move(prebuilt), stats);
}

std::string canonical_graph_text(const LabeledGraph& g) {
  std::vector<NodeId> order(g.node_count());
  for (int i = 0; i < g.node_count(); i++) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](NodeId a, NodeId b) { return g.name(a) < g.name(b); });

  std::ostringstream out;
  out << "dyckgraph 1\nk " << g.alphabet_size() << "\nmode "
      << to_string(g.mode()) << "\n";
  for (NodeId u : order) {
    out << "node " << g.name(u);
    if (g.method_of(u) >= 0) out << " method=" << g.method_of(u);
    out << "\n";
  }
  std::vector<std::string> lines;
  for (const Edge& e : g.edges())
    lines.push_back("edge " + g.name(e.src) + " " + g.name(e.dst) + " " +
                    to_string(e.label));
  std::sort(lines.begin(), lines.end());
  for (const auto& l : lines) out << l << "\n";
  return out.str();
}

std::string graph_digest(const LabeledGraph& g) {
  // FNV-1a, 64 bit.
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : canonical_graph_text(g)) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string("fnv1a64:") + buf;
}

} // namespace dyck
