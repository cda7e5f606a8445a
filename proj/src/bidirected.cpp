#include "dyck/bidirected.hpp"

#include <algorithm>
#include <numeric>

#include "dyck/errors.hpp"

namespace dyck {

BidirectedEngine::BidirectedEngine(int node_count, int alphabet_size, bool lifo)
    : n_(node_count), k_(alphabet_size), lifo_(lifo) {
  lists_.resize(static_cast<size_t>(n_) * k_);
  for (int u = 0; u < n_; u++) ds_.make_set(u);
}

BidirectedEngine::BidirectedEngine(DisjointSets seeds, int alphabet_size,
                                   bool lifo)
    : n_(seeds.element_count()), k_(alphabet_size), lifo_(lifo),
      ds_(std::move(seeds)) {
  lists_.resize(static_cast<size_t>(n_) * k_);
}

void BidirectedEngine::append_edge(int u, int close_index, int target) {
  List& l = list(u, close_index);
  int cell = static_cast<int>(pool_.size());
  pool_.push_back({target, -1});
  if (l.tail < 0) l.head = cell;
  else pool_[l.tail].next = cell;
  l.tail = cell;
  l.size++;
}

void BidirectedEngine::enqueue(int u, int close_index) {
  queue_.push_back({u, close_index});
}

void BidirectedEngine::splice(List& from, List& onto) {
  stats_.splices++;
  if (from.head < 0) return;
  if (onto.tail < 0) onto.head = from.head;
  else pool_[onto.tail].next = from.head;
  onto.tail = from.tail;
  onto.size += from.size;
  from = List{};
}

std::vector<int> BidirectedEngine::list_contents(int u, int close_index) const {
  std::vector<int> out;
  for (int c = list(u, close_index).head; c >= 0; c = pool_[c].next)
    out.push_back(pool_[c].target);
  return out;
}

void BidirectedEngine::step(int u, int i) {
  uint64_t finds_before = ds_.stats().finds;
  uint64_t unions_before = ds_.stats().unions;

  // Stale queue entries: u has been merged away and is no longer a name.
  if (ds_.find(u) == u) {
    List& processed = list(u, i);
    if (processed.size >= 2) stats_.sum_sprime += processed.size;

    // S = representatives of the listed targets, deduplicated and sorted
    // so the "smallest element of S minus {u}" choice is reproducible.
    std::vector<int>& S = scratch_;
    S.clear();
    for (int c = processed.head; c >= 0; c = pool_[c].next)
      S.push_back(ds_.find(pool_[c].target));
    std::sort(S.begin(), S.end());
    S.erase(std::unique(S.begin(), S.end()), S.end());

    if (S.size() >= 2) {
      int x = S.front() != u ? S.front() : S[1];
      bool u_in_s = std::binary_search(S.begin(), S.end(), u);
      ds_.union_sets(S, x);
      for (int j = 1; j <= k_; j++) {
        List& target_list = list(x, j);
        for (int v : S) {
          if (v == x) continue;
          if (u != v || i != j) {
            splice(list(v, j), target_list);
          } else {
            // The processed list itself: all its targets are now in x's
            // set, so it collapses to a single self-edge on x.
            processed = List{};
            append_edge(x, j, x);
          }
        }
        if (target_list.size >= 2) enqueue(x, j);
      }
      if (!u_in_s || S.size() == 1) {
        processed = List{};
        append_edge(u, i, x);
      }
    } else if (S.size() == 1) {
      processed = List{};
      append_edge(u, i, S.front());
    }
  }

  stats_.iterations++;
  stats_.finds += ds_.stats().finds - finds_before;
  stats_.unions += ds_.stats().unions - unions_before;
}

bool BidirectedEngine::step_one() {
  if (queue_.empty()) return false;
  std::pair<int, int> item;
  if (lifo_) {
    item = queue_.back();
    queue_.pop_back();
  } else {
    item = queue_.front();
    queue_.pop_front();
  }
  step(item.first, item.second);
  return true;
}

void BidirectedEngine::run() {
  while (step_one()) {
  }
}

DensifyResult densify_reduce(const LabeledGraph& g) {
  if (!validate_bidirected(g).empty())
    fail(ErrorKind::PreconditionViolated, "densify_reduce requires a bidirected graph");
  for (const Edge& e : g.edges())
    if (e.label.is_eps())
      fail(ErrorKind::PreconditionViolated,
           "densify_reduce requires an eps-free graph (contract first)");

  const int n = g.node_count();
  const int k = g.alphabet_size();
  DisjointSets seeds;
  for (int u = 0; u < n; u++) seeds.make_set(u);

  // Collect closing out-edges per (node, index) and merge fanouts.
  std::vector<std::vector<NodeId>> targets(k);
  std::vector<int> reps;
  GraphBuilder builder(k, GraphMode::Bidirected);
  for (NodeId u = 0; u < n; u++) builder.add_node(g.name(u));
  for (NodeId u = 0; u < n; u++) {
    for (auto& t : targets) t.clear();
    for (const Edge& e : g.out(u))
      if (e.label.is_close()) targets[e.label.index - 1].push_back(e.dst);
    for (int i = 1; i <= k; i++) {
      auto& ts = targets[i - 1];
      if (ts.empty()) continue;
      if (ts.size() == 1) {
        builder.add_edge_dedup(u, ts.front(), Label::close(i));
        continue;
      }
      reps.clear();
      for (NodeId v : ts) reps.push_back(seeds.find(v));
      std::sort(reps.begin(), reps.end());
      reps.erase(std::unique(reps.begin(), reps.end()), reps.end());
      if (reps.size() >= 2) seeds.union_sets(reps, reps.front());
      builder.add_edge_dedup(u, seeds.find(ts.front()), Label::close(i));
    }
  }
  return DensifyResult{builder.build(), std::move(seeds)};
}

BidirectedReachResult bidirected_reach(const LabeledGraph& g,
                                       const BidirectedReachOptions& options) {
  auto violations = validate_bidirected(g);
  if (!violations.empty())
    fail(ErrorKind::NotBidirected, violations.front().describe(g));

  const int n = g.node_count();
  const int k = g.alphabet_size();

  // Step 1, eps contraction, fused: eps components become initial sets of
  // the engine's structure instead of materializing a contracted graph.
  // The smallest member ids act as the contracted node ids.
  std::vector<int> eps_root(n);
  {
    std::vector<int> parent(n), rank(n, 0);
    std::iota(parent.begin(), parent.end(), 0);
    auto root = [&](int u) {
      while (parent[u] != u) {
        parent[u] = parent[parent[u]];
        u = parent[u];
      }
      return u;
    };
    for (const Edge& e : g.edges())
      if (e.label.is_eps()) {
        int a = root(e.src), b = root(e.dst);
        if (a == b) continue;
        if (rank[a] < rank[b]) std::swap(a, b);
        parent[b] = a;
        if (rank[a] == rank[b]) rank[a]++;
      }
    // Canonicalize to the smallest member of each component.
    std::vector<int> smallest(n, -1);
    for (int u = 0; u < n; u++) {
      int r = root(u);
      if (smallest[r] < 0) smallest[r] = u;  // ids ascend, first hit is min
    }
    for (int u = 0; u < n; u++) eps_root[u] = smallest[root(u)];
  }

  DisjointSets seeds;
  for (int u = 0; u < n; u++) seeds.make_set(u);
  for (int u = 0; u < n; u++)
    if (eps_root[u] != u) seeds.union_sets({seeds.find(u), eps_root[u]}, eps_root[u]);
  DisjointSets::Stats seed_ops;

  // Step 2, dense-graph reduction, fused: per (contracted node, index),
  // merge all targets up front; one edge per group survives.
  std::vector<int> group_target;
  if (options.densify && k > 0) {
    group_target.assign(static_cast<size_t>(n) * k, -1);
    for (const Edge& e : g.edges()) {
      if (!e.label.is_close()) continue;
      size_t key = static_cast<size_t>(eps_root[e.src]) * k + (e.label.index - 1);
      int& slot = group_target[key];
      if (slot < 0) {
        slot = e.dst;
        continue;
      }
      int a = seeds.find(slot), b = seeds.find(e.dst);
      if (a != b) seeds.union_sets({a, b}, std::min(a, b));
    }
  }
  seed_ops = seeds.stats();

  BidirectedEngine engine(std::move(seeds), k, options.lifo);
  if (k > 0) {
    // Step 3 initialization: every set's edges live with its
    // representative. With the reduction on, only the per-group survivor
    // edge is appended.
    if (options.densify) {
      for (int c = 0; c < n; c++) {
        if (eps_root[c] != c) continue;
        for (int i = 1; i <= k; i++) {
          int target = group_target[static_cast<size_t>(c) * k + (i - 1)];
          if (target >= 0)
            engine.append_edge(engine.sets().find(c), i, target);
        }
      }
    } else {
      for (const Edge& e : g.edges())
        if (e.label.is_close())
          engine.append_edge(engine.sets().find(e.src), e.label.index, e.dst);
    }
    for (int u = 0; u < n; u++) {
      if (engine.sets().find(u) != u) continue;
      for (int i = 1; i <= k; i++)
        if (engine.list_size(u, i) >= 2) engine.enqueue(u, i);
    }
    engine.run();
  }

  std::vector<int> class_key(n);
  for (NodeId u = 0; u < n; u++) class_key[u] = engine.sets().find(u);

  BidirectedReachResult result;
  result.partition = DsccPartition::from_class_keys(class_key);
  result.stats = engine.stats();
  result.stats.unions += seed_ops.unions;  // contraction + reduction phases
  result.stats.finds += seed_ops.finds;
  result.stats.n = n;
  result.stats.m = g.edge_count();
  result.stats.k = k;
  result.stats.classes = result.partition.class_count();
  return result;
}

bool dscc_query(const DsccPartition& p, NodeId u, NodeId v) {
  return p.same_class(u, v);
}

} // namespace dyck
