#include "dyck/treedec.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <sstream>

#include "dyck/errors.hpp"

namespace dyck {

void UndirectedGraph::add_edge(int u, int v) {
  if (u == v) return;
  adj[u].push_back(v);
  adj[v].push_back(u);
}

void UndirectedGraph::finalize() {
  for (auto& list : adj) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
}

bool UndirectedGraph::has_edge(int u, int v) const {
  return std::binary_search(adj[u].begin(), adj[u].end(), v);
}

int UndirectedGraph::edge_count() const {
  int total = 0;
  for (const auto& list : adj) total += static_cast<int>(list.size());
  return total / 2;
}

UndirectedGraph undirected_view(const LabeledGraph& g) {
  UndirectedGraph ug(g.node_count());
  for (const Edge& e : g.edges()) ug.add_edge(e.src, e.dst);
  ug.finalize();
  return ug;
}

bool TreeDecomposition::bag_contains(int b, int node) const {
  return std::binary_search(bags_[b].begin(), bags_[b].end(), node);
}

TreeDecomposition TreeDecomposition::assemble(std::vector<std::vector<int>> bags,
                                              std::vector<int> parent,
                                              int node_count) {
  TreeDecomposition td;
  int b = static_cast<int>(bags.size());
  for (auto& bag : bags) {
    std::sort(bag.begin(), bag.end());
    bag.erase(std::unique(bag.begin(), bag.end()), bag.end());
  }
  td.bags_ = std::move(bags);
  td.parent_ = std::move(parent);
  td.children_.assign(b, {});
  td.root_ = -1;
  for (int i = 0; i < b; i++) {
    if (td.parent_[i] < 0) {
      if (td.root_ >= 0)
        fail(ErrorKind::InvalidDecomposition, "multiple roots");
      td.root_ = i;
    } else {
      td.children_[td.parent_[i]].push_back(i);
    }
  }
  if (b > 0 && td.root_ < 0)
    fail(ErrorKind::InvalidDecomposition, "no root (parent links cyclic)");

  td.level_.assign(b, -1);
  td.height_ = 0;
  std::deque<int> bfs;
  if (td.root_ >= 0) {
    td.level_[td.root_] = 0;
    bfs.push_back(td.root_);
  }
  int visited = 0;
  while (!bfs.empty()) {
    int cur = bfs.front();
    bfs.pop_front();
    visited++;
    td.height_ = std::max(td.height_, td.level_[cur]);
    for (int c : td.children_[cur]) {
      td.level_[c] = td.level_[cur] + 1;
      bfs.push_back(c);
    }
  }
  if (visited != b)
    fail(ErrorKind::InvalidDecomposition, "parent links do not form one tree");

  td.width_ = -1;
  for (const auto& bag : td.bags_)
    td.width_ = std::max(td.width_, static_cast<int>(bag.size()) - 1);

  td.root_bag_.assign(node_count, -1);
  for (int i = 0; i < b; i++)
    for (int u : td.bags_[i]) {
      int& rb = td.root_bag_[u];
      if (rb < 0 || td.level_[i] < td.level_[rb] ||
          (td.level_[i] == td.level_[rb] && i < rb))
        rb = i;
    }
  return td;
}

namespace {

bool subset_of(const std::vector<int>& a, const std::vector<int>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

/// Contracts tree edges whose endpoint bags are subset-related.
void prune_subset_bags(std::vector<std::vector<int>>& bags,
                       std::vector<int>& parent) {
  int b = static_cast<int>(bags.size());
  std::vector<bool> alive(b, true);
  auto live_parent = [&](int x) {
    int p = parent[x];
    while (p >= 0 && !alive[p]) p = parent[p];
    return p;
  };
  bool changed = true;
  while (changed) {
    changed = false;
    for (int x = 0; x < b; x++) {
      if (!alive[x]) continue;
      int p = live_parent(x);
      if (p < 0) continue;
      if (subset_of(bags[x], bags[p])) {
        alive[x] = false;  // children re-resolve through live_parent
        changed = true;
      } else if (subset_of(bags[p], bags[x])) {
        parent[x] = live_parent(p);
        // Other children of p reattach to x.
        for (int y = 0; y < b; y++)
          if (alive[y] && y != x && live_parent(y) == p) parent[y] = x;
        alive[p] = false;
        changed = true;
      }
    }
  }
  // Compact.
  std::vector<int> remap(b, -1);
  std::vector<std::vector<int>> nbags;
  std::vector<int> nparent;
  for (int x = 0; x < b; x++)
    if (alive[x]) {
      remap[x] = static_cast<int>(nbags.size());
      nbags.push_back(std::move(bags[x]));
      nparent.push_back(0);
    }
  for (int x = 0; x < b; x++)
    if (alive[x]) {
      int p = live_parent(x);
      nparent[remap[x]] = p < 0 ? -1 : remap[p];
    }
  bags = std::move(nbags);
  parent = std::move(nparent);
}

} // namespace

TreeDecomposition decompose(const UndirectedGraph& g,
                            DecomposeHeuristic heuristic) {
  const int n = g.n;
  if (n == 0)
    return TreeDecomposition::assemble({{}}, {-1}, 0);

  std::vector<std::set<int>> adj(n);
  for (int u = 0; u < n; u++)
    adj[u] = std::set<int>(g.adj[u].begin(), g.adj[u].end());

  auto fill_in = [&](int u) {
    int fills = 0;
    for (auto it = adj[u].begin(); it != adj[u].end(); ++it)
      for (auto jt = std::next(it); jt != adj[u].end(); ++jt)
        if (!adj[*it].count(*jt)) fills++;
    return fills;
  };

  std::vector<bool> eliminated(n, false);
  std::vector<int> elim_step(n, -1);
  std::vector<std::vector<int>> bags;
  std::vector<std::vector<int>> bag_neighbors(n);  // survivors at elimination

  for (int step = 0; step < n; step++) {
    int best = -1;
    long best_score = -1;
    for (int u = 0; u < n; u++) {
      if (eliminated[u]) continue;
      long score = heuristic == DecomposeHeuristic::MinDegree
                       ? static_cast<long>(adj[u].size())
                       : static_cast<long>(fill_in(u)) * n + adj[u].size();
      if (best < 0 || score < best_score) {
        best = u;
        best_score = score;
      }
    }
    elim_step[best] = step;
    eliminated[best] = true;
    std::vector<int> neighbors(adj[best].begin(), adj[best].end());
    bag_neighbors[best] = neighbors;
    std::vector<int> bag = neighbors;
    bag.push_back(best);
    std::sort(bag.begin(), bag.end());  // subset pruning needs sorted bags
    bags.push_back(std::move(bag));
    for (int v : neighbors) adj[v].erase(best);
    for (size_t a = 0; a < neighbors.size(); a++)
      for (size_t c = a + 1; c < neighbors.size(); c++) {
        adj[neighbors[a]].insert(neighbors[c]);
        adj[neighbors[c]].insert(neighbors[a]);
      }
  }

  // Bag of v hangs under the bag of its earliest-eliminated surviving
  // neighbor; neighborless bags are roots, chained together.
  std::vector<int> parent(n, -1);
  int prev_root = -1;
  for (int step = n - 1; step >= 0; step--) {
    int v = -1;
    for (int u = 0; u < n; u++)
      if (elim_step[u] == step) v = u;
    if (bag_neighbors[v].empty()) {
      if (prev_root >= 0) parent[prev_root] = step;
      prev_root = step;
    } else {
      int first = -1;
      for (int w : bag_neighbors[v])
        if (first < 0 || elim_step[w] < elim_step[first]) first = w;
      parent[step] = elim_step[first];
    }
  }

  prune_subset_bags(bags, parent);
  return TreeDecomposition::assemble(std::move(bags), std::move(parent), n);
}

std::vector<TdViolation> validate(const TreeDecomposition& td,
                                  const UndirectedGraph& g) {
  std::vector<TdViolation> out;
  const int b = td.bag_count();

  std::vector<bool> covered(g.n, false);
  for (int i = 0; i < b; i++)
    for (int u : td.bag(i)) {
      if (u < 0 || u >= g.n) {
        out.push_back({TdCondition::C1,
                       "bag " + std::to_string(i) + " contains foreign node " +
                           std::to_string(u)});
        continue;
      }
      covered[u] = true;
    }
  for (int u = 0; u < g.n; u++)
    if (!covered[u])
      out.push_back({TdCondition::C1, "node " + std::to_string(u) + " uncovered"});

  for (int u = 0; u < g.n; u++)
    for (int v : g.adj[u]) {
      if (v < u) continue;
      bool ok = false;
      for (int i = 0; i < b && !ok; i++)
        if (td.bag_contains(i, u) && td.bag_contains(i, v)) ok = true;
      if (!ok)
        out.push_back({TdCondition::C2, "edge (" + std::to_string(u) + "," +
                                            std::to_string(v) + ") uncovered"});
    }

  // C3: the bags holding u are connected iff exactly one of them has a
  // parent that does not hold u (or is the root).
  for (int u = 0; u < g.n; u++) {
    int tops = 0, appearances = 0;
    for (int i = 0; i < b; i++) {
      if (!td.bag_contains(i, u)) continue;
      appearances++;
      int p = td.parent(i);
      if (p < 0 || !td.bag_contains(p, u)) tops++;
    }
    if (appearances > 0 && tops != 1)
      out.push_back({TdCondition::C3, "bags containing node " +
                                          std::to_string(u) +
                                          " form " + std::to_string(tops) +
                                          " disconnected subtrees"});
  }
  return out;
}

namespace {

class Rebalancer {
public:
  explicit Rebalancer(const TreeDecomposition& td) : td_(td) {
    adj_.resize(td.bag_count());
    for (int i = 0; i < td.bag_count(); i++)
      if (td.parent(i) >= 0) {
        adj_[i].push_back(td.parent(i));
        adj_[td.parent(i)].push_back(i);
      }
  }

  TreeDecomposition run(int node_count) {
    std::vector<int> all(td_.bag_count());
    std::iota(all.begin(), all.end(), 0);
    build(all, {}, -1);
    return TreeDecomposition::assemble(std::move(new_bags_),
                                       std::move(new_parent_), node_count);
  }

private:
  using BoundaryEdge = std::pair<int, int>;  // (emitted bag, inside bag)

  // Subtree sizes with `center` acting as root, restricted to `in_comp`.
  std::vector<int> subtree_sizes(const std::vector<char>& in_comp, int center,
                                 std::vector<int>& order,
                                 std::vector<int>& par) const {
    std::vector<int> size(td_.bag_count(), 0);
    order.clear();
    par.assign(td_.bag_count(), -1);
    std::deque<int> bfs{center};
    std::vector<char> seen(td_.bag_count(), 0);
    seen[center] = 1;
    while (!bfs.empty()) {
      int cur = bfs.front();
      bfs.pop_front();
      order.push_back(cur);
      for (int nb : adj_[cur])
        if (in_comp[nb] && !seen[nb]) {
          seen[nb] = 1;
          par[nb] = cur;
          bfs.push_back(nb);
        }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      size[*it] += 1;
      if (par[*it] >= 0) size[par[*it]] += size[*it];
    }
    return size;
  }

  int centroid(const std::vector<int>& comp,
               const std::vector<char>& in_comp) const {
    std::vector<int> order, par;
    auto size = subtree_sizes(in_comp, comp.front(), order, par);
    int total = static_cast<int>(comp.size());
    for (int c : comp) {
      int largest = total - size[c];
      for (int nb : adj_[c])
        if (in_comp[nb] && par[c] != nb && par[nb] == c)
          largest = std::max(largest, size[nb]);
      if (largest * 2 <= total) return c;
    }
    return comp.front();  // unreachable for a tree
  }

  // Split bag on the path between the two boundary-entry bags: the largest
  // piece that keeps the first entry's side at most half, so every child is
  // either half-sized or loses a boundary edge.
  int path_split(const std::vector<int>& comp, const std::vector<char>& in_comp,
                 int from, int to) const {
    std::vector<int> order, par;
    auto size = subtree_sizes(in_comp, to, order, par);
    std::vector<int> path;
    for (int cur = from; cur != -1; cur = par[cur]) path.push_back(cur);
    int total = static_cast<int>(comp.size());
    // Cutting at path[i] leaves the `from` side with size[path[i-1]] bags.
    int chosen = path.front();
    for (size_t i = 0; i < path.size(); i++) {
      int from_side = i == 0 ? 0 : size[path[i - 1]];
      if (from_side * 2 <= total) chosen = path[i];
      else break;
    }
    return chosen;
  }

  void build(const std::vector<int>& comp, std::vector<BoundaryEdge> boundary,
             int parent_new) {
    std::vector<char> in_comp(td_.bag_count(), 0);
    for (int c : comp) in_comp[c] = 1;

    int center;
    if (boundary.size() <= 1) {
      center = centroid(comp, in_comp);
    } else {
      center = path_split(comp, in_comp, boundary[0].second,
                          boundary[1].second);
    }

    // New bag: the split bag plus the interface carried across boundaries.
    std::vector<int> members = td_.bag(center);
    for (const auto& [outside, inside] : boundary) {
      const auto& a = td_.bag(outside);
      const auto& bset = td_.bag(inside);
      std::vector<int> inter;
      std::set_intersection(a.begin(), a.end(), bset.begin(), bset.end(),
                            std::back_inserter(inter));
      members.insert(members.end(), inter.begin(), inter.end());
    }
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    int nb = static_cast<int>(new_bags_.size());
    new_bags_.push_back(std::move(members));
    new_parent_.push_back(parent_new);

    in_comp[center] = 0;
    std::vector<char> seen(td_.bag_count(), 0);
    for (int entry : adj_[center]) {
      if (!in_comp[entry] || seen[entry]) continue;
      std::vector<int> sub;
      std::deque<int> bfs{entry};
      seen[entry] = 1;
      while (!bfs.empty()) {
        int cur = bfs.front();
        bfs.pop_front();
        sub.push_back(cur);
        for (int x : adj_[cur])
          if (in_comp[x] && !seen[x]) {
            seen[x] = 1;
            bfs.push_back(x);
          }
      }
      std::vector<BoundaryEdge> sub_boundary{{center, entry}};
      for (const auto& be : boundary)
        if (std::find(sub.begin(), sub.end(), be.second) != sub.end())
          sub_boundary.push_back(be);
      build(sub, std::move(sub_boundary), nb);
    }
  }

  const TreeDecomposition& td_;
  std::vector<std::vector<int>> adj_;
  std::vector<std::vector<int>> new_bags_;
  std::vector<int> new_parent_;
};

} // namespace

TreeDecomposition rebalance(const TreeDecomposition& td) {
  if (td.bag_count() == 0) return td;
  Rebalancer r(td);
  return r.run(td.node_count());
}

bool co_resident(const TreeDecomposition& td, int u, int v) {
  return td.bag_contains(td.root_bag(u), v) || td.bag_contains(td.root_bag(v), u);
}

int bag_of_edge(const TreeDecomposition& td, int u, int v) {
  if (!co_resident(td, u, v))
    fail(ErrorKind::NotCoResident, "nodes " + std::to_string(u) + " and " +
                                       std::to_string(v) + " share no bag");
  int bu = td.root_bag(u), bv = td.root_bag(v);
  return td.level(bu) >= td.level(bv) ? bu : bv;
}

std::string dump_td(const TreeDecomposition& td,
                    const std::vector<std::string>* names) {
  std::ostringstream out;
  for (int i = 0; i < td.bag_count(); i++) {
    out << "bag " << i << " parent=";
    if (td.parent(i) < 0) out << "-";
    else out << td.parent(i);
    out << " :";
    for (int u : td.bag(i)) {
      out << " ";
      if (names) out << (*names)[u];
      else out << u;
    }
    out << "\n";
  }
  return out.str();
}

} // namespace dyck
