#include "dyck/gen.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_set>

#include "dyck/errors.hpp"

namespace dyck {

namespace {

uint64_t pair_key(int u, int v) {
  return (static_cast<uint64_t>(static_cast<uint32_t>(u)) << 32) |
         static_cast<uint32_t>(v);
}

int pick(std::mt19937_64& rng, int lo, int hi) {  // inclusive bounds
  return static_cast<int>(std::uniform_int_distribution<int>(lo, hi)(rng));
}

} // namespace

LabeledGraph gen_bidirected(const BidirectedGenSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  GraphBuilder builder(spec.k, GraphMode::Bidirected);
  for (int i = 0; i < spec.n; i++) builder.add_node("n" + std::to_string(i));

  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::unordered_set<uint64_t> used;
  int placed = 0, attempts = 0;
  while (placed < spec.m && attempts < spec.m * 20 + 100) {
    attempts++;
    int u = pick(rng, 0, spec.n - 1);
    int v = pick(rng, 0, spec.n - 1);
    bool eps = spec.k == 0 || coin(rng) < spec.eps_frac;
    if (eps && u == v) continue;
    // One label per ordered pair; the mirror occupies (v,u).
    if (used.count(pair_key(u, v)) || used.count(pair_key(v, u))) continue;
    used.insert(pair_key(u, v));
    used.insert(pair_key(v, u));
    Label l = eps ? Label::eps() : Label::open(pick(rng, 1, spec.k));
    builder.add_edge(u, v, l);
    placed++;
  }
  return builder.build();
}

UndirectedGraph gen_ktree(const KTreeGenSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  const int w = std::max(1, spec.width);
  const int n = std::max(spec.n, w + 1);
  std::uniform_real_distribution<double> coin(0.0, 1.0);

  // Grow a k-tree: seed clique, then attach each node to a random
  // w-clique; drop edges afterwards.
  std::vector<std::vector<int>> cliques;
  std::vector<std::pair<int, int>> edges;
  std::vector<int> seed_clique;
  for (int i = 0; i <= w && i < n; i++) seed_clique.push_back(i);
  for (size_t a = 0; a < seed_clique.size(); a++)
    for (size_t b = a + 1; b < seed_clique.size(); b++)
      edges.push_back({seed_clique[a], seed_clique[b]});
  cliques.push_back(seed_clique);

  for (int v = w + 1; v < n; v++) {
    const auto& base = cliques[pick(rng, 0, static_cast<int>(cliques.size()) - 1)];
    std::vector<int> sub = base;
    while (static_cast<int>(sub.size()) > w) sub.erase(sub.begin() + pick(rng, 0, static_cast<int>(sub.size()) - 1));
    for (int u : sub) edges.push_back({u, v});
    sub.push_back(v);
    cliques.push_back(std::move(sub));
  }

  UndirectedGraph g(n);
  for (auto [u, v] : edges)
    if (coin(rng) >= spec.drop_prob) g.add_edge(u, v);
  g.finalize();
  return g;
}

LabeledGraph gen_ktree_labeled(const KTreeGenSpec& spec) {
  UndirectedGraph ug = gen_ktree(spec);
  GraphBuilder builder(0, GraphMode::Bidirected);
  for (int i = 0; i < ug.n; i++) builder.add_node("n" + std::to_string(i));
  for (int u = 0; u < ug.n; u++)
    for (int v : ug.adj[u])
      if (u < v) builder.add_edge(u, v, Label::eps());
  return builder.build();
}

LabeledGraph gen_program_valid(const ProgramValidGenSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  const int methods = std::max(1, spec.methods);
  GraphBuilder builder(std::max(0, spec.call_sites), GraphMode::General);

  std::vector<std::vector<NodeId>> nodes(methods);
  std::vector<std::vector<NodeId>> entries(methods), exits(methods);
  std::unordered_set<uint64_t> used;

  for (int m = 0; m < methods; m++) {
    int n_m = pick(rng, 2, std::max(2, spec.max_nodes_per_method));
    for (int i = 0; i < n_m; i++)
      nodes[m].push_back(builder.add_node(
          "m" + std::to_string(m) + "." + std::to_string(i), m));

    // Local shape: a partial k-tree, randomly oriented eps edges.
    KTreeGenSpec local{n_m, std::min(spec.treewidth_target, n_m - 1), 0.35,
                       rng()};
    UndirectedGraph skeleton = gen_ktree(local);
    for (int u = 0; u < skeleton.n && u < n_m; u++)
      for (int v : skeleton.adj[u]) {
        if (v <= u || v >= n_m) continue;
        NodeId a = nodes[m][u], b = nodes[m][v];
        if (rng() & 1) std::swap(a, b);
        if (used.count(pair_key(a, b)) || used.count(pair_key(b, a))) continue;
        used.insert(pair_key(a, b));
        builder.add_edge(a, b, Label::eps());
      }

    // Entry/exit candidates, at most b of each.
    std::vector<NodeId> shuffled = nodes[m];
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    int b_here = std::max(1, spec.b);
    for (int i = 0; i < b_here && i < static_cast<int>(shuffled.size()); i++)
      entries[m].push_back(shuffled[i]);
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    for (int i = 0; i < b_here && i < static_cast<int>(shuffled.size()); i++)
      exits[m].push_back(shuffled[i]);
  }

  for (int site = 1; site <= spec.call_sites && methods >= 2; site++) {
    int caller = pick(rng, 0, methods - 1);
    int callee = pick(rng, 0, methods - 1);
    if (callee == caller) callee = (callee + 1) % methods;

    int args = pick(rng, 1, std::max(1, spec.b));
    for (int a = 0; a < args; a++) {
      NodeId x = nodes[caller][pick(rng, 0, static_cast<int>(nodes[caller].size()) - 1)];
      NodeId u = entries[callee][pick(rng, 0, static_cast<int>(entries[callee].size()) - 1)];
      if (used.count(pair_key(x, u))) continue;
      used.insert(pair_key(x, u));
      builder.add_edge(x, u, Label::open(site));
    }
    int rets = pick(rng, 1, std::max(1, spec.b));
    for (int r = 0; r < rets; r++) {
      NodeId v = exits[callee][pick(rng, 0, static_cast<int>(exits[callee].size()) - 1)];
      NodeId y = nodes[caller][pick(rng, 0, static_cast<int>(nodes[caller].size()) - 1)];
      if (used.count(pair_key(v, y))) continue;
      used.insert(pair_key(v, y));
      builder.add_edge(v, y, Label::close(site));
    }
  }
  return builder.build();
}

UnionSequence gen_union_sequence(const UnionSeqGenSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  const int n = std::max(2, spec.universe);
  std::vector<int> parent(n);
  for (int i = 0; i < n; i++) parent[i] = i;
  auto root = [&](int u) {
    while (parent[u] != u) {
      parent[u] = parent[parent[u]];
      u = parent[u];
    }
    return u;
  };

  std::vector<std::pair<int, int>> ops;
  int sets = n;
  while (static_cast<int>(ops.size()) < spec.ops && sets > 1) {
    int a = pick(rng, 0, n - 1);
    int b = pick(rng, 0, n - 1);
    if (root(a) == root(b)) continue;
    parent[root(a)] = root(b);
    ops.push_back({a, b});
    sets--;
  }
  return UnionSequence(n, std::move(ops));
}

CnfGrammar gen_cnf(const CnfGenSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  const int nts = std::max(1, spec.nonterminals);
  const int ts = std::max(1, std::min(spec.terminals, 26));

  std::vector<std::string> names;
  for (int i = 0; i < nts; i++) names.push_back(std::string(1, 'A' + i));
  names[0] = "S";
  std::string terms;
  for (int i = 0; i < ts; i++) terms.push_back('a' + i);

  CnfGrammar g("S", names, terms);
  for (int i = 0; i < nts; i++) {
    int rules = pick(rng, 1, 3);
    bool has_terminal = false;
    for (int r = 0; r < rules; r++) {
      if (pick(rng, 0, 2) == 0 || (r == rules - 1 && !has_terminal && pick(rng, 0, 1) == 0)) {
        g.add_terminal(names[i], terms[pick(rng, 0, ts - 1)]);
        has_terminal = true;
      } else {
        g.add_binary(names[i], names[pick(rng, 0, nts - 1)],
                     names[pick(rng, 0, nts - 1)]);
      }
    }
  }
  return g;
}

std::string write_union_sequence(const UnionSequence& seq) {
  std::ostringstream out;
  out << "unionseq 1\n";
  out << "universe " << seq.universe() << "\n";
  for (int e = 0; e < seq.universe(); e++)
    out << "element " << seq.element_name(e) << "\n";
  for (auto [a, b] : seq.ops())
    out << "union " << seq.element_name(a) << " " << seq.element_name(b) << "\n";
  return out.str();
}

UnionSequence read_union_sequence(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  int universe = -1;
  std::vector<std::pair<int, int>> ops;
  std::unordered_map<std::string, int> ids;
  std::vector<std::string> names;
  bool saw_header = false;

  auto resolve = [&](const std::string& name) {
    auto it = ids.find(name);
    if (it != ids.end()) return it->second;
    int id = static_cast<int>(names.size());
    ids.emplace(name, id);
    names.push_back(name);
    return id;
  };

  while (std::getline(in, line)) {
    lineno++;
    std::istringstream ls(line);
    std::vector<std::string> toks;
    std::string t;
    while (ls >> t) {
      if (t[0] == '#') break;
      toks.push_back(t);
    }
    if (toks.empty()) continue;
    if (!saw_header) {
      if (toks.size() != 2 || toks[0] != "unionseq" || toks[1] != "1")
        fail(ErrorKind::ParseError,
             "line " + std::to_string(lineno) + ": expected 'unionseq 1'");
      saw_header = true;
    } else if (toks[0] == "universe" && toks.size() == 2) {
      universe = std::stoi(toks[1]);
    } else if (toks[0] == "element" && toks.size() == 2) {
      resolve(toks[1]);
    } else if (toks[0] == "union" && toks.size() == 3) {
      ops.push_back({resolve(toks[1]), resolve(toks[2])});
    } else {
      fail(ErrorKind::ParseError, "line " + std::to_string(lineno) +
                                      ": expected 'universe', 'element' or 'union'");
    }
  }
  if (universe < 0) fail(ErrorKind::ParseError, "missing 'universe' line");
  while (static_cast<int>(names.size()) < universe)
    names.push_back("e" + std::to_string(names.size()));
  return UnionSequence(universe, std::move(ops), std::move(names));
}

} // namespace dyck
