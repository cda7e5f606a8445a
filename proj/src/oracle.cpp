#include "dyck/oracle.hpp"

#include <deque>

#include "dyck/errors.hpp"

namespace dyck {

namespace {

// Nonterminal encoding: S = 0, A_i = i, Abar_i = k + i (1 <= i <= k).
constexpr int kNtS = 0;

enum DerivRule : uint8_t {
  kReflexive,     // S(u,u)
  kEpsEdge,       // edge (u,v,eps) => S(u,v)
  kOpenThenS,     // edge (u,x,o_i), S(x,v)   => A_i(u,v)
  kSThenClose,    // S(u,w), edge (w,v,c_i)   => Abar_i(u,v)
  kMatch,         // A_i(u,w), Abar_i(w,v)    => S(u,v)
  kConcat,        // S(u,w), S(w,v)           => S(u,v)
};

} // namespace

uint64_t ClosureRelation::key(int nt, NodeId u, NodeId v) const {
  return (static_cast<uint64_t>(nt) * n_ + u) * n_ + v;
}

bool ClosureRelation::s_pair(NodeId u, NodeId v) const {
  return facts_.count(key(kNtS, u, v)) != 0;
}

bool ClosureRelation::a_pair(int i, NodeId u, NodeId v) const {
  return facts_.count(key(i, u, v)) != 0;
}

bool ClosureRelation::abar_pair(int i, NodeId u, NodeId v) const {
  return facts_.count(key(k_ + i, u, v)) != 0;
}

const std::vector<NodeId>& ClosureRelation::s_successors(NodeId u) const {
  return s_succ_[u];
}

const std::vector<NodeId>& ClosureRelation::s_predecessors(NodeId v) const {
  return s_pred_[v];
}

void ClosureRelation::append_witness(uint64_t fact,
                                     std::vector<Edge>& out) const {
  auto it = derivations_.find(fact);
  if (it == derivations_.end())
    fail(ErrorKind::PreconditionViolated, "no derivation recorded for fact");
  const Deriv& d = it->second;
  switch (d.rule) {
  case kReflexive:
    break;
  case kEpsEdge:
    out.push_back(d.edge);
    break;
  case kOpenThenS:
    out.push_back(d.edge);
    append_witness(d.b, out);
    break;
  case kSThenClose:
    append_witness(d.a, out);
    out.push_back(d.edge);
    break;
  case kMatch:
  case kConcat:
    append_witness(d.a, out);
    append_witness(d.b, out);
    break;
  }
}

std::vector<Edge> ClosureRelation::witness(NodeId u, NodeId v) const {
  if (!s_pair(u, v))
    fail(ErrorKind::PreconditionViolated, "witness requested for non-pair");
  std::vector<Edge> path;
  append_witness(key(kNtS, u, v), path);
  return path;
}

ClosureRelation dyck_closure(const LabeledGraph& g, bool record_derivations) {
  ClosureRelation rel;
  const int n = g.node_count();
  const int k = g.alphabet_size();
  rel.n_ = n;
  rel.k_ = k;
  rel.s_succ_.resize(n);
  rel.s_pred_.resize(n);

  // Adjacency by label role.
  std::vector<std::vector<std::pair<NodeId, int>>> open_in(n);   // (x,i): (x,u,o_i)
  std::vector<std::vector<std::pair<NodeId, int>>> close_out(n); // (v,i): (w,v,c_i)
  for (const Edge& e : g.edges()) {
    if (e.label.is_open()) open_in[e.dst].push_back({e.src, e.label.index});
    if (e.label.is_close()) close_out[e.src].push_back({e.dst, e.label.index});
  }

  // Per-nonterminal successor/predecessor lists for the join rules.
  std::vector<std::vector<std::vector<NodeId>>> a_pred(k + 1),
      abar_succ(k + 1);
  for (int i = 1; i <= k; i++) {
    a_pred[i].resize(n);
    abar_succ[i].resize(n);
  }

  struct Fact {
    int nt;
    NodeId u, v;
  };
  std::deque<Fact> worklist;

  auto add = [&](int nt, NodeId u, NodeId v, ClosureRelation::Deriv deriv) {
    uint64_t fk = rel.key(nt, u, v);
    if (!rel.facts_.insert(fk).second) return;
    if (record_derivations) rel.derivations_.emplace(fk, deriv);
    if (nt == kNtS) {
      rel.s_succ_[u].push_back(v);
      rel.s_pred_[v].push_back(u);
    } else if (nt <= k) {
      a_pred[nt][v].push_back(u);
    } else {
      abar_succ[nt - k][u].push_back(v);
    }
    worklist.push_back({nt, u, v});
  };

  for (NodeId u = 0; u < n; u++) add(kNtS, u, u, {kReflexive, 0, 0, {}});
  for (const Edge& e : g.edges())
    if (e.label.is_eps()) add(kNtS, e.src, e.dst, {kEpsEdge, 0, 0, e});

  while (!worklist.empty()) {
    Fact f = worklist.front();
    worklist.pop_front();
    uint64_t fk = rel.key(f.nt, f.u, f.v);

    if (f.nt == kNtS) {
      // A_i -> o_i S
      for (auto [x, i] : open_in[f.u])
        add(i, x, f.v,
            {kOpenThenS, 0, fk, Edge{x, f.u, Label::open(i)}});
      // Abar_i -> S c_i
      for (auto [w, i] : close_out[f.v])
        add(k + i, f.u, w,
            {kSThenClose, fk, 0, Edge{f.v, w, Label::close(i)}});
      // S -> S S, joining on both sides
      for (NodeId w : rel.s_succ_[f.v])
        add(kNtS, f.u, w, {kConcat, fk, rel.key(kNtS, f.v, w), {}});
      for (NodeId t : rel.s_pred_[f.u])
        add(kNtS, t, f.v, {kConcat, rel.key(kNtS, t, f.u), fk, {}});
    } else if (f.nt <= k) {
      // S -> A_i Abar_i, A arrived
      int i = f.nt;
      for (NodeId w : abar_succ[i][f.v])
        add(kNtS, f.u, w, {kMatch, fk, rel.key(k + i, f.v, w), {}});
    } else {
      int i = f.nt - k;
      for (NodeId t : a_pred[i][f.u])
        add(kNtS, t, f.v, {kMatch, rel.key(i, t, f.u), fk, {}});
    }
  }
  return rel;
}

bool dyck_reachable(const LabeledGraph& g, NodeId u, NodeId v) {
  if (u < 0 || u >= g.node_count() || v < 0 || v >= g.node_count())
    fail(ErrorKind::UnknownNode, "node id out of range");
  return dyck_closure(g).s_pair(u, v);
}

DsccPartition dsccs_from_closure(const ClosureRelation& rel) {
  int n = rel.node_count();
  // key[u] = smallest v mutually S-reachable with u. Mutual reachability is
  // an equivalence, so equal keys identify classes.
  std::vector<int> class_key(n);
  for (NodeId u = 0; u < n; u++) {
    NodeId smallest = u;
    for (NodeId v : rel.s_successors(u))
      if (v < smallest && rel.s_pair(v, u)) smallest = v;
    class_key[u] = smallest;
  }
  return DsccPartition::from_class_keys(class_key);
}

} // namespace dyck
