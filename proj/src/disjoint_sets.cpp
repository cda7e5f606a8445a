#include "dyck/disjoint_sets.hpp"

#include <string>

namespace dyck {

void DisjointSets::make_set(int u) {
  if (u < 0) fail(ErrorKind::UnknownElement, "negative element id");
  if (u >= static_cast<int>(parent_.size())) {
    parent_.resize(u + 1, -1);
    rank_.resize(u + 1, 0);
    name_.resize(u + 1, -1);
  }
  if (parent_[u] >= 0)
    fail(ErrorKind::AlreadyPresent, "element already present: " + std::to_string(u));
  parent_[u] = u;
  rank_[u] = 0;
  name_[u] = u;
  elements_++;
}

bool DisjointSets::contains(int u) const {
  return u >= 0 && u < static_cast<int>(parent_.size()) && parent_[u] >= 0;
}

void DisjointSets::check_present(int u) const {
  if (!contains(u))
    fail(ErrorKind::UnknownElement, "unknown element: " + std::to_string(u));
}

int DisjointSets::find_root(int u) {
  check_present(u);
  int root = u;
  while (parent_[root] != root) {
    stats_.parent_steps++;
    root = parent_[root];
  }
  while (parent_[u] != root) {
    int next = parent_[u];
    parent_[u] = root;
    u = next;
  }
  return root;
}

int DisjointSets::find(int u) {
  stats_.finds++;
  return name_[find_root(u)];
}

void DisjointSets::union_sets(std::span<const int> S, int x) {
  stats_.unions++;
  bool x_in_s = false;
  int merged = -1;
  for (int s : S) {
    if (s == x) x_in_s = true;
    int r = find_root(s);
    if (merged < 0) {
      merged = r;
      continue;
    }
    int a = find_root(merged);
    if (a == r)
      fail(ErrorKind::NotDisjoint,
           "union arguments share a set: " + std::to_string(s));
    if (rank_[a] < rank_[r]) std::swap(a, r);
    parent_[r] = a;
    if (rank_[a] == rank_[r]) rank_[a]++;
    merged = a;
  }
  if (merged < 0 || !x_in_s)
    fail(ErrorKind::UnknownElement, "union requires x to be a member of S");
  check_present(x);
  name_[find_root(merged)] = x;
}

} // namespace dyck
