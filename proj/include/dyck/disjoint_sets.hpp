#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dyck/errors.hpp"

namespace dyck {

/// Union-Find with representatives decoupled from tree roots: Union(S, x)
/// merges the sets of S and names the result x, while union-by-rank still
/// picks the physical root. Find applies full path compression.
///
/// Single-writer: Find mutates internal state, so no concurrent use during
/// an algorithm run.
class DisjointSets {
public:
  struct Stats {
    uint64_t finds = 0;
    uint64_t unions = 0;
    uint64_t parent_steps = 0;  // parent-chasing hops across all finds
  };

  /// u becomes its own singleton set and representative.
  void make_set(int u);
  bool contains(int u) const;

  /// Representative (name) of u's set.
  int find(int u);

  /// Merges the sets of the elements of S, which must lie in pairwise
  /// distinct sets, and makes x (a member of S) the new representative.
  void union_sets(std::span<const int> S, int x);
  void union_sets(std::initializer_list<int> S, int x) {
    union_sets(std::span<const int>(S.begin(), S.end()), x);
  }

  /// Physical root of u's tree (no name indirection). Compresses.
  int find_root(int u);

  int element_count() const { return elements_; }
  const Stats& stats() const { return stats_; }

private:
  void check_present(int u) const;

  std::vector<int> parent_;   // -1 marks "not present"
  std::vector<int> rank_;
  std::vector<int> name_;     // valid at tree roots only
  int elements_ = 0;
  Stats stats_;
};

} // namespace dyck
