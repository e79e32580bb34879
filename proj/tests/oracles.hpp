#pragma once

// Brute-force oracles kept independent of the library's shortest-path and
// certificate code paths. They recompute everything from the raw adjacency
// by exhaustive enumeration and are only meant for small instances.

#include <algorithm>
#include <vector>

#include "ccgeo/space.hpp"

namespace oracle {

using ccgeo::Space;
using ccgeo::Vertex;

// Exhaustive simple-path enumeration; returns the minimum total scaled
// length over all simple paths from u to v (-1 if none).
inline void all_paths_dfs(const Space& s, Vertex at, Vertex v, int64_t len,
                          std::vector<bool>& used, int64_t& best) {
  if (at == v) {
    if (best < 0 || len < best) best = len;
    return;
  }
  for (auto [y, e] : s.adj[at]) {
    if (used[y]) continue;
    if (best >= 0 && len + s.wscaled[e] >= best) continue;
    used[y] = true;
    all_paths_dfs(s, y, v, len + s.wscaled[e], used, best);
    used[y] = false;
  }
}

inline int64_t min_over_all_paths(const Space& s, Vertex u, Vertex v) {
  int64_t best = -1;
  std::vector<bool> used(s.vertex_count(), false);
  used[u] = true;
  all_paths_dfs(s, u, v, 0, used, best);
  return best;
}

// Brute-force lattice validity: 1-discrete and 2-dense, via pairwise
// shortest paths computed by Floyd-Warshall on scaled lengths.
inline std::vector<std::vector<int64_t>> floyd_warshall(const Space& s) {
  const size_t n = s.vertex_count();
  std::vector<std::vector<int64_t>> d(n, std::vector<int64_t>(n, ccgeo::kUnreachable));
  for (size_t i = 0; i < n; ++i) d[i][i] = 0;
  for (size_t e = 0; e < s.edges.size(); ++e) {
    auto& ed = s.edges[e];
    d[ed.u][ed.v] = std::min(d[ed.u][ed.v], s.wscaled[e]);
    d[ed.v][ed.u] = std::min(d[ed.v][ed.u], s.wscaled[e]);
  }
  for (size_t k = 0; k < n; ++k)
    for (size_t i = 0; i < n; ++i) {
      if (d[i][k] == ccgeo::kUnreachable) continue;
      for (size_t j = 0; j < n; ++j) {
        if (d[k][j] == ccgeo::kUnreachable) continue;
        d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
      }
    }
  return d;
}

inline bool lattice_valid_bruteforce(const Space& s) {
  auto d = floyd_warshall(s);
  for (Vertex a : s.lattice)
    for (Vertex b : s.lattice)
      if (a != b && d[a][b] < s.scale) return false;
  for (Vertex v = 0; v < s.vertex_count(); ++v) {
    int64_t nearest = ccgeo::kUnreachable;
    for (Vertex a : s.lattice) nearest = std::min(nearest, d[v][a]);
    if (nearest > 2 * s.scale) return false;
  }
  return true;
}

}  // namespace oracle
