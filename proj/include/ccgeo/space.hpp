#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ccgeo/error.hpp"
#include "ccgeo/rational.hpp"

namespace ccgeo {

using Vertex = uint32_t;
inline constexpr Vertex kNoVertex = std::numeric_limits<Vertex>::max();
inline constexpr int64_t kUnreachable = std::numeric_limits<int64_t>::max();

// A finite weighted graph with a designated lattice subset and basepoint.
// Immutable after construction; every query is read-only.
//
// Edge lengths are exact rationals. Internally all lengths are also kept as
// int64 multiples of a common denominator so that shortest-path arithmetic
// stays exact without bignum cost.
struct Space {
  std::string name;
  std::vector<std::string> ids;  // vertex ids, document order
  std::unordered_map<std::string, Vertex> index;

  struct Edge {
    Vertex u, v;
    Rat length;
  };
  std::vector<Edge> edges;
  // adjacency: per vertex, (neighbor, edge index)
  std::vector<std::vector<std::pair<Vertex, uint32_t>>> adj;

  std::vector<bool> in_lattice;
  std::vector<Vertex> lattice;  // lattice vertices, document order
  Vertex basepoint = kNoVertex;

  // Scaled integer lengths: wscaled[e] = edges[e].length * scale, exactly.
  int64_t scale = 1;
  std::vector<int64_t> wscaled;
  int64_t max_edge_scaled = 0;

  // rank_of[v] = position of ids[v] among all ids in string order; used for
  // lexicographic tie-breaking of geodesics.
  std::vector<uint32_t> rank_of;

  size_t vertex_count() const { return ids.size(); }

  Vertex require(const std::string& id) const {
    auto it = index.find(id);
    if (it == index.end()) throw Error(Code::UNKNOWN_VERTEX, "no vertex '" + id + "'");
    return it->second;
  }
  void check_vertex(Vertex v) const {
    if (v >= ids.size()) throw Error(Code::UNKNOWN_VERTEX, "vertex index out of range");
  }

  Rat unscale(int64_t d) const { return Rat(BigInt(d), BigInt(scale)); }
  Rat max_edge() const { return unscale(max_edge_scaled); }
};

// A walk along adjacent vertices. cum_scaled[i] is the arclength from the
// start to vertices[i] in the host's scaled units; length is exact.
struct Path {
  std::vector<Vertex> vertices;
  std::vector<int64_t> cum_scaled;
  Rat length;

  bool empty() const { return vertices.empty(); }
  Vertex front() const { return vertices.front(); }
  Vertex back() const { return vertices.back(); }
  int64_t length_scaled() const { return cum_scaled.empty() ? 0 : cum_scaled.back(); }
};

// Construction ---------------------------------------------------------

struct SpaceBuilder {
  std::string name;
  std::vector<std::string> vertices;
  struct E {
    std::string u, v;
    Rat length;
  };
  std::vector<E> edges;
  std::vector<std::string> lattice;
  std::string basepoint;
  // Assembled graphs keep per-component lattices authoritative and skip the
  // cross-component 1-discreteness check.
  bool validate_lattice = true;

  // Validates the invariants (connected, positive lengths, 1-discrete and
  // 2-dense lattice, basepoint present) and freezes the space.
  Space build() const;
};

// Parses the space-description document (JSON text). Throws Error on any
// malformed or invalid input.
Space load_space(const std::string& json_text);
Space load_space_file(const std::string& path);
std::string space_to_json(const Space& s);

// Queries ---------------------------------------------------------------

// Single-source shortest paths in scaled units; kUnreachable where no path.
std::vector<int64_t> shortest_from(const Space& s, Vertex src);

// Exact shortest-path distance.
Rat distance(const Space& s, Vertex u, Vertex v);
int64_t distance_scaled(const Space& s, Vertex u, Vertex v);

// Deterministic geodesic: among all shortest paths from u to v, the one
// whose vertex-id sequence is lexicographically minimal.
Path geodesic(const Space& s, Vertex u, Vertex v);

// Largest distance from v (scaled units).
int64_t eccentricity_scaled(const Space& s, Vertex v);

// All-pairs matrix, row-major; rows follow vertex index order.
std::vector<std::vector<int64_t>> all_pairs_scaled(const Space& s);

// Turns an arclength (scaled) into the path vertex whose arclength is
// closest to it, ties to the earlier vertex.
Vertex vertex_at_arclength(const Path& p, int64_t target_scaled);

// Concatenates b onto a (a.back() must equal b.front()).
Path concat(const Space& s, const Path& a, const Path& b);

Path single_vertex_path(Vertex v);

}  // namespace ccgeo
