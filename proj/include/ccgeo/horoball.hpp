#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ccgeo/space.hpp"

namespace ccgeo {

enum class EdgeKind : uint8_t { Vertical, Horizontal, Base };

// Depth-stratified graph over the lattice of a base space. Columns are
// lattice points; level l >= 1 carries a horizontal edge between two columns
// exactly when their base distance d satisfies 0 < d <= 2^l. All horoball
// edges have unit length. A glued horoball additionally contains the base
// graph, identified with the column vertices at depth 0.
struct HoroballGraph {
  Space base;
  Space graph;  // the realized horoball as a space of its own
  int depth_max = 0;
  bool glued = false;

  // depth_max needed so that distances between depth-0 points are exact:
  // ceil(log2(lattice diameter)) + 3, recorded at build time.
  int sufficient_depth = 0;

  // column[i][l] = graph vertex for (lattice[i], l); column[i][0] is the
  // base vertex itself when glued.
  std::vector<std::vector<Vertex>> column;
  std::vector<int> depth_of;    // per graph vertex
  std::vector<int> col_of;      // lattice column index, -1 for non-lattice base vertices
  std::vector<EdgeKind> kind;   // per graph edge

  // pairwise base distances between lattice points (scaled by base.scale)
  std::vector<std::vector<int64_t>> lattice_dist;

  // per level l in 1..depth_max: column adjacency (sorted by lattice id) and
  // all-pairs hop counts of the level graph (-1 where disconnected)
  std::vector<std::vector<std::vector<uint32_t>>> level_adj;
  std::vector<std::vector<std::vector<int>>> level_hops;

  bool is_column_vertex(Vertex v) const { return col_of[v] >= 0; }
};

// vertical * horizontal * vertical, the paper's normal form. The across
// segment runs at a single level; at level 0 (glued horoballs only) it is a
// base-space geodesic instead of horizontal edges.
struct NormalGeodesic {
  Path up;      // from x to the apex column top (possibly empty)
  Path across;  // at the apex level (possibly empty)
  Path down;    // from the apex to y (possibly empty)
  int apex_level = 0;
  Path whole;   // the concatenation, a path in HoroballGraph::graph

  size_t across_edges() const { return across.empty() ? 0 : across.vertices.size() - 1; }
};

HoroballGraph build_horoball(const Space& base, int depth_max, bool glued);

// Deterministic geodesic in normal form between two column vertices; its
// length always equals the graph distance. Among equal-length candidates the
// lowest apex level wins.
NormalGeodesic normal_geodesic(const HoroballGraph& h, Vertex x, Vertex y);

// Exact Hausdorff distance between the vertex images of two paths under the
// horoball graph metric. The spec-facing variant insists on common endpoints.
Rat hausdorff_deviation(const HoroballGraph& h, const Path& p, const Path& q);
Rat hausdorff_distance_raw(const HoroballGraph& h, const Path& p, const Path& q);

// --- geodesic shape checks (the two claims behind the normal form) -------

struct SegmentDecomposition {
  struct Segment {
    EdgeKind kind;
    int level;      // depth of a horizontal segment, or -1
    size_t edges;
    bool descending;  // for verticals: deeper into the horoball (depth grows)
  };
  std::vector<Segment> segments;
  int max_horizontal_level = -1;
};

SegmentDecomposition decompose(const HoroballGraph& h, const Path& p);

// Every horizontal segment strictly below the deepest horizontal level of
// the path has exactly one edge.
bool claim_shallow_horizontals_short(const HoroballGraph& h, const Path& p);

// No subpath horizontal * vertical * horizontal * vertical with both
// verticals descending (deeper into the horoball).
bool claim_no_double_descent(const HoroballGraph& h, const Path& p);

// --- minimum-diameter triangle certification ------------------------------

// min over (p1,p2,p3) on the three sides of the max pairwise distance,
// computed over a chosen-geodesic triangle. Generic over the side selector
// so the same engine certifies horoballs and flat negative controls.
struct TriangleScan {
  Rat max_min_diameter;          // max over scanned triples
  std::vector<Vertex> witness;   // a triple achieving it
  size_t triples_scanned = 0;
};

using SideSelector = std::function<std::vector<Vertex>(Vertex, Vertex)>;

TriangleScan min_diameter_triangles(const Space& host, const SideSelector& sides,
                                    const std::vector<std::array<Vertex, 3>>& triples,
                                    int threads = 0);

// All triples over the host's vertices.
TriangleScan min_diameter_triangles_all(const Space& host, const SideSelector& sides,
                                        int threads = 0);

// Side selectors: normal geodesics on a horoball, lexicographic geodesics on
// a plain space. Both cache per-pair.
SideSelector horoball_sides(const HoroballGraph& h);
SideSelector space_sides(const Space& s);

}  // namespace ccgeo
