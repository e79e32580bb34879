#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "ccgeo/horoball.hpp"
#include "ccgeo/sampling.hpp"
#include "oracles.hpp"

using namespace ccgeo;

namespace {

// base space on a bare lattice: complete graph whose edge lengths realize
// the prescribed distances
Space lattice_space(const std::vector<std::string>& ids,
                    const std::vector<std::tuple<std::string, std::string, int>>& dists) {
  SpaceBuilder b;
  b.name = "lattice";
  b.vertices = ids;
  for (const auto& [u, v, d] : dists) b.edges.push_back({u, v, Rat(d)});
  b.lattice = ids;
  b.basepoint = ids[0];
  return b.build();
}

Space unit_path(int n) {
  SpaceBuilder b;
  b.name = "upath";
  for (int i = 0; i < n; ++i) b.vertices.push_back("p" + std::to_string(i));
  for (int i = 0; i + 1 < n; ++i)
    b.edges.push_back({b.vertices[i], b.vertices[i + 1], Rat(1)});
  b.lattice = b.vertices;
  b.basepoint = b.vertices[0];
  return b.build();
}

size_t horizontal_edges_at(const HoroballGraph& h, int level) {
  size_t n = 0;
  for (uint32_t e = 0; e < h.graph.edges.size(); ++e)
    if (h.kind[e] == EdgeKind::Horizontal &&
        h.depth_of[h.graph.edges[e].u] == level)
      ++n;
  return n;
}

int good_depth(const Space& base) {
  // enough depth for exact distances between depth-0 points
  int64_t diam = 0;
  for (Vertex a : base.lattice) {
    auto d = shortest_from(base, a);
    for (Vertex b : base.lattice) diam = std::max(diam, d[b]);
  }
  int l = 0;
  while ((int64_t(1) << l) * base.scale < diam) ++l;
  return l + 3;
}

Space random_lattice(Rng& rng, int npts, int maxd) {
  SpaceBuilder b;
  b.name = "rand";
  for (int i = 0; i < npts; ++i) b.vertices.push_back("x" + std::to_string(i));
  for (int i = 1; i < npts; ++i)
    b.edges.push_back({b.vertices[rng.below(i)], b.vertices[i], Rat(rng.range(1, maxd))});
  // a few extra edges tighten the metric
  for (int k = 0; k < npts / 2; ++k) {
    int i = static_cast<int>(rng.below(npts)), j = static_cast<int>(rng.below(npts));
    if (i != j) b.edges.push_back({b.vertices[i], b.vertices[j], Rat(rng.range(1, maxd))});
  }
  b.lattice = b.vertices;
  b.basepoint = b.vertices[0];
  return b.build();
}

}  // namespace

TEST_CASE("horizontal edge rule follows 0 < d <= 2^l") {
  // lattice {a,b} at distance 4, depth 3: horizontals at levels 2 and 3 only
  Space base = lattice_space({"a", "b"}, {{"a", "b", 4}});
  HoroballGraph h = build_horoball(base, 3, false);
  CHECK(horizontal_edges_at(h, 1) == 0);
  CHECK(horizontal_edges_at(h, 2) == 1);
  CHECK(horizontal_edges_at(h, 3) == 1);
  CHECK(h.sufficient_depth == 2 + 3);

  CHECK_THROWS_AS(build_horoball(base, 0, false), Error);
}

TEST_CASE("single-point lattice gives a bare vertical ray") {
  SpaceBuilder b;
  b.name = "pt";
  b.vertices = {"a"};
  b.lattice = {"a"};
  b.basepoint = "a";
  Space base = b.build();
  HoroballGraph h = build_horoball(base, 4, false);
  CHECK(h.graph.vertex_count() == 5);
  CHECK(h.graph.edges.size() == 4);
  for (auto k : h.kind) CHECK(k == EdgeKind::Vertical);
}

TEST_CASE("triangle lattice horizontals by direct rule evaluation") {
  // d(a,b)=1, d(b,c)=1, d(a,c)=2, depth 2: levels 1 and 2 each carry ab, bc, ac
  Space base = lattice_space({"a", "b", "c"}, {{"a", "b", 1}, {"b", "c", 1}, {"a", "c", 2}});
  HoroballGraph h = build_horoball(base, 2, false);
  CHECK(horizontal_edges_at(h, 1) == 3);
  CHECK(horizontal_edges_at(h, 2) == 3);
}

TEST_CASE("normal geodesic across a distance-4 pair has shape up2-across1-down2") {
  Space base = lattice_space({"a", "b"}, {{"a", "b", 4}});
  HoroballGraph h = build_horoball(base, 3, false);
  Vertex a0 = h.graph.require("a@0"), b0 = h.graph.require("b@0");
  NormalGeodesic ng = normal_geodesic(h, a0, b0);
  CHECK(ng.whole.length == Rat(5));
  CHECK(ng.apex_level == 2);
  CHECK(ng.up.vertices.size() == 3);      // two vertical edges
  CHECK(ng.across_edges() == 1);
  CHECK(ng.down.vertices.size() == 3);
  CHECK(ng.whole.length_scaled() == distance_scaled(h.graph, a0, b0));

  // purely vertical
  NormalGeodesic v = normal_geodesic(h, a0, h.graph.require("a@3"));
  CHECK(v.whole.length == Rat(3));
  CHECK(v.across.empty());
  CHECK(v.up.vertices.size() + v.down.vertices.size() == 4);
}

TEST_CASE("glued horoball keeps the base route when it is shorter") {
  Space base = lattice_space({"a", "b"}, {{"a", "b", 4}});
  HoroballGraph h = build_horoball(base, 3, true);
  Vertex a0 = h.graph.require("a"), b0 = h.graph.require("b");
  CHECK(distance(h.graph, a0, b0) == Rat(4));
  NormalGeodesic ng = normal_geodesic(h, a0, b0);
  CHECK(ng.whole.length == Rat(4));
  CHECK(ng.apex_level == 0);
}

TEST_CASE("normal geodesic length equals graph distance on every pair") {
  Rng rng(123);
  for (int trial = 0; trial < 4; ++trial) {
    Space base = random_lattice(rng, 6, 8);
    for (bool glued : {false, true}) {
      HoroballGraph h = build_horoball(base, good_depth(base), glued);
      for (size_t ci = 0; ci < h.column.size(); ++ci)
        for (int l = 0; l <= h.depth_max; ++l)
          for (size_t cj = 0; cj < h.column.size(); ++cj)
            for (int m = 0; m <= h.depth_max; ++m) {
              Vertex x = h.column[ci][l], y = h.column[cj][m];
              NormalGeodesic ng = normal_geodesic(h, x, y);
              CHECK(ng.whole.length_scaled() == distance_scaled(h.graph, x, y));
              CHECK(ng.across_edges() <= 5);
            }
    }
  }
}

TEST_CASE("hausdorff deviation between BFS and normal geodesics stays within 4") {
  Rng rng(321);
  Space base = random_lattice(rng, 5, 10);
  HoroballGraph h = build_horoball(base, good_depth(base), false);
  for (Vertex x = 0; x < h.graph.vertex_count(); ++x)
    for (Vertex y = x + 1; y < h.graph.vertex_count(); ++y) {
      Path bfs = geodesic(h.graph, x, y);
      Path nrm = normal_geodesic(h, x, y).whole;
      CHECK(hausdorff_deviation(h, bfs, nrm) <= Rat(4));
    }
}

TEST_CASE("hausdorff basics: equality, endpoint contract, vertical rays") {
  Space base = lattice_space({"a", "b"}, {{"a", "b", 1}});
  HoroballGraph h = build_horoball(base, 2, true);
  Vertex a0 = h.graph.require("a"), b0 = h.graph.require("b");
  Path p = geodesic(h.graph, a0, h.graph.require("a@2"));
  CHECK(hausdorff_deviation(h, p, p) == Rat(0));

  Path q = geodesic(h.graph, b0, h.graph.require("b@2"));
  CHECK_THROWS_AS(hausdorff_deviation(h, p, q), Error);
  // distinct vertical rays at base distance 1, height 2 (raw variant)
  CHECK(hausdorff_distance_raw(h, p, q) == Rat(1));
}

TEST_CASE("claim checks hold on lexicographic geodesics of a horoball") {
  Rng rng(777);
  Space base = random_lattice(rng, 5, 12);
  HoroballGraph h = build_horoball(base, good_depth(base), false);
  for (Vertex x = 0; x < h.graph.vertex_count(); ++x)
    for (Vertex y = 0; y < h.graph.vertex_count(); ++y) {
      Path g = geodesic(h.graph, x, y);
      CHECK(claim_shallow_horizontals_short(h, g));
      CHECK(claim_no_double_descent(h, g));
    }
}

TEST_CASE("min diameter triangles: degenerate triple and unit-interval fixture") {
  Space base = unit_path(5);
  HoroballGraph h = build_horoball(base, 4, false);
  auto sides = horoball_sides(h);
  std::vector<std::array<Vertex, 3>> degenerate{{0, 0, 0}};
  TriangleScan one = min_diameter_triangles(h.graph, sides, degenerate);
  CHECK(one.max_min_diameter == Rat(0));
  CHECK_THROWS_AS(min_diameter_triangles(h.graph, sides, {}), Error);

  TriangleScan all = min_diameter_triangles_all(h.graph, sides);
  CHECK(all.max_min_diameter <= Rat(9));
  CHECK(all.triples_scanned > 0);
}

TEST_CASE("exhaustive min diameter on the 16-separated pair matches the full triple loop") {
  Space base = lattice_space({"a", "b"}, {{"a", "b", 16}});
  HoroballGraph h = build_horoball(base, 5, false);
  Vertex a0 = h.graph.require("a@0"), b0 = h.graph.require("b@0"), a4 = h.graph.require("a@4");
  auto sides = horoball_sides(h);
  std::vector<std::array<Vertex, 3>> t{{a0, b0, a4}};
  TriangleScan scan = min_diameter_triangles(h.graph, sides, t);

  // independent full loop over the three chosen sides
  auto A = sides(a0, b0), B = sides(b0, a4), C = sides(a4, a0);
  auto D = oracle::floyd_warshall(h.graph);
  int64_t best = ccgeo::kUnreachable;
  for (Vertex p1 : A)
    for (Vertex p2 : B)
      for (Vertex p3 : C)
        best = std::min(best, std::max({D[p1][p2], D[p1][p3], D[p2][p3]}));
  CHECK(scan.max_min_diameter == h.graph.unscale(best));
}
