#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "ccgeo/boundary.hpp"
#include "ccgeo/sampling.hpp"
#include "ccgeo/tree_assembly.hpp"

using namespace ccgeo;

namespace {

Space unit_path(const std::string& prefix, int edges) {
  SpaceBuilder b;
  b.name = prefix;
  for (int i = 0; i <= edges; ++i) {
    char buf[16];
    snprintf(buf, sizeof(buf), "%s%02d", prefix.c_str(), i);
    b.vertices.push_back(buf);
  }
  for (int i = 0; i < edges; ++i) b.edges.push_back({b.vertices[i], b.vertices[i + 1], Rat(1)});
  b.lattice = b.vertices;
  b.basepoint = b.vertices[0];
  return b.build();
}

// two unit paths sharing one endpoint
TreeOfSpaces wedge(int len1, int len2) {
  Space p = unit_path("a", len1), q = unit_path("b", len2);
  std::vector<TreeOfSpaces::Component> comps{{"k1", p, false}, {"k2", q, false}};
  std::vector<TreeOfSpaces::Cut> cuts{{"w", {{0, p.require("a00")}, {1, q.require("b00")}}}};
  return assemble_tree("wedge", std::move(comps), std::move(cuts), 0,
                       p.require("a" + std::string(len1 < 10 ? "0" : "") + std::to_string(len1)));
}

TreeOfSpaces star3(int len) {
  Space s1 = unit_path("a", len), s2 = unit_path("b", len), s3 = unit_path("c", len);
  std::vector<TreeOfSpaces::Component> comps{{"k1", s1, false}, {"k2", s2, false},
                                             {"k3", s3, false}};
  std::vector<TreeOfSpaces::Cut> cuts{
      {"hub", {{0, s1.require("a00")}, {1, s2.require("b00")}, {2, s3.require("c00")}}}};
  return assemble_tree("star3", std::move(comps), std::move(cuts), 0, s1.require("a00"));
}

Space two_point_space(const std::string& a, const std::string& b, int len) {
  SpaceBuilder sb;
  sb.name = a + b;
  sb.vertices = {a, b};
  sb.edges = {{a, b, Rat(len)}};
  sb.lattice = sb.vertices;
  sb.basepoint = a;
  return sb.build();
}

}  // namespace

TEST_CASE("wedge of two unit paths assembles to a path of doubled length") {
  TreeOfSpaces z = wedge(3, 3);
  CHECK(z.assembled.vertex_count() == 7);  // 4 + 4 - 1 identified
  Vertex far1 = z.assembled.require("k1/a03");
  Vertex far2 = z.assembled.require("k2/b03");
  CHECK(distance(z.assembled, far1, far2) == Rat(6));
  CHECK(z.linterior.size() == 1);
}

TEST_CASE("tree document parsing round trips and validates") {
  TreeOfSpaces z = star3(2);
  std::string doc = tree_to_json(z);
  TreeOfSpaces back = build_tree_of_spaces(doc);
  CHECK(back.components.size() == 3);
  CHECK(back.cuts.size() == 1);
  CHECK(back.linterior.size() == 1);
  CHECK(back.assembled.vertex_count() == z.assembled.vertex_count());
}

TEST_CASE("cut vertices must be lattice members") {
  SpaceBuilder sb;
  sb.name = "halfpoint";
  sb.vertices = {"u", "m", "v"};
  sb.edges = {{"u", "m", Rat(1)}, {"m", "v", Rat(1)}};
  sb.lattice = {"u", "v"};
  sb.basepoint = "u";
  Space s = sb.build();
  Space t = unit_path("t", 2);
  std::vector<TreeOfSpaces::Component> comps{{"k1", s, false}, {"k2", t, false}};
  std::vector<TreeOfSpaces::Cut> cuts{{"l", {{0, s.require("m")}, {1, t.require("t00")}}}};
  CHECK_THROWS_WITH_AS(
      assemble_tree("bad", std::move(comps), std::move(cuts), 0, 0),
      doctest::Contains("CUT_NOT_IN_LATTICE"), Error);
}

TEST_CASE("a cut touching one component twice is rejected as non-bipartite") {
  Space s = unit_path("s", 2);
  std::vector<TreeOfSpaces::Component> comps{{"k1", s, false}};
  std::vector<TreeOfSpaces::Cut> cuts{{"l", {{0, 0}, {0, 2}}}};
  CHECK_THROWS_WITH_AS(assemble_tree("bad", std::move(comps), std::move(cuts), 0, 0),
                       doctest::Contains("NOT_BIPARTITE"), Error);
}

TEST_CASE("free product sizes follow the recursive gluing rule") {
  Space X = two_point_space("x0", "x1", 1);
  Space Y = two_point_space("y0", "y1", 1);

  TreeOfSpaces d1 = free_product(X, Y, 1);
  CHECK(d1.components.size() == 3);  // 1 + |X0|

  TreeOfSpaces d2 = free_product(X, Y, 2);
  CHECK(d2.components.size() == 5);  // 1 + |X0| + |X0| (|Y0| - 1)

  // frontier marking: word length == word_depth
  size_t frontier = 0;
  for (const auto& c : d2.components) frontier += c.frontier ? 1 : 0;
  CHECK(frontier == 2);

  CHECK_THROWS_AS(free_product(X, Y, 0), Error);
}

TEST_CASE("free product with a single-point net keeps one gluing chain") {
  SpaceBuilder sb;
  sb.name = "pt";
  sb.vertices = {"p"};
  sb.lattice = {"p"};
  sb.basepoint = "p";
  Space X = sb.build();
  Space Y = two_point_space("y0", "y1", 1);
  TreeOfSpaces z = free_product(X, Y, 2);
  // root + one Y-copy at p + one X-copy at the Y-copy's far point
  CHECK(z.components.size() == 3);
}

TEST_CASE("tree geodesics match Dijkstra on the assembled graph for all pairs") {
  TreeOfSpaces z = star3(3);
  auto d = all_pairs_scaled(z.assembled);
  for (Vertex u = 0; u < z.assembled.vertex_count(); ++u)
    for (Vertex v = 0; v < z.assembled.vertex_count(); ++v) {
      Path p = tree_geodesic(z, u, v);
      CHECK(p.length_scaled() == d[u][v]);
    }

  Space X = two_point_space("x0", "x1", 1);
  Space Y = two_point_space("y0", "y1", 1);
  TreeOfSpaces fp = free_product(X, Y, 3);
  auto dfp = all_pairs_scaled(fp.assembled);
  for (Vertex u = 0; u < fp.assembled.vertex_count(); ++u)
    for (Vertex v = 0; v < fp.assembled.vertex_count(); ++v)
      CHECK(tree_geodesic(fp, u, v).length_scaled() == dfp[u][v]);
}

TEST_CASE("within a component the tree geodesic is the component geodesic") {
  TreeOfSpaces z = star3(4);
  const Space& comp = z.components[1].space;
  for (Vertex a = 0; a < comp.vertex_count(); ++a)
    for (Vertex b = 0; b < comp.vertex_count(); ++b) {
      Path local = geodesic(comp, a, b);
      Path global = tree_geodesic(z, z.to_assembled[1][a], z.to_assembled[1][b]);
      REQUIRE(local.vertices.size() == global.vertices.size());
      for (size_t i = 0; i < local.vertices.size(); ++i)
        CHECK(z.to_assembled[1][local.vertices[i]] == global.vertices[i]);
    }
}

TEST_CASE("components are convex: geodesics between member vertices stay inside") {
  TreeOfSpaces z = wedge(4, 4);
  for (int k = 0; k < 2; ++k) {
    const Space& comp = z.components[k].space;
    for (Vertex a = 0; a < comp.vertex_count(); ++a)
      for (Vertex b = 0; b < comp.vertex_count(); ++b) {
        Path p = tree_geodesic(z, z.to_assembled[k][a], z.to_assembled[k][b]);
        for (Vertex v : p.vertices) CHECK(z.vertex_in_component(v, k));
      }
  }
}

TEST_CASE("legs through cut points add up") {
  TreeOfSpaces z = wedge(3, 4);
  Vertex u = z.assembled.require("k1/a03");  // distance 3 from the wedge point
  Vertex v = z.assembled.require("k2/b04");  // distance 4
  CHECK(tree_geodesic(z, u, v).length == Rat(7));

  // three components in a chain: k1 - l - k2 - l' - k3
  Space s1 = unit_path("a", 2), s2 = unit_path("b", 2), s3 = unit_path("c", 2);
  std::vector<TreeOfSpaces::Component> comps{{"k1", s1, false}, {"k2", s2, false},
                                             {"k3", s3, false}};
  std::vector<TreeOfSpaces::Cut> cuts{
      {"l1", {{0, s1.require("a02")}, {1, s2.require("b00")}}},
      {"l2", {{1, s2.require("b02")}, {2, s3.require("c00")}}}};
  TreeOfSpaces chain = assemble_tree("chain", std::move(comps), std::move(cuts), 0, 0);
  Vertex x = chain.assembled.require("k1/a00");
  Vertex y = chain.assembled.require("k3/c02");
  CHECK(tree_geodesic(chain, x, y).length == Rat(6));
}

TEST_CASE("augmentation replaces exactly the components past the level") {
  TreeOfSpaces z = star3(2);
  int K = static_cast<int>(z.components.size());

  AugmentedSpace none = augment(z, K, 3);
  for (bool r : none.replaced) CHECK(!r);
  CHECK(none.tree.assembled.vertex_count() == z.assembled.vertex_count());

  AugmentedSpace full = augment(z, 0, 3);
  for (bool r : full.replaced) CHECK(r);
  CHECK(full.tree.assembled.vertex_count() > z.assembled.vertex_count());

  // consecutive levels differ in exactly one component
  for (int n = 0; n < K; ++n) {
    AugmentedSpace a = augment(z, n, 3);
    AugmentedSpace b = augment(z, n + 1, 3);
    int differing = 0;
    for (int k = 0; k < K; ++k)
      if (a.replaced[k] != b.replaced[k]) ++differing;
    CHECK(differing == 1);
    CHECK(a.replaced[n] != b.replaced[n]);
  }

  CHECK_THROWS_AS(augment(z, -1, 3), Error);
}

TEST_CASE("augmentation only shrinks distances between level-0 vertices") {
  TreeOfSpaces z = star3(4);
  AugmentedSpace a = augment(z, 0, 4);
  for (Vertex u = 0; u < z.assembled.vertex_count(); ++u)
    for (Vertex v = 0; v < z.assembled.vertex_count(); ++v) {
      Vertex au = a.tree.assembled.require(z.assembled.ids[u]);
      Vertex av = a.tree.assembled.require(z.assembled.ids[v]);
      CHECK(distance(a.tree.assembled, au, av) <= distance(z.assembled, u, v));
    }
}

TEST_CASE("augmented geodesics stay geodesic") {
  TreeOfSpaces z = wedge(4, 3);
  AugmentedSpace a = augment(z, 0, 4);
  auto d = all_pairs_scaled(a.tree.assembled);
  for (Vertex u = 0; u < a.tree.assembled.vertex_count(); ++u)
    for (Vertex v = 0; v < a.tree.assembled.vertex_count(); ++v)
      CHECK(augmented_geodesic(a, u, v).length_scaled() == d[u][v]);
}

TEST_CASE("EC transfer: components at (1,0) certify the tree at (3, slack)") {
  TreeOfSpaces z = wedge(2, 2);
  auto quads = all_quadruples(z.assembled);
  ConvexityReport rep = check_EC_transfer(z, {Rat(1), Rat(0)}, quads, default_c_grid());
  CHECK(rep.params.E == Rat(3));
  CHECK(rep.ok());

  // single component: reduces to the component certificate
  Space p = unit_path("a", 3);
  std::vector<TreeOfSpaces::Component> comps{{"k", p, false}};
  TreeOfSpaces one = assemble_tree("one", std::move(comps), {}, 0, 0);
  ConvexityReport rep1 =
      check_EC_transfer(one, {Rat(1), Rat(0)}, all_quadruples(one.assembled), default_c_grid());
  CHECK(rep1.ok());
}

TEST_CASE("EC transfer on the free product of two 3-vertex paths at word depth 2") {
  Space X = unit_path("x", 2);
  Space Y = unit_path("y", 2);
  TreeOfSpaces z = free_product(X, Y, 2);
  // components are unit paths: fit them exhaustively and transfer
  Bicombing cb = space_bicombing(z.components[0].space);
  ConvexityParams comp_fit =
      fit_constants(cb, all_quadruples(z.components[0].space), default_c_grid());
  CHECK(comp_fit.E == Rat(1));
  auto quads = sample_quadruples(z.assembled, 400, 71);
  ConvexityReport rep = check_EC_transfer(z, comp_fit, quads, default_c_grid());
  CHECK(rep.ok());
}
