#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ccgeo/bicombing.hpp"
#include "ccgeo/horoball.hpp"
#include "ccgeo/space.hpp"

namespace ccgeo {

// Components indexed by one side K of a bipartite tree, glued at single cut
// points indexed by the other side L. The assembled graph realizes the
// identifications; assembled ids are "<component>/<vertex>" with cut classes
// collapsed onto their L-node name.
struct TreeOfSpaces {
  std::string name;

  struct Component {
    std::string name;
    Space space;
    // free products mark components at the word-truncation frontier; their
    // children are missing, so boundary assertions skip them
    bool frontier = false;
  };
  std::vector<Component> components;  // sorted by name; the bijection k(i)

  struct Cut {
    std::string lname;
    std::vector<std::pair<int, Vertex>> members;  // (component, local vertex)
  };
  std::vector<Cut> cuts;
  std::vector<int> linterior;  // cut indices adjacent to >= 2 distinct components

  int basepoint_comp = 0;
  Vertex basepoint_local = 0;

  Space assembled;
  std::vector<std::vector<Vertex>> to_assembled;  // [comp][local] -> assembled
  // assembled vertex -> all (component, local) pairs mapped onto it
  std::vector<std::vector<std::pair<int, Vertex>>> members_of;

  std::vector<std::vector<int>> cuts_of_comp;  // per component, cut indices

  Vertex basepoint() const { return to_assembled[basepoint_comp][basepoint_local]; }
  int component_index(const std::string& name) const;
  bool vertex_in_component(Vertex assembled_v, int k) const;
};

// Parses and validates the tree-of-spaces document (JSON).
TreeOfSpaces build_tree_of_spaces(const std::string& json_text);
TreeOfSpaces build_tree_of_spaces_file(const std::string& path);
std::string tree_to_json(const TreeOfSpaces& z);

// Assembles a TreeOfSpaces from parts (components must be prevalidated).
TreeOfSpaces assemble_tree(std::string name, std::vector<TreeOfSpaces::Component> components,
                           std::vector<TreeOfSpaces::Cut> cuts, int basepoint_comp,
                           Vertex basepoint_local);

// Free product of two pointed spaces with nets: the root copy of X carries a
// copy of Y glued by its basepoint at every lattice point, recursively with
// alternating factors, truncated at word_depth. Components are named by the
// gluing words; the word order is the augmentation bijection.
TreeOfSpaces free_product(const Space& X, const Space& Y, int word_depth,
                          std::optional<Rat> truncate_radius = std::nullopt);

// Shortest path in the assembled graph via the unique cut-point sequence;
// inside one component it is that component's selector geodesic.
Path tree_geodesic(const TreeOfSpaces& z, Vertex u, Vertex v);

Bicombing tree_bicombing(const TreeOfSpaces& z);

// --- augmentation -----------------------------------------------------------

struct AugmentedSpace {
  TreeOfSpaces tree;  // components past index n replaced by glued horoballs
  int level = 0;
  int depth_max = 1;
  std::vector<bool> replaced;                       // per component
  std::vector<std::optional<HoroballGraph>> horoballs;  // aligned, set iff replaced
  // frontier marker for each replaced component: deepest-layer vertices
  std::vector<std::vector<Vertex>> center_markers;  // assembled ids
};

// Replaces every component with 1-based index > n (in component order) by the
// glued horoball over its lattice. n = 0 is the fully augmented space.
AugmentedSpace augment(const TreeOfSpaces& z, int n, int depth_max);

// Bicombing whose restriction to a horoball component is the normal
// geodesic; kept components use their own selector.
Bicombing augmented_bicombing(const AugmentedSpace& a);

// tree geodesic with per-component selectors honoring the augmentation
Path augmented_geodesic(const AugmentedSpace& a, Vertex u, Vertex v);

// --- transfer of convexity constants ---------------------------------------

// Components certified at (E', C') imply the assembled space at
// (E' + 2, 6 C' + slack); runs check_convexity at those parameters.
ConvexityReport check_EC_transfer(const TreeOfSpaces& z, const ConvexityParams& component_params,
                                  const std::vector<Quadruple>& quadruples,
                                  const std::vector<Rat>& c_grid,
                                  std::optional<Rat> slack = std::nullopt);

}  // namespace ccgeo
