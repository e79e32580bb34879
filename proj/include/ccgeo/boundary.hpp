#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ccgeo/bicombing.hpp"
#include "ccgeo/tree_assembly.hpp"

namespace ccgeo {

// Truncated stand-in for a combing line to the ideal boundary: the selector
// geodesic from the basepoint to a frontier vertex at distance about R.
struct RayApprox {
  Vertex target;
  Path path;  // from e to target
  Rat length() const { return path.length; }
};

// Frontier rays with their pairwise Gromov products at scale.
struct BoundaryApprox {
  Vertex e = kNoVertex;
  Rat R{0};
  GromovConstants consts;
  std::vector<RayApprox> rays;                // ordered by target id
  std::vector<std::vector<Rat>> products;     // symmetric; diag = ray length
  const Space* host = nullptr;

  int ray_of_target(Vertex target) const;  // -1 if absent
};

// One ray per vertex at distance in [R - maxedge, R] from e.
std::vector<RayApprox> frontier_rays(const Bicombing& b, Vertex e, const Rat& R);

// sup over integer t (plus the cap) of times the two rays stay D1-close.
Rat ray_product(const Bicombing& b, const GromovConstants& consts, const RayApprox& r1,
                const RayApprox& r2);

BoundaryApprox build_boundary(const Bicombing& b, Vertex e, const Rat& R,
                              const GromovConstants& consts, int threads = 0);

// --- clopen partition tree ---------------------------------------------------

// Level n groups rays by the transitive closure of "product >= n". Levels
// refine as n grows; blocks within a level are disjoint by construction.
struct PartitionTree {
  int n_max = 0;
  struct Level {
    std::vector<int> block_of;              // per ray
    std::vector<std::vector<int>> blocks;   // block -> sorted ray indices
  };
  std::vector<Level> levels;                // index n = 0..n_max
  std::vector<std::vector<int>> parent;     // per level n >= 1: block -> block at n-1
};

PartitionTree partition_tree(const BoundaryApprox& b, int n_max);

std::string partition_to_text(const BoundaryApprox& b, const PartitionTree& t);
std::string partition_to_newick(const BoundaryApprox& b, const PartitionTree& t);
std::string products_to_csv(const BoundaryApprox& b);

// --- zero-dimensionality certificate -----------------------------------------

struct ZeroDimCertificate {
  bool order_one = true;  // no two blocks overlap at any level
  std::vector<size_t> blocks_per_level;
  struct BlockProfile {
    int level;
    int block;
    size_t rays;
    int split_after;  // levels until the block first splits; -1 = never by n_max
  };
  std::vector<BlockProfile> profile;  // blocks with >= 2 rays
  bool perfect_at_scale(int level_cap, int s) const;
  std::string render() const;
};

ZeroDimCertificate zero_dim_certificate(const PartitionTree& t);

// --- isolated centers ---------------------------------------------------------

struct IsolationParams {
  int n_max = 0;           // partition level used by the ray detector
  Rat bounded_radius{0};   // declared bound for the cut-set spread detector
};

struct IsolationReport {
  // components assessed: replaced, visible through at least one deep ray,
  // and not at the free-product truncation frontier
  std::vector<int> assessed;
  std::vector<int> isolated_by_partition;
  std::vector<int> isolated_by_bounded_cuts;
  struct Detail {
    int comp;
    size_t deep_rays;
    bool partition_isolated;
    Rat cut_spread;  // max pairwise distance between interior cut points, component metric
    bool cuts_bounded;
  };
  std::vector<Detail> details;
  bool detectors_agree() const {
    return isolated_by_partition == isolated_by_bounded_cuts;
  }
  std::string render(const TreeOfSpaces& z) const;
};

// Requires a fully augmented space (level 0). The partition detector isolates
// a component when every block holding one of its deep rays holds nothing
// else; the cut detector bounds the spread of interior cut points.
IsolationReport isolated_centers(const AugmentedSpace& a, const BoundaryApprox& bd,
                                 const PartitionTree& pt, const IsolationParams& params);

// --- last exit and retraction --------------------------------------------------

struct LastExit {
  Rat t;                 // arclength of the last path vertex inside X_k
  Vertex vertex;         // assembled vertex
  Vertex local;          // the same vertex in component coordinates
  size_t path_index;
};

LastExit last_exit(const TreeOfSpaces& z, const RayApprox& ray, int k);

// Boundary approximation of one component, based at the basepoint when it
// lies in the component, otherwise at the entry cut toward the basepoint.
BoundaryApprox component_boundary(const TreeOfSpaces& z, int k, const Rat& R,
                                  const GromovConstants& consts);
Vertex component_local_base(const TreeOfSpaces& z, int k);

struct Retraction {
  int k;
  int block_level;
  // per Z-ray: image ray in the component boundary and its block (-1 where
  // the ray never meets the component)
  std::vector<int> image_ray;
  std::vector<int> image_block;
  std::vector<std::optional<LastExit>> exits;
  // modulus[n] = min component-boundary product over image pairs of Z-ray
  // pairs with product >= n (monotone in n by construction)
  std::vector<Rat> modulus;
  std::vector<bool> modulus_defined;
  std::string render(const BoundaryApprox& bz, const BoundaryApprox& bk) const;
};

// s_k = (nearest component ray by Gromov product) after the last-exit
// projection; rays whose last exit is a frontier target map to their own ray.
Retraction retract_component(const TreeOfSpaces& z, int k, const BoundaryApprox& bz,
                             const BoundaryApprox& bk, const PartitionTree& ptk,
                             int block_level);

}  // namespace ccgeo
