#pragma once

#include <map>
#include <string>
#include <vector>

#include "ccgeo/space.hpp"

namespace ccgeo {

// Optional annotations carried into DOT/GraphML output.
struct GraphAnnotations {
  // per-vertex attribute maps, keyed by attribute name
  std::map<std::string, std::vector<std::string>> vertex_attrs;
  // per-edge attribute maps (index-aligned with Space::edges)
  std::map<std::string, std::vector<std::string>> edge_attrs;
};

std::string emit_dot(const Space& s, const GraphAnnotations& ann = {});
std::string emit_graphml(const Space& s, const GraphAnnotations& ann = {});

// products[i][j] rendered with the given row/column labels.
std::string emit_csv_matrix(const std::vector<std::string>& labels,
                            const std::vector<std::vector<std::string>>& cells);

}  // namespace ccgeo
