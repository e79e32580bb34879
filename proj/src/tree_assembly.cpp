#include "ccgeo/tree_assembly.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <queue>
#include <set>
#include <sstream>

#include "json.hpp"

namespace ccgeo {

namespace {

void check_name(const std::string& s, const char* what) {
  if (s.find('/') != std::string::npos)
    throw Error(Code::MALFORMED_DOCUMENT, std::string(what) + " '" + s + "' contains '/'");
}

}  // namespace

int TreeOfSpaces::component_index(const std::string& name) const {
  for (size_t i = 0; i < components.size(); ++i)
    if (components[i].name == name) return static_cast<int>(i);
  throw Error(Code::UNKNOWN_VERTEX, "no component '" + name + "'");
}

bool TreeOfSpaces::vertex_in_component(Vertex v, int k) const {
  for (auto [c, _] : members_of[v])
    if (c == k) return true;
  return false;
}

TreeOfSpaces assemble_tree(std::string name, std::vector<TreeOfSpaces::Component> components,
                           std::vector<TreeOfSpaces::Cut> cuts, int basepoint_comp,
                           Vertex basepoint_local) {
  TreeOfSpaces z;
  z.name = std::move(name);
  z.components = std::move(components);
  z.cuts = std::move(cuts);

  // deterministic component order; remap indices
  std::vector<int> order(z.components.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return z.components[a].name < z.components[b].name;
  });
  std::vector<int> newpos(order.size());
  for (size_t i = 0; i < order.size(); ++i) newpos[order[i]] = static_cast<int>(i);
  {
    std::vector<TreeOfSpaces::Component> sorted;
    sorted.reserve(order.size());
    for (int i : order) sorted.push_back(std::move(z.components[i]));
    z.components = std::move(sorted);
    for (auto& cut : z.cuts)
      for (auto& [c, v] : cut.members) c = newpos[c];
    basepoint_comp = newpos[basepoint_comp];
  }
  for (size_t i = 0; i + 1 < z.components.size(); ++i)
    if (z.components[i].name == z.components[i + 1].name)
      throw Error(Code::MALFORMED_DOCUMENT,
                  "duplicate component name '" + z.components[i].name + "'");
  for (const auto& comp : z.components) check_name(comp.name, "component");

  z.basepoint_comp = basepoint_comp;
  z.basepoint_local = basepoint_local;

  // validate cuts; each (comp, vertex) may appear in at most one cut class
  std::map<std::pair<int, Vertex>, int> cut_of_vertex;
  std::set<std::string> lnames;
  for (size_t ci = 0; ci < z.cuts.size(); ++ci) {
    const auto& cut = z.cuts[ci];
    if (!lnames.insert(cut.lname).second)
      throw Error(Code::MALFORMED_DOCUMENT, "duplicate L-node '" + cut.lname + "'");
    if (cut.members.empty())
      throw Error(Code::MALFORMED_DOCUMENT, "cut '" + cut.lname + "' has no members");
    std::set<int> comps_here;
    for (auto [c, v] : cut.members) {
      if (c < 0 || c >= static_cast<int>(z.components.size()))
        throw Error(Code::MALFORMED_DOCUMENT, "cut '" + cut.lname + "' names a missing component");
      if (!comps_here.insert(c).second)
        throw Error(Code::NOT_BIPARTITE,
                    "cut '" + cut.lname + "' touches component '" +
                        z.components[c].name + "' twice");
      const Space& sp = z.components[c].space;
      sp.check_vertex(v);
      if (!sp.in_lattice[v])
        throw Error(Code::CUT_NOT_IN_LATTICE, "cut '" + cut.lname + "' uses non-lattice vertex '" +
                                                  sp.ids[v] + "' of component '" +
                                                  z.components[c].name + "'");
      if (!cut_of_vertex.emplace(std::make_pair(c, v), static_cast<int>(ci)).second)
        throw Error(Code::MALFORMED_DOCUMENT,
                    "vertex '" + sp.ids[v] + "' of component '" + z.components[c].name +
                        "' belongs to two cuts");
    }
    if (comps_here.size() >= 2) z.linterior.push_back(static_cast<int>(ci));
  }

  // bipartite tree check on the component/cut incidence graph
  {
    size_t nodes = z.components.size() + z.cuts.size();
    size_t edges = 0;
    std::vector<std::vector<size_t>> adj(nodes);
    for (size_t ci = 0; ci < z.cuts.size(); ++ci)
      for (auto [c, _] : z.cuts[ci].members) {
        adj[c].push_back(z.components.size() + ci);
        adj[z.components.size() + ci].push_back(c);
        ++edges;
      }
    std::vector<bool> seen(nodes, false);
    std::queue<size_t> q;
    q.push(0);
    seen[0] = true;
    size_t cnt = 1;
    while (!q.empty()) {
      size_t x = q.front();
      q.pop();
      for (size_t y : adj[x])
        if (!seen[y]) {
          seen[y] = true;
          ++cnt;
          q.push(y);
        }
    }
    if (cnt != nodes)
      throw Error(Code::DISCONNECTED_ASSEMBLY, "component tree is not connected");
    if (edges != nodes - 1)
      throw Error(Code::NOT_BIPARTITE, "component/cut incidence graph has a cycle");
  }

  // assembled graph
  SpaceBuilder b;
  b.name = z.name;
  auto assembled_id = [&](int c, Vertex v) -> std::string {
    auto it = cut_of_vertex.find({c, v});
    if (it != cut_of_vertex.end()) return z.cuts[it->second].lname;
    return z.components[c].name + "/" + z.components[c].space.ids[v];
  };
  std::set<std::string> emitted;
  for (size_t c = 0; c < z.components.size(); ++c) {
    const Space& sp = z.components[c].space;
    for (Vertex v = 0; v < sp.vertex_count(); ++v) {
      std::string id = assembled_id(static_cast<int>(c), v);
      if (emitted.insert(id).second) b.vertices.push_back(id);
    }
  }
  for (size_t c = 0; c < z.components.size(); ++c) {
    const Space& sp = z.components[c].space;
    for (const auto& e : sp.edges)
      b.edges.push_back({assembled_id(static_cast<int>(c), e.u),
                         assembled_id(static_cast<int>(c), e.v), e.length});
    for (Vertex v : sp.lattice) {
      std::string id = assembled_id(static_cast<int>(c), v);
      if (std::find(b.lattice.begin(), b.lattice.end(), id) == b.lattice.end())
        b.lattice.push_back(id);
    }
  }
  b.basepoint = assembled_id(basepoint_comp, basepoint_local);
  b.validate_lattice = false;  // per-component lattices stay authoritative
  try {
    z.assembled = b.build();
  } catch (const Error& e) {
    if (e.code() == Code::DISCONNECTED)
      throw Error(Code::DISCONNECTED_ASSEMBLY, "assembled graph is not connected");
    throw;
  }

  z.to_assembled.resize(z.components.size());
  z.members_of.assign(z.assembled.vertex_count(), {});
  for (size_t c = 0; c < z.components.size(); ++c) {
    const Space& sp = z.components[c].space;
    z.to_assembled[c].resize(sp.vertex_count());
    for (Vertex v = 0; v < sp.vertex_count(); ++v) {
      Vertex av = z.assembled.require(assembled_id(static_cast<int>(c), v));
      z.to_assembled[c][v] = av;
      z.members_of[av].push_back({static_cast<int>(c), v});
    }
  }
  z.cuts_of_comp.assign(z.components.size(), {});
  for (size_t ci = 0; ci < z.cuts.size(); ++ci)
    for (auto [c, _] : z.cuts[ci].members) z.cuts_of_comp[c].push_back(static_cast<int>(ci));
  return z;
}

TreeOfSpaces build_tree_of_spaces(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const std::exception& e) {
    throw Error(Code::MALFORMED_DOCUMENT, e.what());
  }
  try {
    std::vector<TreeOfSpaces::Component> comps;
    std::map<std::string, int> comp_index;
    for (auto it = j.at("components").begin(); it != j.at("components").end(); ++it) {
      TreeOfSpaces::Component c;
      c.name = it.key();
      c.space = load_space(it.value().dump());
      comp_index[c.name] = static_cast<int>(comps.size());
      comps.push_back(std::move(c));
    }
    // tree block: K list, L list, edges; cuts keyed by L-node
    std::set<std::string> knodes, lnodes;
    for (const auto& k : j.at("tree").at("K")) knodes.insert(k.get<std::string>());
    for (const auto& l : j.at("tree").at("L")) lnodes.insert(l.get<std::string>());
    for (const auto& name : knodes)
      if (!comp_index.count(name))
        throw Error(Code::MALFORMED_DOCUMENT, "K-node '" + name + "' has no component");
    for (const auto& [name, _] : comp_index)
      if (!knodes.count(name))
        throw Error(Code::MALFORMED_DOCUMENT, "component '" + name + "' is not a K-node");
    std::map<std::string, std::set<std::string>> edges_of_l;
    for (const auto& e : j.at("tree").at("edges")) {
      std::string a = e.at(0).get<std::string>(), b = e.at(1).get<std::string>();
      bool ka = knodes.count(a), kb = knodes.count(b);
      bool la = lnodes.count(a), lb = lnodes.count(b);
      if (ka && lb)
        edges_of_l[b].insert(a);
      else if (la && kb)
        edges_of_l[a].insert(b);
      else
        throw Error(Code::NOT_BIPARTITE, "tree edge " + a + "-" + b + " does not join K to L");
    }
    std::vector<TreeOfSpaces::Cut> cuts;
    for (const auto& lname : lnodes) {
      TreeOfSpaces::Cut cut;
      cut.lname = lname;
      auto cit = j.at("cuts").find(lname);
      if (cit == j.at("cuts").end())
        throw Error(Code::MALFORMED_DOCUMENT, "no cut entry for L-node '" + lname + "'");
      std::set<std::string> adj = edges_of_l.count(lname) ? edges_of_l[lname] : std::set<std::string>{};
      std::set<std::string> seen;
      for (const auto& m : *cit) {
        std::string cname = m.at(0).get<std::string>();
        std::string vid = m.at(1).get<std::string>();
        if (!adj.count(cname))
          throw Error(Code::MALFORMED_DOCUMENT, "cut '" + lname + "' lists component '" + cname +
                                                    "' that is not adjacent in the tree");
        seen.insert(cname);
        int c = comp_index.at(cname);
        cut.members.push_back({c, comps[c].space.require(vid)});
      }
      if (seen.size() != adj.size())
        throw Error(Code::MALFORMED_DOCUMENT,
                    "cut '" + lname + "' must have one entry per adjacent K-node");
      cuts.push_back(std::move(cut));
    }
    auto bp = j.at("basepoint");
    int bc = comp_index.at(bp.at(0).get<std::string>());
    Vertex bv = comps[bc].space.require(bp.at(1).get<std::string>());
    return assemble_tree(j.value("name", ""), std::move(comps), std::move(cuts), bc, bv);
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(Code::MALFORMED_DOCUMENT, e.what());
  }
}

TreeOfSpaces build_tree_of_spaces_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Code::MALFORMED_DOCUMENT, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return build_tree_of_spaces(ss.str());
}

std::string tree_to_json(const TreeOfSpaces& z) {
  nlohmann::json j;
  j["name"] = z.name;
  nlohmann::json comps = nlohmann::json::object();
  nlohmann::json K = nlohmann::json::array(), L = nlohmann::json::array();
  nlohmann::json edges = nlohmann::json::array();
  nlohmann::json cuts = nlohmann::json::object();
  for (const auto& c : z.components) {
    comps[c.name] = nlohmann::json::parse(space_to_json(c.space));
    K.push_back(c.name);
  }
  for (const auto& cut : z.cuts) {
    L.push_back(cut.lname);
    nlohmann::json members = nlohmann::json::array();
    for (auto [c, v] : cut.members) {
      edges.push_back({z.components[c].name, cut.lname});
      members.push_back({z.components[c].name, z.components[c].space.ids[v]});
    }
    cuts[cut.lname] = members;
  }
  j["components"] = comps;
  j["tree"] = {{"K", K}, {"L", L}, {"edges", edges}};
  j["cuts"] = cuts;
  j["basepoint"] = {z.components[z.basepoint_comp].name,
                    z.components[z.basepoint_comp].space.ids[z.basepoint_local]};
  return j.dump(2);
}

TreeOfSpaces free_product(const Space& X, const Space& Y, int word_depth,
                          std::optional<Rat> truncate_radius) {
  if (word_depth < 1) throw Error(Code::BAD_DEPTH, "word_depth must be >= 1");
  for (const auto& id : X.ids) check_name(id, "vertex id");
  for (const auto& id : Y.ids) check_name(id, "vertex id");

  std::vector<TreeOfSpaces::Component> comps;
  std::vector<TreeOfSpaces::Cut> cuts;

  struct Item {
    std::string name;
    int depth;           // word length
    Vertex attach;       // local basepoint inside this component
    Rat dist_to_e;       // assembled distance from the tree basepoint to the attach point
  };
  std::vector<Item> queue;
  comps.push_back({"r", X, false});
  queue.push_back({"r", 0, X.basepoint, Rat(0)});

  for (size_t qi = 0; qi < queue.size(); ++qi) {
    Item item = queue[qi];
    if (item.depth >= word_depth) continue;
    const Space& parent_space = item.depth % 2 == 0 ? X : Y;
    const Space& child_space = item.depth % 2 == 0 ? Y : X;
    int parent_index = -1;
    for (size_t i = 0; i < comps.size(); ++i)
      if (comps[i].name == item.name) parent_index = static_cast<int>(i);
    // children at every lattice point; non-root components skip their own
    // attachment point (the word never backtracks)
    std::vector<Vertex> points = parent_space.lattice;
    std::sort(points.begin(), points.end(), [&](Vertex a, Vertex b) {
      return parent_space.ids[a] < parent_space.ids[b];
    });
    auto dist_from_attach = shortest_from(parent_space, item.attach);
    for (Vertex p : points) {
      if (item.depth > 0 && p == item.attach) continue;
      Rat de = item.dist_to_e + parent_space.unscale(dist_from_attach[p]);
      if (truncate_radius && de > *truncate_radius) continue;
      std::string child_name = item.name + "." + parent_space.ids[p];
      bool frontier = item.depth + 1 >= word_depth;
      comps.push_back({child_name, child_space, frontier});
      TreeOfSpaces::Cut cut;
      cut.lname = child_name;
      cut.members = {{parent_index, p},
                     {static_cast<int>(comps.size()) - 1, child_space.basepoint}};
      cuts.push_back(std::move(cut));
      queue.push_back({child_name, item.depth + 1, child_space.basepoint, de});
    }
  }
  return assemble_tree("freeproduct", std::move(comps), std::move(cuts), 0, X.basepoint);
}

namespace {

// component path between two assembled vertices: the shortest alternating
// sequence of components and cuts in the bipartite tree
struct CompStep {
  int comp;
  int via_cut;  // cut entering this component (-1 for the first)
};

std::vector<CompStep> component_route(const TreeOfSpaces& z, Vertex u, Vertex v) {
  // BFS over components; components containing u are sources
  std::vector<int> prev_comp(z.components.size(), -2);
  std::vector<int> prev_cut(z.components.size(), -1);
  std::queue<int> q;
  std::vector<int> starts, goals;
  for (auto [c, _] : z.members_of[u]) starts.push_back(c);
  for (auto [c, _] : z.members_of[v]) goals.push_back(c);
  std::sort(starts.begin(), starts.end());
  std::sort(goals.begin(), goals.end());
  for (int c : starts) {
    prev_comp[c] = -1;
    q.push(c);
  }
  int reached = -1;
  while (!q.empty()) {
    int c = q.front();
    q.pop();
    if (std::binary_search(goals.begin(), goals.end(), c)) {
      reached = c;
      break;
    }
    for (int ci : z.cuts_of_comp[c])
      for (auto [c2, _] : z.cuts[ci].members)
        if (prev_comp[c2] == -2) {
          prev_comp[c2] = c;
          prev_cut[c2] = ci;
          q.push(c2);
        }
  }
  if (reached < 0) throw Error(Code::DISCONNECTED_ASSEMBLY, "no route between components");
  std::vector<CompStep> route;
  for (int c = reached; c != -1; c = prev_comp[c]) {
    route.push_back({c, prev_cut[c]});
    if (prev_comp[c] == -1) break;
  }
  std::reverse(route.begin(), route.end());
  route.front().via_cut = -1;
  return route;
}

Vertex cut_vertex_in(const TreeOfSpaces& z, int cut, int comp) {
  for (auto [c, v] : z.cuts[cut].members)
    if (c == comp) return v;
  throw Error(Code::UNKNOWN_VERTEX, "cut does not meet component");
}

Vertex local_in(const TreeOfSpaces& z, Vertex assembled_v, int comp) {
  for (auto [c, v] : z.members_of[assembled_v])
    if (c == comp) return v;
  throw Error(Code::UNKNOWN_VERTEX, "vertex not in component");
}

Path map_local_path(const TreeOfSpaces& z, int comp, const Path& local) {
  Path p;
  p.vertices.reserve(local.vertices.size());
  for (Vertex v : local.vertices) p.vertices.push_back(z.to_assembled[comp][v]);
  // component scales can differ from the assembled scale
  int64_t factor = z.assembled.scale / z.components[comp].space.scale;
  for (int64_t c : local.cum_scaled) p.cum_scaled.push_back(c * factor);
  p.length = local.length;
  return p;
}

Path tree_geodesic_with(const TreeOfSpaces& z,
                        const std::function<Path(int, Vertex, Vertex)>& comp_geodesic,
                        Vertex u, Vertex v) {
  z.assembled.check_vertex(u);
  z.assembled.check_vertex(v);
  if (u == v) return single_vertex_path(u);
  // same component?
  {
    int common = -1;
    for (auto [cu, lu] : z.members_of[u])
      for (auto [cv, lv] : z.members_of[v])
        if (cu == cv && (common < 0 || cu < common)) common = cu;
    if (common >= 0)
      return map_local_path(z, common,
                            comp_geodesic(common, local_in(z, u, common), local_in(z, v, common)));
  }
  auto route = component_route(z, u, v);
  Path acc = single_vertex_path(u);
  Vertex cursor = u;  // assembled
  for (size_t i = 0; i < route.size(); ++i) {
    int comp = route[i].comp;
    Vertex target_assembled;
    if (i + 1 < route.size()) {
      int ci = route[i + 1].via_cut;
      target_assembled = z.to_assembled[comp][cut_vertex_in(z, ci, comp)];
    } else {
      target_assembled = v;
    }
    if (target_assembled == cursor) continue;
    Path leg = comp_geodesic(comp, local_in(z, cursor, comp), local_in(z, target_assembled, comp));
    acc = concat(z.assembled, acc, map_local_path(z, comp, leg));
    cursor = target_assembled;
  }
  return acc;
}

}  // namespace

Path tree_geodesic(const TreeOfSpaces& z, Vertex u, Vertex v) {
  return tree_geodesic_with(
      z, [&](int comp, Vertex a, Vertex b) { return geodesic(z.components[comp].space, a, b); },
      u, v);
}

Bicombing tree_bicombing(const TreeOfSpaces& z) {
  const TreeOfSpaces* zp = &z;
  return Bicombing(z.assembled, [zp](Vertex u, Vertex v) { return tree_geodesic(*zp, u, v); });
}

AugmentedSpace augment(const TreeOfSpaces& z, int n, int depth_max) {
  if (n < 0) throw Error(Code::BAD_LEVEL, "augmentation level must be >= 0");
  AugmentedSpace a;
  a.level = n;
  a.depth_max = depth_max;
  a.replaced.assign(z.components.size(), false);
  a.horoballs.resize(z.components.size());

  std::vector<TreeOfSpaces::Component> comps;
  for (size_t i = 0; i < z.components.size(); ++i) {
    TreeOfSpaces::Component c = z.components[i];
    if (static_cast<int>(i) + 1 > n) {
      a.replaced[i] = true;
      a.horoballs[i] = build_horoball(c.space, depth_max, /*glued=*/true);
      c.space = a.horoballs[i]->graph;
    }
    comps.push_back(std::move(c));
  }
  a.tree = assemble_tree(z.name + "^aug" + std::to_string(n), std::move(comps), z.cuts,
                         z.basepoint_comp, z.basepoint_local);
  a.center_markers.assign(z.components.size(), {});
  for (size_t i = 0; i < z.components.size(); ++i)
    if (a.replaced[i]) {
      const auto& h = *a.horoballs[i];
      for (const auto& col : h.column)
        a.center_markers[i].push_back(a.tree.to_assembled[i][col[depth_max]]);
    }
  return a;
}

Path augmented_geodesic(const AugmentedSpace& a, Vertex u, Vertex v) {
  return tree_geodesic_with(
      a.tree,
      [&](int comp, Vertex x, Vertex y) {
        if (a.replaced[comp]) {
          const auto& h = *a.horoballs[comp];
          if (h.is_column_vertex(x) && h.is_column_vertex(y))
            return normal_geodesic(h, x, y).whole;
        }
        return geodesic(a.tree.components[comp].space, x, y);
      },
      u, v);
}

Bicombing augmented_bicombing(const AugmentedSpace& a) {
  const AugmentedSpace* ap = &a;
  return Bicombing(a.tree.assembled,
                   [ap](Vertex u, Vertex v) { return augmented_geodesic(*ap, u, v); });
}

ConvexityReport check_EC_transfer(const TreeOfSpaces& z, const ConvexityParams& comp_params,
                                  const std::vector<Quadruple>& quadruples,
                                  const std::vector<Rat>& c_grid, std::optional<Rat> slack) {
  ConvexityParams lifted{comp_params.E + 2, 6 * comp_params.C};
  Bicombing b = tree_bicombing(z);
  return check_convexity(b, lifted, quadruples, c_grid, slack);
}

}  // namespace ccgeo
