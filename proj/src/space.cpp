#include "ccgeo/space.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <queue>
#include <sstream>

#include "json.hpp"

namespace ccgeo {

namespace {

int64_t lcm64(int64_t a, int64_t b) {
  BigInt g = boost::multiprecision::gcd(BigInt(a), BigInt(b));
  BigInt l = BigInt(a) / g * BigInt(b);
  if (l > (BigInt(1) << 40))
    throw Error(Code::BAD_EDGE, "edge length denominators too large to scale exactly");
  return to_int64(l);
}

}  // namespace

Space SpaceBuilder::build() const {
  Space s;
  s.name = name;
  if (vertices.empty()) throw Error(Code::MALFORMED_DOCUMENT, "no vertices");
  s.ids = vertices;
  for (Vertex i = 0; i < s.ids.size(); ++i) {
    if (!s.index.emplace(s.ids[i], i).second)
      throw Error(Code::MALFORMED_DOCUMENT, "duplicate vertex id '" + s.ids[i] + "'");
  }

  // lexicographic ranks
  std::vector<Vertex> order(s.ids.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](Vertex a, Vertex b) { return s.ids[a] < s.ids[b]; });
  s.rank_of.resize(s.ids.size());
  for (uint32_t r = 0; r < order.size(); ++r) s.rank_of[order[r]] = r;

  s.adj.resize(s.ids.size());
  int64_t sc = 1;
  for (const auto& e : edges) {
    if (e.length <= 0)
      throw Error(Code::BAD_EDGE, "edge " + e.u + "-" + e.v + " has nonpositive length");
    sc = lcm64(sc, to_int64(denominator(e.length)));
  }
  s.scale = sc;
  for (const auto& e : edges) {
    Vertex u = s.require(e.u), v = s.require(e.v);
    if (u == v) throw Error(Code::BAD_EDGE, "self-loop at " + e.u);
    uint32_t idx = static_cast<uint32_t>(s.edges.size());
    s.edges.push_back({u, v, e.length});
    Rat scaled = e.length * sc;
    s.wscaled.push_back(to_int64(numerator(scaled)));
    s.max_edge_scaled = std::max(s.max_edge_scaled, s.wscaled.back());
    s.adj[u].push_back({v, idx});
    s.adj[v].push_back({u, idx});
  }
  // guard against overflow in path sums
  if (s.max_edge_scaled > 0 &&
      BigInt(s.max_edge_scaled) * BigInt(s.ids.size()) * BigInt(s.edges.size() + 1) >
          (BigInt(1) << 62))
    throw Error(Code::BAD_EDGE, "scaled lengths too large for exact 64-bit sums");

  s.in_lattice.assign(s.ids.size(), false);
  for (const auto& id : lattice) {
    Vertex v = s.require(id);
    if (s.in_lattice[v]) throw Error(Code::MALFORMED_DOCUMENT, "duplicate lattice entry " + id);
    s.in_lattice[v] = true;
    s.lattice.push_back(v);
  }
  if (s.lattice.empty()) throw Error(Code::BAD_LATTICE, "lattice is empty");

  if (basepoint.empty()) throw Error(Code::MISSING_BASEPOINT, "no basepoint given");
  auto bit = s.index.find(basepoint);
  if (bit == s.index.end())
    throw Error(Code::MISSING_BASEPOINT, "basepoint '" + basepoint + "' is not a vertex");
  s.basepoint = bit->second;

  // connectivity
  {
    std::vector<bool> seen(s.ids.size(), false);
    std::queue<Vertex> q;
    q.push(0);
    seen[0] = true;
    size_t cnt = 1;
    while (!q.empty()) {
      Vertex x = q.front();
      q.pop();
      for (auto [y, _] : s.adj[x])
        if (!seen[y]) {
          seen[y] = true;
          ++cnt;
          q.push(y);
        }
    }
    if (cnt != s.ids.size()) throw Error(Code::DISCONNECTED, "graph is not connected");
  }

  // lattice: 1-discrete and 2-dense
  if (validate_lattice) {
    int64_t one = s.scale, two = 2 * s.scale;
    std::vector<int64_t> nearest(s.ids.size(), kUnreachable);
    for (Vertex lv : s.lattice) {
      auto d = shortest_from(s, lv);
      for (Vertex other : s.lattice)
        if (other != lv && d[other] < one)
          throw Error(Code::BAD_LATTICE, "lattice points " + s.ids[lv] + " and " +
                                             s.ids[other] + " are at distance < 1");
      for (Vertex v = 0; v < s.ids.size(); ++v) nearest[v] = std::min(nearest[v], d[v]);
    }
    for (Vertex v = 0; v < s.ids.size(); ++v)
      if (nearest[v] > two)
        throw Error(Code::BAD_LATTICE,
                    "vertex " + s.ids[v] + " is at distance > 2 from the lattice");
  }
  return s;
}

Space load_space(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const std::exception& e) {
    throw Error(Code::MALFORMED_DOCUMENT, e.what());
  }
  try {
    SpaceBuilder b;
    b.name = j.value("name", "");
    for (const auto& v : j.at("vertices")) b.vertices.push_back(v.get<std::string>());
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 3)
        throw Error(Code::MALFORMED_DOCUMENT, "edge entries must be [u, v, length]");
      Rat len = e[2].is_string() ? parse_rat(e[2].get<std::string>())
                                 : parse_rat(e[2].dump());
      b.edges.push_back({e[0].get<std::string>(), e[1].get<std::string>(), len});
    }
    for (const auto& v : j.at("lattice")) b.lattice.push_back(v.get<std::string>());
    b.basepoint = j.at("basepoint").get<std::string>();
    return b.build();
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(Code::MALFORMED_DOCUMENT, e.what());
  }
}

Space load_space_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Code::MALFORMED_DOCUMENT, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return load_space(ss.str());
}

std::string space_to_json(const Space& s) {
  nlohmann::json j;
  j["name"] = s.name;
  j["vertices"] = s.ids;
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : s.edges)
    edges.push_back({s.ids[e.u], s.ids[e.v], format_rat(e.length)});
  j["edges"] = edges;
  nlohmann::json lat = nlohmann::json::array();
  for (Vertex v : s.lattice) lat.push_back(s.ids[v]);
  j["lattice"] = lat;
  j["basepoint"] = s.ids[s.basepoint];
  return j.dump(2);
}

std::vector<int64_t> shortest_from(const Space& s, Vertex src) {
  s.check_vertex(src);
  std::vector<int64_t> dist(s.ids.size(), kUnreachable);
  using Item = std::pair<int64_t, Vertex>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  dist[src] = 0;
  heap.push({0, src});
  while (!heap.empty()) {
    auto [d, x] = heap.top();
    heap.pop();
    if (d != dist[x]) continue;
    for (auto [y, e] : s.adj[x]) {
      int64_t nd = d + s.wscaled[e];
      if (nd < dist[y]) {
        dist[y] = nd;
        heap.push({nd, y});
      }
    }
  }
  return dist;
}

int64_t distance_scaled(const Space& s, Vertex u, Vertex v) {
  s.check_vertex(u);
  s.check_vertex(v);
  if (u == v) return 0;
  auto d = shortest_from(s, u);
  return d[v];
}

Rat distance(const Space& s, Vertex u, Vertex v) { return s.unscale(distance_scaled(s, u, v)); }

Path single_vertex_path(Vertex v) {
  Path p;
  p.vertices = {v};
  p.cum_scaled = {0};
  p.length = 0;
  return p;
}

Path geodesic(const Space& s, Vertex u, Vertex v) {
  s.check_vertex(u);
  s.check_vertex(v);
  if (u == v) return single_vertex_path(u);
  auto dist_to_v = shortest_from(s, v);
  if (dist_to_v[u] == kUnreachable) throw Error(Code::DISCONNECTED, "no path");
  Path p;
  p.vertices.push_back(u);
  p.cum_scaled.push_back(0);
  Vertex x = u;
  while (x != v) {
    // smallest-id neighbor that stays on a shortest path to v; the edge
    // weight on a shortest path is forced to dist_to_v[x] - dist_to_v[y]
    Vertex best = kNoVertex;
    int64_t best_w = 0;
    for (auto [y, e] : s.adj[x]) {
      if (dist_to_v[y] != kUnreachable &&
          s.wscaled[e] + dist_to_v[y] == dist_to_v[x]) {
        if (best == kNoVertex || s.rank_of[y] < s.rank_of[best]) {
          best = y;
          best_w = s.wscaled[e];
        }
      }
    }
    p.cum_scaled.push_back(p.cum_scaled.back() + best_w);
    p.vertices.push_back(best);
    x = best;
  }
  p.length = s.unscale(p.cum_scaled.back());
  return p;
}

int64_t eccentricity_scaled(const Space& s, Vertex v) {
  auto d = shortest_from(s, v);
  int64_t m = 0;
  for (int64_t x : d)
    if (x != kUnreachable) m = std::max(m, x);
  return m;
}

std::vector<std::vector<int64_t>> all_pairs_scaled(const Space& s) {
  std::vector<std::vector<int64_t>> m(s.ids.size());
  for (Vertex v = 0; v < s.ids.size(); ++v) m[v] = shortest_from(s, v);
  return m;
}

Vertex vertex_at_arclength(const Path& p, int64_t target) {
  if (p.vertices.empty()) throw Error(Code::ENDPOINT_MISMATCH, "empty path");
  if (target <= 0) return p.vertices.front();
  if (target >= p.cum_scaled.back()) return p.vertices.back();
  auto it = std::lower_bound(p.cum_scaled.begin(), p.cum_scaled.end(), target);
  size_t hi = static_cast<size_t>(it - p.cum_scaled.begin());
  if (p.cum_scaled[hi] == target) return p.vertices[hi];
  size_t lo = hi - 1;
  // ties go to the earlier vertex
  if (target - p.cum_scaled[lo] <= p.cum_scaled[hi] - target) return p.vertices[lo];
  return p.vertices[hi];
}

Path concat(const Space& s, const Path& a, const Path& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  if (a.back() != b.front())
    throw Error(Code::ENDPOINT_MISMATCH, "paths do not share an endpoint");
  Path p = a;
  for (size_t i = 1; i < b.vertices.size(); ++i) {
    p.vertices.push_back(b.vertices[i]);
    p.cum_scaled.push_back(a.length_scaled() + b.cum_scaled[i]);
  }
  p.length = s.unscale(p.length_scaled());
  return p;
}

}  // namespace ccgeo
