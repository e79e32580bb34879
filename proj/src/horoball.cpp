#include "ccgeo/horoball.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <queue>
#include <thread>

namespace ccgeo {

namespace {

std::string column_id(const std::string& base_id, int level) {
  return base_id + "@" + std::to_string(level);
}

}  // namespace

HoroballGraph build_horoball(const Space& base, int depth_max, bool glued) {
  if (depth_max < 1) throw Error(Code::DEPTH_TOO_SMALL, "depth_max must be >= 1");
  HoroballGraph h;
  h.base = base;
  h.depth_max = depth_max;
  h.glued = glued;

  const size_t nlat = base.lattice.size();
  h.lattice_dist.assign(nlat, std::vector<int64_t>(nlat, 0));
  int64_t diam = 0;
  for (size_t i = 0; i < nlat; ++i) {
    auto d = shortest_from(base, base.lattice[i]);
    for (size_t j = 0; j < nlat; ++j) {
      h.lattice_dist[i][j] = d[base.lattice[j]];
      diam = std::max(diam, d[base.lattice[j]]);
    }
  }
  {
    int l = 0;
    while ((BigInt(1) << l) * base.scale < diam) ++l;
    h.sufficient_depth = l + 3;
  }

  SpaceBuilder b;
  b.name = base.name + (glued ? "+horoball" : "#horoball");
  std::vector<std::vector<std::string>> col_ids(nlat);
  if (glued) {
    for (const auto& id : base.ids) b.vertices.push_back(id);
    for (const auto& e : base.edges) b.edges.push_back({base.ids[e.u], base.ids[e.v], e.length});
  }
  for (size_t i = 0; i < nlat; ++i) {
    const std::string& bid = base.ids[base.lattice[i]];
    col_ids[i].resize(depth_max + 1);
    for (int l = 0; l <= depth_max; ++l) {
      if (l == 0 && glued) {
        col_ids[i][0] = bid;
        continue;
      }
      col_ids[i][l] = column_id(bid, l);
      b.vertices.push_back(col_ids[i][l]);
    }
  }
  // vertical edges
  for (size_t i = 0; i < nlat; ++i)
    for (int l = 0; l < depth_max; ++l)
      b.edges.push_back({col_ids[i][l], col_ids[i][l + 1], Rat(1)});
  // horizontal edges: 0 < d(x,y) <= 2^l
  for (int l = 1; l <= depth_max; ++l) {
    BigInt reach = (BigInt(1) << l) * base.scale;
    for (size_t i = 0; i < nlat; ++i)
      for (size_t j = i + 1; j < nlat; ++j)
        if (h.lattice_dist[i][j] > 0 && BigInt(h.lattice_dist[i][j]) <= reach)
          b.edges.push_back({col_ids[i][l], col_ids[j][l], Rat(1)});
  }

  if (glued) {
    for (const auto& id : base.lattice) b.lattice.push_back(base.ids[id]);
    for (size_t i = 0; i < nlat; ++i)
      for (int l = 1; l <= depth_max; ++l) b.lattice.push_back(col_ids[i][l]);
    b.basepoint = base.ids[base.basepoint];
  } else {
    b.lattice = b.vertices;
    b.basepoint = base.in_lattice[base.basepoint]
                      ? column_id(base.ids[base.basepoint], 0)
                      : col_ids[0][0];
  }
  h.graph = b.build();

  h.column.assign(nlat, std::vector<Vertex>(depth_max + 1, kNoVertex));
  h.depth_of.assign(h.graph.vertex_count(), 0);
  h.col_of.assign(h.graph.vertex_count(), -1);
  for (size_t i = 0; i < nlat; ++i)
    for (int l = 0; l <= depth_max; ++l) {
      Vertex v = h.graph.require(col_ids[i][l]);
      h.column[i][l] = v;
      h.depth_of[v] = l;
      h.col_of[v] = static_cast<int>(i);
    }
  h.kind.resize(h.graph.edges.size());
  for (uint32_t e = 0; e < h.graph.edges.size(); ++e) {
    Vertex u = h.graph.edges[e].u, v = h.graph.edges[e].v;
    int du = h.depth_of[u], dv = h.depth_of[v];
    if (du != dv)
      h.kind[e] = EdgeKind::Vertical;
    else if (du >= 1)
      h.kind[e] = EdgeKind::Horizontal;
    else
      h.kind[e] = EdgeKind::Base;
  }

  // level hop metrics, reused by every normal-geodesic query
  h.level_adj.assign(depth_max + 1, {});
  h.level_hops.assign(depth_max + 1, {});
  for (int l = 1; l <= depth_max; ++l) {
    auto& adj = h.level_adj[l];
    adj.assign(nlat, {});
    BigInt reach = (BigInt(1) << l) * base.scale;
    for (size_t i = 0; i < nlat; ++i)
      for (size_t j = 0; j < nlat; ++j)
        if (i != j && h.lattice_dist[i][j] > 0 && BigInt(h.lattice_dist[i][j]) <= reach)
          adj[i].push_back(static_cast<uint32_t>(j));
    for (auto& nb : adj)
      std::sort(nb.begin(), nb.end(), [&](uint32_t a, uint32_t b) {
        return base.ids[base.lattice[a]] < base.ids[base.lattice[b]];
      });
    auto& hops = h.level_hops[l];
    hops.assign(nlat, std::vector<int>(nlat, -1));
    for (size_t s = 0; s < nlat; ++s) {
      std::queue<uint32_t> q;
      hops[s][s] = 0;
      q.push(static_cast<uint32_t>(s));
      while (!q.empty()) {
        uint32_t x = q.front();
        q.pop();
        for (uint32_t y : adj[x])
          if (hops[s][y] < 0) {
            hops[s][y] = hops[s][x] + 1;
            q.push(y);
          }
      }
    }
  }
  return h;
}

namespace {

Path vertical_path(const HoroballGraph& h, int col, int from_level, int to_level) {
  Path p;
  int step = from_level <= to_level ? 1 : -1;
  int64_t unit = h.graph.scale;
  int64_t cum = 0;
  p.vertices.push_back(h.column[col][from_level]);
  p.cum_scaled.push_back(0);
  for (int l = from_level; l != to_level; l += step) {
    cum += unit;
    p.vertices.push_back(h.column[col][l + step]);
    p.cum_scaled.push_back(cum);
  }
  p.length = h.graph.unscale(cum);
  return p;
}

// Lexicographically minimal hop-shortest horizontal path at the given level.
Path across_path(const HoroballGraph& h, int level, int from_col, int to_col) {
  if (from_col == to_col) return single_vertex_path(h.column[from_col][level]);
  const auto& hops = h.level_hops[level];
  Path p;
  p.vertices.push_back(h.column[from_col][level]);
  p.cum_scaled.push_back(0);
  uint32_t x = static_cast<uint32_t>(from_col);
  int64_t cum = 0;
  while (static_cast<int>(x) != to_col) {
    uint32_t best = UINT32_MAX;
    for (uint32_t y : h.level_adj[level][x])
      if (hops[y][to_col] >= 0 && hops[y][to_col] + 1 == hops[x][to_col]) {
        best = y;  // level_adj is presorted by lattice id
        break;
      }
    cum += h.graph.scale;
    p.vertices.push_back(h.column[best][level]);
    p.cum_scaled.push_back(cum);
    x = best;
  }
  p.length = h.graph.unscale(cum);
  return p;
}

// Base geodesic between two lattice points, re-indexed into the glued graph.
Path base_across(const HoroballGraph& h, int from_col, int to_col) {
  Path bp = geodesic(h.base, h.base.lattice[from_col], h.base.lattice[to_col]);
  Path p;
  int64_t factor = h.graph.scale / h.base.scale;
  for (size_t i = 0; i < bp.vertices.size(); ++i) {
    p.vertices.push_back(h.graph.require(h.base.ids[bp.vertices[i]]));
    p.cum_scaled.push_back(bp.cum_scaled[i] * factor);
  }
  p.length = bp.length;
  return p;
}

}  // namespace

NormalGeodesic normal_geodesic(const HoroballGraph& h, Vertex x, Vertex y) {
  h.graph.check_vertex(x);
  h.graph.check_vertex(y);
  if (!h.is_column_vertex(x) || !h.is_column_vertex(y))
    throw Error(Code::UNKNOWN_VERTEX, "normal geodesics are defined on lattice columns");

  int cx = h.col_of[x], cy = h.col_of[y];
  int dx = h.depth_of[x], dy = h.depth_of[y];

  // candidate apex levels; across hop counts per level
  int64_t best_cost = -1;
  int best_level = -1;
  const int64_t unit = h.graph.scale;

  for (int L = 0; L <= h.depth_max; ++L) {
    int64_t vertical = (std::abs(dx - L) + std::abs(dy - L)) * unit;
    int64_t across;
    if (cx == cy) {
      across = 0;
    } else if (L == 0) {
      if (!h.glued) continue;
      across = h.lattice_dist[cx][cy] * (h.graph.scale / h.base.scale);
    } else {
      int hops = h.level_hops[L][cx][cy];
      if (hops < 0) continue;
      across = static_cast<int64_t>(hops) * unit;
    }
    int64_t total = vertical + across;
    if (best_cost < 0 || total < best_cost) {
      best_cost = total;
      best_level = L;
    }
  }
  if (best_level < 0)
    throw Error(Code::DISCONNECTED, "columns are not connected at any level (depth too small)");

  NormalGeodesic ng;
  ng.apex_level = best_level;
  ng.up = dx == best_level ? single_vertex_path(h.column[cx][dx])
                           : vertical_path(h, cx, dx, best_level);
  if (cx == cy)
    ng.across = single_vertex_path(h.column[cx][best_level]);
  else if (best_level == 0)
    ng.across = base_across(h, cx, cy);
  else
    ng.across = across_path(h, best_level, cx, cy);
  ng.down = dy == best_level ? single_vertex_path(h.column[cy][dy])
                             : vertical_path(h, cy, best_level, dy);
  ng.whole = concat(h.graph, concat(h.graph, ng.up, ng.across), ng.down);
  // normal-form bookkeeping: single-vertex placeholders mean "empty"
  if (ng.up.vertices.size() == 1) ng.up = Path{};
  if (ng.across.vertices.size() == 1) ng.across = Path{};
  if (ng.down.vertices.size() == 1) ng.down = Path{};
  return ng;
}

Rat hausdorff_distance_raw(const HoroballGraph& h, const Path& p, const Path& q) {
  if (p.empty() || q.empty()) throw Error(Code::ENDPOINT_MISMATCH, "empty path");
  auto one_sided = [&](const Path& a, const Path& b) {
    int64_t worst = 0;
    for (Vertex v : a.vertices) {
      auto d = shortest_from(h.graph, v);
      int64_t nearest = kUnreachable;
      for (Vertex w : b.vertices) nearest = std::min(nearest, d[w]);
      worst = std::max(worst, nearest);
    }
    return worst;
  };
  return h.graph.unscale(std::max(one_sided(p, q), one_sided(q, p)));
}

Rat hausdorff_deviation(const HoroballGraph& h, const Path& p, const Path& q) {
  if (p.empty() || q.empty()) throw Error(Code::ENDPOINT_MISMATCH, "empty path");
  if (p.front() != q.front() || p.back() != q.back())
    throw Error(Code::ENDPOINT_MISMATCH, "paths must share both endpoints");
  return hausdorff_distance_raw(h, p, q);
}

SegmentDecomposition decompose(const HoroballGraph& h, const Path& p) {
  SegmentDecomposition out;
  for (size_t i = 0; i + 1 < p.vertices.size(); ++i) {
    Vertex u = p.vertices[i], v = p.vertices[i + 1];
    int du = h.depth_of[u], dv = h.depth_of[v];
    EdgeKind k = du != dv ? EdgeKind::Vertical
                          : (du >= 1 ? EdgeKind::Horizontal : EdgeKind::Base);
    // descending means deeper into the horoball (depth increases)
    bool desc = k == EdgeKind::Vertical && dv > du;
    int level = k == EdgeKind::Vertical ? -1 : du;
    if (!out.segments.empty() && out.segments.back().kind == k &&
        out.segments.back().level == level &&
        (k != EdgeKind::Vertical || out.segments.back().descending == desc)) {
      out.segments.back().edges++;
    } else {
      out.segments.push_back({k, level, 1, desc});
    }
    if (k == EdgeKind::Horizontal)
      out.max_horizontal_level = std::max(out.max_horizontal_level, level);
  }
  return out;
}

bool claim_shallow_horizontals_short(const HoroballGraph& h, const Path& p) {
  auto d = decompose(h, p);
  for (const auto& seg : d.segments)
    if (seg.kind == EdgeKind::Horizontal && seg.level < d.max_horizontal_level &&
        seg.edges != 1)
      return false;
  return true;
}

bool claim_no_double_descent(const HoroballGraph& h, const Path& p) {
  auto d = decompose(h, p);
  const auto& s = d.segments;
  for (size_t i = 0; i + 3 < s.size(); ++i) {
    bool h1 = s[i].kind == EdgeKind::Horizontal;
    bool v1 = s[i + 1].kind == EdgeKind::Vertical && s[i + 1].descending;
    bool h2 = s[i + 2].kind == EdgeKind::Horizontal;
    bool v2 = s[i + 3].kind == EdgeKind::Vertical && s[i + 3].descending;
    if (h1 && v1 && h2 && v2) return false;
  }
  return true;
}

// --- triangle scan --------------------------------------------------------

namespace {

struct SideCache {
  const Space* host;
  const SideSelector* sides;
  std::vector<std::vector<Vertex>> cache;  // ordered pair index u*V+v

  const std::vector<Vertex>& get(Vertex u, Vertex v) {
    auto& slot = cache[static_cast<size_t>(u) * host->vertex_count() + v];
    if (slot.empty()) slot = (*sides)(u, v);
    return slot;
  }
};

int64_t min_diameter_of(const std::vector<Vertex>& A, const std::vector<Vertex>& B,
                        const std::vector<Vertex>& C,
                        const std::vector<std::vector<int64_t>>& D) {
  int64_t best = kUnreachable;
  for (Vertex p1 : A) {
    const auto& d1 = D[p1];
    for (Vertex p2 : B) {
      int64_t d12 = d1[p2];
      if (d12 >= best) continue;
      const auto& d2 = D[p2];
      for (Vertex p3 : C) {
        int64_t m = std::max({d12, d1[p3], d2[p3]});
        if (m < best) best = m;
      }
    }
  }
  return best;
}

}  // namespace

TriangleScan min_diameter_triangles(const Space& host, const SideSelector& sides,
                                    const std::vector<std::array<Vertex, 3>>& triples,
                                    int threads) {
  if (triples.empty()) throw Error(Code::EMPTY_SAMPLE, "no triples given");
  auto D = all_pairs_scaled(host);
  SideCache sc{&host, &sides, {}};
  sc.cache.resize(host.vertex_count() * host.vertex_count());
  // prefetch single-threaded so workers read a frozen cache
  for (const auto& t : triples) {
    sc.get(t[0], t[1]);
    sc.get(t[1], t[2]);
    sc.get(t[2], t[0]);
  }

  unsigned n = threads > 0 ? threads : std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::pair<int64_t, size_t>> results(n, {-1, 0});
  auto worker = [&](unsigned w) {
    int64_t local = -1;
    size_t wit = 0;
    for (size_t i = w; i < triples.size(); i += n) {
      const auto& t = triples[i];
      int64_t m = min_diameter_of(sc.get(t[0], t[1]), sc.get(t[1], t[2]),
                                  sc.get(t[2], t[0]), D);
      if (m > local) {
        local = m;
        wit = i;
      }
    }
    results[w] = {local, wit};
  };
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < n; ++w) pool.emplace_back(worker, w);
  for (auto& th : pool) th.join();

  int64_t best = -1;
  size_t wit = 0;
  for (auto [m, i] : results)
    if (m > best || (m == best && i < wit)) {
      best = m;
      wit = i;
    }
  TriangleScan scan;
  scan.max_min_diameter = host.unscale(best);
  scan.witness = {triples[wit][0], triples[wit][1], triples[wit][2]};
  scan.triples_scanned = triples.size();
  return scan;
}

TriangleScan min_diameter_triangles_all(const Space& host, const SideSelector& sides,
                                        int threads) {
  const size_t V = host.vertex_count();
  if (V == 0) throw Error(Code::EMPTY_SAMPLE, "empty host");
  auto D = all_pairs_scaled(host);
  SideCache sc{&host, &sides, {}};
  sc.cache.resize(V * V);
  for (Vertex u = 0; u < V; ++u)
    for (Vertex v = 0; v < V; ++v) sc.get(u, v);

  unsigned n = threads > 0 ? threads : std::max(1u, std::thread::hardware_concurrency());
  struct Local {
    int64_t best = -1;
    std::array<Vertex, 3> wit{0, 0, 0};
    size_t count = 0;
  };
  std::vector<Local> results(n);
  auto worker = [&](unsigned w) {
    Local loc;
    for (Vertex a = w; a < V; a += n)
      for (Vertex b = a; b < V; ++b)
        for (Vertex c = b; c < V; ++c) {
          int64_t m = min_diameter_of(sc.get(a, b), sc.get(b, c), sc.get(c, a), D);
          ++loc.count;
          if (m > loc.best) {
            loc.best = m;
            loc.wit = {a, b, c};
          }
        }
    results[w] = loc;
  };
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < n; ++w) pool.emplace_back(worker, w);
  for (auto& th : pool) th.join();

  Local total;
  for (const auto& loc : results) {
    total.count += loc.count;
    if (loc.best > total.best ||
        (loc.best == total.best && loc.wit < total.wit)) {
      total.best = loc.best;
      total.wit = loc.wit;
    }
  }
  TriangleScan scan;
  scan.max_min_diameter = host.unscale(total.best);
  scan.witness = {total.wit[0], total.wit[1], total.wit[2]};
  scan.triples_scanned = total.count;
  return scan;
}

SideSelector horoball_sides(const HoroballGraph& h) {
  auto hptr = &h;
  return [hptr](Vertex u, Vertex v) -> std::vector<Vertex> {
    if (u == v) return {u};
    if (hptr->is_column_vertex(u) && hptr->is_column_vertex(v))
      return normal_geodesic(*hptr, u, v).whole.vertices;
    return geodesic(hptr->graph, u, v).vertices;
  };
}

SideSelector space_sides(const Space& s) {
  // shares one distance-from-target table per target across calls
  struct State {
    const Space* host;
    std::mutex mu;
    std::unordered_map<Vertex, std::vector<int64_t>> dist_to;
  };
  auto st = std::make_shared<State>();
  st->host = &s;
  return [st](Vertex u, Vertex v) -> std::vector<Vertex> {
    const Space& s = *st->host;
    s.check_vertex(u);
    s.check_vertex(v);
    if (u == v) return {u};
    const std::vector<int64_t>* dist;
    {
      std::lock_guard<std::mutex> lock(st->mu);
      auto it = st->dist_to.find(v);
      if (it == st->dist_to.end()) it = st->dist_to.emplace(v, shortest_from(s, v)).first;
      dist = &it->second;
    }
    std::vector<Vertex> out{u};
    Vertex x = u;
    while (x != v) {
      Vertex best = kNoVertex;
      for (auto [y, e] : s.adj[x])
        if ((*dist)[y] != kUnreachable && s.wscaled[e] + (*dist)[y] == (*dist)[x])
          if (best == kNoVertex || s.rank_of[y] < s.rank_of[best]) best = y;
      out.push_back(best);
      x = best;
    }
    return out;
  };
}

}  // namespace ccgeo
