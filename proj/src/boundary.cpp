#include "ccgeo/boundary.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "ccgeo/emit.hpp"


namespace ccgeo {

int BoundaryApprox::ray_of_target(Vertex target) const {
  for (size_t i = 0; i < rays.size(); ++i)
    if (rays[i].target == target) return static_cast<int>(i);
  return -1;
}

std::vector<RayApprox> frontier_rays(const Bicombing& b, Vertex e, const Rat& R) {
  const Space& s = b.host();
  s.check_vertex(e);
  auto dist = shortest_from(s, e);
  int64_t ecc = 0;
  for (int64_t d : dist)
    if (d != kUnreachable) ecc = std::max(ecc, d);
  Rat Recc = s.unscale(ecc);
  if (R > Recc)
    throw Error(Code::RADIUS_TOO_LARGE,
                "radius " + format_rat(R) + " exceeds eccentricity " + format_rat(Recc));
  Rat lo = R - s.max_edge();
  std::vector<Vertex> targets;
  for (Vertex v = 0; v < s.vertex_count(); ++v) {
    Rat d = s.unscale(dist[v]);
    if (d >= lo && d <= R) targets.push_back(v);
  }
  if (targets.empty())
    throw Error(Code::RADIUS_TOO_LARGE, "no frontier vertices in [R - maxedge, R]");
  std::sort(targets.begin(), targets.end(),
            [&](Vertex a, Vertex bb) { return s.ids[a] < s.ids[bb]; });
  std::vector<RayApprox> rays;
  rays.reserve(targets.size());
  for (Vertex t : targets) rays.push_back({t, b.line(e, t)});
  return rays;
}

namespace {

// distance matrix restricted to the union of ray vertices
struct RayMetric {
  std::unordered_map<Vertex, uint32_t> idx;
  std::vector<std::vector<int64_t>> dist;

  static RayMetric build(const Space& host, const std::vector<RayApprox>& rays,
                         const std::vector<const Path*>& extra = {}) {
    RayMetric m;
    std::vector<Vertex> pts;
    auto add = [&](const Path& p) {
      for (Vertex v : p.vertices)
        if (m.idx.emplace(v, 0).second) pts.push_back(v);
    };
    for (const auto& r : rays) add(r.path);
    for (const Path* p : extra) add(*p);
    std::sort(pts.begin(), pts.end());
    for (uint32_t i = 0; i < pts.size(); ++i) m.idx[pts[i]] = i;
    m.dist.resize(pts.size());
    for (uint32_t i = 0; i < pts.size(); ++i) {
      auto row = shortest_from(host, pts[i]);
      m.dist[i].resize(pts.size());
      for (uint32_t j = 0; j < pts.size(); ++j) m.dist[i][j] = row[pts[j]];
    }
    return m;
  }

  int64_t operator()(Vertex a, Vertex b) const { return dist[idx.at(a)][idx.at(b)]; }
};

// ray positions at integer arclengths 0..floor(len), plus the endpoint
std::vector<Vertex> ray_spots(const Space& host, const Path& p) {
  std::vector<Vertex> spots;
  int64_t len = p.length_scaled();
  int64_t steps = len / host.scale;
  spots.reserve(steps + 2);
  for (int64_t t = 0; t <= steps; ++t)
    spots.push_back(vertex_at_arclength(p, t * host.scale));
  spots.push_back(p.vertices.back());
  return spots;
}

Rat pair_product(const Space& host, const GromovConstants& consts, const Path& p1,
                 const Path& p2, const std::vector<Vertex>& spots1,
                 const std::vector<Vertex>& spots2, const RayMetric& metric) {
  Rat cap = std::min(p1.length, p2.length);
  // d <= D1 in scaled units: d_scaled <= D1 * scale
  Rat threshold = consts.D1 * host.scale;
  int64_t steps = std::min((p1.length_scaled() / host.scale), (p2.length_scaled() / host.scale));
  Rat sup(0);
  for (int64_t t = 0; t <= steps; ++t) {
    int64_t d = metric(spots1[t], spots2[t]);
    if (Rat(d) <= threshold) sup = Rat(t);
  }
  // the cap itself completes the grid
  {
    int64_t cap_scaled = std::min(p1.length_scaled(), p2.length_scaled());
    Vertex a = vertex_at_arclength(p1, cap_scaled);
    Vertex b = vertex_at_arclength(p2, cap_scaled);
    if (Rat(metric(a, b)) <= threshold && cap > sup) sup = cap;
  }
  return std::min(cap, sup);
}

}  // namespace

Rat ray_product(const Bicombing& b, const GromovConstants& consts, const RayApprox& r1,
                const RayApprox& r2) {
  if (r1.path.front() != r2.path.front())
    throw Error(Code::BASEPOINT_MISMATCH, "rays start at different basepoints");
  RayMetric metric = RayMetric::build(b.host(), {r1, r2});
  auto s1 = ray_spots(b.host(), r1.path);
  auto s2 = ray_spots(b.host(), r2.path);
  return pair_product(b.host(), consts, r1.path, r2.path, s1, s2, metric);
}

BoundaryApprox build_boundary(const Bicombing& b, Vertex e, const Rat& R,
                              const GromovConstants& consts, int threads) {
  BoundaryApprox out;
  out.e = e;
  out.R = R;
  out.consts = consts;
  out.host = &b.host();
  out.rays = frontier_rays(b, e, R);
  const size_t n = out.rays.size();
  RayMetric metric = RayMetric::build(b.host(), out.rays);
  std::vector<std::vector<Vertex>> spots(n);
  for (size_t i = 0; i < n; ++i) spots[i] = ray_spots(b.host(), out.rays[i].path);

  out.products.assign(n, std::vector<Rat>(n, Rat(0)));
  unsigned nt = threads > 0 ? threads : std::max(1u, std::thread::hardware_concurrency());
  auto worker = [&](unsigned w) {
    for (size_t i = w; i < n; i += nt) {
      out.products[i][i] = out.rays[i].path.length;
      for (size_t j = i + 1; j < n; ++j)
        out.products[i][j] = pair_product(b.host(), consts, out.rays[i].path,
                                          out.rays[j].path, spots[i], spots[j], metric);
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < nt; ++w) pool.emplace_back(worker, w);
  for (auto& th : pool) th.join();
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < i; ++j) out.products[i][j] = out.products[j][i];
  return out;
}

// --- partition tree ----------------------------------------------------------

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a > b) std::swap(a, b);
    parent[b] = a;  // smaller index as root keeps block ids canonical
  }
};

}  // namespace

PartitionTree partition_tree(const BoundaryApprox& b, int n_max) {
  if (n_max < 0 || Rat(n_max) > b.R)
    throw Error(Code::BAD_THRESHOLD, "n_max must lie in [0, R]");
  const size_t n = b.rays.size();
  PartitionTree t;
  t.n_max = n_max;
  t.levels.resize(n_max + 1);
  t.parent.resize(n_max + 1);
  for (int level = 0; level <= n_max; ++level) {
    UnionFind uf(n);
    for (size_t i = 0; i < n; ++i)
      for (size_t j = i + 1; j < n; ++j)
        if (b.products[i][j] >= level) uf.unite(static_cast<int>(i), static_cast<int>(j));
    auto& L = t.levels[level];
    L.block_of.assign(n, -1);
    std::map<int, int> root_to_block;
    for (size_t i = 0; i < n; ++i) {
      int r = uf.find(static_cast<int>(i));
      auto it = root_to_block.find(r);
      if (it == root_to_block.end()) {
        it = root_to_block.emplace(r, static_cast<int>(L.blocks.size())).first;
        L.blocks.emplace_back();
      }
      L.block_of[i] = it->second;
      L.blocks[it->second].push_back(static_cast<int>(i));
    }
    if (level > 0) {
      auto& par = t.parent[level];
      par.assign(L.blocks.size(), -1);
      for (size_t bidx = 0; bidx < L.blocks.size(); ++bidx) {
        int p = t.levels[level - 1].block_of[L.blocks[bidx][0]];
        par[bidx] = p;
        // refinement: the whole block sits inside one parent
        for (int ray : L.blocks[bidx])
          if (t.levels[level - 1].block_of[ray] != p)
            throw Error(Code::BAD_THRESHOLD, "refinement violated (products not monotone)");
      }
    }
  }
  return t;
}

std::string partition_to_text(const BoundaryApprox& b, const PartitionTree& t) {
  std::ostringstream os;
  for (int level = 0; level <= t.n_max; ++level) {
    os << "level " << level << ": " << t.levels[level].blocks.size() << " block(s)\n";
    for (size_t bi = 0; bi < t.levels[level].blocks.size(); ++bi) {
      os << "  block " << bi;
      if (level > 0) os << " (parent " << t.parent[level][bi] << ")";
      os << ":";
      for (int ray : t.levels[level].blocks[bi])
        os << " " << b.host->ids[b.rays[ray].target];
      os << "\n";
    }
  }
  return os.str();
}

namespace {

std::string newick_node(const BoundaryApprox& b, const PartitionTree& t, int level, int block) {
  // children: blocks at level+1 whose parent is this block
  if (level == t.n_max) {
    std::ostringstream os;
    os << "(";
    const auto& rays = t.levels[level].blocks[block];
    for (size_t i = 0; i < rays.size(); ++i) {
      if (i) os << ",";
      os << b.host->ids[b.rays[rays[i]].target];
    }
    os << ")L" << level << "B" << block;
    return os.str();
  }
  std::vector<int> children;
  for (size_t bi = 0; bi < t.levels[level + 1].blocks.size(); ++bi)
    if (t.parent[level + 1][bi] == block) children.push_back(static_cast<int>(bi));
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < children.size(); ++i) {
    if (i) os << ",";
    os << newick_node(b, t, level + 1, children[i]);
  }
  os << ")L" << level << "B" << block;
  return os.str();
}

}  // namespace

std::string partition_to_newick(const BoundaryApprox& b, const PartitionTree& t) {
  std::ostringstream os;
  const auto& top = t.levels[0].blocks;
  if (top.size() == 1) {
    os << newick_node(b, t, 0, 0) << ";";
  } else {
    os << "(";
    for (size_t i = 0; i < top.size(); ++i) {
      if (i) os << ",";
      os << newick_node(b, t, 0, static_cast<int>(i));
    }
    os << ")root;";
  }
  return os.str();
}

std::string products_to_csv(const BoundaryApprox& b) {
  std::vector<std::string> labels;
  std::vector<std::vector<std::string>> cells;
  for (const auto& r : b.rays) labels.push_back(b.host->ids[r.target]);
  for (size_t i = 0; i < b.rays.size(); ++i) {
    std::vector<std::string> row;
    for (size_t j = 0; j < b.rays.size(); ++j) row.push_back(format_rat(b.products[i][j]));
    cells.push_back(std::move(row));
  }
  return emit_csv_matrix(labels, cells);
}

// --- zero dimension -----------------------------------------------------------

ZeroDimCertificate zero_dim_certificate(const PartitionTree& t) {
  ZeroDimCertificate cert;
  for (int level = 0; level <= t.n_max; ++level) {
    const auto& L = t.levels[level];
    cert.blocks_per_level.push_back(L.blocks.size());
    // order 1: every ray sits in exactly one block
    std::vector<int> count(L.block_of.size(), 0);
    for (const auto& blk : L.blocks)
      for (int ray : blk) count[ray]++;
    for (int c : count)
      if (c != 1) cert.order_one = false;
  }
  for (int level = 0; level <= t.n_max; ++level) {
    const auto& L = t.levels[level];
    for (size_t bi = 0; bi < L.blocks.size(); ++bi) {
      if (L.blocks[bi].size() < 2) continue;
      int split_after = -1;
      for (int later = level + 1; later <= t.n_max; ++later) {
        std::set<int> sub;
        for (int ray : L.blocks[bi]) sub.insert(t.levels[later].block_of[ray]);
        if (sub.size() >= 2) {
          split_after = later - level;
          break;
        }
      }
      cert.profile.push_back(
          {level, static_cast<int>(bi), L.blocks[bi].size(), split_after});
    }
  }
  return cert;
}

bool ZeroDimCertificate::perfect_at_scale(int level_cap, int s) const {
  for (const auto& p : profile)
    if (p.level <= level_cap && (p.split_after < 0 || p.split_after > s)) return false;
  return true;
}

std::string ZeroDimCertificate::render() const {
  std::ostringstream os;
  os << "order_one=" << (order_one ? "yes" : "no") << "\nblocks per level:";
  for (size_t n = 0; n < blocks_per_level.size(); ++n) os << " " << blocks_per_level[n];
  os << "\nsplitting profile (level block rays split_after):\n";
  for (const auto& p : profile)
    os << "  " << p.level << " " << p.block << " " << p.rays << " " << p.split_after << "\n";
  return os.str();
}

// --- isolated centers -----------------------------------------------------------

IsolationReport isolated_centers(const AugmentedSpace& a, const BoundaryApprox& bd,
                                 const PartitionTree& pt, const IsolationParams& params) {
  if (a.level != 0)
    throw Error(Code::NOT_FULLY_AUGMENTED, "isolation detectors need the fully augmented space");
  const TreeOfSpaces& z = a.tree;
  IsolationReport rep;

  // deep rays per component: target strictly inside the horoball part
  std::vector<std::vector<int>> deep(z.components.size());
  for (size_t ri = 0; ri < bd.rays.size(); ++ri) {
    Vertex tgt = bd.rays[ri].target;
    for (auto [c, local] : z.members_of[tgt]) {
      if (!a.replaced[c]) continue;
      const auto& h = *a.horoballs[c];
      if (h.depth_of[local] >= 1) deep[c].push_back(static_cast<int>(ri));
    }
  }

  const auto& level = pt.levels[std::min<int>(params.n_max, pt.n_max)];
  for (size_t c = 0; c < z.components.size(); ++c) {
    if (!a.replaced[c] || z.components[c].frontier || deep[c].empty()) continue;
    rep.assessed.push_back(static_cast<int>(c));

    bool partition_isolated = true;
    std::set<int> own(deep[c].begin(), deep[c].end());
    for (int ray : deep[c]) {
      for (int other : level.blocks[level.block_of[ray]])
        if (!own.count(other)) partition_isolated = false;
    }

    // spread of interior cut points inside the component (horoball metric)
    std::vector<Vertex> cuts_local;
    for (int ci : z.cuts_of_comp[c]) {
      if (std::find(z.linterior.begin(), z.linterior.end(), ci) == z.linterior.end()) continue;
      for (auto [cc, v] : z.cuts[ci].members)
        if (cc == static_cast<int>(c)) cuts_local.push_back(v);
    }
    Rat spread(0);
    const Space& comp_space = z.components[c].space;
    for (size_t i = 0; i < cuts_local.size(); ++i) {
      auto row = shortest_from(comp_space, cuts_local[i]);
      for (size_t j = i + 1; j < cuts_local.size(); ++j)
        spread = std::max(spread, comp_space.unscale(row[cuts_local[j]]));
    }
    bool cuts_bounded = spread <= params.bounded_radius;

    if (partition_isolated) rep.isolated_by_partition.push_back(static_cast<int>(c));
    if (cuts_bounded) rep.isolated_by_bounded_cuts.push_back(static_cast<int>(c));
    rep.details.push_back({static_cast<int>(c), deep[c].size(), partition_isolated, spread,
                           cuts_bounded});
  }
  return rep;
}

std::string IsolationReport::render(const TreeOfSpaces& z) const {
  std::ostringstream os;
  os << "assessed components:";
  for (int c : assessed) os << " " << z.components[c].name;
  os << "\nisolated (partition detector):";
  for (int c : isolated_by_partition) os << " " << z.components[c].name;
  os << "\nisolated (bounded-cuts detector):";
  for (int c : isolated_by_bounded_cuts) os << " " << z.components[c].name;
  os << "\ndetectors_agree=" << (detectors_agree() ? "yes" : "no") << "\n";
  for (const auto& d : details)
    os << "  " << z.components[d.comp].name << " deep_rays=" << d.deep_rays
       << " partition_isolated=" << (d.partition_isolated ? 1 : 0)
       << " cut_spread=" << format_rat(d.cut_spread)
       << " cuts_bounded=" << (d.cuts_bounded ? 1 : 0) << "\n";
  return os.str();
}

// --- last exit / retraction -------------------------------------------------------

LastExit last_exit(const TreeOfSpaces& z, const RayApprox& ray, int k) {
  if (k < 0 || k >= static_cast<int>(z.components.size()))
    throw Error(Code::UNKNOWN_VERTEX, "no such component");
  std::optional<LastExit> found;
  for (size_t i = 0; i < ray.path.vertices.size(); ++i) {
    Vertex v = ray.path.vertices[i];
    for (auto [c, local] : z.members_of[v])
      if (c == k)
        found = LastExit{z.assembled.unscale(ray.path.cum_scaled[i]), v, local, i};
  }
  if (!found) throw Error(Code::NEVER_MEETS, "ray never meets the component");
  return *found;
}

Vertex component_local_base(const TreeOfSpaces& z, int k) {
  if (k == z.basepoint_comp) return z.basepoint_local;
  if (z.vertex_in_component(z.basepoint(), k)) {
    for (auto [c, local] : z.members_of[z.basepoint()])
      if (c == k) return local;
  }
  // entry cut: walk the component route from the basepoint's component
  Path probe = tree_geodesic(z, z.basepoint(), z.to_assembled[k][0]);
  for (Vertex v : probe.vertices)
    if (z.vertex_in_component(v, k)) {
      for (auto [c, local] : z.members_of[v])
        if (c == k) return local;
    }
  throw Error(Code::NEVER_MEETS, "no entry into component");
}

BoundaryApprox component_boundary(const TreeOfSpaces& z, int k, const Rat& R,
                                  const GromovConstants& consts) {
  const Space& sp = z.components[k].space;
  Bicombing b = space_bicombing(sp);
  return build_boundary(b, component_local_base(z, k), R, consts);
}

Retraction retract_component(const TreeOfSpaces& z, int k, const BoundaryApprox& bz,
                             const BoundaryApprox& bk, const PartitionTree& ptk,
                             int block_level) {
  Retraction ret;
  ret.k = k;
  ret.block_level = std::min(block_level, ptk.n_max);
  const Space& comp_space = z.components[k].space;
  Vertex local_base = bk.e;

  Bicombing comp_bic = space_bicombing(comp_space);
  const size_t nz = bz.rays.size();
  ret.image_ray.assign(nz, -1);
  ret.image_block.assign(nz, -1);
  ret.exits.resize(nz);

  for (size_t i = 0; i < nz; ++i) {
    LastExit ex;
    try {
      ex = last_exit(z, bz.rays[i], k);
    } catch (const Error& e) {
      if (e.code() == Code::NEVER_MEETS) continue;
      throw;
    }
    ret.exits[i] = ex;
    int image = bk.ray_of_target(ex.local);
    if (image < 0) {
      // nearest component ray by Gromov product with the geodesic to pi_k
      RayApprox probe{ex.local, comp_bic.line(local_base, ex.local)};
      Rat best(-1);
      for (size_t j = 0; j < bk.rays.size(); ++j) {
        Rat p = ray_product(comp_bic, bk.consts, probe, bk.rays[j]);
        if (p > best) {
          best = p;
          image = static_cast<int>(j);
        }
      }
    }
    ret.image_ray[i] = image;
    ret.image_block[i] = ptk.levels[ret.block_level].block_of[image];
  }

  // continuity modulus over levels of the Z-boundary
  int nmax = static_cast<int>(to_int64(rat_floor(bz.R)));
  ret.modulus.assign(nmax + 1, Rat(0));
  ret.modulus_defined.assign(nmax + 1, false);
  for (int n = 0; n <= nmax; ++n) {
    Rat best(-1);
    for (size_t i = 0; i < nz; ++i) {
      if (ret.image_ray[i] < 0) continue;
      for (size_t j = i + 1; j < nz; ++j) {
        if (ret.image_ray[j] < 0) continue;
        if (bz.products[i][j] < n) continue;
        Rat p = bk.products[ret.image_ray[i]][ret.image_ray[j]];
        if (best < 0 || p < best) best = p;
      }
    }
    if (best >= 0) {
      ret.modulus[n] = best;
      ret.modulus_defined[n] = true;
    }
  }
  return ret;
}

std::string Retraction::render(const BoundaryApprox& bz, const BoundaryApprox& bk) const {
  std::ostringstream os;
  os << "retraction onto component " << k << " at block level " << block_level << "\n";
  for (size_t i = 0; i < image_ray.size(); ++i) {
    os << "  " << bz.host->ids[bz.rays[i].target] << " -> ";
    if (image_ray[i] < 0)
      os << "(never meets)";
    else
      os << bk.host->ids[bk.rays[image_ray[i]].target] << " block " << image_block[i];
    os << "\n";
  }
  os << "modulus:";
  for (size_t n = 0; n < modulus.size(); ++n)
    os << " " << (modulus_defined[n] ? format_rat(modulus[n]) : std::string("-"));
  os << "\n";
  return os.str();
}

}  // namespace ccgeo
