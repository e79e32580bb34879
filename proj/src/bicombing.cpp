#include "ccgeo/bicombing.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <mutex>
#include <sstream>
#include <unordered_map>

#include "ccgeo/sampling.hpp"

namespace ccgeo {

struct Bicombing::State {
  Selector selector;
  mutable std::mutex mu;
  mutable std::map<std::pair<Vertex, Vertex>, Path> lines;
  mutable std::unordered_map<Vertex, std::vector<int64_t>> dist_rows;
};

Bicombing::Bicombing(const Space& host, Selector selector)
    : state_(std::make_shared<State>()), host_(&host) {
  state_->selector = std::move(selector);
}

const Path& Bicombing::line(Vertex x, Vertex y) const {
  std::lock_guard<std::mutex> lock(state_->mu);
  auto key = std::make_pair(x, y);
  auto it = state_->lines.find(key);
  if (it == state_->lines.end()) it = state_->lines.emplace(key, state_->selector(x, y)).first;
  return it->second;
}

Vertex Bicombing::eval(Vertex x, Vertex y, const Rat& t) const {
  const Path& p = line(x, y);
  // target arclength t * d(x,y) in scaled units; compare |cum - target|
  // exactly by clearing the denominator of t
  Rat target = t * Rat(p.length_scaled());
  BigInt num = numerator(target);
  BigInt den = denominator(target);
  // find the cum minimizing |cum*den - num|, ties to the earlier vertex
  const auto& cum = p.cum_scaled;
  size_t hi = cum.size() - 1;
  if (num <= 0) return p.vertices[0];
  size_t left = 0;
  {
    size_t a = 0, b = hi;
    while (a < b) {
      size_t mid = (a + b + 1) / 2;
      if (BigInt(cum[mid]) * den <= num)
        a = mid;
      else
        b = mid - 1;
    }
    left = a;
  }
  if (left == hi) return p.vertices[hi];
  BigInt d_left = num - BigInt(cum[left]) * den;
  BigInt d_right = BigInt(cum[left + 1]) * den - num;
  return d_left <= d_right ? p.vertices[left] : p.vertices[left + 1];
}

Vertex Bicombing::at_arclength(Vertex x, Vertex y, const Rat& t) const {
  const Path& p = line(x, y);
  Rat d = p.length;
  if (t >= d) return p.empty() ? y : p.back();
  if (d == 0) return x;
  return eval(x, y, t / d);
}

int64_t Bicombing::dist_scaled(Vertex x, Vertex y) const {
  std::lock_guard<std::mutex> lock(state_->mu);
  auto it = state_->dist_rows.find(x);
  if (it == state_->dist_rows.end())
    it = state_->dist_rows.emplace(x, shortest_from(*host_, x)).first;
  return it->second[y];
}

Rat Bicombing::dist(Vertex x, Vertex y) const { return host_->unscale(dist_scaled(x, y)); }

void Bicombing::warm_distances(const std::vector<Vertex>& sources) const {
  for (Vertex v : sources) dist_scaled(v, v);
}

Bicombing space_bicombing(const Space& s) {
  const Space* sp = &s;
  return Bicombing(s, [sp](Vertex x, Vertex y) { return geodesic(*sp, x, y); });
}

GromovConstants derive_constants(const Rat& lambda, const Rat& k, const Rat& E, const Rat& C) {
  if (lambda < 1 || k < 0 || E < 1 || C < 0)
    throw Error(Code::BAD_PARAMS, "need lambda >= 1, k >= 0, E >= 1, C >= 0");
  GromovConstants g;
  g.lambda = lambda;
  g.k = k;
  g.E = E;
  g.C = C;
  g.k1 = lambda + k;
  g.D = 2 * (1 + E) * g.k1 + C;
  g.D1 = 2 * g.D + 2;
  g.D2 = E * (g.D1 + 2 * g.k1);
  return g;
}

std::vector<Rat> default_c_grid() {
  return {Rat(0), Rat(1, 4), Rat(1, 2), Rat(3, 4), Rat(1)};
}

std::vector<Quadruple> all_quadruples(const Space& s) {
  std::vector<Quadruple> out;
  const Vertex n = static_cast<Vertex>(s.vertex_count());
  out.reserve(static_cast<size_t>(n) * n * n * n);
  for (Vertex x1 = 0; x1 < n; ++x1)
    for (Vertex y1 = 0; y1 < n; ++y1)
      for (Vertex x2 = 0; x2 < n; ++x2)
        for (Vertex y2 = 0; y2 < n; ++y2) out.push_back({x1, y1, x2, y2});
  return out;
}

std::vector<Quadruple> sample_quadruples(const Space& s, size_t count, uint64_t seed) {
  Rng rng(seed);
  const uint64_t n = s.vertex_count();
  std::vector<Quadruple> out;
  out.reserve(count);
  for (size_t i = 0; i < count; ++i)
    out.push_back({static_cast<Vertex>(rng.below(n)), static_cast<Vertex>(rng.below(n)),
                   static_cast<Vertex>(rng.below(n)), static_cast<Vertex>(rng.below(n))});
  return out;
}

std::vector<std::array<Vertex, 3>> all_triples(const Space& s) {
  std::vector<std::array<Vertex, 3>> out;
  const Vertex n = static_cast<Vertex>(s.vertex_count());
  for (Vertex x = 0; x < n; ++x)
    for (Vertex y = 0; y < n; ++y)
      for (Vertex z = 0; z < n; ++z) out.push_back({x, y, z});
  return out;
}

std::vector<std::array<Vertex, 3>> sample_triples(const Space& s, size_t count, uint64_t seed) {
  Rng rng(seed);
  const uint64_t n = s.vertex_count();
  std::vector<std::array<Vertex, 3>> out;
  out.reserve(count);
  for (size_t i = 0; i < count; ++i)
    out.push_back({static_cast<Vertex>(rng.below(n)), static_cast<Vertex>(rng.below(n)),
                   static_cast<Vertex>(rng.below(n))});
  return out;
}

namespace {

// Shared walker for convexity checks: visits every (quadruple, a, b, c)
// tuple with distances in scaled units. Evaluated points are memoized per
// combing line across the whole sweep.
template <typename Visit>
void sweep_convexity(const Bicombing& b, const std::vector<Quadruple>& quadruples,
                     const std::vector<Rat>& c_grid, Visit&& visit) {
  // grid closure: every parameter value the sweep ever evaluates at
  std::vector<Rat> closure = c_grid;
  for (const Rat& c : c_grid)
    for (const Rat& a : c_grid) closure.push_back(Rat(c * a));
  std::sort(closure.begin(), closure.end());
  closure.erase(std::unique(closure.begin(), closure.end()), closure.end());

  std::map<std::pair<Vertex, Vertex>, std::vector<Vertex>> eval_cache;
  auto eval_all = [&](Vertex x, Vertex y) -> const std::vector<Vertex>& {
    auto key = std::make_pair(x, y);
    auto it = eval_cache.find(key);
    if (it == eval_cache.end()) {
      std::vector<Vertex> spots;
      spots.reserve(closure.size());
      for (const Rat& t : closure) spots.push_back(b.eval(x, y, t));
      it = eval_cache.emplace(key, std::move(spots)).first;
    }
    return it->second;
  };
  auto slot = [&](const Rat& t) {
    return static_cast<size_t>(std::lower_bound(closure.begin(), closure.end(), t) -
                               closure.begin());
  };
  std::vector<size_t> grid_slot;
  for (const Rat& c : c_grid) grid_slot.push_back(slot(c));

  for (const auto& q : quadruples) {
    int64_t dx = b.dist_scaled(q.x1, q.x2);
    const auto& line1 = eval_all(q.x1, q.y1);
    const auto& line2 = eval_all(q.x2, q.y2);
    for (size_t ai = 0; ai < c_grid.size(); ++ai)
      for (size_t bi = 0; bi < c_grid.size(); ++bi) {
        int64_t dy = b.dist_scaled(line1[grid_slot[ai]], line2[grid_slot[bi]]);
        for (size_t ci = 0; ci < c_grid.size(); ++ci) {
          size_t s1 = slot(Rat(c_grid[ci] * c_grid[ai]));
          size_t s2 = slot(Rat(c_grid[ci] * c_grid[bi]));
          int64_t lhs = b.dist_scaled(line1[s1], line2[s2]);
          visit(q, ai, bi, ci, dx, dy, lhs);
        }
      }
  }
}

}  // namespace

ConvexityReport check_convexity(const Bicombing& b, const ConvexityParams& params,
                                const std::vector<Quadruple>& quadruples,
                                const std::vector<Rat>& c_grid, std::optional<Rat> slack) {
  if (quadruples.empty() || c_grid.empty())
    throw Error(Code::EMPTY_SAMPLE, "convexity check needs quadruples and a c grid");
  ConvexityReport rep;
  rep.params = params;
  rep.slack = slack.value_or(2 * b.host().max_edge());
  const int64_t scale = b.host().scale;
  // rhs = A_c * dx + B_c * dy + K, precomputed per c
  std::vector<Rat> A, B;
  Rat K = (params.C + rep.slack) * scale;
  for (const Rat& c : c_grid) {
    A.push_back(Rat((1 - c) * params.E));
    B.push_back(Rat(c * params.E));
  }
  // rhs depends only on (c, dx, dy); cache it across tuples
  std::map<std::tuple<size_t, int64_t, int64_t>, Rat> rhs_cache;
  sweep_convexity(b, quadruples, c_grid,
                  [&](const Quadruple& q, size_t ai, size_t bi, size_t ci, int64_t dx,
                      int64_t dy, int64_t lhs) {
                    ++rep.tuples_checked;
                    auto key = std::make_tuple(ci, dx, dy);
                    auto it = rhs_cache.find(key);
                    if (it == rhs_cache.end())
                      it = rhs_cache.emplace(key, Rat(A[ci] * dx + B[ci] * dy + K)).first;
                    if (it->second < lhs)
                      rep.violations.push_back({q, c_grid[ai], c_grid[bi], c_grid[ci],
                                                b.host().unscale(lhs),
                                                Rat(it->second / scale)});
                  });
  return rep;
}

ConvexityParams fit_constants(const Bicombing& b, const std::vector<Quadruple>& quadruples,
                              const std::vector<Rat>& c_grid, const std::vector<Rat>& e_grid_in,
                              std::optional<Rat> slack) {
  if (quadruples.empty() || c_grid.empty())
    throw Error(Code::EMPTY_SAMPLE, "fit needs quadruples and a c grid");
  std::vector<Rat> e_grid = e_grid_in;
  if (e_grid.empty())
    for (Rat e = 1; e <= 5; e += Rat(1, 2)) e_grid.push_back(e);
  Rat sl = slack.value_or(2 * b.host().max_edge());
  const int64_t scale = b.host().scale;

  // residual per E: max over tuples of lhs - slack - (1-c)E dx - cE dy
  std::vector<std::vector<Rat>> A(e_grid.size()), B(e_grid.size());
  for (size_t ei = 0; ei < e_grid.size(); ++ei)
    for (const Rat& c : c_grid) {
      A[ei].push_back(Rat((1 - c) * e_grid[ei]));
      B[ei].push_back(Rat(c * e_grid[ei]));
    }
  Rat sl_scaled = sl * scale;
  // residuals depend only on (c, dx, dy, lhs); dedupe before the rational work
  std::set<std::tuple<size_t, int64_t, int64_t, int64_t>> seen;
  sweep_convexity(b, quadruples, c_grid,
                  [&](const Quadruple&, size_t, size_t, size_t ci, int64_t dx, int64_t dy,
                      int64_t lhs) { seen.insert({ci, dx, dy, lhs}); });
  std::vector<Rat> cmin(e_grid.size(), Rat(0));
  for (const auto& [ci, dx, dy, lhs] : seen)
    for (size_t ei = 0; ei < e_grid.size(); ++ei) {
      Rat resid = Rat(lhs) - sl_scaled - A[ei][ci] * dx - B[ei][ci] * dy;
      if (resid > cmin[ei] * scale) cmin[ei] = Rat(resid / scale);
    }
  size_t best = 0;
  for (size_t ei = 1; ei < e_grid.size(); ++ei)
    if (cmin[ei] < cmin[best]) best = ei;
  return {e_grid[best], cmin[best]};
}

Rat gromov_product(const Bicombing& b, const GromovConstants& consts, Vertex e, Vertex x,
                   Vertex y) {
  b.host().check_vertex(e);
  b.host().check_vertex(x);
  b.host().check_vertex(y);
  Rat dex = b.dist(e, x), dey = b.dist(e, y);
  Rat cap = std::min(dex, dey);
  if (x == y) return cap;
  const int64_t scale = b.host().scale;
  const Path& px = b.line(e, x);
  const Path& py = b.line(e, y);
  // d <= D1 in scaled units; integer threshold since distances are integers
  int64_t threshold = to_int64(rat_floor(Rat(consts.D1 * scale)));
  int64_t cap_scaled = std::min(px.length_scaled(), py.length_scaled());
  // sup over the integer grid plus the cap itself
  Rat sup(0);
  for (int64_t t = 0; t * scale <= cap_scaled; ++t) {
    Vertex vx = vertex_at_arclength(px, t * scale);
    Vertex vy = vertex_at_arclength(py, t * scale);
    if (b.dist_scaled(vx, vy) <= threshold) sup = Rat(t);
  }
  {
    Vertex vx = vertex_at_arclength(px, cap_scaled);
    Vertex vy = vertex_at_arclength(py, cap_scaled);
    if (b.dist_scaled(vx, vy) <= threshold && cap > sup) sup = cap;
  }
  return std::min(cap, sup);
}

TripleReport check_quasi_ultrametric(const Bicombing& b, const GromovConstants& consts,
                                     const std::vector<std::array<Vertex, 3>>& triples,
                                     Vertex e, const Rat& slack) {
  if (triples.empty()) throw Error(Code::EMPTY_SAMPLE, "no triples");
  TripleReport rep;
  std::map<std::pair<Vertex, Vertex>, Rat> cache;
  auto prod = [&](Vertex x, Vertex y) {
    auto key = std::minmax(x, y);
    auto it = cache.find(key);
    if (it == cache.end())
      it = cache.emplace(key, gromov_product(b, consts, e, x, y)).first;
    return it->second;
  };
  for (const auto& t : triples) {
    Rat xy = prod(t[0], t[1]);
    Rat yz = prod(t[1], t[2]);
    Rat xz = prod(t[0], t[2]);
    Rat rhs = std::min(xy, yz) / consts.D2 - slack;
    ++rep.tuples_checked;
    if (xz < rhs) rep.violations.push_back({t[0], t[1], t[2], xz, rhs});
  }
  return rep;
}

TripleReport check_gprod_lower_bound(const Bicombing& b, const GromovConstants& consts,
                                     const std::vector<std::array<Vertex, 3>>& triples,
                                     std::optional<Rat> slack) {
  if (triples.empty()) throw Error(Code::EMPTY_SAMPLE, "no triples");
  Rat sl = slack.value_or(Rat(1) + 2 * b.host().max_edge());
  TripleReport rep;
  for (const auto& t : triples) {
    Vertex e = t[0], x = t[1], y = t[2];
    if (x == y) throw Error(Code::DIVISION_BY_ZERO, "x and y must be distinct");
    Rat bound = std::min(b.dist(e, x), b.dist(e, y)) / (2 * consts.E * b.dist(x, y));
    Rat got = gromov_product(b, consts, e, x, y);
    ++rep.tuples_checked;
    if (got < bound - sl) rep.violations.push_back({e, x, y, got, bound - sl});
  }
  return rep;
}

std::string render_convexity_report(const Space& host, const ConvexityReport& r) {
  std::ostringstream os;
  os << "convexity E=" << format_rat(r.params.E) << " C=" << format_rat(r.params.C)
     << " slack=" << format_rat(r.slack) << " tuples=" << r.tuples_checked
     << " violations=" << r.violations.size() << "\n";
  for (const auto& v : r.violations)
    os << "  " << host.ids[v.q.x1] << " " << host.ids[v.q.y1] << " " << host.ids[v.q.x2] << " "
       << host.ids[v.q.y2] << " a=" << format_rat(v.a) << " b=" << format_rat(v.b)
       << " c=" << format_rat(v.c) << " lhs=" << format_rat(v.lhs)
       << " rhs=" << format_rat(v.rhs) << "\n";
  return os.str();
}

std::string render_triple_report(const Space& host, const TripleReport& r,
                                 const std::string& title) {
  std::ostringstream os;
  os << title << " tuples=" << r.tuples_checked << " violations=" << r.violations.size()
     << "\n";
  for (const auto& v : r.violations)
    os << "  " << host.ids[v.x] << " " << host.ids[v.y] << " " << host.ids[v.z]
       << " lhs=" << format_rat(v.lhs) << " rhs=" << format_rat(v.rhs) << "\n";
  return os.str();
}

}  // namespace ccgeo
