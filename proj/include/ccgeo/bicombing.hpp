#pragma once

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "ccgeo/space.hpp"

namespace ccgeo {

using Selector = std::function<Path(Vertex, Vertex)>;

// Deterministic geodesic selector over a host space, with the quantized
// evaluation map gamma(x, y, t): the path vertex whose arclength from x is
// closest to t * d(x,y), ties to the earlier vertex.
class Bicombing {
 public:
  Bicombing(const Space& host, Selector selector);

  const Space& host() const { return *host_; }

  // selected geodesic, cached per ordered pair
  const Path& line(Vertex x, Vertex y) const;

  // gamma(x, y, t) for t in [0,1]
  Vertex eval(Vertex x, Vertex y, const Rat& t) const;

  // reparametrised form: point at arclength min(t, d(x,y)) along the line
  Vertex at_arclength(Vertex x, Vertex y, const Rat& t) const;

  Rat dist(Vertex x, Vertex y) const;
  int64_t dist_scaled(Vertex x, Vertex y) const;

  // prebuilds distance rows from the given sources (call before parallel use)
  void warm_distances(const std::vector<Vertex>& sources) const;

 private:
  struct State;
  std::shared_ptr<State> state_;
  const Space* host_;
};

// host-agnostic lexicographic selector
Bicombing space_bicombing(const Space& s);

struct ConvexityParams {
  Rat E{1};
  Rat C{0};
};

struct GromovConstants {
  Rat lambda{1}, k{0}, E{1}, C{0};
  Rat k1, D, D1, D2;
};

// k1 = lambda + k; D = 2(1+E)k1 + C; D1 = 2D + 2; D2 = E(D1 + 2 k1)
GromovConstants derive_constants(const Rat& lambda, const Rat& k, const Rat& E, const Rat& C);

// --- convexity -------------------------------------------------------------

struct Quadruple {
  Vertex x1, y1, x2, y2;
};

struct ConvexityViolation {
  Quadruple q;
  Rat a, b, c;
  Rat lhs, rhs;  // rhs includes the slack
};

struct ConvexityReport {
  ConvexityParams params;
  Rat slack;
  size_t tuples_checked = 0;
  std::vector<ConvexityViolation> violations;
  bool ok() const { return violations.empty(); }
};

// Checks d(g(x1,y1,ca), g(x2,y2,cb)) <= (1-c) E d(x1,x2) + c E d(y1',y2') + C + slack
// over all quadruples and all (a, b, c) from the grid. Default slack is one
// maximal edge length per evaluated point, i.e. 2 * maxedge.
ConvexityReport check_convexity(const Bicombing& b, const ConvexityParams& params,
                                const std::vector<Quadruple>& quadruples,
                                const std::vector<Rat>& c_grid,
                                std::optional<Rat> slack = std::nullopt);

std::vector<Rat> default_c_grid();

// every ordered quadruple over the host's vertices (use on small hosts only)
std::vector<Quadruple> all_quadruples(const Space& s);
std::vector<Quadruple> sample_quadruples(const Space& s, size_t count, uint64_t seed);

// Smallest C over an E sweep such that check_convexity is clean; among the
// swept E values the pair with minimal C wins, ties to the smaller E.
ConvexityParams fit_constants(const Bicombing& b, const std::vector<Quadruple>& quadruples,
                              const std::vector<Rat>& c_grid,
                              const std::vector<Rat>& e_grid = {},
                              std::optional<Rat> slack = std::nullopt);

// --- Gromov products --------------------------------------------------------

// (x|y)_e = min{ d(e,x), d(e,y), sup{ t : d(g(e,x,t), g(e,y,t)) <= D1 } },
// the sup running over the integer grid {0,1,...} plus the cap itself.
Rat gromov_product(const Bicombing& b, const GromovConstants& consts, Vertex e, Vertex x,
                   Vertex y);

struct TripleViolation {
  Vertex x, y, z;
  Rat lhs, rhs;
};

struct TripleReport {
  size_t tuples_checked = 0;
  std::vector<TripleViolation> violations;
  bool ok() const { return violations.empty(); }
};

// (x|z) >= min{(x|y), (y|z)} / D2 - slack over sampled triples (slack 1
// covers the integer-grid quantization of the product).
TripleReport check_quasi_ultrametric(const Bicombing& b, const GromovConstants& consts,
                                     const std::vector<std::array<Vertex, 3>>& triples,
                                     Vertex e, const Rat& slack = Rat(1));

// (x|y)_e >= min{d(e,x), d(e,y)} / (2 E d(x,y)) - slack; x == y is rejected.
TripleReport check_gprod_lower_bound(const Bicombing& b, const GromovConstants& consts,
                                     const std::vector<std::array<Vertex, 3>>& triples,
                                     std::optional<Rat> slack = std::nullopt);

std::vector<std::array<Vertex, 3>> all_triples(const Space& s);
std::vector<std::array<Vertex, 3>> sample_triples(const Space& s, size_t count, uint64_t seed);

std::string render_convexity_report(const Space& host, const ConvexityReport& r);
std::string render_triple_report(const Space& host, const TripleReport& r,
                                 const std::string& title);

}  // namespace ccgeo
