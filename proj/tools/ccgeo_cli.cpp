#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "ccgeo/boundary.hpp"
#include "ccgeo/emit.hpp"
#include "ccgeo/horoball.hpp"
#include "ccgeo/sampling.hpp"
#include "ccgeo/tree_assembly.hpp"

using namespace ccgeo;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitViolation = 2;

void write_out(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw Error(Code::MALFORMED_DOCUMENT, "cannot write " + path);
  f << text;
}

struct ConstFlags {
  std::string lambda = "1", k = "0", E = "1", C = "0";
  GromovConstants derive() const {
    return derive_constants(parse_rat(lambda), parse_rat(k), parse_rat(E), parse_rat(C));
  }
};

GraphAnnotations horoball_annotations(const HoroballGraph& h) {
  GraphAnnotations ann;
  std::vector<std::string> depth(h.graph.vertex_count());
  for (Vertex v = 0; v < h.graph.vertex_count(); ++v)
    depth[v] = std::to_string(h.depth_of[v]);
  ann.vertex_attrs["depth"] = depth;
  std::vector<std::string> kinds;
  for (auto k : h.kind)
    kinds.push_back(k == EdgeKind::Vertical ? "vertical"
                                            : (k == EdgeKind::Horizontal ? "horizontal" : "base"));
  ann.edge_attrs["kind"] = kinds;
  return ann;
}

GraphAnnotations tree_annotations(const TreeOfSpaces& z) {
  GraphAnnotations ann;
  std::vector<std::string> comp(z.assembled.vertex_count());
  for (Vertex v = 0; v < z.assembled.vertex_count(); ++v) {
    std::string names;
    for (auto [c, _] : z.members_of[v]) {
      if (!names.empty()) names += "+";
      names += z.components[c].name;
    }
    comp[v] = names;
  }
  ann.vertex_attrs["component"] = comp;
  return ann;
}

std::string emit_space(const Space& s, const std::string& format, const GraphAnnotations& ann) {
  if (format == "dot") return emit_dot(s, ann);
  if (format == "graphml") return emit_graphml(s, ann);
  throw Error(Code::MALFORMED_DOCUMENT, "unsupported format '" + format + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coarse-geometry toolkit: horoballs, bicombings, trees of spaces, boundaries"};
  app.require_subcommand(1);

  std::string input, output, format = "text";
  std::string x_input, y_input;
  int depth_max = 4, n_max = -1, word_depth = 1, augment_level = -1;
  bool glued = false, fit = false, all = false, tree_mode = false, no_slack = false;
  std::string radius, comp_radius, bound = "9", truncate_radius, bounded_radius = "0";
  uint64_t seed = 0;
  size_t sample = 0;
  std::string from_id, to_id, e_id, x_id, y_id, component;
  ConstFlags cf;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--input", input, "input document");
    cmd->add_option("--output", output, "output file (default stdout)");
    cmd->add_option("--format", format, "text, dot, graphml, csv or newick");
  };
  auto add_consts = [&](CLI::App* cmd) {
    cmd->add_option("--lambda", cf.lambda);
    cmd->add_option("--k", cf.k);
    cmd->add_option("--E", cf.E);
    cmd->add_option("--C", cf.C);
  };

  auto* c_validate = app.add_subcommand("validate", "validate a space document");
  add_common(c_validate);

  auto* c_horoball = app.add_subcommand("horoball", "build a combinatorial or metric horoball");
  add_common(c_horoball);
  c_horoball->add_option("--depth-max", depth_max);
  c_horoball->add_flag("--glued", glued, "glue the base space along depth 0");

  auto* c_geodesic = app.add_subcommand("geodesic", "deterministic geodesic between two vertices");
  add_common(c_geodesic);
  c_geodesic->add_option("--from", from_id)->required();
  c_geodesic->add_option("--to", to_id)->required();
  c_geodesic->add_flag("--tree", tree_mode, "input is a tree-of-spaces document");

  bool use_horoball = false, hyp_glued = false;
  auto* c_hyp = app.add_subcommand("hyperbolicity", "max over triples of the min triangle diameter");
  add_common(c_hyp);
  c_hyp->add_option("--bound", bound, "certified bound (default 9)");
  c_hyp->add_flag("--horoball", use_horoball, "build the horoball over the input space first");
  c_hyp->add_option("--depth-max", depth_max);
  c_hyp->add_flag("--glued", hyp_glued);
  c_hyp->add_option("--sample", sample, "sample this many triples instead of ALL");
  c_hyp->add_option("--seed", seed, "seed for sampling");

  auto* c_convex = app.add_subcommand("convexity", "check or fit (E,C) coarse convexity");
  add_common(c_convex);
  add_consts(c_convex);
  c_convex->add_flag("--tree", tree_mode);
  c_convex->add_flag("--fit", fit, "fit minimal (E,C) instead of checking");
  c_convex->add_flag("--no-slack", no_slack, "drop the quantization slack");
  c_convex->add_option("--sample", sample, "sample quadruples (default ALL)");
  c_convex->add_option("--seed", seed);

  auto* c_gromov = app.add_subcommand("gromov", "Gromov product of two points at a basepoint");
  add_common(c_gromov);
  add_consts(c_gromov);
  c_gromov->add_flag("--tree", tree_mode);
  c_gromov->add_option("--e", e_id)->required();
  c_gromov->add_option("--x", x_id)->required();
  c_gromov->add_option("--y", y_id)->required();

  auto* c_assemble = app.add_subcommand("assemble", "build a tree of spaces");
  add_common(c_assemble);

  auto* c_free = app.add_subcommand("freeproduct", "free product of two pointed spaces");
  c_free->add_option("--x", x_input)->required();
  c_free->add_option("--y", y_input)->required();
  c_free->add_option("--word-depth", word_depth);
  c_free->add_option("--truncate-radius", truncate_radius);
  c_free->add_option("--output", output);
  c_free->add_option("--format", format);

  auto* c_augment = app.add_subcommand("augment", "replace components by glued horoballs");
  add_common(c_augment);
  c_augment->add_option("--level", augment_level, "components past this index are replaced");
  c_augment->add_option("--depth-max", depth_max);

  auto* c_boundary = app.add_subcommand("boundary", "frontier rays, products, clopen partitions");
  add_common(c_boundary);
  add_consts(c_boundary);
  c_boundary->add_flag("--tree", tree_mode);
  c_boundary->add_option("--augment-level", augment_level, "augment the tree first (0 = fully)");
  c_boundary->add_option("--depth-max", depth_max);
  c_boundary->add_option("--radius", radius, "truncation radius (default eccentricity - 1)");
  c_boundary->add_option("--n-max", n_max, "top partition threshold (default floor(R))");
  c_boundary->add_option("--bounded-radius", bounded_radius,
                         "declared bound for the isolation cut detector");

  auto* c_retract = app.add_subcommand("retract", "last-exit retraction onto a component");
  add_common(c_retract);
  add_consts(c_retract);
  c_retract->add_option("--component", component)->required();
  c_retract->add_option("--radius", radius);
  c_retract->add_option("--component-radius", comp_radius);
  c_retract->add_option("--n-max", n_max);

  auto* c_certify = app.add_subcommand("certify", "run the certificate battery on a document");
  add_common(c_certify);
  add_consts(c_certify);
  c_certify->add_flag("--tree", tree_mode);
  c_certify->add_flag("--all", all, "run every applicable certificate");
  c_certify->add_option("--sample", sample);
  c_certify->add_option("--seed", seed);
  c_certify->add_option("--bound", bound);

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_validate->parsed()) {
      Space s = load_space_file(input);
      if (format == "text") {
        std::ostringstream os;
        os << "ok name=" << s.name << " vertices=" << s.vertex_count()
           << " edges=" << s.edges.size() << " lattice=" << s.lattice.size()
           << " basepoint=" << s.ids[s.basepoint] << "\n";
        write_out(output, os.str());
      } else {
        write_out(output, emit_space(s, format, {}));
      }
      return kExitOk;
    }

    if (c_horoball->parsed()) {
      Space s = load_space_file(input);
      HoroballGraph h = build_horoball(s, depth_max, glued);
      if (format == "text") {
        std::ostringstream os;
        os << "horoball glued=" << (h.glued ? 1 : 0) << " depth_max=" << h.depth_max
           << " sufficient_depth=" << h.sufficient_depth
           << " vertices=" << h.graph.vertex_count() << " edges=" << h.graph.edges.size()
           << "\n";
        if (h.depth_max < h.sufficient_depth)
          os << "note: depth_max below the sufficiency bound; deep distances may truncate\n";
        write_out(output, os.str());
      } else {
        write_out(output, emit_space(h.graph, format, horoball_annotations(h)));
      }
      return kExitOk;
    }

    if (c_geodesic->parsed()) {
      std::ostringstream os;
      if (tree_mode) {
        TreeOfSpaces z = build_tree_of_spaces_file(input);
        Path p = tree_geodesic(z, z.assembled.require(from_id), z.assembled.require(to_id));
        os << "length " << format_rat(p.length) << "\n";
        for (Vertex v : p.vertices) os << z.assembled.ids[v] << "\n";
      } else {
        Space s = load_space_file(input);
        Path p = geodesic(s, s.require(from_id), s.require(to_id));
        os << "length " << format_rat(p.length) << "\n";
        for (Vertex v : p.vertices) os << s.ids[v] << "\n";
      }
      write_out(output, os.str());
      return kExitOk;
    }

    if (c_hyp->parsed()) {
      Space s = load_space_file(input);
      std::optional<HoroballGraph> h;
      const Space* host = &s;
      SideSelector sides = space_sides(s);
      if (use_horoball) {
        h = build_horoball(s, depth_max, hyp_glued);
        host = &h->graph;
        sides = horoball_sides(*h);
      }
      TriangleScan scan;
      std::ostringstream os;
      if (sample > 0) {
        Rng rng(seed);
        std::vector<std::array<Vertex, 3>> triples;
        for (size_t i = 0; i < sample; ++i)
          triples.push_back({static_cast<Vertex>(rng.below(host->vertex_count())),
                             static_cast<Vertex>(rng.below(host->vertex_count())),
                             static_cast<Vertex>(rng.below(host->vertex_count()))});
        scan = min_diameter_triangles(*host, sides, triples);
        os << "sample=" << sample << " seed=" << seed << "\n";
      } else {
        scan = min_diameter_triangles_all(*host, sides);
      }
      Rat b = parse_rat(bound);
      os << "max_min_diameter " << format_rat(scan.max_min_diameter) << " bound "
         << format_rat(b) << " triples " << scan.triples_scanned << "\n";
      os << "witness " << host->ids[scan.witness[0]] << " " << host->ids[scan.witness[1]] << " "
         << host->ids[scan.witness[2]] << "\n";
      bool okay = scan.max_min_diameter <= b;
      os << (okay ? "certified" : "violated") << "\n";
      write_out(output, os.str());
      return okay ? kExitOk : kExitViolation;
    }

    if (c_convex->parsed()) {
      std::optional<TreeOfSpaces> z;
      std::optional<Space> s;
      std::optional<Bicombing> bic;
      if (tree_mode) {
        z = build_tree_of_spaces_file(input);
        bic = tree_bicombing(*z);
      } else {
        s = load_space_file(input);
        bic = space_bicombing(*s);
      }
      const Space& host = bic->host();
      std::vector<Quadruple> quads = sample > 0 ? sample_quadruples(host, sample, seed)
                                                : all_quadruples(host);
      std::ostringstream os;
      if (sample > 0) os << "sample=" << sample << " seed=" << seed << "\n";
      std::optional<Rat> slack;
      if (no_slack) slack = Rat(0);
      if (fit) {
        ConvexityParams p = fit_constants(*bic, quads, default_c_grid(), {}, slack);
        os << "fitted E=" << format_rat(p.E) << " C=" << format_rat(p.C) << "\n";
        write_out(output, os.str());
        return kExitOk;
      }
      ConvexityParams p{parse_rat(cf.E), parse_rat(cf.C)};
      ConvexityReport rep = check_convexity(*bic, p, quads, default_c_grid(), slack);
      os << render_convexity_report(host, rep);
      write_out(output, os.str());
      return rep.ok() ? kExitOk : kExitViolation;
    }

    if (c_gromov->parsed()) {
      std::optional<TreeOfSpaces> z;
      std::optional<Space> s;
      std::optional<Bicombing> bic;
      if (tree_mode) {
        z = build_tree_of_spaces_file(input);
        bic = tree_bicombing(*z);
      } else {
        s = load_space_file(input);
        bic = space_bicombing(*s);
      }
      const Space& host = bic->host();
      GromovConstants g = cf.derive();
      Rat p = gromov_product(*bic, g, host.require(e_id), host.require(x_id), host.require(y_id));
      std::ostringstream os;
      os << "k1=" << format_rat(g.k1) << " D=" << format_rat(g.D) << " D1=" << format_rat(g.D1)
         << " D2=" << format_rat(g.D2) << "\n";
      os << "product " << format_rat(p) << "\n";
      write_out(output, os.str());
      return kExitOk;
    }

    if (c_assemble->parsed()) {
      TreeOfSpaces z = build_tree_of_spaces_file(input);
      if (format == "text") {
        std::ostringstream os;
        os << "ok name=" << z.name << " components=" << z.components.size()
           << " cuts=" << z.cuts.size() << " interior_L=" << z.linterior.size()
           << " assembled_vertices=" << z.assembled.vertex_count() << "\n";
        for (const auto& c : z.components) os << "  component " << c.name << "\n";
        write_out(output, os.str());
      } else {
        write_out(output, emit_space(z.assembled, format, tree_annotations(z)));
      }
      return kExitOk;
    }

    if (c_free->parsed()) {
      Space X = load_space_file(x_input);
      Space Y = load_space_file(y_input);
      std::optional<Rat> tr;
      if (!truncate_radius.empty()) tr = parse_rat(truncate_radius);
      TreeOfSpaces z = free_product(X, Y, word_depth, tr);
      if (format == "dot" || format == "graphml")
        write_out(output, emit_space(z.assembled, format, tree_annotations(z)));
      else
        write_out(output, tree_to_json(z) + "\n");
      return kExitOk;
    }

    if (c_augment->parsed()) {
      TreeOfSpaces z = build_tree_of_spaces_file(input);
      int lvl = augment_level < 0 ? 0 : augment_level;
      AugmentedSpace a = augment(z, lvl, depth_max);
      if (format == "dot" || format == "graphml")
        write_out(output, emit_space(a.tree.assembled, format, tree_annotations(a.tree)));
      else
        write_out(output, tree_to_json(a.tree) + "\n");
      return kExitOk;
    }

    if (c_boundary->parsed()) {
      std::optional<TreeOfSpaces> z;
      std::optional<AugmentedSpace> aug;
      std::optional<Space> s;
      std::optional<Bicombing> bic;
      if (tree_mode) {
        z = build_tree_of_spaces_file(input);
        if (augment_level >= 0) {
          aug = augment(*z, augment_level, depth_max);
          bic = augmented_bicombing(*aug);
        } else {
          bic = tree_bicombing(*z);
        }
      } else {
        s = load_space_file(input);
        bic = space_bicombing(*s);
      }
      const Space& host = bic->host();
      Vertex e = aug ? aug->tree.basepoint() : (z ? z->basepoint() : host.basepoint);
      Rat R = radius.empty() ? host.unscale(eccentricity_scaled(host, e)) - 1 : parse_rat(radius);
      GromovConstants g = cf.derive();
      BoundaryApprox bd = build_boundary(*bic, e, R, g);
      int top = n_max >= 0 ? n_max : static_cast<int>(to_int64(rat_floor(bd.R)));
      PartitionTree pt = partition_tree(bd, top);
      if (format == "csv") {
        write_out(output, products_to_csv(bd));
        return kExitOk;
      }
      if (format == "newick") {
        write_out(output, partition_to_newick(bd, pt) + "\n");
        return kExitOk;
      }
      std::ostringstream os;
      os << "rays=" << bd.rays.size() << " R=" << format_rat(bd.R) << " D1=" << format_rat(g.D1)
         << " n_max=" << top << "\n";
      // finite quasi-ultrametric on the products matrix, slack 1
      size_t violations = 0;
      for (size_t i = 0; i < bd.rays.size(); ++i)
        for (size_t j = 0; j < bd.rays.size(); ++j)
          for (size_t k2 = 0; k2 < bd.rays.size(); ++k2)
            if (bd.products[i][k2] <
                std::min(bd.products[i][j], bd.products[j][k2]) / g.D2 - 1)
              ++violations;
      os << "quasi_ultrametric_violations=" << violations << "\n";
      os << partition_to_text(bd, pt);
      auto cert = zero_dim_certificate(pt);
      os << cert.render();
      if (aug && aug->level == 0) {
        IsolationParams ip;
        ip.n_max = top;
        ip.bounded_radius = parse_rat(bounded_radius);
        IsolationReport rep = isolated_centers(*aug, bd, pt, ip);
        os << rep.render(aug->tree);
      }
      write_out(output, os.str());
      return violations == 0 ? kExitOk : kExitViolation;
    }

    if (c_retract->parsed()) {
      TreeOfSpaces z = build_tree_of_spaces_file(input);
      Bicombing bic = tree_bicombing(z);
      Vertex e = z.basepoint();
      GromovConstants g = cf.derive();
      Rat R = radius.empty()
                  ? z.assembled.unscale(eccentricity_scaled(z.assembled, e)) - 1
                  : parse_rat(radius);
      int k = z.component_index(component);
      BoundaryApprox bz = build_boundary(bic, e, R, g);
      const Space& comp = z.components[k].space;
      Vertex lb = component_local_base(z, k);
      Rat Rk = comp_radius.empty()
                   ? comp.unscale(eccentricity_scaled(comp, lb)) - 1
                   : parse_rat(comp_radius);
      BoundaryApprox bk = component_boundary(z, k, Rk, g);
      int top = n_max >= 0 ? n_max : static_cast<int>(to_int64(rat_floor(bk.R)));
      PartitionTree ptk = partition_tree(bk, top);
      Retraction ret = retract_component(z, k, bz, bk, ptk, top);
      write_out(output, ret.render(bz, bk));
      return kExitOk;
    }

    if (c_certify->parsed()) {
      std::optional<TreeOfSpaces> z;
      std::optional<Space> s;
      std::optional<Bicombing> bic;
      if (tree_mode) {
        z = build_tree_of_spaces_file(input);
        bic = tree_bicombing(*z);
      } else {
        s = load_space_file(input);
        bic = space_bicombing(*s);
      }
      const Space& host = bic->host();
      std::ostringstream os;
      bool pass = true;
      os << "certify " << host.name << (sample ? " sample=" + std::to_string(sample) : "")
         << (sample ? " seed=" + std::to_string(seed) : "") << "\n";

      std::vector<Quadruple> quads = sample > 0 ? sample_quadruples(host, sample, seed)
                                                : all_quadruples(host);
      ConvexityParams fitted = fit_constants(*bic, quads, default_c_grid());
      os << "fit: E=" << format_rat(fitted.E) << " C=" << format_rat(fitted.C) << "\n";
      ConvexityReport conv = check_convexity(*bic, fitted, quads, default_c_grid());
      os << "convexity: " << (conv.ok() ? "pass" : "FAIL") << " (" << conv.violations.size()
         << " violations / " << conv.tuples_checked << " tuples)\n";
      pass = pass && conv.ok();

      GromovConstants g = derive_constants(Rat(1), Rat(0), fitted.E, fitted.C);
      std::vector<std::array<Vertex, 3>> triples =
          sample > 0 ? sample_triples(host, sample, seed + 1) : all_triples(host);
      TripleReport qum = check_quasi_ultrametric(*bic, g, triples, host.basepoint);
      os << "quasi_ultrametric: " << (qum.ok() ? "pass" : "FAIL") << " ("
         << qum.violations.size() << " violations / " << qum.tuples_checked << " tuples)\n";
      pass = pass && qum.ok();

      std::vector<std::array<Vertex, 3>> pairs;
      for (const auto& t : triples)
        if (t[1] != t[2]) pairs.push_back(t);
      if (!pairs.empty()) {
        TripleReport low = check_gprod_lower_bound(*bic, g, pairs);
        os << "gprod_lower_bound: " << (low.ok() ? "pass" : "FAIL") << " ("
           << low.violations.size() << " violations / " << low.tuples_checked << " tuples)\n";
        pass = pass && low.ok();
      }

      if (all && !tree_mode) {
        TriangleScan scan = min_diameter_triangles_all(host, space_sides(host));
        Rat b = parse_rat(bound);
        bool okay = scan.max_min_diameter <= b;
        os << "min_diameter: " << format_rat(scan.max_min_diameter) << " bound "
           << format_rat(b) << " " << (okay ? "pass" : "FAIL") << "\n";
        pass = pass && okay;
      }
      os << (pass ? "ALL PASS" : "VIOLATIONS FOUND") << "\n";
      write_out(output, os.str());
      return pass ? kExitOk : kExitViolation;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << " (input: " << (input.empty() ? x_input : input)
              << ")\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
