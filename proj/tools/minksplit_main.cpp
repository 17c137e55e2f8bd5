#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "minksplit/errors.hpp"
#include "minksplit/gallery.hpp"
#include "minksplit/geometry.hpp"
#include "minksplit/io.hpp"
#include "minksplit/linmaps.hpp"
#include "minksplit/splitting.hpp"

namespace {

using minksplit::Point;
namespace geometry = minksplit::geometry;
namespace linmaps = minksplit::linmaps;
namespace splitting = minksplit::splitting;
namespace gallery = minksplit::gallery;
namespace io = minksplit::io;

Point parse_point(const std::string& s) {
  std::string cleaned = s;
  for (char& c : cleaned)
    if (c == '(' || c == ')') c = ' ';
  const auto pts = io::points_from_csv(cleaned);
  if (pts.size() != 1)
    throw std::invalid_argument("expected one comma-separated point: " + s);
  return pts[0];
}

std::string format_point(const Point& v) {
  std::string out = "(";
  char buf[40];
  for (int i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.12g", v(i));
    if (i) out += ", ";
    out += buf;
  }
  return out + ")";
}

geometry::ConvexBody load_body(const std::string& path) {
  return io::body_from_json(nlohmann::json::parse(io::read_file(path)));
}

double tolerance_from_env() {
  const char* e = std::getenv("MINKSPLIT_TOL");
  if (!e) return 1e-8;
  try {
    size_t pos = 0;
    const double v = std::stod(e, &pos);
    if (pos != std::string(e).size() || v <= 0.0)
      throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw std::invalid_argument("MINKSPLIT_TOL: bad tolerance '" +
                                std::string(e) + "'");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"convex splitting and selection diagnostics"};
  app.require_subcommand(1);

  unsigned seed = 0;
  app.add_option("--seed", seed, "seed for randomized directions")
      ->capture_default_str();

  // validate
  auto* c_validate = app.add_subcommand("validate", "check a body file");
  std::string validate_file;
  c_validate->add_option("file", validate_file, "body JSON")->required();

  // sum
  auto* c_sum = app.add_subcommand("sum", "Minkowski sum of two bodies");
  std::string sum_a, sum_b, sum_out;
  int sum_kdirs = 0;
  c_sum->add_option("a", sum_a, "first body JSON")->required();
  c_sum->add_option("b", sum_b, "second body JSON")->required();
  c_sum->add_option("-o,--out", sum_out, "output body JSON")->required();
  c_sum->add_option("--k-dirs", sum_kdirs,
                    "support directions for non-polytope sums");

  // split
  auto* c_split = app.add_subcommand("split", "split one point of the image");
  std::string split_a, split_b, split_map, split_point, split_anchor;
  bool split_sum = false;
  c_split->add_option("--a", split_a, "body A JSON")->required();
  c_split->add_option("--b", split_b, "body B JSON")->required();
  c_split->add_option("--map", split_map, "product map JSON");
  c_split->add_flag("--sum", split_sum, "use the sum map a + b");
  c_split->add_option("--point", split_point, "target point, e.g. \"2,0\"")
      ->required();
  c_split->add_option("--anchor", split_anchor,
                      "anchor in the product space (default origin)");

  // split-map
  auto* c_smap = app.add_subcommand("split-map", "split a sampled map");
  std::string smap_a, smap_b, smap_map, smap_samples, smap_out, smap_anchor;
  bool smap_sum = false;
  c_smap->add_option("--a", smap_a, "body A JSON")->required();
  c_smap->add_option("--b", smap_b, "body B JSON")->required();
  c_smap->add_option("--map", smap_map, "product map JSON");
  c_smap->add_flag("--sum", smap_sum, "use the sum map a + b");
  c_smap->add_option("--samples", smap_samples, "sampled map CSV")->required();
  c_smap->add_option("-o,--out", smap_out, "output splits CSV")->required();
  c_smap->add_option("--anchor", smap_anchor, "anchor in the product space");

  // probe
  auto* c_probe = app.add_subcommand("probe", "openness probe at a point");
  std::string probe_body, probe_map, probe_at, probe_targets, probe_out;
  double probe_radius = 1e-3;
  c_probe->add_option("--body", probe_body, "body JSON")->required();
  c_probe->add_option("--map", probe_map, "linear map JSON")->required();
  c_probe->add_option("--at", probe_at, "base point, e.g. \"1,0,0\"")
      ->required();
  c_probe->add_option("--targets", probe_targets, "targets CSV")->required();
  c_probe->add_option("-o,--out", probe_out, "output probe CSV")->required();
  c_probe->add_option("--radius", probe_radius,
                      "convergence radius for the verdict")
      ->capture_default_str();

  // gallery
  auto* c_gal = app.add_subcommand("gallery", "built-in bodies & experiments");
  std::string gal_which, gal_out, gal_svg, gal_body_out;
  int gal_n = 720, gal_dim = 10, gal_path = 7200;
  double gal_delta = 0.01;
  c_gal->add_option("which", gal_which, "spiral | remark2 | schauder")
      ->required()
      ->check(CLI::IsMember({"spiral", "remark2", "schauder"}));
  c_gal->add_option("--n", gal_n, "boundary sample count")
      ->capture_default_str();
  c_gal->add_option("--dim", gal_dim, "dimension (schauder)")
      ->capture_default_str();
  c_gal->add_option("--delta", gal_delta, "seam gap angle (spiral)")
      ->capture_default_str();
  c_gal->add_option("--path-samples", gal_path, "path samples (remark2)")
      ->capture_default_str();
  c_gal->add_option("-o,--out", gal_out, "output CSV (spiral/remark2) or body JSON (schauder)")
      ->required();
  c_gal->add_option("--svg", gal_svg, "optional SVG polyline of the selection height");
  c_gal->add_option("--body-out", gal_body_out, "also write the body JSON here");

  // transversal
  auto* c_trans = app.add_subcommand("transversal",
                                     "boundary-segment transversality check");
  std::string trans_body, trans_map;
  c_trans->add_option("--body", trans_body, "polytope body JSON")->required();
  c_trans->add_option("--map", trans_map, "linear map JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    const double tol = tolerance_from_env();

    if (*c_validate) {
      const auto body = load_body(validate_file);
      const auto issues = geometry::validate(body);
      if (!issues.empty()) {
        for (const auto& s : issues) std::cerr << "invalid: " << s << "\n";
        return 1;
      }
      std::cout << "ok\n";
      return 0;
    }

    if (*c_sum) {
      const auto A = load_body(sum_a);
      const auto B = load_body(sum_b);
      double gap = 0.0;
      const auto S = geometry::minkowski_sum(A, B, sum_kdirs, seed, &gap);
      io::write_file(sum_out, io::body_to_json(S).dump(2) + "\n");
      if (!(A.is_polytope() && B.is_polytope()))
        std::cout << "hausdorff gap <= " << gap << "\n";
      return 0;
    }

    if (*c_split || *c_smap) {
      const bool one = c_split->parsed();
      const auto A = load_body(one ? split_a : smap_a);
      const auto B = load_body(one ? split_b : smap_b);
      const std::string map_file = one ? split_map : smap_map;
      const bool use_sum = one ? split_sum : smap_sum;
      if (use_sum == !map_file.empty())
        throw std::invalid_argument("pass exactly one of --map and --sum");

      auto make_map = [&](int d) {
        return use_sum ? linmaps::make_sum_map(d)
                       : io::product_map_from_json(
                             nlohmann::json::parse(io::read_file(map_file)));
      };
      const std::string anchor_str = one ? split_anchor : smap_anchor;
      Point anchor = Point::Zero(A.dim() + B.dim());
      if (!anchor_str.empty()) anchor = parse_point(anchor_str);

      if (one) {
        const Point c = parse_point(split_point);
        const auto L = make_map(static_cast<int>(c.size()));
        const auto r = splitting::split(A, B, L, c, {anchor}, tol);
        if (!r) {
          std::cerr << "error: point is outside the image (empty fiber)\n";
          return 2;
        }
        std::cout << "a = " << format_point(r->a) << "\n"
                  << "b = " << format_point(r->b) << "\n"
                  << "residual = " << r->residual << "\n"
                  << "body_violation = " << r->body_violation << "\n";
        return 0;
      }

      const auto f = io::samples_from_csv(io::read_file(smap_samples));
      if (f.values.empty())
        throw std::invalid_argument("split-map: no samples");
      const auto L = make_map(static_cast<int>(f.values[0].size()));
      const auto splits = splitting::split_sampled_map(A, B, L, f, {anchor}, tol);
      io::write_file(smap_out, io::splits_to_csv(f.sample_ids, splits));
      if (splits.size() >= 2 && !f.adjacency.empty()) {
        const auto rep = splitting::continuity_report(splits, f.adjacency);
        std::cout << "max jump: " << rep.max_jump << "\n";
      }
      return 0;
    }

    if (*c_probe) {
      const auto C = load_body(probe_body);
      const auto L = io::linear_map_from_json(
          nlohmann::json::parse(io::read_file(probe_map)));
      const Point z = parse_point(probe_at);
      const auto targets = io::points_from_csv(io::read_file(probe_targets));
      const auto rep =
          gallery::openness_probe(C, L, z, targets, tol, probe_radius);
      io::write_file(probe_out, io::probe_to_csv(rep));
      if (rep.verdict == minksplit::ProbeReport::Verdict::OpenAt)
        std::cout << "OpenAt\n";
      else
        std::cout << "NotOpenAt " << rep.epsilon << "\n";
      return 0;
    }

    if (*c_gal) {
      if (gal_which == "schauder") {
        const auto body = gallery::schauder_body(gal_dim);
        io::write_file(gal_out,
                       io::body_to_json(geometry::ConvexBody(body)).dump(2) +
                           "\n");
        std::cout << "vertices: " << body.vertex_count() << "\n";
        if (!gal_body_out.empty())
          io::write_file(gal_body_out,
                         io::body_to_json(geometry::ConvexBody(body)).dump(2) +
                             "\n");
        return 0;
      }
      std::vector<Point> sel;
      const auto rep =
          gal_which == "spiral"
              ? gallery::spiral_jump_experiment(gal_n, gal_delta, &sel, tol)
              : gallery::remark2_jump_experiment(gal_n, gal_path, &sel, tol);
      io::write_file(gal_out, io::selections_to_csv(sel));
      std::cout << "max jump: " << rep.max_jump << "\n"
                << "first selection: " << format_point(sel.front()) << "\n"
                << "last selection: " << format_point(sel.back()) << "\n";
      if (!gal_svg.empty()) {
        std::vector<double> xs, ys;
        for (size_t i = 0; i < sel.size(); ++i) {
          xs.push_back(static_cast<double>(i));
          ys.push_back(sel[i](2));
        }
        io::write_file(gal_svg, io::svg_polyline(xs, ys));
      }
      if (!gal_body_out.empty()) {
        const auto body = gal_which == "spiral"
                              ? gallery::spiral_body(gal_n)
                              : gallery::remark2_body(gal_n);
        io::write_file(gal_body_out,
                       io::body_to_json(geometry::ConvexBody(body)).dump(2) +
                           "\n");
      }
      return 0;
    }

    if (*c_trans) {
      const auto C = load_body(trans_body);
      if (!C.is_polytope())
        throw std::invalid_argument("transversal: polytope body required");
      const auto L = io::linear_map_from_json(
          nlohmann::json::parse(io::read_file(trans_map)));
      const auto rep = linmaps::transversality_check(C.polytope(), L);
      if (rep.pass) {
        std::cout << "Pass\n";
      } else {
        std::cout << "Fail facet=" << rep.facet_index
                  << " direction=" << format_point(rep.direction) << "\n";
      }
      return 0;
    }
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const minksplit::InfeasibleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const minksplit::SolverError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
