#include "minksplit/gallery.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "minksplit/errors.hpp"
#include "minksplit/fibers.hpp"

namespace minksplit::gallery {

namespace {

constexpr double kTau = 2.0 * std::numbers::pi;

// Min-norm-to-origin selections over a list of planar targets.
std::vector<Point> selections_along(const geometry::Polytope& body,
                                    const std::vector<Point>& targets,
                                    double tol) {
  fibers::FiberSpec spec{geometry::ConvexBody(body), planar_shadow_map(),
                         Point::Zero(2)};
  const fibers::SelectionRule rule{Point::Zero(3)};
  std::vector<Point> out;
  out.reserve(targets.size());
  for (const auto& y : targets) {
    spec.target = y;
    auto z = fibers::fiber_point(spec, rule, tol);
    if (!z)
      throw InfeasibleError("jump experiment: empty fiber along the path");
    out.push_back(std::move(*z));
  }
  return out;
}

// Jumps along consecutive samples plus the closing edge back to the start.
ContinuityReport closed_path_report(const std::vector<Point>& sel) {
  ContinuityReport rep;
  rep.jumps.reserve(sel.size());
  for (size_t j = 0; j + 1 < sel.size(); ++j)
    rep.jumps.push_back((sel[j + 1] - sel[j]).norm());
  rep.jumps.push_back((sel.front() - sel.back()).norm());
  rep.max_jump = *std::max_element(rep.jumps.begin(), rep.jumps.end());
  return rep;
}

}  // namespace

geometry::Polytope spiral_body(int n) {
  if (n < 4) throw std::invalid_argument("spiral body: need n >= 4");
  Eigen::MatrixXd V(3, n + 1);
  for (int k = 1; k < n; ++k) {
    const double t = kTau * k / n;
    V.col(k) << std::cos(t), std::sin(t), t;
  }
  // Pin the seam exactly: both lift endpoints sit straight above (1, 0).
  V.col(0) << 1.0, 0.0, 0.0;
  V.col(n) << 1.0, 0.0, kTau;
  return geometry::Polytope(std::move(V));
}

geometry::Polytope remark2_body(int n) {
  if (n < 8) throw std::invalid_argument("remark2 body: need n >= 8");
  Eigen::MatrixXd V(3, n + 1);
  for (int k = 1; k < n; ++k) {
    const double t = kTau * k / n;
    V.col(k) << std::cos(t), std::sin(t), 0.0;
  }
  V.col(0) << 1.0, 0.0, 0.0;
  V.col(n) << 1.0, 0.0, 1.0;
  return geometry::Polytope(std::move(V));
}

geometry::Polytope schauder_body(int N) {
  if (N < 2 || N > 64)
    throw std::invalid_argument("schauder body: need 2 <= N <= 64");
  std::vector<Point> pts;
  pts.reserve(2 * N);
  for (int m = 1; m <= N; ++m) {
    Point v = Point::Zero(N);
    v(m - 1) += 1.0 / m;
    pts.push_back(v);
    Point w = Point::Zero(N);
    w(0) = 2.0;
    w(m - 1) -= 1.0 / m;
    pts.push_back(w);
  }
  // For m = 1 both generators coincide with e_1, which is also the midpoint
  // of every opposite pair; the hull keeps the 2(N-1) genuine corners.
  return geometry::convex_hull(pts);
}

linmaps::LinearMap planar_shadow_map() {
  Eigen::MatrixXd M(2, 3);
  M << 1.0, 0.0, 0.0,
       0.0, 1.0, 0.0;
  return linmaps::LinearMap(M);
}

linmaps::LinearMap schauder_map(int N) {
  if (N < 2) throw std::invalid_argument("schauder map: need N >= 2");
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(N - 1, N);
  for (int i = 0; i + 1 < N; ++i) M(i, i + 1) = 1.0;
  return linmaps::LinearMap(M);
}

double lemma25_bound(double lambda, int n, double norm_P1, double norm_Pn) {
  if (lambda <= 0.0)
    throw std::invalid_argument("lemma bound: lambda must be positive");
  if (n <= 1) throw std::invalid_argument("lemma bound: need n > 1");
  if (norm_P1 <= 0.0 || norm_Pn <= 0.0)
    throw std::invalid_argument("lemma bound: norms must be positive");
  return std::min(lambda / (3.0 * n * norm_Pn), lambda / (3.0 * norm_P1));
}

double shadow_boundary_radius(int n, double angle) {
  if (n < 3)
    throw std::invalid_argument("shadow radius: need at least 3 vertices");
  const double sector = kTau / n;
  double a = std::fmod(angle, kTau);
  if (a < 0.0) a += kTau;
  const double within = std::fmod(a, sector);
  return std::cos(0.5 * sector) / std::cos(within - 0.5 * sector);
}

ProbeReport openness_probe(const geometry::ConvexBody& C,
                           const linmaps::LinearMap& L, const Point& z,
                           const std::vector<Point>& targets, double tol,
                           double convergence_radius) {
  if (tol <= 0.0 || convergence_radius <= 0.0)
    throw std::invalid_argument("openness probe: tolerances must be > 0");
  if (z.size() != C.dim() || L.domain_dim() != C.dim())
    throw std::invalid_argument("openness probe: dimension mismatch");
  if (!geometry::membership(C, z,
                            std::max(1e-6, 10.0 * tol) * (1.0 + z.norm())))
    throw std::invalid_argument("openness probe: base point is not in the body");

  ProbeReport rep;
  rep.base_point = z;
  const Point image = L.apply(z);
  fibers::FiberSpec spec{C, L, image};

  struct Sample {
    double gap;
    double dist;
  };
  std::vector<Sample> qual;  // feasible targets close enough to the image
  for (const auto& y : targets) {
    ProbeTarget t;
    t.y = y;
    spec.target = y;
    try {
      t.dist = fibers::dist_to_fiber(z, spec, tol);
      const double gap = (y - image).norm();
      if (gap <= convergence_radius) qual.push_back({gap, t.dist});
    } catch (const InfeasibleError&) {
      t.feasible = false;
      t.dist = std::numeric_limits<double>::quiet_NaN();
    }
    rep.targets.push_back(std::move(t));
  }

  // Non-openness needs a converging family of targets whose fibers keep
  // their distance; anything short of that reads as open.
  if (qual.size() < 5) return rep;
  double eps = std::numeric_limits<double>::infinity();
  double d_all = 0.0;
  for (const auto& s : qual) {
    eps = std::min(eps, s.dist);
    d_all = std::max(d_all, s.dist);
  }
  if (eps < 10.0 * tol) return rep;
  std::sort(qual.begin(), qual.end(),
            [](const Sample& a, const Sample& b) { return a.gap < b.gap; });
  double d_near = 0.0;
  for (size_t i = 0; i < 3; ++i) d_near = std::max(d_near, qual[i].dist);
  if (d_near <= 0.5 * d_all) return rep;  // distances decay as targets close in

  rep.verdict = ProbeReport::Verdict::NotOpenAt;
  rep.epsilon = eps;
  return rep;
}

ContinuityReport spiral_jump_experiment(int n, double delta,
                                        std::vector<Point>* selections,
                                        double tol) {
  if (n < 100) throw std::invalid_argument("spiral experiment: need n >= 100");
  if (!(delta > 0.0 && delta < 0.5))
    throw std::invalid_argument("spiral experiment: need 0 < delta < 0.5");
  const geometry::Polytope body = spiral_body(n);
  std::vector<Point> targets;
  targets.reserve(n + 1);
  for (int j = 0; j <= n; ++j) {
    const double th = delta + (kTau - 2.0 * delta) * j / n;
    const double r = shadow_boundary_radius(n, th);
    Point y(2);
    y << r * std::cos(th), r * std::sin(th);
    targets.push_back(std::move(y));
  }
  const auto sel = selections_along(body, targets, tol);
  ContinuityReport rep = closed_path_report(sel);
  if (selections) *selections = sel;
  return rep;
}

ContinuityReport remark2_jump_experiment(int n_body, int n_path,
                                         std::vector<Point>* selections,
                                         double tol) {
  if (n_path < 3)
    throw std::invalid_argument("remark2 experiment: need n_path >= 3");
  const geometry::Polytope body = remark2_body(n_body);
  std::vector<Point> targets;
  targets.reserve(n_path);
  for (int k = 0; k < n_path; ++k) {
    const double th = kTau * k / n_path;
    const double r = shadow_boundary_radius(n_body, th);
    Point y(2);
    y << r * std::cos(th), r * std::sin(th);
    targets.push_back(std::move(y));
  }
  const auto sel = selections_along(body, targets, tol);
  ContinuityReport rep = closed_path_report(sel);
  if (selections) *selections = sel;
  return rep;
}

}  // namespace minksplit::gallery
