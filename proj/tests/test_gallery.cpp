#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "minksplit/fibers.hpp"
#include "minksplit/gallery.hpp"
#include "minksplit/geometry.hpp"
#include "minksplit/linmaps.hpp"

using namespace minksplit;
using geometry::ConvexBody;

namespace {

constexpr double kTau = 2.0 * std::numbers::pi;

Point pt(std::initializer_list<double> v) {
  Point x(v.size());
  int i = 0;
  for (double e : v) x(i++) = e;
  return x;
}

}  // namespace

TEST_CASE("helix hull keeps both lifts of the seam point") {
  const auto body = gallery::spiral_body(4);
  REQUIRE(body.vertex_count() == 5);
  CHECK((body.vertex(0) - pt({1.0, 0.0, 0.0})).norm() <= 1e-15);
  CHECK((body.vertex(4) - pt({1.0, 0.0, kTau})).norm() <= 1e-15);
  for (int k = 0; k <= 4; ++k)
    CHECK(body.vertex(k)(2) == doctest::Approx(kTau * k / 4.0));
}

TEST_CASE("every helix sample is extreme") {
  const int n = 720;
  const auto body = gallery::spiral_body(n);
  REQUIRE(body.vertex_count() == n + 1);
  const Eigen::MatrixXd& V = body.vertices();
  // separating directions: the outward horizontal normal for interior
  // samples, and a slight z-tilt to tell the two seam lifts apart
  for (int k = 0; k <= n; ++k) {
    Point d(3);
    if (k == 0)
      d << 1.0, 0.0, -1e-3;
    else if (k == n)
      d << 1.0, 0.0, 1e-3;
    else {
      const double t = kTau * k / n;
      d << std::cos(t), std::sin(t), 0.0;
    }
    const double at_k = d.dot(V.col(k));
    double best_other = -1e300;
    for (int j = 0; j <= n; ++j)
      if (j != k) best_other = std::max(best_other, d.dot(V.col(j)));
    CHECK(at_k - best_other >= 1e-7);
  }
}

TEST_CASE("shadow boundary radius matches the inscribed polygon") {
  CHECK(gallery::shadow_boundary_radius(6, 0.0) == doctest::Approx(1.0));
  CHECK(gallery::shadow_boundary_radius(6, kTau / 6.0) == doctest::Approx(1.0));
  CHECK(gallery::shadow_boundary_radius(6, kTau / 12.0) ==
        doctest::Approx(std::cos(std::numbers::pi / 6.0)));
  // periodic in one sector, and never outside [cos(pi/n), 1]
  for (int s = 0; s < 40; ++s) {
    const double a = 0.17 + 0.15 * s;
    const double r = gallery::shadow_boundary_radius(720, a);
    CHECK(r == doctest::Approx(gallery::shadow_boundary_radius(
                   720, a + kTau / 720.0)));
    CHECK(r <= 1.0 + 1e-12);
    CHECK(r >= std::cos(std::numbers::pi / 720.0) - 1e-12);
  }
  CHECK_THROWS_AS(gallery::shadow_boundary_radius(2, 0.0),
                  std::invalid_argument);
}

TEST_CASE("planar shadow map drops the third coordinate") {
  const auto L = gallery::planar_shadow_map();
  CHECK((L.apply(pt({3.0, 4.0, 7.0})) - pt({3.0, 4.0})).norm() <= 1e-15);
}

TEST_CASE("raised-point body has one long fiber and singletons elsewhere") {
  const auto body = gallery::remark2_body(16);
  const auto L = gallery::planar_shadow_map();
  const fibers::FiberSpec over_seam{ConvexBody(body), L, pt({1.0, 0.0})};
  const double d_seam = fibers::fiber_diameter(over_seam, 64, 3);
  CHECK(d_seam <= 1.0 + 1e-9);
  CHECK(d_seam >= 0.9);  // the segment up to the raised point
  const fibers::FiberSpec opposite{ConvexBody(body), L, pt({-1.0, 0.0})};
  CHECK(fibers::fiber_diameter(opposite, 16, 3) <= 1e-8);
}

TEST_CASE("schauder body vertex count and central symmetry") {
  for (int N : {2, 5, 10}) {
    const auto body = gallery::schauder_body(N);
    CHECK(body.vertex_count() == 2 * N - 2);
    Point e1 = Point::Zero(N);
    e1(0) = 1.0;
    // the reflection through e1 permutes the vertex set
    for (int i = 0; i < body.vertex_count(); ++i) {
      const Point mirrored = 2.0 * e1 - body.vertex(i);
      double best = 1e300;
      for (int j = 0; j < body.vertex_count(); ++j)
        best = std::min(best, (mirrored - body.vertex(j)).norm());
      CHECK(best <= 1e-12);
      CHECK((body.vertex(i) - e1).norm() >= 1e-3);  // e1 itself is not a vertex
    }
    CHECK(geometry::is_relative_interior_point(ConvexBody(body), e1));
  }
  CHECK_THROWS_AS(gallery::schauder_body(1), std::invalid_argument);
}

TEST_CASE("schauder map deletes the first coordinate") {
  const auto L = gallery::schauder_map(3);
  CHECK((L.apply(pt({1.0, 2.0, 3.0})) - pt({2.0, 3.0})).norm() <= 1e-15);
}

TEST_CASE("distance floor formula and its guards") {
  CHECK(gallery::lemma25_bound(3.0, 2, 1.0, 1.0) == doctest::Approx(0.5));
  CHECK(gallery::lemma25_bound(0.3, 10, 1.0, 1.0) == doctest::Approx(0.01));
  // scales linearly in lambda, decays with n once the n-term binds
  CHECK(gallery::lemma25_bound(1.0, 4, 1.0, 1.0) ==
        doctest::Approx(2.0 * gallery::lemma25_bound(0.5, 4, 1.0, 1.0)));
  CHECK(gallery::lemma25_bound(1.0, 8, 1.0, 1.0) <
        gallery::lemma25_bound(1.0, 4, 1.0, 1.0));
  CHECK_THROWS_AS(gallery::lemma25_bound(0.0, 4, 1.0, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(gallery::lemma25_bound(1.0, 1, 1.0, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(gallery::lemma25_bound(1.0, 4, 0.0, 1.0),
                  std::invalid_argument);
}

TEST_CASE("probe sees openness at an interior point") {
  Eigen::MatrixXd V(2, 4);
  V << -1.0, 1.0, 1.0, -1.0,  //
      -1.0, -1.0, 1.0, 1.0;
  const ConvexBody square{geometry::Polytope(V)};
  const linmaps::LinearMap ident(Eigen::MatrixXd::Identity(2, 2));
  std::vector<Point> targets;
  for (int j = 0; j < 8; ++j) targets.push_back(pt({0.1 / (1 << j), 0.0}));
  const auto rep =
      gallery::openness_probe(square, ident, pt({0.0, 0.0}), targets, 1e-8,
                              0.2);
  CHECK(rep.verdict == ProbeReport::Verdict::OpenAt);
  REQUIRE(rep.targets.size() == 8);
  for (int j = 0; j < 8; ++j) {
    CHECK(rep.targets[j].feasible);
    CHECK(rep.targets[j].dist == doctest::Approx(0.1 / (1 << j)));
  }
}

TEST_CASE("probe flags the helix seam as not open") {
  const int n = 128;
  const ConvexBody body{gallery::spiral_body(n)};
  const auto L = gallery::planar_shadow_map();
  std::vector<Point> targets;
  for (int m = 1; m <= 10; ++m) {
    const double th = kTau - 1.0 / m;
    const double r = gallery::shadow_boundary_radius(n, th);
    targets.push_back(pt({r * std::cos(th), r * std::sin(th)}));
  }
  const auto rep = gallery::openness_probe(body, L, pt({1.0, 0.0, 0.0}),
                                           targets, 1e-8, 1.5);
  CHECK(rep.verdict == ProbeReport::Verdict::NotOpenAt);
  CHECK(rep.epsilon >= 5.0);
}

TEST_CASE("selection walk across the seam gap") {
  std::vector<Point> sel;
  const auto rep = gallery::spiral_jump_experiment(128, 0.05, &sel);
  REQUIRE(sel.size() == 129);
  REQUIRE(rep.jumps.size() == 129);  // open path plus the closing edge
  CHECK(std::abs(sel.front()(2)) <= 0.2);
  CHECK(sel.back()(2) >= 6.0);
  CHECK(rep.max_jump >= 6.0);
  CHECK(rep.max_jump == doctest::Approx(rep.jumps.back()));
}

TEST_CASE("selection walk on the raised-point body stays continuous") {
  const auto rep = gallery::remark2_jump_experiment(64, 512);
  CHECK(rep.max_jump <= 0.1);
}
