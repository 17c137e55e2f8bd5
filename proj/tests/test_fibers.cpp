#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>

#include "minksplit/errors.hpp"
#include "minksplit/fibers.hpp"
#include "minksplit/gallery.hpp"
#include "minksplit/geometry.hpp"
#include "minksplit/linmaps.hpp"
#include "oracles.hpp"

using namespace minksplit;
using fibers::FiberSpec;
using fibers::SelectionRule;
using geometry::ConvexBody;
using geometry::Ellipsoid;
using geometry::Polytope;

namespace {

constexpr double kTau = 2.0 * std::numbers::pi;

Point pt(std::initializer_list<double> v) {
  Point x(v.size());
  int i = 0;
  for (double e : v) x(i++) = e;
  return x;
}

ConvexBody unit_disk() {
  return ConvexBody(Ellipsoid(pt({0.0, 0.0}), Eigen::MatrixXd::Identity(2, 2)));
}

FiberSpec disk_pair_spec(const Point& target) {
  const auto L = linmaps::make_sum_map(2);
  return {ConvexBody::product({unit_disk(), unit_disk()}), L.combined(),
          target};
}

FiberSpec spiral_spec(int n, const Point& target) {
  return {ConvexBody(gallery::spiral_body(n)), gallery::planar_shadow_map(),
          target};
}

}  // namespace

TEST_CASE("decomposition of an extreme sum point is unique") {
  const auto z = fibers::fiber_point(disk_pair_spec(pt({2.0, 0.0})),
                                     {Point::Zero(4)});
  REQUIRE(z.has_value());
  CHECK((*z - pt({1.0, 0.0, 1.0, 0.0})).norm() <= 1e-6);
}

TEST_CASE("fiber over a target outside the image is empty") {
  CHECK_FALSE(
      fibers::fiber_point(disk_pair_spec(pt({5.0, 0.0})), {Point::Zero(4)})
          .has_value());
}

TEST_CASE("helix fiber away from the seam is the single lift") {
  const auto z =
      fibers::fiber_point(spiral_spec(720, pt({-1.0, 0.0})), {Point::Zero(3)});
  REQUIRE(z.has_value());
  CHECK((*z - pt({-1.0, 0.0, std::numbers::pi})).norm() <= 1e-6);
  // the same point wins from a far anchor: the fiber is a singleton
  const auto z2 = fibers::fiber_point(spiral_spec(720, pt({-1.0, 0.0})),
                                      {pt({0.0, 0.0, 9.0})});
  REQUIRE(z2.has_value());
  CHECK((*z - *z2).norm() <= 1e-6);
}

TEST_CASE("helix fiber over the seam is the full chord, picked by the anchor") {
  const FiberSpec spec = spiral_spec(720, pt({1.0, 0.0}));
  const auto bottom = fibers::fiber_point(spec, {Point::Zero(3)});
  REQUIRE(bottom.has_value());
  CHECK((*bottom - pt({1.0, 0.0, 0.0})).norm() <= 1e-6);
  const auto top = fibers::fiber_point(spec, {pt({0.0, 0.0, 7.0})});
  REQUIRE(top.has_value());
  CHECK((*top - pt({1.0, 0.0, kTau})).norm() <= 1e-6);
}

TEST_CASE("fiber diameters separate the seam from the rest") {
  CHECK(fibers::fiber_diameter(spiral_spec(720, pt({1.0, 0.0})), 64) >=
        kTau - 0.05);
  CHECK(fibers::fiber_diameter(spiral_spec(720, pt({-1.0, 0.0})), 64) <= 1e-6);
  // tangent singleton: probes that cannot settle must not inflate the bound
  CHECK(fibers::fiber_diameter(disk_pair_spec(pt({2.0, 0.0})), 4) <= 1e-6);
}

TEST_CASE("fiber_diameter rejects empty fibers") {
  CHECK_THROWS_AS(
      fibers::fiber_diameter(spiral_spec(64, pt({1.5, 0.0})), 8),
      InfeasibleError);
}

TEST_CASE("dist_to_fiber vanishes on the fiber and measures the seam gap") {
  const Point on = pt({1.0, 0.0, 1.0});  // on the seam chord
  CHECK(fibers::dist_to_fiber(on, spiral_spec(720, pt({1.0, 0.0}))) <= 1e-8);

  // singleton fiber close to the seam angle: the distance is the full lift
  const int n = 720, k = 719;
  const double t = kTau * k / n;
  const Point target = pt({std::cos(t), std::sin(t)});
  const double d =
      fibers::dist_to_fiber(pt({1.0, 0.0, 0.0}), spiral_spec(n, target));
  const double expected = (pt({1.0, 0.0, 0.0}) - pt({std::cos(t), std::sin(t), t})).norm();
  CHECK(std::abs(d - expected) <= 1e-6);
  CHECK(d >= 6.2);
}

TEST_CASE("truncation-body fibers over the scaled basis points are singletons") {
  for (int N : {5, 12}) {
    const ConvexBody K(gallery::schauder_body(N));
    const linmaps::LinearMap M = gallery::schauder_map(N);
    Point en = Point::Zero(N);
    en(N - 1) = 1.0 / N;
    const FiberSpec spec{K, M, M.apply(en)};
    CHECK(fibers::fiber_diameter(spec, 32) <= 1e-6);
    Point e1 = Point::Zero(N);
    e1(0) = 1.0;
    const double d = fibers::dist_to_fiber(e1, spec);
    CHECK(std::abs(d - std::sqrt(1.0 + 1.0 / double(N) / double(N))) <= 1e-6);
  }
}

TEST_CASE("selection from the symmetry center stays at the symmetry center") {
  const int N = 8;
  const ConvexBody K(gallery::schauder_body(N));
  const linmaps::LinearMap M = gallery::schauder_map(N);
  Point e1 = Point::Zero(N);
  e1(0) = 1.0;
  // the fiber over 0 is the axis segment through e1, symmetric about it
  const auto z = fibers::fiber_point({K, M, Point::Zero(N - 1)}, {e1});
  REQUIRE(z.has_value());
  CHECK((*z - e1).norm() <= 1e-8);
}

TEST_CASE("returned fiber points are feasible and anchor-optimal on random instances") {
  std::mt19937 rng(47);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> w01(0.0, 1.0);
  int solved = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const int d = 2 + trial % 3;
    const int nv = d + 3 + trial % 6;
    const int m = 1 + trial % d;
    Eigen::MatrixXd V(d, nv);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < nv; ++j) V(i, j) = u(rng);
    Eigen::MatrixXd A(m, d);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < d; ++j) A(i, j) = u(rng);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
    if (svd.singularValues().minCoeff() < 1e-3) continue;
    // target inside the image: the map of a random hull point
    Eigen::VectorXd lam(nv);
    for (int j = 0; j < nv; ++j) lam(j) = w01(rng) + 1e-3;
    lam /= lam.sum();
    const linmaps::LinearMap L(A);
    const Point y = L.apply(V * lam);
    Point anchor(d);
    for (int i = 0; i < d; ++i) anchor(i) = 2.0 * u(rng);

    const FiberSpec spec{ConvexBody(Polytope(V)), L, y};
    const auto z = fibers::fiber_point(spec, {anchor});
    REQUIRE(z.has_value());
    CHECK((L.apply(*z) - y).lpNorm<Eigen::Infinity>() <= 1e-8);
    CHECK((oracles::nearest_in_hull(V, *z) - *z).norm() <= 1e-7);

    const auto ref = oracles::fiber_nearest(V, A, y, anchor);
    REQUIRE(ref.has_value());
    CHECK(std::abs((*z - anchor).norm() - (*ref - anchor).norm()) <= 1e-6);
    ++solved;
  }
  CHECK(solved >= 30);
}

TEST_CASE("mixed polytope-ellipsoid products split through the general path") {
  Eigen::MatrixXd V(2, 4);
  V << 0.0, 1.0, 1.0, 0.0,  //
      0.0, 0.0, 1.0, 1.0;
  const ConvexBody AB =
      ConvexBody::product({unit_disk(), ConvexBody(Polytope(V))});
  const auto L = linmaps::make_sum_map(2);
  const FiberSpec spec{AB, L.combined(), pt({1.5, 0.5})};
  const auto z = fibers::fiber_point(spec, {Point::Zero(4)});
  REQUIRE(z.has_value());
  CHECK((z->head(2) + z->tail(2) - pt({1.5, 0.5})).norm() <= 1e-7);
  CHECK(z->head(2).norm() <= 1.0 + 1e-7);
  CHECK(z->tail(2).minCoeff() >= -1e-7);
  CHECK(z->tail(2).maxCoeff() <= 1.0 + 1e-7);
}
