#pragma once

#include <vector>

#include "minksplit/geometry.hpp"
#include "minksplit/linmaps.hpp"
#include "minksplit/reports.hpp"

namespace minksplit::gallery {

// Hull of the n+1 samples (cos t_k, sin t_k, t_k), t_k = 2πk/n, k = 0..n —
// one full turn of a unit-radius helix, including both lift endpoints of
// the seam point (1,0).
geometry::Polytope spiral_body(int n);

// Hull of n equally spaced points of the unit circle in the z=0 plane plus
// the single raised point (1,0,1). Unlike the helix hull, the selection
// problem over its shadow has a continuous answer.
geometry::Polytope remark2_body(int n);

// Hull in R^N of the 2N generators e_n/n and 2e_1 − e_n/n (n = 1..N). The
// point e_1 is its center of symmetry and a relative interior point, yet
// the fibers of the drop-first-coordinate map over ±e_n/n are singletons
// at distance ~1 from e_1.
geometry::Polytope schauder_body(int N);

// (x, y, z) ↦ (x, y).
linmaps::LinearMap planar_shadow_map();

// R^N → R^(N−1), deleting the first coordinate. This is x ↦ x − x_1·e_1
// written in the coordinates of its range.
linmaps::LinearMap schauder_map(int N);

// min(λ/(3·n·norm_Pn), λ/(3·norm_P1)): a floor on how far λ·e_1 + e_n/n
// stays from the body above, for any truncation containing coordinate n.
double lemma25_bound(double lambda, int n, double norm_P1, double norm_Pn);

// Distance from the origin to the boundary of the regular n-gon inscribed
// in the unit circle (first vertex at angle 0), along the ray at `angle`.
double shadow_boundary_radius(int n, double angle);

// Measures dist(z, fiber over y) for each target y. Verdict NotOpenAt(ε)
// requires at least five feasible targets within convergence_radius of
// L(z) whose fiber distances neither decay nor drop under 10·tol; ε is the
// smallest such distance.
ProbeReport openness_probe(const geometry::ConvexBody& C,
                           const linmaps::LinearMap& L, const Point& z,
                           const std::vector<Point>& targets,
                           double tol = 1e-8,
                           double convergence_radius = 1e-3);

// Min-norm selection over the helix hull's shadow boundary at angles
// [δ, 2π−δ], n+1 samples, anchored at the origin. The report's adjacency is
// the open path plus the closing edge between the two ends, which is where
// the jump concentrates. Selected points are written to *selections when
// given.
ContinuityReport spiral_jump_experiment(int n, double delta,
                                        std::vector<Point>* selections =
                                            nullptr,
                                        double tol = 1e-8);

// Same selection walk on remark2_body(n_body), but around the full closed
// shadow boundary with n_path samples. With the anchor at the origin the
// selection stays in the base plane and all jumps shrink with the step.
ContinuityReport remark2_jump_experiment(int n_body, int n_path,
                                         std::vector<Point>* selections =
                                             nullptr,
                                         double tol = 1e-8);

}  // namespace minksplit::gallery
