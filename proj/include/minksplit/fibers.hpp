#pragma once

#include <optional>

#include "minksplit/geometry.hpp"
#include "minksplit/linmaps.hpp"

namespace minksplit::fibers {

// The constrained linear system body ∩ {z : map z = target}.  Product
// problems pass the product body together with the combined map on the
// concatenated domain.
struct FiberSpec {
  geometry::ConvexBody body;
  linmaps::LinearMap map;
  Point target;
};

// Min-norm-to-anchor selection: the fiber point nearest the anchor.
struct SelectionRule {
  Point anchor;
};

struct SolveStats {
  long iterations = 0;
  double map_residual = 0.0;  // ||map z - target||_inf at the returned point
  double body_dist = 0.0;     // distance of the returned point to the body
  double gap = 0.0;           // final inter-set distance estimate
};

// Nearest fiber point to the anchor.  Dykstra alternating projections
// between the affine subspace (closed-form) and the body identify the
// solution; bodies whose factors are all polytopes then get an exact
// active-set refinement in vertex-weight space, other bodies a support-snap
// pass for boundary-tangent fibers.  Returns nullopt when the alternating
// distance stalls above tol — the empty-fiber certificate.
std::optional<Point> fiber_point(const FiberSpec& spec,
                                 const SelectionRule& rule, double tol = 1e-8,
                                 SolveStats* stats = nullptr);

// Lower bound on the fiber diameter from support extrema over n_dirs random
// unit directions (exact LP supports over polytope fibers, far-anchor
// selections otherwise).  Throws InfeasibleError on an empty fiber.
double fiber_diameter(const FiberSpec& spec, int n_dirs, unsigned seed = 0,
                      double tol = 1e-8);

// ||z - p|| where p is the fiber point anchored at z itself.
double dist_to_fiber(const Point& z, const FiberSpec& spec, double tol = 1e-8);

}  // namespace minksplit::fibers
