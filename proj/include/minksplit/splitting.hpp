#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "minksplit/fibers.hpp"
#include "minksplit/geometry.hpp"
#include "minksplit/linmaps.hpp"
#include "minksplit/reports.hpp"

namespace minksplit::splitting {

// A decomposition c = L(a, b) with a in A and b in B, plus the diagnostics
// the caller needs to trust it.
struct SplitResult {
  Point a;
  Point b;
  double residual = 0.0;        // ‖L(a,b) − target‖∞
  double body_violation = 0.0;  // max(dist(a, A), dist(b, B))
};

// A map given by samples: identifiers, adjacency (path or grid edges as
// index pairs), and one value per sample.
struct SampledMap {
  std::vector<std::string> sample_ids;
  std::vector<std::pair<int, int>> adjacency;
  std::vector<Point> values;
};

// Splits a single point c of L(A,B). Returns nullopt when the fiber over c
// is certified empty (c outside L(A,B)); throws SolverError when the fiber
// solve does not converge either way.
std::optional<SplitResult> split(const geometry::ConvexBody& A,
                                 const geometry::ConvexBody& B,
                                 const linmaps::ProductMap& L, const Point& c,
                                 const fibers::SelectionRule& rule,
                                 double tol = 1e-8);

// Splits every sample of f. Any empty fiber aborts with InfeasibleError
// naming the offending sample id.
std::vector<SplitResult> split_sampled_map(const geometry::ConvexBody& A,
                                           const geometry::ConvexBody& B,
                                           const linmaps::ProductMap& L,
                                           const SampledMap& f,
                                           const fibers::SelectionRule& rule,
                                           double tol = 1e-8);

// Per-edge jump norms in the product space, plus their maximum.
ContinuityReport continuity_report(
    const std::vector<SplitResult>& splits,
    const std::vector<std::pair<int, int>>& adjacency);

// Same, comparing two sampling resolutions of one path; the returned report
// is the fine one with refinement_ratio = fine max jump / coarse max jump.
ContinuityReport continuity_report(
    const std::vector<SplitResult>& coarse,
    const std::vector<std::pair<int, int>>& coarse_adjacency,
    const std::vector<SplitResult>& fine,
    const std::vector<std::pair<int, int>>& fine_adjacency);

}  // namespace minksplit::splitting
