#include "minksplit/splitting.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "minksplit/errors.hpp"

namespace minksplit::splitting {

std::optional<SplitResult> split(const geometry::ConvexBody& A,
                                 const geometry::ConvexBody& B,
                                 const linmaps::ProductMap& L, const Point& c,
                                 const fibers::SelectionRule& rule,
                                 double tol) {
  if (A.dim() != L.left_dim() || B.dim() != L.right_dim())
    throw std::invalid_argument("split: body dimensions do not match the map");
  geometry::ConvexBody product = geometry::ConvexBody::product({A, B});
  fibers::FiberSpec spec{product, L.combined(), c};
  auto z = fibers::fiber_point(spec, rule, tol);
  if (!z) return std::nullopt;

  SplitResult out;
  out.a = z->head(A.dim());
  out.b = z->tail(B.dim());
  out.residual = (L.apply(out.a, out.b) - c).lpNorm<Eigen::Infinity>();
  const double da = (out.a - geometry::project_point(A, out.a)).norm();
  const double db = (out.b - geometry::project_point(B, out.b)).norm();
  out.body_violation = std::max(da, db);
  return out;
}

std::vector<SplitResult> split_sampled_map(const geometry::ConvexBody& A,
                                           const geometry::ConvexBody& B,
                                           const linmaps::ProductMap& L,
                                           const SampledMap& f,
                                           const fibers::SelectionRule& rule,
                                           double tol) {
  if (f.values.size() != f.sample_ids.size())
    throw std::invalid_argument("split-map: one value per sample id required");
  const int ns = static_cast<int>(f.values.size());
  for (const auto& [i, j] : f.adjacency)
    if (i < 0 || j < 0 || i >= ns || j >= ns)
      throw std::invalid_argument("split-map: adjacency index out of range");

  std::vector<SplitResult> out;
  out.reserve(f.values.size());
  for (int k = 0; k < ns; ++k) {
    auto r = split(A, B, L, f.values[k], rule, tol);
    if (!r)
      throw InfeasibleError("split-map: empty fiber at sample '" +
                            f.sample_ids[k] + "'");
    out.push_back(std::move(*r));
  }
  return out;
}

ContinuityReport continuity_report(
    const std::vector<SplitResult>& splits,
    const std::vector<std::pair<int, int>>& adjacency) {
  if (splits.size() < 2)
    throw std::invalid_argument("continuity report: need at least 2 samples");
  const int ns = static_cast<int>(splits.size());
  ContinuityReport rep;
  rep.jumps.reserve(adjacency.size());
  for (const auto& [i, j] : adjacency) {
    if (i < 0 || j < 0 || i >= ns || j >= ns)
      throw std::invalid_argument(
          "continuity report: adjacency index out of range");
    const double da = (splits[i].a - splits[j].a).squaredNorm();
    const double db = (splits[i].b - splits[j].b).squaredNorm();
    rep.jumps.push_back(std::sqrt(da + db));
  }
  rep.max_jump = 0.0;
  for (double j : rep.jumps) rep.max_jump = std::max(rep.max_jump, j);
  return rep;
}

ContinuityReport continuity_report(
    const std::vector<SplitResult>& coarse,
    const std::vector<std::pair<int, int>>& coarse_adjacency,
    const std::vector<SplitResult>& fine,
    const std::vector<std::pair<int, int>>& fine_adjacency) {
  const ContinuityReport coarse_rep =
      continuity_report(coarse, coarse_adjacency);
  ContinuityReport rep = continuity_report(fine, fine_adjacency);
  if (coarse_rep.max_jump > 0.0)
    rep.refinement_ratio = rep.max_jump / coarse_rep.max_jump;
  else
    rep.refinement_ratio =
        rep.max_jump > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  return rep;
}

}  // namespace minksplit::splitting
