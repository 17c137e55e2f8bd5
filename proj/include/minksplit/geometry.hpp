#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace minksplit {

using Point = Eigen::VectorXd;

namespace geometry {

// One facet of a polytope, relative to its affine hull.  Every vertex v of
// the body satisfies <normal, v> <= offset; vertex_ids lists all vertices
// lying on the facet plane (at least dim(aff hull) of them).
struct Facet {
  Eigen::VectorXd normal;
  double offset = 0.0;
  std::vector<int> vertex_ids;
};

// Bounded V-representation polytope.  Columns of the vertex matrix are the
// vertices; the extremality invariant (no vertex is a convex combination of
// the others) is established by convex_hull and assumed elsewhere.
class Polytope {
 public:
  explicit Polytope(Eigen::MatrixXd vertices);

  int dim() const { return static_cast<int>(v_.rows()); }
  int vertex_count() const { return static_cast<int>(v_.cols()); }
  const Eigen::MatrixXd& vertices() const { return v_; }
  Point vertex(int i) const { return v_.col(i); }

  // Facets relative to the affine hull, computed once on first request.
  // Only available for dim(aff hull) <= 6.
  const std::vector<Facet>& facets() const;

 private:
  Eigen::MatrixXd v_;
  mutable std::optional<std::vector<Facet>> facets_;
};

// {x : (x - center)' Q^{-1} (x - center) <= 1} with Q symmetric positive
// definite.  The eigendecomposition of Q is fixed at construction and shared
// by projection and support queries.
class Ellipsoid {
 public:
  Ellipsoid(Point center, Eigen::MatrixXd shape);

  int dim() const { return static_cast<int>(center_.size()); }
  const Point& center() const { return center_; }
  const Eigen::MatrixXd& shape() const { return shape_; }
  const Eigen::MatrixXd& axes() const { return axes_; }
  const Eigen::VectorXd& axis_scales() const { return scales_; }

 private:
  Point center_;
  Eigen::MatrixXd shape_;
  Eigen::MatrixXd axes_;    // orthonormal eigenvectors of shape
  Eigen::VectorXd scales_;  // matching eigenvalues, all positive
};

// Tagged compact convex body: a polytope, an ellipsoid, or a product of
// bodies living on consecutive coordinate blocks.
class ConvexBody {
 public:
  ConvexBody(Polytope p);
  ConvexBody(Ellipsoid e);
  static ConvexBody product(std::vector<ConvexBody> factors);

  int dim() const { return dim_; }
  bool is_polytope() const;
  bool is_ellipsoid() const;
  bool is_product() const;
  const Polytope& polytope() const;
  const Ellipsoid& ellipsoid() const;
  const std::vector<ConvexBody>& factors() const;

 private:
  std::variant<Polytope, Ellipsoid, std::vector<ConvexBody>> rep_;
  int dim_ = 0;
};

struct SupportResult {
  double value = 0.0;
  Point argpoint;
};

// Extreme points of the input set.  Duplicates and points that are convex
// combinations of the others are removed (LP test per point).
Polytope convex_hull(const std::vector<Point>& points);

// dist(x, body) <= tol, Euclidean distance to the set.
bool membership(const ConvexBody& body, const Point& x, double tol);

// Unique Euclidean nearest point of the body to x.
Point project_point(const ConvexBody& body, const Point& x);

// max <direction, x> over the body, together with a maximizer.
SupportResult support(const ConvexBody& body, const Point& direction);

// Minkowski sum.  Polytope + polytope is exact (hull of pairwise vertex
// sums).  Any case with an ellipsoid factor returns an inner polytope built
// from support argpoints in k_dirs sampled directions (k_dirs = 0 picks
// 2*10^dim); *hausdorff_gap, when given, receives a sampled estimate of the
// gap to the exact sum.
ConvexBody minkowski_sum(const ConvexBody& a, const ConvexBody& b,
                         int k_dirs = 0, unsigned seed = 0,
                         double* hausdorff_gap = nullptr);

// No segment on the relative boundary.  Points and segments count as
// strictly convex (their relative boundaries carry no segment).
bool is_strictly_convex(const ConvexBody& body);

bool is_relative_interior_point(const ConvexBody& body, const Point& x);

// Invariant audit for parsed/constructed bodies; returns human-readable
// violations, empty when the body is well-formed.
std::vector<std::string> validate(const ConvexBody& body);

// Dimension of the affine hull of the columns of pts.  Optionally returns an
// orthonormal basis of the direction space and a base point.
int affine_dim(const Eigen::MatrixXd& pts, Eigen::MatrixXd* basis = nullptr,
               Eigen::VectorXd* origin = nullptr);

}  // namespace geometry
}  // namespace minksplit
