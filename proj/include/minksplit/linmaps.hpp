#pragma once

#include <Eigen/Dense>

#include "minksplit/geometry.hpp"

namespace minksplit::linmaps {

// Dense linear surjection.  Construction rejects rank-deficient matrices
// (smallest singular value at most 1e-10 relative to the largest); the
// orthonormal kernel basis and the pseudo-inverse come out of the same
// factorization and are fixed for the lifetime of the map.
class LinearMap {
 public:
  explicit LinearMap(Eigen::MatrixXd matrix);

  int range_dim() const { return static_cast<int>(a_.rows()); }
  int domain_dim() const { return static_cast<int>(a_.cols()); }
  const Eigen::MatrixXd& matrix() const { return a_; }
  const Eigen::MatrixXd& kernel_basis() const { return kernel_; }
  const Eigen::MatrixXd& pseudo_inverse() const { return pinv_; }

  Point apply(const Point& x) const;
  // Orthogonal projection of x onto the affine subspace {z : Lz = y}.
  Point project_affine(const Point& x, const Point& y) const;

 private:
  Eigen::MatrixXd a_;
  Eigen::MatrixXd kernel_;
  Eigen::MatrixXd pinv_;
};

// L(y1, y2) = left y1 + right y2 on a two-factor domain.  The concatenated
// block matrix must be surjective.
class ProductMap {
 public:
  ProductMap(Eigen::MatrixXd left, Eigen::MatrixXd right);

  const Eigen::MatrixXd& left() const { return left_; }
  const Eigen::MatrixXd& right() const { return right_; }
  int left_dim() const { return static_cast<int>(left_.cols()); }
  int right_dim() const { return static_cast<int>(right_.cols()); }
  int range_dim() const { return static_cast<int>(left_.rows()); }

  // The same map on the concatenated domain (y1; y2).
  const LinearMap& combined() const { return combined_; }
  Point apply(const Point& y1, const Point& y2) const;

 private:
  Eigen::MatrixXd left_;
  Eigen::MatrixXd right_;
  LinearMap combined_;
};

// (y1, y2) -> y1 + y2 on R^d.
ProductMap make_sum_map(int d);

// Ker(L) meets Y1 x {0} and {0} x Y2 only at the origin — equivalently both
// blocks are injective (column rank decided at threshold 1e-10).
bool kernel_transversal_to_factors(const ProductMap& L);

struct TransversalityReport {
  bool pass = true;
  int facet_index = -1;  // witness facet when pass == false
  Point direction;       // unit vector in dir(facet) ∩ Ker(L)
};

// Fail iff some facet of C, taken relative to the affine hull, has a
// direction space meeting Ker(L) nontrivially.  Exact for polytopes: every
// boundary segment lies in a facet, and a facet whose direction space meets
// the kernel contains such a segment.
TransversalityReport transversality_check(const geometry::Polytope& C,
                                          const LinearMap& L);

}  // namespace minksplit::linmaps
