#include "minksplit/linmaps.hpp"

#include <stdexcept>

namespace minksplit::linmaps {

LinearMap::LinearMap(Eigen::MatrixXd matrix) : a_(std::move(matrix)) {
  if (a_.rows() == 0 || a_.cols() == 0)
    throw std::invalid_argument("linear map: empty matrix");
  if (!a_.allFinite())
    throw std::invalid_argument("linear map: non-finite entry");
  const int m = range_dim();
  const int n = domain_dim();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      a_, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (m > n || sv(m - 1) <= 1e-10 * sv(0))
    throw std::invalid_argument("linear map: not surjective");
  kernel_ = svd.matrixV().rightCols(n - m);
  pinv_ = svd.matrixV().leftCols(m) * sv.head(m).cwiseInverse().asDiagonal() *
          svd.matrixU().transpose();
}

Point LinearMap::apply(const Point& x) const {
  if (x.size() != domain_dim())
    throw std::invalid_argument("linear map: dimension mismatch");
  return a_ * x;
}

Point LinearMap::project_affine(const Point& x, const Point& y) const {
  if (x.size() != domain_dim() || y.size() != range_dim())
    throw std::invalid_argument("linear map: dimension mismatch");
  return x - pinv_ * (a_ * x - y);
}

namespace {

Eigen::MatrixXd concat_blocks(const Eigen::MatrixXd& left,
                              const Eigen::MatrixXd& right) {
  if (left.rows() != right.rows())
    throw std::invalid_argument("product map: row count mismatch");
  Eigen::MatrixXd m(left.rows(), left.cols() + right.cols());
  m << left, right;
  return m;
}

int column_rank(const Eigen::MatrixXd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  int r = 0;
  for (int i = 0; i < sv.size(); ++i) {
    if (sv(i) > 1e-10 * sv(0)) ++r;
  }
  return r;
}

}  // namespace

ProductMap::ProductMap(Eigen::MatrixXd left, Eigen::MatrixXd right)
    : left_(std::move(left)),
      right_(std::move(right)),
      combined_(concat_blocks(left_, right_)) {}

Point ProductMap::apply(const Point& y1, const Point& y2) const {
  if (y1.size() != left_dim() || y2.size() != right_dim())
    throw std::invalid_argument("product map: dimension mismatch");
  return left_ * y1 + right_ * y2;
}

ProductMap make_sum_map(int d) {
  if (d < 1) throw std::invalid_argument("make_sum_map: dimension must be >= 1");
  return ProductMap(Eigen::MatrixXd::Identity(d, d),
                    Eigen::MatrixXd::Identity(d, d));
}

bool kernel_transversal_to_factors(const ProductMap& L) {
  // (v, 0) lies in Ker(L) exactly when left v = 0, and symmetrically for the
  // right factor, so the two slice conditions reduce to block injectivity.
  return column_rank(L.left()) == L.left_dim() &&
         column_rank(L.right()) == L.right_dim();
}

TransversalityReport transversality_check(const geometry::Polytope& C,
                                          const LinearMap& L) {
  if (C.dim() != L.domain_dim())
    throw std::invalid_argument("transversality_check: dimension mismatch");
  TransversalityReport rep;
  const Eigen::MatrixXd& K = L.kernel_basis();
  if (K.cols() == 0) return rep;

  const auto& facets = C.facets();
  for (size_t fi = 0; fi < facets.size(); ++fi) {
    const auto& f = facets[fi];
    if (f.vertex_ids.size() < 2) continue;
    Eigen::MatrixXd D(C.dim(), f.vertex_ids.size() - 1);
    const Point v0 = C.vertex(f.vertex_ids[0]);
    for (size_t j = 1; j < f.vertex_ids.size(); ++j)
      D.col(j - 1) = C.vertex(f.vertex_ids[j]) - v0;
    Eigen::JacobiSVD<Eigen::MatrixXd> dir_svd(D, Eigen::ComputeThinU);
    int rd = 0;
    for (int i = 0; i < dir_svd.singularValues().size(); ++i) {
      if (dir_svd.singularValues()(i) > 1e-9 * dir_svd.singularValues()(0))
        ++rd;
    }
    if (rd == 0) continue;
    const Eigen::MatrixXd Db = dir_svd.matrixU().leftCols(rd);

    Eigen::MatrixXd M(C.dim(), rd + K.cols());
    M << Db, K;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    // Both blocks are orthonormal, so a vanishing smallest singular value of
    // the stack certifies a nontrivial intersection of the spans.
    if (sv.size() < rd + K.cols() || sv(rd + K.cols() - 1) <= 1e-9 * sv(0)) {
      const Eigen::VectorXd null = svd.matrixV().col(rd + K.cols() - 1);
      Point dir = Db * null.head(rd);
      if (dir.norm() < 1e-12) dir = K * null.tail(K.cols());
      rep.pass = false;
      rep.facet_index = static_cast<int>(fi);
      rep.direction = dir / dir.norm();
      return rep;
    }
  }
  return rep;
}

}  // namespace minksplit::linmaps
