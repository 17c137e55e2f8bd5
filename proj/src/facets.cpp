#include <algorithm>
#include <map>
#include <stdexcept>
#include <vector>

#include "minksplit/geometry.hpp"

namespace minksplit::geometry {

namespace {

struct SimplexFacet {
  std::vector<int> verts;  // r vertex indices, sorted
  Eigen::VectorXd n;       // unit outward normal (local coordinates)
  double b = 0.0;          // <n, w> = b on the facet plane
  bool alive = true;
};

// Unit normal and offset of the hyperplane through the r columns of S,
// oriented so that `inside` lies strictly on the <= side.  Fails on
// degenerate (affinely dependent) vertex sets.
bool hyperplane(const Eigen::MatrixXd& S, const Eigen::VectorXd& inside,
                double eps, Eigen::VectorXd* n, double* b) {
  const int r = static_cast<int>(S.rows());
  Eigen::MatrixXd D(r - 1, r);
  for (int j = 1; j < r; ++j) D.row(j - 1) = (S.col(j) - S.col(0)).transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(D, Eigen::ComputeFullV);
  if (svd.singularValues()(r - 2) <= eps) return false;
  Eigen::VectorXd normal = svd.matrixV().col(r - 1);
  double off = normal.dot(S.col(0));
  const double side = normal.dot(inside) - off;
  if (std::abs(side) <= eps) return false;
  if (side > 0.0) {
    normal = -normal;
    off = -off;
  }
  *n = normal;
  *b = off;
  return true;
}

std::vector<Facet> one_dimensional_facets(const Eigen::MatrixXd& W,
                                          const Eigen::MatrixXd& U,
                                          const Eigen::VectorXd& origin,
                                          double eps) {
  std::vector<Facet> out;
  const Eigen::VectorXd t = W.row(0).transpose();
  for (int sgn : {1, -1}) {
    Facet f;
    const double extreme = sgn > 0 ? t.maxCoeff() : -t.minCoeff();
    f.normal = sgn * U.col(0);
    f.offset = extreme + sgn * U.col(0).dot(origin);
    for (int i = 0; i < t.size(); ++i) {
      if (std::abs(sgn * t(i) - extreme) <= eps) f.vertex_ids.push_back(i);
    }
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace

const std::vector<Facet>& Polytope::facets() const {
  if (facets_) return *facets_;

  Eigen::MatrixXd U;
  Eigen::VectorXd origin;
  const int r = affine_dim(v_, &U, &origin);
  if (r > 6)
    throw std::invalid_argument(
        "facets: affine dimension above 6 is not supported");
  const int k = vertex_count();
  if (r == 0) {
    facets_ = std::vector<Facet>{};
    return *facets_;
  }

  // Work in orthonormal coordinates of the affine hull.
  const Eigen::MatrixXd W = U.transpose() * (v_.colwise() - origin);
  double scale = 1.0;
  for (int j = 0; j < k; ++j) scale = std::max(scale, W.col(j).norm());
  const double eps = 1e-9 * scale;

  if (r == 1) {
    facets_ = one_dimensional_facets(W, U, origin, 1e-8 * scale);
    return *facets_;
  }

  // Seed simplex: greedily pick r+1 points spanning the hull.
  std::vector<int> seed;
  {
    int j0 = 0;
    double best = -1.0;
    for (int j = 0; j < k; ++j) {
      if (W.col(j).norm() > best) {
        best = W.col(j).norm();
        j0 = j;
      }
    }
    seed.push_back(j0);
    Eigen::MatrixXd Q(r, 0);
    while (static_cast<int>(seed.size()) < r + 1) {
      int jbest = -1;
      double dbest = 0.0;
      for (int j = 0; j < k; ++j) {
        Eigen::VectorXd dv = W.col(j) - W.col(seed[0]);
        if (Q.cols() > 0) dv -= Q * (Q.transpose() * dv);
        if (dv.norm() > dbest) {
          dbest = dv.norm();
          jbest = j;
        }
      }
      if (jbest < 0 || dbest <= eps)
        throw std::runtime_error("facets: degenerate seed simplex");
      Eigen::VectorXd dv = W.col(jbest) - W.col(seed[0]);
      if (Q.cols() > 0) dv -= Q * (Q.transpose() * dv);
      Q.conservativeResize(r, Q.cols() + 1);
      Q.col(Q.cols() - 1) = dv / dv.norm();
      seed.push_back(jbest);
    }
  }
  Eigen::VectorXd interior = Eigen::VectorXd::Zero(r);
  for (int s : seed) interior += W.col(s);
  interior /= static_cast<double>(seed.size());

  std::vector<SimplexFacet> hull;
  for (int drop = 0; drop <= r; ++drop) {
    SimplexFacet f;
    for (int s = 0; s <= r; ++s) {
      if (s != drop) f.verts.push_back(seed[s]);
    }
    std::sort(f.verts.begin(), f.verts.end());
    Eigen::MatrixXd S(r, r);
    for (int j = 0; j < r; ++j) S.col(j) = W.col(f.verts[j]);
    if (!hyperplane(S, interior, eps, &f.n, &f.b))
      throw std::runtime_error("facets: degenerate seed facet");
    hull.push_back(std::move(f));
  }

  // Beneath-beyond insertion of the remaining points.
  std::vector<bool> used(k, false);
  for (int s : seed) used[s] = true;
  for (int p = 0; p < k; ++p) {
    if (used[p]) continue;
    std::vector<int> visible;
    for (size_t f = 0; f < hull.size(); ++f) {
      if (hull[f].alive && hull[f].n.dot(W.col(p)) > hull[f].b + eps)
        visible.push_back(static_cast<int>(f));
    }
    if (visible.empty()) continue;
    std::map<std::vector<int>, int> ridge_count;
    for (int f : visible) {
      for (size_t drop = 0; drop < hull[f].verts.size(); ++drop) {
        std::vector<int> ridge = hull[f].verts;
        ridge.erase(ridge.begin() + drop);
        ++ridge_count[ridge];
      }
    }
    for (int f : visible) hull[f].alive = false;
    for (const auto& [ridge, count] : ridge_count) {
      if (count != 1) continue;  // interior to the visible patch
      SimplexFacet f;
      f.verts = ridge;
      f.verts.push_back(p);
      std::sort(f.verts.begin(), f.verts.end());
      Eigen::MatrixXd S(r, r);
      for (int j = 0; j < r; ++j) S.col(j) = W.col(f.verts[j]);
      if (!hyperplane(S, interior, eps, &f.n, &f.b))
        throw std::runtime_error("facets: degenerate facet update");
      hull.push_back(std::move(f));
    }
  }

  // Merge coplanar simplicial pieces and collect every vertex on each plane.
  std::vector<Facet> merged;
  std::vector<std::pair<Eigen::VectorXd, double>> planes;
  for (const auto& f : hull) {
    if (!f.alive) continue;
    bool found = false;
    for (const auto& [n, b] : planes) {
      if ((n - f.n).norm() <= 1e-7 && std::abs(b - f.b) <= 1e-7 * scale) {
        found = true;
        break;
      }
    }
    if (found) continue;
    planes.emplace_back(f.n, f.b);
    Facet out;
    out.normal = U * f.n;
    out.offset = f.b + out.normal.dot(origin);
    for (int i = 0; i < k; ++i) {
      if (std::abs(f.n.dot(W.col(i)) - f.b) <= 1e-8 * scale)
        out.vertex_ids.push_back(i);
    }
    merged.push_back(std::move(out));
  }

  // Safety audit: the merged planes must contain the whole vertex set on
  // their <= side.
  for (const auto& f : merged) {
    for (int i = 0; i < k; ++i) {
      if (f.normal.dot(v_.col(i)) > f.offset + 1e-6 * scale)
        throw std::runtime_error("facets: enumeration inconsistency");
    }
  }

  facets_ = std::move(merged);
  return *facets_;
}

}  // namespace minksplit::geometry
