#include "minksplit/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>
#include <unordered_map>

#include "minksplit/errors.hpp"
#include "minksplit/lp.hpp"
#include "minksplit/minnorm.hpp"

namespace minksplit::geometry {

Polytope::Polytope(Eigen::MatrixXd vertices) : v_(std::move(vertices)) {
  if (v_.cols() == 0) throw std::invalid_argument("polytope: no vertices");
  if (v_.rows() == 0) throw std::invalid_argument("polytope: zero dimension");
  if (!v_.allFinite())
    throw std::invalid_argument("polytope: non-finite vertex");
}

Ellipsoid::Ellipsoid(Point center, Eigen::MatrixXd shape)
    : center_(std::move(center)), shape_(std::move(shape)) {
  const int d = static_cast<int>(center_.size());
  if (d == 0) throw std::invalid_argument("ellipsoid: zero dimension");
  if (shape_.rows() != d || shape_.cols() != d)
    throw std::invalid_argument("ellipsoid: shape size mismatch");
  if (!center_.allFinite() || !shape_.allFinite())
    throw std::invalid_argument("ellipsoid: non-finite input");
  const double scale = std::max(1.0, shape_.cwiseAbs().maxCoeff());
  if ((shape_ - shape_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::invalid_argument("ellipsoid: shape not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      0.5 * (shape_ + shape_.transpose()));
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw std::invalid_argument("ellipsoid: shape not positive definite");
  axes_ = es.eigenvectors();
  scales_ = es.eigenvalues();
}

ConvexBody::ConvexBody(Polytope p) : rep_(std::move(p)) {
  dim_ = std::get<Polytope>(rep_).dim();
}

ConvexBody::ConvexBody(Ellipsoid e) : rep_(std::move(e)) {
  dim_ = std::get<Ellipsoid>(rep_).dim();
}

ConvexBody ConvexBody::product(std::vector<ConvexBody> factors) {
  if (factors.empty())
    throw std::invalid_argument("product body: no factors");
  int d = 0;
  for (const auto& f : factors) d += f.dim();
  ConvexBody b(Polytope(Eigen::MatrixXd::Zero(1, 1)));
  b.rep_ = std::move(factors);
  b.dim_ = d;
  return b;
}

bool ConvexBody::is_polytope() const {
  return std::holds_alternative<Polytope>(rep_);
}
bool ConvexBody::is_ellipsoid() const {
  return std::holds_alternative<Ellipsoid>(rep_);
}
bool ConvexBody::is_product() const {
  return std::holds_alternative<std::vector<ConvexBody>>(rep_);
}
const Polytope& ConvexBody::polytope() const {
  return std::get<Polytope>(rep_);
}
const Ellipsoid& ConvexBody::ellipsoid() const {
  return std::get<Ellipsoid>(rep_);
}
const std::vector<ConvexBody>& ConvexBody::factors() const {
  return std::get<std::vector<ConvexBody>>(rep_);
}

int affine_dim(const Eigen::MatrixXd& pts, Eigen::MatrixXd* basis,
               Eigen::VectorXd* origin) {
  const Eigen::VectorXd mean = pts.rowwise().mean();
  if (origin) *origin = mean;
  Eigen::MatrixXd W = pts.colwise() - mean;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(W, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  int r = 0;
  if (sv.size() > 0 && sv(0) > 0.0) {
    for (int i = 0; i < sv.size(); ++i) {
      if (sv(i) > 1e-9 * sv(0)) ++r;
    }
  }
  if (basis) *basis = svd.matrixU().leftCols(r);
  return r;
}

namespace {

// Is column i of V a convex combination of the other columns?  Decided by a
// feasibility LP on the centered, rescaled points.
bool in_hull_of_others(const Eigen::MatrixXd& V, int i, double scale) {
  const int d = static_cast<int>(V.rows());
  const int k = static_cast<int>(V.cols());
  if (k <= 1) return false;
  Eigen::MatrixXd A(d + 1, k - 1);
  Eigen::VectorXd b(d + 1);
  int col = 0;
  for (int j = 0; j < k; ++j) {
    if (j == i) continue;
    A.col(col).head(d) = V.col(j) / scale;
    A(d, col) = 1.0;
    ++col;
  }
  b.head(d) = V.col(i) / scale;
  b(d) = 1.0;
  const auto res =
      lp::solve(A, b, Eigen::VectorXd::Zero(k - 1));
  return res.status == lp::Status::Optimal;
}

Point project_polytope(const Polytope& p, const Point& x) {
  return minnorm::project(p.vertices(), x);
}

// Nearest point of an ellipsoid: Newton iteration on the multiplier of the
// stationarity system, run in the eigenbasis of the shape matrix, with a
// bisection bracket as safeguard.
Point project_ellipsoid(const Ellipsoid& e, const Point& x) {
  const Eigen::VectorXd u = e.axes().transpose() * (x - e.center());
  const Eigen::VectorXd& lam = e.axis_scales();
  double inside = 0.0;
  for (int i = 0; i < u.size(); ++i) inside += u(i) * u(i) / lam(i);
  if (inside <= 1.0) return x;

  auto g = [&](double mu) {
    double s = 0.0;
    for (int i = 0; i < u.size(); ++i) {
      const double t = lam(i) + mu;
      s += u(i) * u(i) * lam(i) / (t * t);
    }
    return s;
  };
  auto gp = [&](double mu) {
    double s = 0.0;
    for (int i = 0; i < u.size(); ++i) {
      const double t = lam(i) + mu;
      s += -2.0 * u(i) * u(i) * lam(i) / (t * t * t);
    }
    return s;
  };

  double lo = 0.0;
  double hi = std::sqrt(u.array().square().matrix().dot(lam));
  while (g(hi) > 1.0) hi *= 2.0;
  double mu = 0.0;
  bool done = false;
  for (int it = 0; it < 200; ++it) {
    const double val = g(mu);
    if (std::abs(val - 1.0) <= 1e-12) {
      done = true;
      break;
    }
    if (val > 1.0) {
      lo = mu;
    } else {
      hi = mu;
    }
    double next = mu - (val - 1.0) / gp(mu);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (hi - lo <= 1e-16 * (1.0 + hi)) {
      mu = 0.5 * (lo + hi);
      done = true;
      break;
    }
    mu = next;
  }
  if (!done && std::abs(g(mu) - 1.0) > 1e-9)
    throw SolverError("ellipsoid projection: no convergence");
  Eigen::VectorXd w(u.size());
  for (int i = 0; i < u.size(); ++i) w(i) = u(i) * lam(i) / (lam(i) + mu);
  return e.center() + e.axes() * w;
}

double affine_extent(const ConvexBody& b) {
  if (b.is_ellipsoid()) return b.dim();
  if (b.is_polytope()) return affine_dim(b.polytope().vertices());
  double s = 0.0;
  for (const auto& f : b.factors()) s += affine_extent(f);
  return s;
}

}  // namespace

Polytope convex_hull(const std::vector<Point>& points) {
  if (points.empty()) throw std::invalid_argument("convex_hull: empty input");
  const int d = static_cast<int>(points[0].size());
  for (const auto& p : points) {
    if (p.size() != d)
      throw std::invalid_argument("convex_hull: inconsistent dimensions");
  }

  Eigen::MatrixXd V(d, points.size());
  for (size_t j = 0; j < points.size(); ++j) V.col(j) = points[j];
  double scale = 1.0;
  for (int j = 0; j < V.cols(); ++j) scale = std::max(scale, V.col(j).norm());

  // Exact-ish duplicate removal first, so the LP filter sees distinct points.
  std::vector<int> keep;
  for (int j = 0; j < V.cols(); ++j) {
    bool dup = false;
    for (int i : keep) {
      if ((V.col(j) - V.col(i)).norm() <= 1e-10 * scale) {
        dup = true;
        break;
      }
    }
    if (!dup) keep.push_back(j);
  }
  Eigen::MatrixXd W = V(Eigen::all, keep).eval();

  std::vector<int> extreme;
  for (int j = 0; j < W.cols(); ++j) {
    if (!in_hull_of_others(W, j, scale)) extreme.push_back(j);
  }
  if (extreme.empty()) {
    // All points coincide up to tolerance; keep one representative.
    extreme.push_back(0);
  }
  return Polytope(W(Eigen::all, extreme).eval());
}

Point project_point(const ConvexBody& body, const Point& x) {
  if (x.size() != body.dim())
    throw std::invalid_argument("project_point: dimension mismatch");
  if (body.is_polytope()) return project_polytope(body.polytope(), x);
  if (body.is_ellipsoid()) return project_ellipsoid(body.ellipsoid(), x);
  Point out(body.dim());
  int off = 0;
  for (const auto& f : body.factors()) {
    out.segment(off, f.dim()) = project_point(f, x.segment(off, f.dim()));
    off += f.dim();
  }
  return out;
}

bool membership(const ConvexBody& body, const Point& x, double tol) {
  if (tol < 0.0) throw std::invalid_argument("membership: negative tolerance");
  const Point p = project_point(body, x);
  return (x - p).norm() <= tol;
}

SupportResult support(const ConvexBody& body, const Point& direction) {
  if (direction.size() != body.dim())
    throw std::invalid_argument("support: dimension mismatch");
  if (direction.norm() == 0.0)
    throw std::invalid_argument("support: zero direction");
  SupportResult r;
  if (body.is_polytope()) {
    const auto& V = body.polytope().vertices();
    Eigen::VectorXd s = V.transpose() * direction;
    int j = 0;
    r.value = s.maxCoeff(&j);
    r.argpoint = V.col(j);
    return r;
  }
  if (body.is_ellipsoid()) {
    const auto& e = body.ellipsoid();
    const Eigen::VectorXd qd = e.shape() * direction;
    const double s = std::sqrt(direction.dot(qd));
    r.value = direction.dot(e.center()) + s;
    r.argpoint = e.center() + qd / s;
    return r;
  }
  r.argpoint.resize(body.dim());
  r.value = 0.0;
  int off = 0;
  for (const auto& f : body.factors()) {
    const Eigen::VectorXd slice = direction.segment(off, f.dim());
    if (slice.norm() > 0.0) {
      const SupportResult fr = support(f, slice);
      r.value += fr.value;
      r.argpoint.segment(off, f.dim()) = fr.argpoint;
    } else {
      // Zero functional on this factor: any of its points maximizes.
      r.argpoint.segment(off, f.dim()) =
          f.is_ellipsoid() ? f.ellipsoid().center()
                           : project_point(f, Eigen::VectorXd::Zero(f.dim()));
    }
    off += f.dim();
  }
  return r;
}

ConvexBody minkowski_sum(const ConvexBody& a, const ConvexBody& b, int k_dirs,
                         unsigned seed, double* hausdorff_gap) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("minkowski_sum: dimension mismatch");
  const int d = a.dim();

  if (a.is_polytope() && b.is_polytope()) {
    if (hausdorff_gap) *hausdorff_gap = 0.0;
    const auto& VA = a.polytope().vertices();
    const auto& VB = b.polytope().vertices();
    // A singleton summand is a translation; extremality carries over.
    if (VA.cols() == 1)
      return Polytope((VB.colwise() + Eigen::VectorXd(VA.col(0))).eval());
    if (VB.cols() == 1)
      return Polytope((VA.colwise() + Eigen::VectorXd(VB.col(0))).eval());
    std::vector<Point> sums;
    sums.reserve(VA.cols() * VB.cols());
    for (int i = 0; i < VA.cols(); ++i) {
      for (int j = 0; j < VB.cols(); ++j) sums.push_back(VA.col(i) + VB.col(j));
    }
    return convex_hull(sums);
  }

  int k = k_dirs;
  if (k <= 0) {
    if (d > 4)
      throw std::invalid_argument(
          "minkowski_sum: pass k_dirs explicitly for dimension > 4");
    k = 2 * static_cast<int>(std::pow(10.0, d));
  }

  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto random_dir = [&]() {
    Eigen::VectorXd v(d);
    do {
      for (int i = 0; i < d; ++i) v(i) = gauss(rng);
    } while (v.norm() < 1e-8);
    return (v / v.norm()).eval();
  };

  std::vector<Point> pts;
  pts.reserve(k);
  double scale = 1.0;
  for (int i = 0; i < k; ++i) {
    const Eigen::VectorXd dir = random_dir();
    Point p = support(a, dir).argpoint + support(b, dir).argpoint;
    scale = std::max(scale, p.norm());
    pts.push_back(std::move(p));
  }

  // Thin out near-coincident argpoints; the spacing keeps every survivor
  // extreme with a margin the hull-minimality LP can certify.
  const double rho = 3e-4 * scale;
  std::unordered_map<long long, std::vector<int>> grid;
  std::vector<Eigen::VectorXi> cells(pts.size());
  auto cell_hash = [&](const Eigen::VectorXi& c) {
    long long h = 1469598103934665603LL;
    for (int i = 0; i < d; ++i) h = (h ^ c(i)) * 1099511628211LL;
    return h;
  };
  std::vector<int> kept;
  for (size_t j = 0; j < pts.size(); ++j) {
    Eigen::VectorXi cell(d);
    for (int i = 0; i < d; ++i)
      cell(i) = static_cast<int>(std::floor(pts[j](i) / rho));
    cells[j] = cell;
    bool dup = false;
    Eigen::VectorXi probe = cell;
    // Scan the 3^d neighborhood so pairs straddling a cell border are found.
    std::function<void(int)> scan = [&](int axis) {
      if (dup) return;
      if (axis == d) {
        auto it = grid.find(cell_hash(probe));
        if (it == grid.end()) return;
        for (int i : it->second) {
          if ((pts[j] - pts[i]).norm() <= rho) {
            dup = true;
            return;
          }
        }
        return;
      }
      for (int s = -1; s <= 1; ++s) {
        probe(axis) = cell(axis) + s;
        scan(axis + 1);
        if (dup) return;
      }
      probe(axis) = cell(axis);
    };
    scan(0);
    if (!dup) {
      grid[cell_hash(cell)].push_back(static_cast<int>(j));
      kept.push_back(static_cast<int>(j));
    }
  }

  Eigen::MatrixXd V(d, kept.size());
  for (size_t j = 0; j < kept.size(); ++j) V.col(j) = pts[kept[j]];

  if (hausdorff_gap) {
    std::mt19937 rng2(seed + 1);
    double gap = 0.0;
    for (int i = 0; i < 512; ++i) {
      Eigen::VectorXd dir(d);
      do {
        for (int j = 0; j < d; ++j) dir(j) = gauss(rng2);
      } while (dir.norm() < 1e-8);
      dir /= dir.norm();
      const double exact = support(a, dir).value + support(b, dir).value;
      const double inner = (V.transpose() * dir).maxCoeff();
      gap = std::max(gap, exact - inner);
    }
    *hausdorff_gap = gap;
  }
  return Polytope(std::move(V));
}

bool is_strictly_convex(const ConvexBody& body) {
  if (body.is_ellipsoid()) return true;
  if (body.is_polytope())
    return affine_dim(body.polytope().vertices()) <= 1;
  const ConvexBody* wide = nullptr;
  for (const auto& f : body.factors()) {
    if (affine_extent(f) >= 1.0) {
      if (wide) return false;
      wide = &f;
    }
  }
  return wide == nullptr || is_strictly_convex(*wide);
}

bool is_relative_interior_point(const ConvexBody& body, const Point& x) {
  if (x.size() != body.dim())
    throw std::invalid_argument(
        "is_relative_interior_point: dimension mismatch");
  if (body.is_ellipsoid()) {
    const auto& e = body.ellipsoid();
    const Eigen::VectorXd u = e.axes().transpose() * (x - e.center());
    double q = 0.0;
    for (int i = 0; i < u.size(); ++i)
      q += u(i) * u(i) / e.axis_scales()(i);
    return q < 1.0 - 1e-9;
  }
  if (body.is_product()) {
    int off = 0;
    for (const auto& f : body.factors()) {
      if (!is_relative_interior_point(f, x.segment(off, f.dim())))
        return false;
      off += f.dim();
    }
    return true;
  }

  // Maximize the smallest convex weight lambda_i = t + mu_i in a
  // representation x = sum lambda_i v_i; x is relatively interior exactly
  // when the optimum is positive.
  const auto& V = body.polytope().vertices();
  const int d = static_cast<int>(V.rows());
  const int kv = static_cast<int>(V.cols());
  double scale = std::max(1.0, x.norm());
  for (int j = 0; j < kv; ++j) scale = std::max(scale, V.col(j).norm());
  Eigen::MatrixXd A(d + 1, kv + 1);
  A.col(0).head(d) = V.rowwise().sum() / scale;
  A(d, 0) = kv;
  A.block(0, 1, d, kv) = V / scale;
  A.row(d).tail(kv).setOnes();
  Eigen::VectorXd bb(d + 1);
  bb.head(d) = x / scale;
  bb(d) = 1.0;
  Eigen::VectorXd c = Eigen::VectorXd::Zero(kv + 1);
  c(0) = -1.0;
  const auto res = lp::solve(A, bb, c);
  return res.status == lp::Status::Optimal && res.x(0) > 1e-9;
}

std::vector<std::string> validate(const ConvexBody& body) {
  std::vector<std::string> issues;
  if (body.is_polytope()) {
    const auto& V = body.polytope().vertices();
    double scale = 1.0;
    for (int j = 0; j < V.cols(); ++j) scale = std::max(scale, V.col(j).norm());
    for (int j = 0; j < V.cols(); ++j) {
      if (in_hull_of_others(V, j, scale))
        issues.push_back("vertex " + std::to_string(j) +
                         " is a convex combination of the others");
    }
  } else if (body.is_product()) {
    int idx = 0;
    for (const auto& f : body.factors()) {
      for (const auto& s : validate(f))
        issues.push_back("factor " + std::to_string(idx) + ": " + s);
      ++idx;
    }
  }
  // Ellipsoid invariants (symmetry, positive definiteness) are enforced at
  // construction; an Ellipsoid value cannot violate them.
  return issues;
}

}  // namespace minksplit::geometry
