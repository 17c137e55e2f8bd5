#include "minksplit/fibers.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "minksplit/errors.hpp"
#include "minksplit/lp.hpp"
#include "minksplit/minnorm.hpp"

namespace minksplit::fibers {

namespace {

struct Leaf {
  int offset = 0;
  const geometry::ConvexBody* body = nullptr;  // non-product node
};

void flatten(const geometry::ConvexBody& b, int offset, std::vector<Leaf>* out) {
  if (b.is_product()) {
    for (const auto& f : b.factors()) {
      flatten(f, offset, out);
      offset += f.dim();
    }
    return;
  }
  out->push_back({offset, &b});
}

double body_scale(const geometry::ConvexBody& b) {
  if (b.is_polytope()) {
    double s = 0.0;
    const auto& V = b.polytope().vertices();
    for (int j = 0; j < V.cols(); ++j) s = std::max(s, V.col(j).norm());
    return s;
  }
  if (b.is_ellipsoid()) {
    return b.ellipsoid().center().norm() +
           std::sqrt(b.ellipsoid().axis_scales().maxCoeff());
  }
  double s = 0.0;
  for (const auto& f : b.factors()) s += body_scale(f);
  return s;
}

// Exact minimizer of ||z - anchor|| over the fiber of a body whose leaves
// are all polytopes, solved in vertex-weight space: minimize the distance of
// the weighted vertex combination to the anchor subject to the map equation
// and one convexity row per factor.  Primal active set over the weight
// support with full KKT pricing, warm-started from `seed_support`.
class WeightSpaceQp {
 public:
  WeightSpaceQp(const std::vector<Leaf>& leaves, const linmaps::LinearMap& map,
                const Point& target, const Point& anchor)
      : anchor_(anchor) {
    const int m = map.range_dim();
    const int nf = static_cast<int>(leaves.size());
    int total = 0;
    std::vector<int> base(nf);
    for (int f = 0; f < nf; ++f) {
      base[f] = total;
      total += leaves[f].body->polytope().vertex_count();
    }
    factor_base_ = base;
    rows_ = m + nf;
    total_cols_ = total;
    A_.setZero(rows_, total);
    M_.setZero(anchor.size(), total);
    for (int f = 0; f < nf; ++f) {
      const auto& P = leaves[f].body->polytope();
      A_.block(0, base[f], m, P.vertex_count()) =
          map.matrix().middleCols(leaves[f].offset, P.dim()) * P.vertices();
      A_.row(m + f).segment(base[f], P.vertex_count()).setOnes();
      M_.block(leaves[f].offset, base[f], P.dim(), P.vertex_count()) =
          P.vertices();
    }
    b_eq_ = Eigen::VectorXd::Ones(rows_);
    b_eq_.head(m) = target;
    scale_ = 1.0 + b_eq_.norm();
  }

  // Runs the active-set loop; returns the optimal point in the domain space.
  // `ok` reports whether pricing certified optimality within the cap.
  Point solve(std::vector<int> support, bool* ok) {
    std::sort(support.begin(), support.end());
    support.erase(std::unique(support.begin(), support.end()), support.end());
    Point z = Point::Zero(anchor_.size());
    // lam_cur, when valid, is sign-feasible, satisfies the equality rows over
    // `support`, and is kept aligned with it through inserts and drops.  The
    // repair loop steps from it toward each new subspace fit only as far as
    // the signs allow, which keeps the objective monotone and rules out the
    // add/drop cycling a plain drop-and-resolve is prone to.
    Eigen::VectorXd lam_cur;
    bool have_cur = false;
    *ok = false;
    // Equality-constrained least squares over the current support.
    const auto subspace_fit = [&](const std::vector<int>& sup,
                                  double* feas) -> Eigen::VectorXd {
      const Eigen::MatrixXd A = A_(Eigen::all, sup);
      const Eigen::MatrixXd M = M_(Eigen::all, sup);
      Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(A);
      Eigen::VectorXd lam_p = cod.solve(b_eq_);
      *feas = (A * lam_p - b_eq_).norm();
      Eigen::MatrixXd N = Eigen::FullPivLU<Eigen::MatrixXd>(A).kernel();
      if (N.cols() == 1 && N.col(0).norm() < 1e-12)
        N.resize(static_cast<int>(sup.size()), 0);
      if (N.cols() == 0) return lam_p;
      const Eigen::VectorXd rhs = anchor_ - M * lam_p;
      const Eigen::MatrixXd MN = M * N;
      const Eigen::VectorXd w = MN.completeOrthogonalDecomposition().solve(rhs);
      return lam_p + N * w;
    };
    for (int round = 0; round < 300; ++round) {
      double feas = 0.0;
      Eigen::VectorXd lam = subspace_fit(support, &feas);
      if (feas > 1e-9 * scale_) {
        // The support cannot reach the target; price in the column most
        // aligned with the equality residual.
        const Eigen::VectorXd score =
            A_.transpose() * (b_eq_ - A_(Eigen::all, support) * lam);
        int jbest = -1;
        double best = 1e-10 * scale_;
        for (int j = 0; j < total_cols_; ++j) {
          if (std::binary_search(support.begin(), support.end(), j)) continue;
          if (std::abs(score(j)) > best) {
            best = std::abs(score(j));
            jbest = j;
          }
        }
        // When no column helps, the target sits slightly off the image and
        // the least-squares weights are the best available.
        if (jbest >= 0) {
          const auto pos =
              std::lower_bound(support.begin(), support.end(), jbest);
          if (have_cur) {
            const auto at = pos - support.begin();
            Eigen::VectorXd padded(lam_cur.size() + 1);
            padded << lam_cur.head(at), 0.0, lam_cur.tail(lam_cur.size() - at);
            lam_cur = padded;
          }
          support.insert(pos, jbest);
          continue;
        }
      }
      // Repair negative weights.  Against a valid reference point this is the
      // interpolate-to-the-boundary step; without one (a fresh or unreachable
      // seed) fall back to dropping the worst offender outright.
      while (lam.minCoeff() < -1e-12) {
        int jdrop = -1;
        if (have_cur) {
          double alpha = 1.0;
          for (int i = 0; i < lam.size(); ++i) {
            if (lam(i) >= -1e-14 || lam_cur(i) <= lam(i)) continue;
            const double a = lam_cur(i) / (lam_cur(i) - lam(i));
            if (a < alpha) {
              alpha = a;
              jdrop = i;
            }
          }
          if (jdrop < 0) break;  // reference already past every boundary
          lam_cur += alpha * (lam - lam_cur);
          lam_cur(jdrop) = 0.0;
        } else {
          lam.minCoeff(&jdrop);
        }
        support.erase(support.begin() + jdrop);
        if (have_cur) {
          Eigen::VectorXd shrunk(lam_cur.size() - 1);
          shrunk << lam_cur.head(jdrop), lam_cur.tail(lam_cur.size() - jdrop - 1);
          lam_cur = shrunk;
        }
        if (support.empty()) return z;
        lam = subspace_fit(support, &feas);
      }
      lam_cur = lam.cwiseMax(0.0);
      have_cur = true;
      const int s = static_cast<int>(support.size());
      const Eigen::MatrixXd A = A_(Eigen::all, support);
      const Eigen::MatrixXd M = M_(Eigen::all, support);
      z = M * lam;
      // Pricing: reduced gradients of the distance objective against the
      // multipliers of the equality rows.
      const Eigen::VectorXd r = z - anchor_;
      const Eigen::VectorXd g_s = 2.0 * (M.transpose() * r);
      const Eigen::MatrixXd At = A.transpose();
      const Eigen::VectorXd eta =
          At.completeOrthogonalDecomposition().solve(g_s);
      const Eigen::VectorXd reduced =
          2.0 * (M_.transpose() * r) - A_.transpose() * eta;
      const double gscale = 1.0 + g_s.cwiseAbs().maxCoeff() + eta.norm();
      int jworst = -1;
      double worst = -1e-9 * gscale;
      for (int j = 0; j < total_cols_; ++j) {
        if (std::binary_search(support.begin(), support.end(), j)) continue;
        if (reduced(j) < worst) {
          worst = reduced(j);
          jworst = j;
        }
      }
      if (jworst < 0) {
        // Make the weights an exact convex combination before reporting:
        // clamp the ~1e-10-level negatives away and renormalize per factor.
        lam = lam.cwiseMax(0.0);
        for (size_t f = 0; f < factor_base_.size(); ++f) {
          const int lo = factor_base_[f];
          const int hi = (f + 1 < factor_base_.size())
                             ? factor_base_[f + 1]
                             : total_cols_;
          double sum = 0.0;
          for (int j = 0; j < s; ++j)
            if (support[j] >= lo && support[j] < hi) sum += lam(j);
          if (sum <= 0.0) continue;
          for (int j = 0; j < s; ++j)
            if (support[j] >= lo && support[j] < hi) lam(j) /= sum;
        }
        z = M * lam;
        *ok = true;
        return z;
      }
      const auto pos =
          std::lower_bound(support.begin(), support.end(), jworst);
      const auto at = pos - support.begin();
      Eigen::VectorXd padded(lam_cur.size() + 1);
      padded << lam_cur.head(at), 0.0, lam_cur.tail(lam_cur.size() - at);
      lam_cur = padded;
      support.insert(pos, jworst);
    }
    return z;
  }

  int factor_col_base(int f) const { return factor_base_[f]; }

  // Exact nonemptiness of the fiber: a zero-cost LP over the weight
  // polytope. Returns the support of a basic feasible point, or nullopt
  // when the target is outside the image by more than ~tol.
  std::optional<std::vector<int>> feasible_basis(double tol) const {
    const auto res =
        lp::solve(A_, b_eq_, Eigen::VectorXd::Zero(total_cols_), 0.1 * tol);
    if (res.status == lp::Status::Infeasible) return std::nullopt;
    std::vector<int> s;
    for (int j = 0; j < total_cols_; ++j)
      if (res.x(j) > 1e-12) s.push_back(j);
    if (s.empty()) s.push_back(0);
    return s;
  }

 private:
  Point anchor_;
  Eigen::MatrixXd A_;  // equality rows: map composed with vertices + simplex rows
  Eigen::MatrixXd M_;  // embedding of vertex columns into the domain space
  std::vector<int> factor_base_;
  int total_cols_ = 0, rows_ = 0;
  Eigen::VectorXd b_eq_;
  double scale_ = 1.0;
};

}  // namespace

std::optional<Point> fiber_point(const FiberSpec& spec,
                                 const SelectionRule& rule, double tol,
                                 SolveStats* stats) {
  if (tol <= 0.0) throw std::invalid_argument("fiber_point: tol must be > 0");
  const int n = spec.body.dim();
  if (spec.map.domain_dim() != n || rule.anchor.size() != n ||
      spec.target.size() != spec.map.range_dim())
    throw std::invalid_argument("fiber_point: dimension mismatch");

  std::vector<Leaf> leaves;
  flatten(spec.body, 0, &leaves);
  bool all_polytopes = true;
  for (const auto& l : leaves) all_polytopes &= l.body->is_polytope();

  const double scale =
      std::max({1.0, rule.anchor.norm(), spec.target.norm(),
                body_scale(spec.body)});

  std::vector<minnorm::Workspace> ws(leaves.size());
  auto project_body = [&](const Point& v) {
    Point out(n);
    for (size_t f = 0; f < leaves.size(); ++f) {
      const auto& l = leaves[f];
      const Eigen::VectorXd slice = v.segment(l.offset, l.body->dim());
      if (l.body->is_polytope()) {
        out.segment(l.offset, l.body->dim()) =
            minnorm::project(l.body->polytope().vertices(), slice, &ws[f]);
      } else {
        out.segment(l.offset, l.body->dim()) =
            geometry::project_point(*l.body, slice);
      }
    }
    return out;
  };

  // The weight-space solve returns clamped, per-factor renormalized convex
  // combinations of body vertices, so membership holds by construction and
  // only the map equation needs checking on that route.
  auto map_ok = [&](const Point& z) {
    return (spec.map.apply(z) - spec.target).lpNorm<Eigen::Infinity>() <= tol;
  };

  // Polytope products first go through the exact weight-space route: a
  // zero-cost LP certifies the fiber nonempty (or empty) outright, and its
  // basic point seeds the active-set solve. The alternating projections
  // below stay as a backstop, and carry the general case.
  std::optional<WeightSpaceQp> qp;
  if (all_polytopes) {
    qp.emplace(leaves, spec.map, spec.target, rule.anchor);
    const auto basis = qp->feasible_basis(tol);
    if (!basis) {
      if (stats) {
        stats->iterations = 0;
        stats->gap = 0.0;
        stats->map_residual = 0.0;
        stats->body_dist = 0.0;
      }
      return std::nullopt;
    }
    bool ok = false;
    const Point z = qp->solve(*basis, &ok);
    if (ok && map_ok(z)) {
      if (stats) {
        stats->iterations = 0;
        stats->gap =
            (spec.map.apply(z) - spec.target).lpNorm<Eigen::Infinity>();
        stats->map_residual = stats->gap;
        stats->body_dist =
            (z - geometry::project_point(spec.body, z)).norm();
      }
      return z;
    }
  }

  const long cap = 100000;
  Point x = rule.anchor;
  Point p = Point::Zero(n), q = Point::Zero(n);
  Point y = x, xb = x;
  double gap = 0.0;
  bool stalled = false;
  long it = 0;
  for (; it < cap; ++it) {
    y = spec.map.project_affine(x + p, spec.target);
    p = x + p - y;
    const Point w = y + q;
    xb = project_body(w);
    q = w - xb;
    gap = (y - xb).norm();
    const double change = (xb - x).norm();
    x = xb;
    if (change <= 1e-12 * scale) {
      stalled = true;
      break;
    }
    // With polytope leaves the weight-space polish below recovers the exact
    // optimum from any near-feasible support, so there is no point grinding
    // the alternating projections all the way down to the stall threshold.
    if (all_polytopes && gap <= 0.5 * tol && it >= 5) break;
  }

  if (stats) stats->iterations = it;

  auto finish = [&](const Point& z) {
    if (stats) {
      stats->gap = gap;
      stats->map_residual =
          (spec.map.apply(z) - spec.target).lpNorm<Eigen::Infinity>();
      stats->body_dist = (z - geometry::project_point(spec.body, z)).norm();
    }
    return z;
  };

  // Candidate recovery: the affine iterate satisfies the map exactly, the
  // body iterate lies in the body exactly, and the support argpoint in the
  // separating direction catches fibers touching the boundary tangentially.
  auto recover = [&]() -> std::optional<Point> {
    struct Candidate {
      Point z;
      double dist;
    };
    std::vector<Candidate> cands;
    auto consider = [&](const Point& z) {
      const double mr =
          (spec.map.apply(z) - spec.target).lpNorm<Eigen::Infinity>();
      const double bd = (z - geometry::project_point(spec.body, z)).norm();
      if (mr <= tol && bd <= tol)
        cands.push_back({z, (z - rule.anchor).norm()});
    };
    consider(y);
    consider(xb);
    if (gap > 1e-15 * scale)
      consider(geometry::support(spec.body, y - xb).argpoint);
    if (cands.empty()) return std::nullopt;
    const auto best = std::min_element(
        cands.begin(), cands.end(),
        [](const Candidate& a, const Candidate& b) { return a.dist < b.dist; });
    return best->z;
  };

  const bool unresolved = gap > tol;
  if (unresolved && !all_polytopes) {
    if (const auto z = recover()) return finish(*z);
    if (stalled) {
      if (stats) {
        stats->gap = gap;
        stats->map_residual =
            (spec.map.apply(xb) - spec.target).lpNorm<Eigen::Infinity>();
        stats->body_dist = 0.0;
      }
      return std::nullopt;
    }
    throw SolverError("fiber solve: no convergence (inter-set distance " +
                      std::to_string(gap) + ")");
  }

  if (all_polytopes) {
    // Second chance for the active-set solve, now seeded from the corrals
    // the alternating projections settled on.
    std::vector<int> seed;
    for (size_t f = 0; f < leaves.size(); ++f) {
      const int base = qp->factor_col_base(static_cast<int>(f));
      for (int idx : ws[f].corral) seed.push_back(base + idx);
    }
    bool ok = false;
    const Point z = qp->solve(seed, &ok);
    if (ok && map_ok(z)) return finish(z);
    if (unresolved) {
      // An LP-certified nonempty fiber that neither solve could settle is a
      // solver failure, not an emptiness certificate.
      if (stats) {
        stats->gap = gap;
        stats->map_residual =
            (spec.map.apply(xb) - spec.target).lpNorm<Eigen::Infinity>();
        stats->body_dist = 0.0;
      }
      throw SolverError("fiber solve: stalled at inter-set distance " +
                        std::to_string(gap));
    }
    // Fall through to the raw iterates when pricing did not settle.
  }

  if (const auto z = recover()) return finish(*z);
  if (stalled && !all_polytopes) return std::nullopt;
  throw SolverError("fiber solve: no feasible point within tolerance");
}

double fiber_diameter(const FiberSpec& spec, int n_dirs, unsigned seed,
                      double tol) {
  if (n_dirs < 2)
    throw std::invalid_argument("fiber_diameter: need at least 2 directions");
  const int n = spec.body.dim();

  // Feasibility first; the base point also joins the extrema collection.
  SelectionRule base_rule{spec.map.pseudo_inverse() * spec.target};
  const auto base = fiber_point(spec, base_rule, tol);
  if (!base) throw InfeasibleError("fiber_diameter: empty fiber");

  std::vector<Leaf> leaves;
  flatten(spec.body, 0, &leaves);
  bool all_polytopes = true;
  for (const auto& l : leaves) all_polytopes &= l.body->is_polytope();

  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto random_dir = [&]() {
    Eigen::VectorXd v(n);
    do {
      for (int i = 0; i < n; ++i) v(i) = gauss(rng);
    } while (v.norm() < 1e-8);
    return (v / v.norm()).eval();
  };

  std::vector<Point> extrema{*base};
  if (all_polytopes) {
    // Exact support extrema: one LP per direction over the weight polytope.
    const int m = spec.map.range_dim();
    const int nf = static_cast<int>(leaves.size());
    int total = 0;
    std::vector<Eigen::MatrixXd> G(nf);
    for (int f = 0; f < nf; ++f) {
      const auto& P = leaves[f].body->polytope();
      G[f] = spec.map.matrix().middleCols(leaves[f].offset, P.dim()) *
             P.vertices();
      total += P.vertex_count();
    }
    Eigen::MatrixXd A(m + nf, total);
    A.setZero();
    Eigen::MatrixXd M(n, total);
    M.setZero();
    int col = 0;
    for (int f = 0; f < nf; ++f) {
      const auto& P = leaves[f].body->polytope();
      for (int j = 0; j < P.vertex_count(); ++j, ++col) {
        A.col(col).head(m) = G[f].col(j);
        A(m + f, col) = 1.0;
        M.block(leaves[f].offset, col, P.dim(), 1) = P.vertex(j);
      }
    }
    Eigen::VectorXd b = Eigen::VectorXd::Ones(m + nf);
    b.head(m) = spec.target;
    for (int i = 0; i < n_dirs; ++i) {
      const Eigen::VectorXd dir = random_dir();
      for (double sgn : {1.0, -1.0}) {
        const Eigen::VectorXd c = -sgn * (M.transpose() * dir);
        const auto res = lp::solve(A, b, c);
        if (res.status == lp::Status::Optimal) extrema.push_back(M * res.x);
      }
    }
  } else {
    const double reach = 1e4 * std::max(1.0, body_scale(spec.body));
    for (int i = 0; i < n_dirs; ++i) {
      const Eigen::VectorXd dir = random_dir();
      for (double sgn : {1.0, -1.0}) {
        SelectionRule far{*base + sgn * reach * dir};
        // A probe that cannot settle (fiber tangent to the boundary) simply
        // contributes no extremum; the result stays a valid lower bound.
        std::optional<Point> pt;
        try {
          pt = fiber_point(spec, far, tol);
        } catch (const SolverError&) {
        }
        if (pt) extrema.push_back(*pt);
      }
    }
  }

  double diam = 0.0;
  for (size_t i = 0; i < extrema.size(); ++i) {
    for (size_t j = i + 1; j < extrema.size(); ++j)
      diam = std::max(diam, (extrema[i] - extrema[j]).norm());
  }
  return diam;
}

double dist_to_fiber(const Point& z, const FiberSpec& spec, double tol) {
  const auto p = fiber_point(spec, SelectionRule{z}, tol);
  if (!p) throw InfeasibleError("dist_to_fiber: empty fiber");
  return (z - *p).norm();
}

}  // namespace minksplit::fibers
