#include "minksplit/lp.hpp"

#include <stdexcept>
#include <vector>

namespace minksplit::lp {

namespace {

// Row-reduces the tableau so that column `col` becomes the unit vector with
// a one in `row`.  The cost row is the last row and rides along.
void pivot(Eigen::MatrixXd& T, std::vector<int>& basis, int row, int col) {
  T.row(row) /= T(row, col);
  for (int i = 0; i < T.rows(); ++i) {
    if (i == row) continue;
    const double f = T(i, col);
    if (f != 0.0) T.row(i) -= f * T.row(row);
  }
  basis[row] = col;
}

// Runs one simplex phase on T (m constraint rows + 1 cost row; columns =
// variables + rhs).  Columns with blocked[j] set never enter the basis.
// Bland's smallest-index rule on ties keeps degenerate problems terminating.
Status run_phase(Eigen::MatrixXd& T, std::vector<int>& basis,
                 const std::vector<bool>& blocked, double tol) {
  const int m = static_cast<int>(T.rows()) - 1;
  const int n = static_cast<int>(T.cols()) - 1;
  const long cap = 2000L + 200L * static_cast<long>(n + m);
  for (long iter = 0; iter < cap; ++iter) {
    int enter = -1;
    for (int j = 0; j < n; ++j) {
      if (!blocked[j] && T(m, j) < -tol) {
        enter = j;
        break;
      }
    }
    if (enter < 0) return Status::Optimal;
    int leave = -1;
    double best = 0.0;
    for (int i = 0; i < m; ++i) {
      if (T(i, enter) > tol) {
        const double ratio = T(i, n) / T(i, enter);
        if (leave < 0 || ratio < best - tol ||
            (ratio < best + tol && basis[i] < basis[leave])) {
          leave = i;
          best = ratio;
        }
      }
    }
    if (leave < 0) return Status::Unbounded;
    pivot(T, basis, leave, enter);
  }
  throw std::runtime_error("lp: simplex iteration limit reached");
}

// Rebuilds the cost row for objective `c`: reduced costs c_j - c_B' T_j and
// rhs entry -c_B' x_B, so the running objective is -T(m, n).
void set_cost_row(Eigen::MatrixXd& T, const std::vector<int>& basis,
                  const Eigen::VectorXd& c) {
  const int m = static_cast<int>(T.rows()) - 1;
  T.row(m).setZero();
  T.row(m).head(c.size()) = c.transpose();
  for (int i = 0; i < m; ++i) {
    const double cb = basis[i] < c.size() ? c(basis[i]) : 0.0;
    if (cb != 0.0) T.row(m) -= cb * T.row(i);
  }
}

}  // namespace

Result solve(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
             const Eigen::VectorXd& c, double tol) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  if (b.size() != m || c.size() != n)
    throw std::invalid_argument("lp: dimension mismatch");
  if (!A.allFinite() || !b.allFinite() || !c.allFinite())
    throw std::invalid_argument("lp: non-finite input");

  // Phase 1: minimize the sum of artificial variables.  Rows are flipped so
  // the rhs is nonnegative and the artificial basis starts feasible.
  Eigen::MatrixXd T(m + 1, n + m + 1);
  T.setZero();
  T.block(0, 0, m, n) = A;
  T.block(0, n, m, m).setIdentity();
  T.col(n + m).head(m) = b;
  for (int i = 0; i < m; ++i) {
    if (b(i) < 0.0) T.row(i) = -T.row(i).eval();
  }
  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) basis[i] = n + i;
  Eigen::VectorXd phase1_cost = Eigen::VectorXd::Zero(n + m);
  phase1_cost.tail(m).setOnes();
  set_cost_row(T, basis, phase1_cost);

  std::vector<bool> blocked(n + m, false);
  run_phase(T, basis, blocked, tol);

  Result res;
  res.infeasibility = -T(m, n + m);
  if (res.infeasibility > 10.0 * tol * (1.0 + b.cwiseAbs().maxCoeff())) {
    res.status = Status::Infeasible;
    return res;
  }

  // Drive leftover artificials out of the basis; a row that offers no pivot
  // is redundant and gets dropped before phase 2.
  std::vector<int> keep;
  for (int i = 0; i < m; ++i) {
    if (basis[i] < n) {
      keep.push_back(i);
      continue;
    }
    int col = -1;
    for (int j = 0; j < n; ++j) {
      if (std::abs(T(i, j)) > tol) {
        col = j;
        break;
      }
    }
    if (col >= 0) {
      pivot(T, basis, i, col);
      keep.push_back(i);
    }
  }

  const int m2 = static_cast<int>(keep.size());
  Eigen::MatrixXd T2(m2 + 1, n + 1);
  std::vector<int> basis2(m2);
  for (int i = 0; i < m2; ++i) {
    T2.row(i).head(n) = T.row(keep[i]).head(n);
    T2(i, n) = T(keep[i], n + m);
    basis2[i] = basis[keep[i]];
  }
  set_cost_row(T2, basis2, c);

  std::vector<bool> blocked2(n, false);
  const Status st = run_phase(T2, basis2, blocked2, tol);
  if (st == Status::Unbounded) {
    res.status = Status::Unbounded;
    return res;
  }

  res.status = Status::Optimal;
  res.x = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < m2; ++i) res.x(basis2[i]) = T2(i, n);
  res.value = c.dot(res.x);
  res.infeasibility = (A * res.x - b).lpNorm<Eigen::Infinity>();
  return res;
}

}  // namespace minksplit::lp
