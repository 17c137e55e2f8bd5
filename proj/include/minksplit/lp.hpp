#pragma once

#include <Eigen/Dense>

namespace minksplit::lp {

enum class Status { Optimal, Infeasible, Unbounded };

struct Result {
  Status status = Status::Infeasible;
  Eigen::VectorXd x;           // primal solution, valid when status == Optimal
  double value = 0.0;          // c'x at the solution
  double infeasibility = 0.0;  // phase-1 residual; > 0 when no feasible point was found
};

// Solves  min c'x  subject to  A x = b,  x >= 0  (dense two-phase simplex,
// Bland's rule).  `tol` is the pivot/reduced-cost threshold.  Problems with
// redundant rows are handled; free variables must be split by the caller.
Result solve(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
             const Eigen::VectorXd& c, double tol = 1e-10);

}  // namespace minksplit::lp
