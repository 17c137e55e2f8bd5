#pragma once

#include <Eigen/Dense>
#include <vector>

namespace minksplit::minnorm {

// Corral state of the Wolfe iteration: active column indices of V and their
// convex weights.  Reusable across nearby queries (warm start).
struct Workspace {
  std::vector<int> corral;
  Eigen::VectorXd lambda;
};

// Returns the point of conv{columns of V} nearest to q (Wolfe's
// minimum-norm-point algorithm).  Terminates when the support-function
// duality gap falls below gap_tol relative to the data scale.  When `ws` is
// given it seeds the corral and receives the final one.  The result is a
// convex combination of columns, so it lies in the hull exactly.
Eigen::VectorXd project(const Eigen::MatrixXd& V, const Eigen::VectorXd& q,
                        Workspace* ws = nullptr, double gap_tol = 0.0,
                        long max_iter = 100000);

}  // namespace minksplit::minnorm
