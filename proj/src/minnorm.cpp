#include "minksplit/minnorm.hpp"

#include <algorithm>
#include <stdexcept>

namespace minksplit::minnorm {

namespace {

// Minimizes ||P alpha|| over affine weights (sum alpha = 1, sign-free),
// where P stacks the corral points as columns.  Solved through the
// translated least-squares system so rank-deficient corrals degrade to the
// minimum-norm weight vector instead of blowing up.
Eigen::VectorXd affine_minimizer(const Eigen::MatrixXd& P) {
  const int s = static_cast<int>(P.cols());
  if (s == 1) return Eigen::VectorXd::Ones(1);
  Eigen::MatrixXd B(P.rows(), s - 1);
  for (int j = 1; j < s; ++j) B.col(j - 1) = P.col(j) - P.col(0);
  Eigen::VectorXd y =
      B.completeOrthogonalDecomposition().solve(-P.col(0)).eval();
  Eigen::VectorXd alpha(s);
  alpha(0) = 1.0 - y.sum();
  alpha.tail(s - 1) = y;
  return alpha;
}

}  // namespace

Eigen::VectorXd project(const Eigen::MatrixXd& V, const Eigen::VectorXd& q,
                        Workspace* ws, double gap_tol, long max_iter) {
  const int d = static_cast<int>(V.rows());
  const int k = static_cast<int>(V.cols());
  if (k == 0) throw std::invalid_argument("minnorm: empty point set");
  if (q.size() != d) throw std::invalid_argument("minnorm: dimension mismatch");

  Eigen::VectorXd norms2(k);
  for (int j = 0; j < k; ++j) norms2(j) = (V.col(j) - q).squaredNorm();
  const double scale = std::max(1.0, norms2.maxCoeff());

  std::vector<int> S;
  Eigen::VectorXd lam;
  if (ws && !ws->corral.empty() &&
      ws->lambda.size() == static_cast<long>(ws->corral.size())) {
    bool ok = true;
    for (int idx : ws->corral) ok = ok && idx >= 0 && idx < k;
    if (ok && ws->lambda.minCoeff() >= 0.0 && ws->lambda.sum() > 0.5) {
      S = ws->corral;
      lam = ws->lambda / ws->lambda.sum();
    }
  }
  if (S.empty()) {
    int j0 = 0;
    norms2.minCoeff(&j0);
    S = {j0};
    lam = Eigen::VectorXd::Ones(1);
  }

  auto corral_matrix = [&](const std::vector<int>& idx) {
    Eigen::MatrixXd P(d, idx.size());
    for (size_t j = 0; j < idx.size(); ++j) P.col(j) = V.col(idx[j]) - q;
    return P;
  };

  Eigen::VectorXd x;
  long steps = 0;
  int stalls = 0;
  while (true) {
    // Minor cycles: restore the corral property (affine minimizer of the
    // active set is a proper convex combination).
    while (true) {
      if (++steps > max_iter)
        throw std::runtime_error("minnorm: iteration limit reached");
      Eigen::MatrixXd P = corral_matrix(S);
      Eigen::VectorXd alpha = affine_minimizer(P);
      if (alpha.minCoeff() >= -1e-12) {
        lam = alpha.cwiseMax(0.0);
        lam /= lam.sum();
        x = P * lam;
        break;
      }
      double theta = 1.0;
      for (int j = 0; j < alpha.size(); ++j) {
        if (alpha(j) < lam(j))
          theta = std::min(theta, lam(j) / (lam(j) - alpha(j)));
      }
      if (theta < 1e-15) {
        ++stalls;
        if (stalls > 2) {
          lam = lam.cwiseMax(0.0);
          lam /= lam.sum();
          x = P * lam;
          break;
        }
      }
      lam = (1.0 - theta) * lam + theta * alpha;
      std::vector<int> S2;
      std::vector<double> l2;
      for (int j = 0; j < lam.size(); ++j) {
        if (lam(j) > 1e-14) {
          S2.push_back(S[j]);
          l2.push_back(lam(j));
        }
      }
      if (S2.empty()) {
        int jmax = 0;
        lam.maxCoeff(&jmax);
        S2.push_back(S[jmax]);
        l2.push_back(1.0);
      }
      S = std::move(S2);
      lam = Eigen::Map<Eigen::VectorXd>(l2.data(), l2.size());
    }

    const double xx = x.squaredNorm();
    // The corral property makes every iterate the exact projection onto the
    // hull of its corral, so the loop lands on the optimal face and the gap
    // collapses to roundoff; this first test only catches numeric zero.
    if (xx <= 1e-26 * scale) break;
    Eigen::VectorXd scores = V.transpose() * x;
    scores.array() -= q.dot(x);
    int j = 0;
    const double smin = scores.minCoeff(&j);
    // A gap-based stop certifies the distance only to sqrt(gap * scale), so
    // the floor sits at roundoff level and the usual exits are the exact
    // ones: numeric zero above, or the entering vertex repeating below.
    if (xx - smin <= std::max(gap_tol, 1e-14) * scale) break;
    if (std::find(S.begin(), S.end(), j) != S.end()) break;
    S.push_back(j);
    Eigen::VectorXd lam2(lam.size() + 1);
    lam2.head(lam.size()) = lam;
    lam2(lam.size()) = 0.0;
    lam = std::move(lam2);
  }

  if (ws) {
    ws->corral = S;
    ws->lambda = lam;
  }
  // x lives in the translated space; the untranslated point is the same
  // convex combination of the original columns.
  Eigen::VectorXd out = Eigen::VectorXd::Zero(d);
  for (size_t j = 0; j < S.size(); ++j) out += lam(j) * V.col(S[j]);
  return out;
}

}  // namespace minksplit::minnorm
