#include "ftamp/cone_lp.hpp"

#include <limits>
#include <vector>

namespace ftamp::lp {
namespace {

// Tableau layout: rows [0, m) are constraints, row m is the reduced-cost row
// for the current objective. The last column holds the right-hand side.
class Tableau {
 public:
  Tableau(Eigen::MatrixXd t, std::vector<int> basis) : t_(std::move(t)), basis_(std::move(basis)) {}

  int rows() const { return static_cast<int>(t_.rows()) - 1; }
  int cols() const { return static_cast<int>(t_.cols()) - 1; }
  Eigen::MatrixXd& data() { return t_; }
  std::vector<int>& basis() { return basis_; }

  void pivot(int row, int col) {
    t_.row(row) /= t_(row, col);
    for (int r = 0; r < t_.rows(); ++r) {
      if (r == row) continue;
      const double f = t_(r, col);
      if (f != 0.0) t_.row(r) -= f * t_.row(row);
    }
    basis_[row] = col;
  }

  // Runs Bland's rule on columns [0, allowed_cols). Returns false when unbounded.
  bool optimize(int allowed_cols, double tol) {
    const int m = rows();
    const int rhs = cols();
    for (int iter = 0; iter < 10000; ++iter) {
      int enter = -1;
      for (int j = 0; j < allowed_cols; ++j) {
        if (t_(m, j) > tol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int r = 0; r < m; ++r) {
        const double a = t_(r, enter);
        if (a <= tol) continue;
        const double ratio = t_(r, rhs) / a;
        if (ratio < best - tol || (ratio <= best + tol && leave >= 0 && basis_[r] < basis_[leave])) {
          best = ratio;
          leave = r;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
    return true;
  }

 private:
  Eigen::MatrixXd t_;
  std::vector<int> basis_;
};

}  // namespace

Result maximize(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::VectorXd& c, double tol) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  Result result;

  // Phase 1: artificial variables n..n+m-1, maximize -sum(artificials).
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m + 1, n + m + 1);
  std::vector<int> basis(m);
  for (int r = 0; r < m; ++r) {
    const double sign = b(r) < 0.0 ? -1.0 : 1.0;
    t.block(r, 0, 1, n) = sign * A.row(r);
    t(r, n + r) = 1.0;
    t(r, n + m) = sign * b(r);
    basis[r] = n + r;
  }
  for (int r = 0; r < m; ++r) t.row(m) += t.row(r);
  for (int r = 0; r < m; ++r) t(m, n + r) = 0.0;

  Tableau tab(std::move(t), std::move(basis));
  tab.optimize(n, tol);
  Eigen::MatrixXd& T = tab.data();
  const double scale = 1.0 + b.cwiseAbs().maxCoeff();
  if (T(m, n + m) > 1e-9 * scale) {
    result.status = Status::Infeasible;
    return result;
  }

  // Drive remaining artificials out of the basis where possible.
  for (int r = 0; r < m; ++r) {
    if (tab.basis()[r] < n) continue;
    for (int j = 0; j < n; ++j) {
      if (std::abs(T(r, j)) > 1e-9) {
        tab.pivot(r, j);
        break;
      }
    }
  }

  // Phase 2: reduced costs for the true objective.
  T.row(m).setZero();
  for (int j = 0; j < n; ++j) T(m, j) = c(j);
  for (int r = 0; r < m; ++r) {
    const int bv = tab.basis()[r];
    if (bv < n && c(bv) != 0.0) T.row(m) -= c(bv) * T.row(r);
  }
  if (!tab.optimize(n, tol)) {
    result.status = Status::Unbounded;
    return result;
  }

  result.status = Status::Optimal;
  result.x = Eigen::VectorXd::Zero(n);
  for (int r = 0; r < m; ++r) {
    const int bv = tab.basis()[r];
    if (bv < n) result.x(bv) = T(r, n + m);
  }
  result.objective = c.dot(result.x);
  return result;
}

}  // namespace ftamp::lp
