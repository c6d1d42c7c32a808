#pragma once

#include <Eigen/Dense>

namespace ftamp::lp {

enum class Status { Optimal, Infeasible, Unbounded };

struct Result {
  Status status = Status::Infeasible;
  double objective = 0.0;
  Eigen::VectorXd x;
};

/// maximize c'x  subject to  A x = b,  x >= 0.
///
/// Dense two-phase simplex with Bland's rule. Intended for the handful of
/// rows (<= 7) and tens of columns that contact-wrench problems produce.
Result maximize(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::VectorXd& c,
                double tol = 1e-10);

}  // namespace ftamp::lp
