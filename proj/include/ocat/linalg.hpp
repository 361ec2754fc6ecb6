#pragma once

#include <Eigen/Dense>
#include <optional>

namespace ocat {

// det(A) = sign * exp(log_abs). A matrix whose pivot vanishes (relative to
// the largest entry, at working precision) is reported as singular with
// sign = 0 and log_abs = -inf.
struct LogDet {
  double log_abs = 0.0;
  int sign = 1;
  bool singular = false;

  double value() const;
  double abs() const;
};

// Doolittle LU with partial (row) pivoting. Holds the packed factors and the
// row permutation so that solves can reuse the factorization. Pivots below
// n * eps * scale count as zero; scale defaults to the largest |entry|.
class PivotedLU {
 public:
  explicit PivotedLU(Eigen::MatrixXd a, std::optional<double> scale = std::nullopt);

  const LogDet& log_det() const noexcept { return det_; }
  // Solves A^T x = b for each column of `b`; requires a non-singular A.
  Eigen::MatrixXd solve_transposed(const Eigen::MatrixXd& b) const;

 private:
  Eigen::MatrixXd lu_;
  Eigen::VectorXi perm_;  // row i of PA is row perm_(i) of A
  LogDet det_;
};

LogDet log_determinant(const Eigen::MatrixXd& a);

}  // namespace ocat
