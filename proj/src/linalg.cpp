#include "ocat/linalg.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include "ocat/errors.hpp"

namespace ocat {

double LogDet::value() const { return singular ? 0.0 : sign * std::exp(log_abs); }
double LogDet::abs() const { return singular ? 0.0 : std::exp(log_abs); }

PivotedLU::PivotedLU(Eigen::MatrixXd a, std::optional<double> scale) : lu_(std::move(a)) {
  const Eigen::Index n = lu_.rows();
  if (n != lu_.cols()) throw ConfigError("matrix", "determinant of a non-square matrix");
  perm_.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) perm_(i) = static_cast<int>(i);

  const double s = scale ? *scale : (n > 0 ? lu_.cwiseAbs().maxCoeff() : 0.0);
  const double tiny = s * n * std::numeric_limits<double>::epsilon();
  double log_abs = 0.0;
  int sign = 1;

  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index p = k;
    lu_.col(k).tail(n - k).cwiseAbs().maxCoeff(&p);
    p += k;
    const double pivot = lu_(p, k);
    if (!(std::abs(pivot) > tiny)) {
      det_ = {-std::numeric_limits<double>::infinity(), 0, true};
      return;
    }
    if (p != k) {
      lu_.row(p).swap(lu_.row(k));
      std::swap(perm_(p), perm_(k));
      sign = -sign;
    }
    if (pivot < 0.0) sign = -sign;
    log_abs += std::log(std::abs(pivot));
    if (k + 1 < n) {
      const Eigen::Index m = n - k - 1;
      lu_.col(k).tail(m) /= pivot;
      lu_.bottomRightCorner(m, m).noalias() -= lu_.col(k).tail(m) * lu_.row(k).tail(m);
    }
  }
  det_ = {log_abs, sign, false};
}

Eigen::MatrixXd PivotedLU::solve_transposed(const Eigen::MatrixXd& b) const {
  if (det_.singular) throw NumericalError("solve with a singular matrix");
  // PA = LU  =>  A^T = U^T L^T P, so A^T x = b  <=>  U^T y = b, L^T z = y, x = P^T z.
  Eigen::MatrixXd y = lu_.triangularView<Eigen::Upper>().transpose().solve(b);
  Eigen::MatrixXd z = lu_.triangularView<Eigen::UnitLower>().transpose().solve(y);
  Eigen::MatrixXd x(z.rows(), z.cols());
  for (Eigen::Index i = 0; i < z.rows(); ++i) x.row(perm_(i)) = z.row(i);
  return x;
}

LogDet log_determinant(const Eigen::MatrixXd& a) { return PivotedLU(a).log_det(); }

}  // namespace ocat
