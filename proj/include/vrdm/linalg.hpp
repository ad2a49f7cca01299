#pragma once

#include <Eigen/Dense>

namespace vrdm {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// Eigendecomposition of a symmetric matrix, LAPACK dsyevd when available
// (much faster than Eigen's own solver for the SDP block sizes we hit).
// Eigenvalues ascending; A = V diag(w) V^T.
void symmetric_eig(const Mat& a, Vec& w, Mat& v);

// Neumaier compensated sum; used where residuals are recomputed in
// extended-precision accumulation.
class CompensatedSum {
public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

} // namespace vrdm
