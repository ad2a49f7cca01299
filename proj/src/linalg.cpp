#include "vrdm/linalg.hpp"

#include <stdexcept>

#if __has_include(<lapacke.h>)
#define VRDM_HAVE_LAPACKE 1
#include <lapacke.h>
#else
#define VRDM_HAVE_LAPACKE 0
#endif

namespace vrdm {

void symmetric_eig(const Mat& a, Vec& w, Mat& v) {
  const int n = static_cast<int>(a.rows());
  w.resize(n);
  if (n == 0) {
    v.resize(0, 0);
    return;
  }
#if VRDM_HAVE_LAPACKE
  v = a;
  const int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, v.data(), n,
                                  w.data());
  if (info != 0) throw std::runtime_error("dsyevd failed to converge");
#else
  Eigen::SelfAdjointEigenSolver<Mat> es(a);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("eigendecomposition failed");
  w = es.eigenvalues();
  v = es.eigenvectors();
#endif
}

} // namespace vrdm
