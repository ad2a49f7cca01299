#include "vrdm/determinants.hpp"

#include <algorithm>
#include <stdexcept>

namespace vrdm {

DeterminantBasis::DeterminantBasis(int r_spin_, int n_electrons_, int sz2_)
    : r_spin(r_spin_), n_electrons(n_electrons_), sz2(sz2_) {
  if (r_spin < 0 || r_spin > 62)
    throw std::invalid_argument("determinant basis: r_spin out of range");
  if (n_electrons < 0 || n_electrons > r_spin)
    throw std::invalid_argument("determinant basis: bad electron count");
  if (n_electrons == 0) {
    if (sz2 == 0) dets.push_back(0);
    return;
  }
  // Gosper's hack over all n-subsets, filtered by Sz; masks come out
  // ascending by construction.
  const DetMask limit = (r_spin == 62) ? ~0ULL : (1ULL << r_spin);
  DetMask m = (1ULL << n_electrons) - 1ULL;
  while (m < limit) {
    if (det_sz2(m, r_spin) == sz2) dets.push_back(m);
    const DetMask c = m & (~m + 1ULL);
    const DetMask r = m + c;
    m = (((r ^ m) >> 2) / c) | r;
    if (r == 0) break;
  }
}

std::int64_t DeterminantBasis::find(DetMask m) const {
  const auto it = std::lower_bound(dets.begin(), dets.end(), m);
  if (it == dets.end() || *it != m) return -1;
  return it - dets.begin();
}

} // namespace vrdm
