#pragma once

#include <cstdint>
#include <vector>

namespace vrdm {

// Spin-orbital convention used across the whole code base:
// spin orbital i = 2*spatial + (0 for alpha, 1 for beta), and a
// determinant bit mask m represents |m> = prod_{i ascending} a+_i |0>
// with the smallest index applied leftmost (Jordan-Wigner phases count
// occupied orbitals below i).
using DetMask = std::uint64_t;

inline int popcount(DetMask m) { return __builtin_popcountll(m); }

inline bool occupied(DetMask m, int p) { return (m >> p) & 1ULL; }

// phase (-1)^(number of occupied orbitals with index < p)
inline int jw_phase(DetMask m, int p) {
  const DetMask below = m & ((1ULL << p) - 1ULL);
  return (popcount(below) & 1) ? -1 : 1;
}

// a_p |m>; returns 0 sign if the orbital is empty
inline int apply_annihilate(DetMask& m, int p) {
  if (!occupied(m, p)) return 0;
  const int s = jw_phase(m, p);
  m &= ~(1ULL << p);
  return s;
}

// a+_p |m>; returns 0 sign if the orbital is filled
inline int apply_create(DetMask& m, int p) {
  if (occupied(m, p)) return 0;
  const int s = jw_phase(m, p);
  m |= (1ULL << p);
  return s;
}

// twice the Sz of a determinant under the even=alpha/odd=beta convention
inline int det_sz2(DetMask m, int r_spin) {
  int sz2 = 0;
  for (int p = 0; p < r_spin; ++p)
    if (occupied(m, p)) sz2 += (p % 2 == 0) ? 1 : -1;
  return sz2;
}

// All determinants of n_electrons in r_spin spin orbitals with fixed
// 2*Sz, sorted ascending by mask value.
struct DeterminantBasis {
  int r_spin = 0;
  int n_electrons = 0;
  int sz2 = 0;
  std::vector<DetMask> dets;

  DeterminantBasis() = default;
  DeterminantBasis(int r_spin_, int n_electrons_, int sz2_);

  std::size_t size() const { return dets.size(); }
  // index of a mask in dets, or -1
  std::int64_t find(DetMask m) const;
};

} // namespace vrdm
