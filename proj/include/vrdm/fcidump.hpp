#pragma once

#include <string>

#include "vrdm/integrals.hpp"

namespace vrdm {

struct FcidumpData {
  MolecularIntegrals integrals;
  int n_electrons = 0;
  int ms2 = 0;
};

// Standard FCIDUMP text interchange: header with NORB/NELEC/MS2, then
// "value i j k l" lines in chemists' notation with 1-based indices;
// (i j 0 0) carries h_ij = T+V, (0 0 0 0) carries E_nn. Only
// symmetry-unique entries are written. Integrals must be orthonormal.
void fcidump_write(const std::string& path, const MolecularIntegrals& ints,
                   int n_electrons, int ms2 = 0);

// Throws std::runtime_error carrying the offending line number on
// malformed headers or out-of-range indices.
FcidumpData fcidump_read(const std::string& path);

} // namespace vrdm
