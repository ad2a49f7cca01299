#pragma once

#include <Eigen/Dense>
#include <vector>

#include "vrdm/basis.hpp"
#include "vrdm/geometry.hpp"

namespace vrdm {

// Rank-4 electron repulsion tensor in chemists' notation (pq|st),
// stored dense over spatial orbitals.
class EriTensor {
public:
  EriTensor() = default;
  explicit EriTensor(int n) : n_(n), data_(static_cast<std::size_t>(n) * n * n * n, 0.0) {}

  int n() const { return n_; }
  double operator()(int p, int q, int s, int t) const {
    return data_[idx(p, q, s, t)];
  }
  double& operator()(int p, int q, int s, int t) { return data_[idx(p, q, s, t)]; }
  const std::vector<double>& raw() const { return data_; }

private:
  std::size_t idx(int p, int q, int s, int t) const {
    return ((static_cast<std::size_t>(p) * n_ + q) * n_ + s) * n_ + t;
  }
  int n_ = 0;
  std::vector<double> data_;
};

// One- and two-electron integrals over a set of (possibly orthonormalized)
// spatial orbitals, plus the nuclear repulsion constant.
struct MolecularIntegrals {
  int n_orbitals = 0;
  Eigen::MatrixXd overlap;   // S
  Eigen::MatrixXd kinetic;   // T
  Eigen::MatrixXd nuclear;   // V (electron-nuclear attraction, negative)
  EriTensor eri;             // (pq|st)
  double e_nuclear = 0.0;    // E_nn
  bool orthonormal = false;

  Eigen::MatrixXd core_hamiltonian() const { return kinetic + nuclear; }
};

// Boys function F0(t) = (1/2) sqrt(pi/t) erf(sqrt(t)), F0(0) = 1.
double boys_f0(double t);

// All integrals over contracted s shells, closed form.
MolecularIntegrals compute_integrals(const Geometry& g,
                                     const std::vector<ContractedShell>& shells);

// Symmetric (Loewdin) orthonormalization: X = S^(-1/2) applied to all
// integrals; throws if the smallest eigenvalue of S is below 1e-8.
MolecularIntegrals orthonormalize(const MolecularIntegrals& ints);

// General orthogonal one-particle transform of all integrals, used both
// by orthonormalize and by the MO transformation.
MolecularIntegrals transform_integrals(const MolecularIntegrals& ints,
                                       const Eigen::MatrixXd& x);

// Max deviation from the 8-fold (pq|st) permutational symmetry.
double eri_symmetry_defect(const EriTensor& eri);

} // namespace vrdm
