#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "vrdm/combinatorics.hpp"
#include "vrdm/determinants.hpp"
#include "vrdm/integrals.hpp"

namespace vrdm {

// Spin-orbital view of spatial integrals under the interleaved
// convention (even = alpha, odd = beta).
struct SpinIntegrals {
  int r_spin = 0;
  Eigen::MatrixXd h; // core hamiltonian, r_spin x r_spin

  explicit SpinIntegrals(const MolecularIntegrals& ints);

  // chemists' (pq|st) over spin orbitals
  double eri(int p, int q, int s, int t) const;
  // antisymmetrized physicists' <pq||st>
  double eri_antisym(int p, int q, int s, int t) const {
    return eri(p, s, q, t) - eri(p, t, q, s);
  }

private:
  const EriTensor* spatial_;
};

struct FciResult {
  double energy = 0.0; // includes E_nn
  double residual_norm = 0.0;
  int iterations = 0;
  DeterminantBasis basis;
  Eigen::VectorXd ci;
};

struct FciConfig {
  int sz2 = 0;
  std::size_t max_determinants = 1000000;
  std::size_t dense_threshold = 2000; // dense diagonalization below this
  double residual_tol = 1e-11;
  int max_davidson_iter = 400;
};

// Sparse Hamiltonian over a determinant basis (Slater-Condon rules).
Eigen::SparseMatrix<double> build_hamiltonian(const DeterminantBasis& basis,
                                              const SpinIntegrals& si);

// Lowest eigenpair of the Sz-sector Hamiltonian; dense below the
// threshold, Davidson above. The returned energy includes E_nn.
FciResult fci_ground_state(const MolecularIntegrals& ints, int n_electrons,
                           const FciConfig& cfg = {});

// RDMs from a CI vector. Raw normalization:
//   gamma[p,q]        = <a+_p a_q>                       (trace N)
//   m2[(pq),(st)]     = <a+_p a+_q a_t a_s>, p<q, s<t    (trace C(N,2))
//   m3[(pqr),(stu)]   = <a+_p a+_q a+_r a_u a_t a_s>     (trace C(N,3))
struct RawRdms {
  int r_spin = 0;
  int n_electrons = 0;
  Eigen::MatrixXd gamma;
  Eigen::MatrixXd m2;
  Eigen::MatrixXd m3; // empty unless requested
};

RawRdms fci_rdms(const DeterminantBasis& basis, const Eigen::VectorXd& ci,
                 bool with_three_body = false);

// Natural occupations on [0,1]: eigenvalues of the spin-summed spatial
// 1-RDM divided by 2, sorted descending.
Eigen::VectorXd natural_occupations(const Eigen::MatrixXd& gamma);

} // namespace vrdm
