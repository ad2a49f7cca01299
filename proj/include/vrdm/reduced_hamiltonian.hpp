#pragma once

#include <Eigen/Dense>

#include "vrdm/combinatorics.hpp"
#include "vrdm/fci.hpp"
#include "vrdm/integrals.hpp"

namespace vrdm {

// Pair-basis matrix of a one-body operator lifted to two particles:
//   [g]_{(pq),(st)} = g_ps d_qt + g_qt d_ps - g_pt d_qs - g_qs d_pt.
// Under the raw normalization Tr(lift(g) m2) = (N-1) Tr(g gamma).
Eigen::MatrixXd pair_one_body_lift(const Eigen::MatrixXd& g);

// Antisymmetrized two-electron repulsion matrix over spin-orbital pairs,
// [V]_{(pq),(st)} = <pq|st> - <pq|ts> (physicists' notation).
Eigen::MatrixXd pair_repulsion_matrix(const MolecularIntegrals& ints);

// Two-electron reduced Hamiltonian in the antisymmetric spin-orbital
// pair basis: K = (N/2) lift(h) + C(N,2) V. With the trace-one 2-RDM,
// E_elec = Tr(K 2D); with the raw m2, E_elec = Tr(K m2)/C(N,2).
struct ReducedHamiltonian {
  int n_electrons = 0;
  int r_spin = 0;
  double e_nuclear = 0.0;
  Eigen::MatrixXd k;        // pair basis, C(r,2) x C(r,2)
  Eigen::MatrixXd v_pair;   // repulsion part alone (for <1/r12>)

  int pair_dim() const { return static_cast<int>(k.rows()); }
  double pairs() const { return static_cast<double>(binomial(n_electrons, 2)); }

  // electronic + nuclear energy of a raw-normalized m2
  double energy(const Eigen::MatrixXd& m2) const {
    return (k.array() * m2.array()).sum() / pairs() + e_nuclear;
  }
};

ReducedHamiltonian build_reduced_hamiltonian(const MolecularIntegrals& ints,
                                             int n_electrons);

} // namespace vrdm
