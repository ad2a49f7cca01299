#include "vrdm/reduced_hamiltonian.hpp"

#include <stdexcept>

namespace vrdm {

Eigen::MatrixXd pair_one_body_lift(const Eigen::MatrixXd& g) {
  const int r = static_cast<int>(g.rows());
  PairIndexer pairs(r);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(pairs.size(), pairs.size());
  for (int ij = 0; ij < pairs.size(); ++ij) {
    const auto [p, q] = pairs.pair(ij);
    for (int kl = 0; kl < pairs.size(); ++kl) {
      const auto [s, t] = pairs.pair(kl);
      double v = 0.0;
      if (q == t) v += g(p, s);
      if (p == s) v += g(q, t);
      if (q == s) v -= g(p, t);
      if (p == t) v -= g(q, s);
      out(ij, kl) = v;
    }
  }
  return out;
}

Eigen::MatrixXd pair_repulsion_matrix(const MolecularIntegrals& ints) {
  const int r = 2 * ints.n_orbitals;
  SpinIntegrals si(ints);
  PairIndexer pairs(r);
  Eigen::MatrixXd out(pairs.size(), pairs.size());
  for (int ij = 0; ij < pairs.size(); ++ij) {
    const auto& pq = pairs.pair(ij);
    for (int kl = ij; kl < pairs.size(); ++kl) {
      const auto& st = pairs.pair(kl);
      const double v = si.eri_antisym(pq[0], pq[1], st[0], st[1]);
      out(ij, kl) = out(kl, ij) = v;
    }
  }
  return out;
}

ReducedHamiltonian build_reduced_hamiltonian(const MolecularIntegrals& ints,
                                             int n_electrons) {
  const int r_spin = 2 * ints.n_orbitals;
  if (n_electrons < 2)
    throw std::invalid_argument("reduced hamiltonian: need at least 2 electrons");
  if (n_electrons > r_spin)
    throw std::invalid_argument("reduced hamiltonian: more electrons than spin orbitals");
  if (!ints.orthonormal)
    throw std::invalid_argument("reduced hamiltonian: integrals must be orthonormal");

  SpinIntegrals si(ints);
  ReducedHamiltonian rh;
  rh.n_electrons = n_electrons;
  rh.r_spin = r_spin;
  rh.e_nuclear = ints.e_nuclear;
  rh.v_pair = pair_repulsion_matrix(ints);
  rh.k = 0.5 * n_electrons * pair_one_body_lift(si.h) +
         static_cast<double>(binomial(n_electrons, 2)) * rh.v_pair;
  return rh;
}

} // namespace vrdm
