#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <string>
#include <vector>

#include "vrdm/determinants.hpp"
#include "vrdm/fermion.hpp"

namespace vrdm {

// Explicit Fock-space representation of all creation/annihilation
// operators as 2^r x 2^r sparse matrices (Jordan-Wigner phases). This is
// the brute-force reference against which the symbolic algebra and every
// constraint map are checked; r_spin is capped at 12 to keep it cheap.
class FockOracle {
public:
  explicit FockOracle(int r_spin);

  int r_spin() const { return r_spin_; }
  int dim() const { return 1 << r_spin_; }

  const Eigen::SparseMatrix<double>& annihilate(int p) const;
  const Eigen::SparseMatrix<double>& create(int p) const;

  // Product of the operator matrices for a string (leftmost factor
  // applied last, as written).
  Eigen::SparseMatrix<double> apply(const std::vector<FermiOp>& ops) const;
  Eigen::SparseMatrix<double> apply(const std::string& ops) const;

  // <psi| ops |psi> for a full Fock-space vector
  double expectation(const std::vector<FermiOp>& ops,
                     const Eigen::VectorXd& psi) const;

  // Embeds a CI vector on a determinant basis into the full Fock space.
  Eigen::VectorXd embed(const DeterminantBasis& basis,
                        const Eigen::VectorXd& ci) const;

  // Deterministic pseudo-random normalized state supported on the
  // (n_electrons, sz2) sector.
  Eigen::VectorXd random_sector_state(int n_electrons, int sz2,
                                      unsigned seed) const;

private:
  int r_spin_;
  std::vector<Eigen::SparseMatrix<double>> annihilate_;
  std::vector<Eigen::SparseMatrix<double>> create_;
};

} // namespace vrdm
