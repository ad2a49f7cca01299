#pragma once

#include <Eigen/Dense>

#include "vrdm/integrals.hpp"

namespace vrdm {

struct ScfConfig {
  int max_iterations = 200;
  double density_tol = 1e-9;
  double energy_tol = 1e-11;
  int diis_size = 8;
  // optional orthogonal rotation applied to the initial-guess orbitals
  Eigen::MatrixXd guess_rotation;
};

struct ScfResult {
  double energy = 0.0; // electronic + E_nn
  Eigen::VectorXd orbital_energies;
  Eigen::MatrixXd mo_coefficients; // columns are MOs, orthonormal
  bool converged = false;
  int iterations = 0;
};

// Thrown when SCF fails to converge; carries the last energy.
struct ScfConvergenceError : std::runtime_error {
  double last_energy;
  explicit ScfConvergenceError(double e)
      : std::runtime_error("scf: not converged after max iterations"),
        last_energy(e) {}
};

// Restricted Hartree-Fock on orthonormal integrals (S = 1), core guess,
// DIIS acceleration, deterministic aufbau tie-breaking (energy, then
// orbital index).
ScfResult run_rhf(const MolecularIntegrals& ints, int n_electrons,
                  const ScfConfig& cfg = {});

// Transforms all integrals to the MO basis; coefficients must be
// orthonormal to 1e-10.
MolecularIntegrals mo_transform(const MolecularIntegrals& ints,
                                const Eigen::MatrixXd& mo_coefficients);

} // namespace vrdm
