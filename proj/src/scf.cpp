#include "vrdm/scf.hpp"

#include <cmath>
#include <deque>
#include <stdexcept>

#include "vrdm/linalg.hpp"

namespace vrdm {

namespace {

// closed-shell Fock matrix from spatial density D (trace N)
Mat fock_matrix(const MolecularIntegrals& ints, const Mat& h, const Mat& d) {
  const int n = ints.n_orbitals;
  Mat f = h;
  for (int p = 0; p < n; ++p)
    for (int q = p; q < n; ++q) {
      double acc = 0.0;
      for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t)
          acc += d(s, t) * (ints.eri(p, q, s, t) - 0.5 * ints.eri(p, s, q, t));
      f(p, q) += acc;
      if (p != q) f(q, p) += acc;
    }
  return f;
}

// occupied-orbital selection: ascending energy, index breaks ties
Mat density_from_orbitals(const Mat& c, int n_occ) {
  return 2.0 * c.leftCols(n_occ) * c.leftCols(n_occ).transpose();
}

} // namespace

ScfResult run_rhf(const MolecularIntegrals& ints, int n_electrons,
                  const ScfConfig& cfg) {
  if (!ints.orthonormal)
    throw std::invalid_argument("rhf: integrals must be orthonormal");
  if (n_electrons % 2 != 0)
    throw std::invalid_argument("rhf: electron count must be even");
  const int n = ints.n_orbitals;
  const int n_occ = n_electrons / 2;
  if (n_occ > n) throw std::invalid_argument("rhf: more electron pairs than orbitals");

  const Mat h = ints.core_hamiltonian();

  ScfResult res;
  if (n_occ == 0) {
    res.energy = ints.e_nuclear;
    res.orbital_energies = h.diagonal();
    res.mo_coefficients = Mat::Identity(n, n);
    res.converged = true;
    return res;
  }

  // core-hamiltonian guess
  Vec eps;
  Mat c;
  symmetric_eig(h, eps, c);
  if (cfg.guess_rotation.size() > 0) {
    if (cfg.guess_rotation.rows() != n || cfg.guess_rotation.cols() != n)
      throw std::invalid_argument("rhf: bad guess rotation dimension");
    c = c * cfg.guess_rotation;
  }
  Mat d = density_from_orbitals(c, n_occ);

  const bool filled = (n_occ == n); // unique determinant, no iterations needed
  std::deque<Mat> err_list, fock_list;
  double e_prev = 0.0;

  for (int iter = 1; iter <= cfg.max_iterations; ++iter) {
    Mat f = fock_matrix(ints, h, d);
    const double e_elec = 0.5 * (d.array() * (h + f).array()).sum();
    const double energy = e_elec + ints.e_nuclear;

    // DIIS on the orbital-gradient residual FD - DF (S = 1)
    Mat err = f * d - d * f;
    err_list.push_back(err);
    fock_list.push_back(f);
    if (static_cast<int>(err_list.size()) > cfg.diis_size) {
      err_list.pop_front();
      fock_list.pop_front();
    }
    const int m = static_cast<int>(err_list.size());
    if (m > 1) {
      Mat b = Mat::Zero(m + 1, m + 1);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j <= i; ++j)
          b(i, j) = b(j, i) = (err_list[i].array() * err_list[j].array()).sum();
      b.row(m).setConstant(-1.0);
      b.col(m).setConstant(-1.0);
      b(m, m) = 0.0;
      Vec rhs = Vec::Zero(m + 1);
      rhs[m] = -1.0;
      Vec coef = b.fullPivLu().solve(rhs);
      if (coef.allFinite()) {
        f.setZero();
        for (int i = 0; i < m; ++i) f += coef[i] * fock_list[i];
      }
    }

    symmetric_eig(f, eps, c);
    const Mat d_new = density_from_orbitals(c, n_occ);
    const double d_change = (d_new - d).cwiseAbs().maxCoeff();
    const double e_change = std::abs(energy - e_prev);
    d = d_new;
    e_prev = energy;
    res.iterations = iter;

    if ((iter > 1 && d_change < cfg.density_tol && e_change < cfg.energy_tol) ||
        filled) {
      // final energy from the converged density
      f = fock_matrix(ints, h, d);
      symmetric_eig(f, eps, c);
      res.energy = 0.5 * (d.array() * (h + f).array()).sum() + ints.e_nuclear;
      res.orbital_energies = eps;
      res.mo_coefficients = c;
      res.converged = true;
      if (filled) res.iterations = 0;
      return res;
    }
  }
  throw ScfConvergenceError(e_prev);
}

MolecularIntegrals mo_transform(const MolecularIntegrals& ints,
                                const Eigen::MatrixXd& mo_coefficients) {
  const int n = ints.n_orbitals;
  if (mo_coefficients.rows() != n || mo_coefficients.cols() != n)
    throw std::invalid_argument("mo_transform: dimension mismatch");
  const Mat gram = mo_coefficients.transpose() * ints.overlap * mo_coefficients;
  if ((gram - Mat::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("mo_transform: coefficients not orthonormal");
  return transform_integrals(ints, mo_coefficients);
}

} // namespace vrdm
