#include <doctest.h>

#include <cmath>

#include "vrdm/fci.hpp"
#include "vrdm/fock_oracle.hpp"
#include "vrdm/linalg.hpp"
#include "vrdm/reduced_hamiltonian.hpp"
#include "vrdm/scf.hpp"
#include "vrdm/variational.hpp"
#include "vrdm/wedge.hpp"

using namespace vrdm;

namespace {

MolecularIntegrals h2_ints(double bond = 1.4) {
  Geometry g;
  g.atoms.push_back({1.0, {0, 0, 0}});
  g.atoms.push_back({1.0, {0, 0, bond}});
  const auto prims =
      load_basis_file(std::string(VRDM_DATA_DIR) + "/sto-3g.dat", "H");
  return orthonormalize(compute_integrals(g, shells_for_geometry(g, prims)));
}

MolecularIntegrals h4_ints(double radius = 0.9) {
  const Geometry g = ring_geometry(4, radius);
  const auto prims =
      load_basis_file(std::string(VRDM_DATA_DIR) + "/sto-3g.dat", "H");
  return orthonormalize(compute_integrals(g, shells_for_geometry(g, prims)));
}

} // namespace

TEST_CASE("vacuum: N=0 gives E = E_nn exactly") {
  const auto ints = h2_ints();
  const auto res = fci_ground_state(ints, 0);
  CHECK(res.energy == ints.e_nuclear);
}

TEST_CASE("H2 matches the analytic 2x2 CI") {
  const auto ints = h2_ints();
  const auto scf = run_rhf(ints, 2);
  const auto mo = mo_transform(ints, scf.mo_coefficients);

  // closed-shell determinants (g g-bar) and (u u-bar):
  // H11 = 2 h_gg + J_gg, H22 = 2 h_uu + J_uu, H12 = K_gu
  const auto h = mo.core_hamiltonian();
  const double h11 = 2 * h(0, 0) + mo.eri(0, 0, 0, 0);
  const double h22 = 2 * h(1, 1) + mo.eri(1, 1, 1, 1);
  const double h12 = mo.eri(0, 1, 0, 1);
  const double mean = 0.5 * (h11 + h22);
  const double rad = std::sqrt(0.25 * (h11 - h22) * (h11 - h22) + h12 * h12);
  const double analytic = mean - rad + mo.e_nuclear;

  const auto res = fci_ground_state(mo, 2);
  CHECK(res.energy == doctest::Approx(analytic).epsilon(1e-12));

  // basis independence: same energy from the orthonormalized AO basis
  const auto res_ao = fci_ground_state(ints, 2);
  CHECK(res_ao.energy == doctest::Approx(analytic).epsilon(1e-10));
}

TEST_CASE("determinant Hamiltonian agrees with the Fock oracle") {
  const auto ints = h4_ints();
  SpinIntegrals si(ints);
  const int r = si.r_spin;
  FockOracle oracle(r);

  // full second-quantized H as explicit matrices
  Eigen::MatrixXd hfock = Eigen::MatrixXd::Zero(oracle.dim(), oracle.dim());
  for (int p = 0; p < r; ++p)
    for (int q = 0; q < r; ++q)
      if (si.h(p, q) != 0.0)
        hfock += si.h(p, q) * Eigen::MatrixXd(oracle.create(p) *
                                              oracle.annihilate(q));
  for (int p = 0; p < r; ++p)
    for (int q = 0; q < r; ++q)
      for (int s = 0; s < r; ++s)
        for (int t = 0; t < r; ++t) {
          const double v = si.eri(p, s, q, t); // <pq|st> in physicists'
          if (v == 0.0) continue;
          hfock += 0.5 * v *
                   Eigen::MatrixXd(oracle.create(p) * oracle.create(q) *
                                   oracle.annihilate(t) * oracle.annihilate(s));
        }

  DeterminantBasis basis(r, 4, 0);
  const auto hdet = build_hamiltonian(basis, si);
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = 0; j < basis.size(); ++j) {
      const double ref = hfock(static_cast<int>(basis.dets[i]),
                               static_cast<int>(basis.dets[j]));
      CHECK(hdet.coeff(static_cast<int>(i), static_cast<int>(j)) ==
            doctest::Approx(ref).epsilon(1e-12));
    }
}

TEST_CASE("single determinant: 2-RDM eigenvalues are {0, 1/C(N,2)}") {
  const int r = 8, n = 4;
  DetMask det = 0b01011010; // arbitrary Sz=0 determinant
  REQUIRE(popcount(det) == n);
  const RawRdms rdms = determinant_rdms(r, det, false);
  Vec w;
  Mat v;
  symmetric_eig(rdms.m2 / binomial(n, 2), w, v);
  for (int i = 0; i < w.size(); ++i) {
    const bool zero = std::abs(w[i]) < 1e-12;
    const bool filled = std::abs(w[i] - 1.0 / binomial(n, 2)) < 1e-12;
    CHECK((zero || filled));
  }
}

TEST_CASE("energy identity: Tr(K 2D) + E_nn equals the FCI energy") {
  const auto ints = h4_ints();
  const auto res = fci_ground_state(ints, 4);
  const auto rdms = fci_rdms(res.basis, res.ci, false);
  const auto rh = build_reduced_hamiltonian(ints, 4);
  CHECK(rh.energy(rdms.m2) == doctest::Approx(res.energy).epsilon(1e-10));
}

TEST_CASE("RDM traces and contraction consistency") {
  const auto ints = h4_ints();
  const auto res = fci_ground_state(ints, 4);
  const auto rdms = fci_rdms(res.basis, res.ci, true);
  const int n = 4;

  CHECK(rdms.gamma.trace() == doctest::Approx(n).epsilon(1e-12));
  CHECK(rdms.m2.trace() ==
        doctest::Approx(binomial(n, 2)).epsilon(1e-12));
  CHECK(rdms.m3.trace() ==
        doctest::Approx(binomial(n, 3)).epsilon(1e-12));

  // pair contraction reproduces gamma: sum_k m2[(pk),(qk)] = (N-1) gamma
  const int r = rdms.r_spin;
  const Eigen::MatrixXd contracted = contract(rdms.m2, 2, 1, r);
  CHECK((contracted - (n - 1) * rdms.gamma).cwiseAbs().maxCoeff() < 1e-12);

  // triple contraction reproduces m2
  const Eigen::MatrixXd c32 = contract(rdms.m3, 3, 2, r);
  CHECK((c32 - (n - 2) * rdms.m2).cwiseAbs().maxCoeff() < 1e-12);

  // hermitian and PSD
  CHECK((rdms.m2 - rdms.m2.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  Vec w;
  Mat v;
  symmetric_eig(rdms.m2, w, v);
  CHECK(w.minCoeff() > -1e-12);
}

TEST_CASE("natural occupations: closed-shell determinant is 1/0") {
  const RawRdms rdms = determinant_rdms(8, 0b00001111, false);
  const auto occs = natural_occupations(rdms.gamma);
  CHECK(occs[0] == doctest::Approx(1.0));
  CHECK(occs[1] == doctest::Approx(1.0));
  CHECK(occs[2] == doctest::Approx(0.0));
  CHECK(occs[3] == doctest::Approx(0.0));
}

TEST_CASE("variational bound: E_HF >= E_FCI") {
  const auto ints = h4_ints();
  const auto scf = run_rhf(ints, 4);
  const auto fci = fci_ground_state(ints, 4);
  CHECK(scf.energy >= fci.energy - 1e-10);
}

TEST_CASE("oversized determinant space is rejected") {
  const auto ints = h4_ints();
  FciConfig cfg;
  cfg.max_determinants = 10;
  CHECK_THROWS_WITH_AS(fci_ground_state(ints, 4, cfg),
                       doctest::Contains("too large"), std::runtime_error);
}
