#include <doctest.h>

#include <cmath>
#include <random>

#include "quadrature_oracle.hpp"
#include "vrdm/constants.hpp"
#include "vrdm/integrals.hpp"
#include "vrdm/linalg.hpp"

using namespace vrdm;

namespace {

std::vector<GaussianPrimitive> sto3g_h() {
  return load_basis_file(std::string(VRDM_DATA_DIR) + "/sto-3g.dat", "H");
}

Geometry h2_geometry(double bond_bohr = 1.4) {
  Geometry g;
  g.atoms.push_back({1.0, {0, 0, 0}});
  g.atoms.push_back({1.0, {0, 0, bond_bohr}});
  return g;
}

// scalene H3 so no accidental symmetry hides index bugs
Geometry h3_geometry() {
  Geometry g;
  g.atoms.push_back({1.0, {0.0, 0.0, 0.0}});
  g.atoms.push_back({1.0, {0.0, 0.3, 1.5}});
  g.atoms.push_back({1.0, {1.1, -0.2, 0.4}});
  return g;
}

void check_against_oracle(const Geometry& g) {
  const auto shells = shells_for_geometry(g, sto3g_h());
  const auto ints = compute_integrals(g, shells);
  const int n = ints.n_orbitals;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      CHECK(ints.overlap(i, j) ==
            doctest::Approx(testing::oracle_overlap(shells[i], shells[j]))
                .epsilon(1e-8));
      CHECK(ints.kinetic(i, j) ==
            doctest::Approx(testing::oracle_kinetic(shells[i], shells[j]))
                .epsilon(1e-8));
      CHECK(ints.nuclear(i, j) ==
            doctest::Approx(testing::oracle_nuclear(shells[i], shells[j], g))
                .epsilon(1e-8));
    }
  for (int p = 0; p < n; ++p)
    for (int q = 0; q <= p; ++q)
      for (int s = 0; s <= p; ++s)
        for (int t = 0; t <= (s == p ? q : s); ++t) {
          const double ref = testing::oracle_eri(shells[p], shells[q],
                                                 shells[s], shells[t]);
          CHECK(ints.eri(p, q, s, t) == doctest::Approx(ref).epsilon(1e-8));
        }
}

} // namespace

TEST_CASE("one normalized shell: S = [[1]]") {
  Geometry g;
  g.atoms.push_back({1.0, {0.2, -0.1, 0.5}});
  const auto ints = compute_integrals(g, shells_for_geometry(g, sto3g_h()));
  CHECK(ints.overlap(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("H2 integrals match the quadrature oracle to 1e-8") {
  check_against_oracle(h2_geometry());
}

TEST_CASE("H3 (scalene) integrals match the quadrature oracle to 1e-8") {
  check_against_oracle(h3_geometry());
}

TEST_CASE("Boys function limits") {
  CHECK(boys_f0(0.0) == doctest::Approx(1.0));
  // small-t series continuity
  CHECK(boys_f0(1e-13) == doctest::Approx(boys_f0(2e-12)).epsilon(1e-11));
  // quadrature cross-check at a generic argument
  const double t = 3.7;
  const double numeric = testing::integrate_1d(
      [t](double v) { return std::exp(-t * v * v); }, 0.0, 1.0);
  CHECK(boys_f0(t) == doctest::Approx(numeric).epsilon(1e-12));
}

TEST_CASE("ERI 8-fold permutational symmetry") {
  const auto g = h3_geometry();
  const auto ints = compute_integrals(g, shells_for_geometry(g, sto3g_h()));
  CHECK(eri_symmetry_defect(ints.eri) < 1e-12);
}

TEST_CASE("translational invariance of all integrals") {
  const auto g = h3_geometry();
  Geometry gt = g;
  const Eigen::Vector3d shift(0.7, -1.3, 2.1);
  for (auto& a : gt.atoms) a.position += shift;

  const auto i0 = compute_integrals(g, shells_for_geometry(g, sto3g_h()));
  const auto i1 = compute_integrals(gt, shells_for_geometry(gt, sto3g_h()));
  CHECK((i0.overlap - i1.overlap).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((i0.kinetic - i1.kinetic).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((i0.nuclear - i1.nuclear).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(std::abs(i0.e_nuclear - i1.e_nuclear) < 1e-10);
  double deri = 0.0;
  const int n = i0.n_orbitals;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t)
          deri = std::max(deri,
                          std::abs(i0.eri(p, q, s, t) - i1.eri(p, q, s, t)));
  CHECK(deri < 1e-10);
}

TEST_CASE("rotational invariance of energy-relevant traces") {
  const auto g = h3_geometry();
  // rigid rotation about a skew axis
  const Eigen::AngleAxisd rot(0.83, Eigen::Vector3d(1, 2, -1).normalized());
  Geometry gr = g;
  for (auto& a : gr.atoms) a.position = rot * a.position;

  const auto i0 = compute_integrals(g, shells_for_geometry(g, sto3g_h()));
  const auto i1 = compute_integrals(gr, shells_for_geometry(gr, sto3g_h()));
  CHECK(i0.kinetic.trace() == doctest::Approx(i1.kinetic.trace()).epsilon(1e-10));
  CHECK(i0.nuclear.trace() == doctest::Approx(i1.nuclear.trace()).epsilon(1e-10));
  CHECK(i0.e_nuclear == doctest::Approx(i1.e_nuclear).epsilon(1e-10));
}

TEST_CASE("nuclear repulsion is the direct pair sum") {
  const auto g = ring_geometry(8, 1.0 / std::sqrt(2.0));
  double e = 0.0;
  for (std::size_t i = 0; i < g.atoms.size(); ++i)
    for (std::size_t j = i + 1; j < g.atoms.size(); ++j)
      e += 1.0 / (g.atoms[i].position - g.atoms[j].position).norm();
  CHECK(g.nuclear_repulsion() == doctest::Approx(e).epsilon(1e-14));
}

TEST_CASE("orthonormalize: overlap becomes the identity") {
  const auto g = h3_geometry();
  const auto ints = compute_integrals(g, shells_for_geometry(g, sto3g_h()));
  const auto on = orthonormalize(ints);
  const int n = on.n_orbitals;
  CHECK((on.overlap - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() <
        1e-12);
  CHECK(on.orthonormal);
  CHECK(eri_symmetry_defect(on.eri) < 1e-12);
}

TEST_CASE("orthonormalize: idempotent on orthonormal input") {
  const auto g = h2_geometry();
  const auto on = orthonormalize(
      compute_integrals(g, shells_for_geometry(g, sto3g_h())));
  const auto on2 = orthonormalize(on);
  CHECK((on.kinetic - on2.kinetic).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((on.nuclear - on2.nuclear).cwiseAbs().maxCoeff() < 1e-12);
  double deri = 0.0;
  const int n = on.n_orbitals;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t)
          deri = std::max(deri,
                          std::abs(on.eri(p, q, s, t) - on2.eri(p, q, s, t)));
  CHECK(deri < 1e-12);
}

TEST_CASE("orthonormalize: random SPD overlap against matrix-root oracle") {
  // synthetic integrals with a random SPD overlap; the transformed
  // overlap must equal the identity and match an explicit S^(-1/2)
  std::mt19937 rng(7);
  std::normal_distribution<double> dist;
  const int n = 5;
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = dist(rng);
  MolecularIntegrals ints;
  ints.n_orbitals = n;
  ints.overlap = a * a.transpose() + 0.5 * Eigen::MatrixXd::Identity(n, n);
  ints.kinetic = Eigen::MatrixXd::Zero(n, n);
  ints.nuclear = Eigen::MatrixXd::Zero(n, n);
  ints.eri = EriTensor(n);

  const auto on = orthonormalize(ints);
  CHECK((on.overlap - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() <
        1e-12);

  // explicit oracle via the matrix square root of S
  Vec w;
  Mat v;
  symmetric_eig(ints.overlap, w, v);
  const Mat xroot = v * w.cwiseSqrt().cwiseInverse().asDiagonal() * v.transpose();
  const Mat s2 = xroot.transpose() * ints.overlap * xroot;
  CHECK((s2 - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("orthonormalize: near-singular overlap rejected") {
  MolecularIntegrals ints;
  ints.n_orbitals = 2;
  ints.overlap.resize(2, 2);
  ints.overlap << 1.0, 1.0 - 1e-10, 1.0 - 1e-10, 1.0;
  ints.kinetic = Eigen::MatrixXd::Zero(2, 2);
  ints.nuclear = Eigen::MatrixXd::Zero(2, 2);
  ints.eri = EriTensor(2);
  CHECK_THROWS_WITH_AS(orthonormalize(ints),
                       doctest::Contains("linear dependence"),
                       std::runtime_error);
}
