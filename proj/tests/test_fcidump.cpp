#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "vrdm/fcidump.hpp"
#include "vrdm/fci.hpp"

using namespace vrdm;

namespace {

MolecularIntegrals h4_fixture() {
  const Geometry g = ring_geometry(4, 0.9);
  const auto prims =
      load_basis_file(std::string(VRDM_DATA_DIR) + "/sto-3g.dat", "H");
  return orthonormalize(compute_integrals(g, shells_for_geometry(g, prims)));
}

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name)
      : path("/tmp/vrdm_test_" + name) {}
  ~TempFile() { std::remove(path.c_str()); }
};

} // namespace

TEST_CASE("fcidump round-trip preserves every integral") {
  const auto ints = h4_fixture();
  TempFile f("h4.fcidump");
  fcidump_write(f.path, ints, 4, 0);
  const auto back = fcidump_read(f.path);

  CHECK(back.n_electrons == 4);
  CHECK(back.ms2 == 0);
  const int n = ints.n_orbitals;
  REQUIRE(back.integrals.n_orbitals == n);
  CHECK((back.integrals.core_hamiltonian() - ints.core_hamiltonian())
            .cwiseAbs()
            .maxCoeff() < 1e-12);
  CHECK(std::abs(back.integrals.e_nuclear - ints.e_nuclear) < 1e-12);
  double deri = 0.0;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t)
          deri = std::max(deri, std::abs(back.integrals.eri(p, q, s, t) -
                                         ints.eri(p, q, s, t)));
  CHECK(deri < 1e-12);
}

TEST_CASE("fcidump with only header and E_nn") {
  TempFile f("empty.fcidump");
  {
    std::ofstream out(f.path);
    out << "&FCI NORB=3,NELEC=2,MS2=0,\n ORBSYM=1,1,1,\n ISYM=1,\n&END\n";
    out << "  -7.5  0 0 0 0\n";
  }
  const auto data = fcidump_read(f.path);
  CHECK(data.integrals.e_nuclear == doctest::Approx(-7.5));
  CHECK(data.integrals.core_hamiltonian().cwiseAbs().maxCoeff() == 0.0);
  double m = 0.0;
  for (int p = 0; p < 3; ++p)
    for (int q = 0; q < 3; ++q)
      for (int s = 0; s < 3; ++s)
        for (int t = 0; t < 3; ++t)
          m = std::max(m, std::abs(data.integrals.eri(p, q, s, t)));
  CHECK(m == 0.0);
}

TEST_CASE("fcidump parse errors carry line numbers") {
  SUBCASE("bad header") {
    TempFile f("bad1.fcidump");
    {
      std::ofstream out(f.path);
      out << "NORB=2\n&END\n";
    }
    CHECK_THROWS_WITH_AS(fcidump_read(f.path), doctest::Contains("&FCI"),
                         std::runtime_error);
  }
  SUBCASE("index out of range") {
    TempFile f("bad2.fcidump");
    {
      std::ofstream out(f.path);
      out << "&FCI NORB=2,NELEC=2,MS2=0,\n&END\n";
      out << " 1.0  5 1 1 1\n";
    }
    CHECK_THROWS_WITH_AS(fcidump_read(f.path), doctest::Contains("line 3"),
                         std::runtime_error);
  }
  SUBCASE("malformed body line") {
    TempFile f("bad3.fcidump");
    {
      std::ofstream out(f.path);
      out << "&FCI NORB=2,NELEC=2,MS2=0,\n&END\n";
      out << " 1.0  1 1\n";
    }
    CHECK_THROWS_WITH_AS(fcidump_read(f.path),
                         doctest::Contains("expected 'value i j k l'"),
                         std::runtime_error);
  }
}

TEST_CASE("externally generated H2 file reproduces the FCI energy") {
  // fixture produced by an independent quadrature-based integral
  // generator (tests/fixtures/h2_external.fcidump)
  const auto external =
      fcidump_read(std::string(VRDM_FIXTURE_DIR) + "/h2_external.fcidump");
  const auto ours = [] {
    Geometry g;
    g.atoms.push_back({1.0, {0, 0, 0}});
    g.atoms.push_back({1.0, {0, 0, 1.4}});
    const auto prims =
        load_basis_file(std::string(VRDM_DATA_DIR) + "/sto-3g.dat", "H");
    return orthonormalize(compute_integrals(g, shells_for_geometry(g, prims)));
  }();

  const double e_ext = fci_ground_state(external.integrals, 2).energy;
  const double e_our = fci_ground_state(ours, 2).energy;
  CHECK(e_ext == doctest::Approx(e_our).epsilon(1e-8));
}

TEST_CASE("fcidump_write requires orthonormal integrals") {
  const Geometry g = ring_geometry(4, 0.9);
  const auto prims =
      load_basis_file(std::string(VRDM_DATA_DIR) + "/sto-3g.dat", "H");
  const auto raw = compute_integrals(g, shells_for_geometry(g, prims));
  CHECK_THROWS_AS(fcidump_write("/tmp/vrdm_should_not_exist.fcidump", raw, 4),
                  std::invalid_argument);
}
