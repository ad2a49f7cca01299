#include "vrdm/fcidump.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace vrdm {

namespace {

[[noreturn]] void parse_fail(int line_no, const std::string& what) {
  throw std::runtime_error("fcidump: line " + std::to_string(line_no) + ": " +
                           what);
}

std::string upper(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

} // namespace

void fcidump_write(const std::string& path, const MolecularIntegrals& ints,
                   int n_electrons, int ms2) {
  if (!ints.orthonormal)
    throw std::invalid_argument("fcidump_write: integrals must be orthonormal");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("fcidump: cannot open " + path + " for writing");

  const int n = ints.n_orbitals;
  out << "&FCI NORB=" << n << ",NELEC=" << n_electrons << ",MS2=" << ms2 << ",\n";
  out << " ORBSYM=";
  for (int i = 0; i < n; ++i) out << "1,";
  out << "\n ISYM=1,\n&END\n";

  char buf[64];
  auto emit = [&](double v, int i, int j, int k, int l) {
    std::snprintf(buf, sizeof(buf), "%25.16e %4d %4d %4d %4d\n", v, i, j, k, l);
    out << buf;
  };

  for (int p = 0; p < n; ++p)
    for (int q = 0; q <= p; ++q)
      for (int s = 0; s <= p; ++s)
        for (int t = 0; t <= (s == p ? q : s); ++t) {
          const double v = ints.eri(p, q, s, t);
          if (v != 0.0) emit(v, p + 1, q + 1, s + 1, t + 1);
        }
  const Eigen::MatrixXd h = ints.core_hamiltonian();
  for (int p = 0; p < n; ++p)
    for (int q = 0; q <= p; ++q)
      if (h(p, q) != 0.0) emit(h(p, q), p + 1, q + 1, 0, 0);
  emit(ints.e_nuclear, 0, 0, 0, 0);
}

FcidumpData fcidump_read(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("fcidump: cannot open " + path);

  int line_no = 0;
  std::string line, header;
  bool header_done = false;
  // header may span lines until &END
  while (std::getline(in, line)) {
    ++line_no;
    header += " " + line;
    if (upper(line).find("&END") != std::string::npos ||
        upper(line).find("/") != std::string::npos) {
      header_done = true;
      break;
    }
    if (line_no > 100) parse_fail(line_no, "header not terminated by &END");
  }
  if (!header_done) parse_fail(line_no, "missing &END in header");

  const std::string uh = upper(header);
  if (uh.find("&FCI") == std::string::npos)
    parse_fail(1, "missing &FCI marker");

  auto parse_int_field = [&](const std::string& key) -> int {
    const auto pos = uh.find(key + "=");
    if (pos == std::string::npos) parse_fail(1, "missing " + key + " field");
    int v = 0;
    if (std::sscanf(uh.c_str() + pos + key.size() + 1, "%d", &v) != 1)
      parse_fail(1, "unreadable " + key + " field");
    return v;
  };

  const int n = parse_int_field("NORB");
  if (n <= 0) parse_fail(1, "NORB must be positive");

  FcidumpData data;
  data.n_electrons = parse_int_field("NELEC");
  data.ms2 = parse_int_field("MS2");

  MolecularIntegrals& ints = data.integrals;
  ints.n_orbitals = n;
  ints.overlap = Eigen::MatrixXd::Identity(n, n);
  ints.kinetic.setZero(n, n);
  ints.nuclear.setZero(n, n); // h lands in kinetic, nuclear stays zero
  ints.eri = EriTensor(n);
  ints.orthonormal = true;

  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    double v;
    int i, j, k, l;
    if (!(ls >> v)) continue; // blank line
    if (!(ls >> i >> j >> k >> l))
      parse_fail(line_no, "expected 'value i j k l'");
    if (i < 0 || j < 0 || k < 0 || l < 0 || i > n || j > n || k > n || l > n)
      parse_fail(line_no, "orbital index out of range");
    if (i == 0 && j == 0 && k == 0 && l == 0) {
      ints.e_nuclear = v;
    } else if (k == 0 && l == 0) {
      if (i == 0 || j == 0) parse_fail(line_no, "bad one-electron index pair");
      ints.kinetic(i - 1, j - 1) = v;
      ints.kinetic(j - 1, i - 1) = v;
    } else if (i == 0 || j == 0 || k == 0 || l == 0) {
      parse_fail(line_no, "mixed zero/nonzero indices");
    } else {
      const int p = i - 1, q = j - 1, s = k - 1, t = l - 1;
      ints.eri(p, q, s, t) = v;
      ints.eri(q, p, s, t) = v;
      ints.eri(p, q, t, s) = v;
      ints.eri(q, p, t, s) = v;
      ints.eri(s, t, p, q) = v;
      ints.eri(t, s, p, q) = v;
      ints.eri(s, t, q, p) = v;
      ints.eri(t, s, q, p) = v;
    }
  }
  return data;
}

} // namespace vrdm
