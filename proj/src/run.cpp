#include "vrdm/run.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <fstream>
#include <future>
#include <sstream>
#include <stdexcept>

#include "vrdm/fcidump.hpp"
#include "vrdm/fci.hpp"
#include "vrdm/linalg.hpp"
#include "vrdm/scf.hpp"

namespace vrdm {

namespace {

const char* builtin_sto3g =
    "element H\n"
    "3.425250914   0.1543289673\n"
    "0.6239137298  0.5353281423\n"
    "0.1688554040  0.4446345422\n"
    "element He\n"
    "6.362421394   0.1543289673\n"
    "1.158922999   0.5353281423\n"
    "0.3136497915  0.4446345422\n";

struct Stage {
  MolecularIntegrals ints; // orthonormalized
  int n_electrons = 0;
  std::string system_label;
};

Stage prepare_system(const RunConfig& cfg, double radius) {
  Stage st;
  if (!cfg.fcidump_path.empty()) {
    const FcidumpData fd = fcidump_read(cfg.fcidump_path);
    st.ints = fd.integrals;
    st.n_electrons = (cfg.n_electrons > 0) ? cfg.n_electrons : fd.n_electrons;
    st.system_label = "fcidump:" + cfg.fcidump_path;
    return st;
  }
  const Geometry geom = ring_geometry(cfg.ring_atoms, radius);
  const auto prims =
      cfg.basis_file.empty()
          ? parse_basis_table(builtin_sto3g, "H")
          : load_basis_file(cfg.basis_file, "H");
  const auto shells = shells_for_geometry(geom, prims);
  st.ints = orthonormalize(compute_integrals(geom, shells));
  st.n_electrons = (cfg.n_electrons > 0) ? cfg.n_electrons : cfg.ring_atoms;
  st.system_label = "H" + std::to_string(cfg.ring_atoms) + "-ring";
  return st;
}

double elapsed(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::vector<MethodRecord> run_point(const RunConfig& cfg, double radius) {
  const Stage st = prepare_system(cfg, radius);
  std::vector<MethodRecord> records;

  const bool want_fci =
      std::find(cfg.methods.begin(), cfg.methods.end(), "FCI") !=
      cfg.methods.end();
  bool any_rdm_method = false;
  for (const auto& msub : cfg.methods)
    if (msub != "HF" && msub != "FCI") any_rdm_method = true;

  // FCI runs first when present so RDM methods can report errors vs it
  std::optional<FciResult> fci;
  std::optional<RawRdms> fci_rdm;
  if (want_fci || any_rdm_method) {
    if (want_fci) {
      const auto t0 = std::chrono::steady_clock::now();
      fci = fci_ground_state(st.ints, st.n_electrons);
      fci_rdm = fci_rdms(fci->basis, fci->ci, false);
      MethodRecord rec;
      rec.system = st.system_label;
      rec.radius_angstrom = radius;
      rec.method = "FCI";
      rec.e_total = fci->energy;
      rec.converged = fci->residual_norm < 1e-8;
      const auto occs = natural_occupations(fci_rdm->gamma);
      rec.hono = occs[st.n_electrons / 2 - 1];
      rec.luno = occs[st.n_electrons / 2];
      const double c2 = binomial(st.n_electrons, 2);
      rec.r12 = (pair_repulsion_matrix(st.ints).array() *
                 (fci_rdm->m2 / c2).array())
                    .sum();
      rec.seconds = elapsed(t0);
      rec.iterations = fci->iterations;
      records.push_back(rec);
    }
  }

  for (const auto& method : cfg.methods) {
    if (method == "FCI") continue;
    const auto t0 = std::chrono::steady_clock::now();
    MethodRecord rec;
    rec.system = st.system_label;
    rec.radius_angstrom = radius;
    rec.method = method;

    if (method == "HF") {
      const ScfResult scf = run_rhf(st.ints, st.n_electrons);
      rec.e_total = scf.energy;
      rec.converged = scf.converged;
      rec.iterations = scf.iterations;
      // single-determinant properties from the occupied orbitals
      const MolecularIntegrals mo = mo_transform(st.ints, scf.mo_coefficients);
      DetMask det = 0;
      for (int p = 0; p < st.n_electrons; ++p) det |= (1ULL << p);
      const RawRdms rdms = determinant_rdms(2 * st.ints.n_orbitals, det, false);
      const auto occs = natural_occupations(rdms.gamma);
      rec.hono = occs[st.n_electrons / 2 - 1];
      rec.luno = occs[st.n_electrons / 2];
      const double c2 = binomial(st.n_electrons, 2);
      rec.r12 =
          (pair_repulsion_matrix(mo).array() * (rdms.m2 / c2).array()).sum();
      if (fci) {
        rec.e_error_vs_fci = rec.e_total - fci->energy;
        rec.has_fci_reference = true;
        if (fci_rdm) {
          // compare in the common orthonormal basis: HF 2-RDM must be
          // rotated back, cheapest is recomputing FCI RDM in MO basis
          // -- skipped; the l2 column is reported for SDP methods
        }
      }
    } else {
      const ConditionSet conds = ConditionSet::from_string(method);
      const ReducedHamiltonian rh =
          build_reduced_hamiltonian(st.ints, st.n_electrons);
      const RdmSet rdm = solve_variational(rh, conds, cfg.variational);
      rec.e_total = rdm.e_total;
      rec.converged = rdm.converged;
      rec.iterations = rdm.iterations;
      rec.hono = rdm.occupations[st.n_electrons / 2 - 1];
      rec.luno = rdm.occupations[st.n_electrons / 2];
      rec.r12 = rdm.r12_expectation;
      rec.primal_residual = rdm.primal_residual;
      rec.dual_residual = rdm.dual_residual;
      rec.gap = rdm.gap;
      if (fci && fci_rdm) {
        rec.e_error_vs_fci = rec.e_total - fci->energy;
        rec.has_fci_reference = true;
        rec.rdm_l2_error_vs_fci =
            rdm_l2_error(rdm.d2, fci_rdm->m2 / rh.pairs());
      }
      if (!cfg.rdm_dump_path.empty())
        write_rdm_dump(cfg.rdm_dump_path, rh.r_spin, st.n_electrons, rdm.d2);
      if (!rec.converged) rec.note = "solver hit iteration cap";
    }
    rec.seconds = elapsed(t0);
    records.push_back(rec);
  }
  return records;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

} // namespace

void RunConfig::validate() const {
  if (methods.empty())
    throw std::invalid_argument("config: at least one method is required");
  for (const auto& m : methods)
    if (m != "HF" && m != "FCI") ConditionSet::from_string(m);
  if (fcidump_path.empty()) {
    if (ring_atoms < 2)
      throw std::invalid_argument("config: ring needs at least 2 atoms");
    if (radius_angstrom <= 0 && radius_grid.empty())
      throw std::invalid_argument("config: radius must be positive");
  }
  for (std::size_t i = 1; i < radius_grid.size(); ++i)
    if (radius_grid[i] <= radius_grid[i - 1])
      throw std::invalid_argument("config: radius grid must be strictly increasing");
}

std::vector<MethodRecord> run_single(const RunConfig& cfg) {
  cfg.validate();
  return run_point(cfg, cfg.radius_angstrom);
}

std::vector<MethodRecord> run_scan(const RunConfig& cfg) {
  cfg.validate();
  if (cfg.radius_grid.empty())
    throw std::invalid_argument("scan: radius grid required");

  std::vector<std::vector<MethodRecord>> per_point(cfg.radius_grid.size());
  const int workers = std::max(1, cfg.scan_workers);
  std::size_t next = 0;
  while (next < cfg.radius_grid.size()) {
    const std::size_t batch =
        std::min<std::size_t>(workers, cfg.radius_grid.size() - next);
    std::vector<std::future<std::vector<MethodRecord>>> futs;
    for (std::size_t k = 0; k < batch; ++k) {
      const double r = cfg.radius_grid[next + k];
      futs.push_back(std::async(
          batch > 1 ? std::launch::async : std::launch::deferred,
          [&cfg, r]() {
            try {
              return run_point(cfg, r);
            } catch (const std::exception& e) {
              MethodRecord rec;
              rec.radius_angstrom = r;
              rec.method = "error";
              rec.note = e.what();
              return std::vector<MethodRecord>{rec};
            }
          }));
    }
    for (std::size_t k = 0; k < batch; ++k)
      per_point[next + k] = futs[k].get();
    next += batch;
  }

  std::vector<MethodRecord> all;
  for (auto& v : per_point)
    for (auto& r : v) all.push_back(std::move(r));
  std::stable_sort(all.begin(), all.end(),
                   [](const MethodRecord& a, const MethodRecord& b) {
                     if (a.radius_angstrom != b.radius_angstrom)
                       return a.radius_angstrom < b.radius_angstrom;
                     return a.method < b.method;
                   });
  return all;
}

std::string records_to_json(const std::vector<MethodRecord>& records) {
  std::ostringstream os;
  os << "[\n";
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    os << "  {\"system\": \"" << r.system << "\", \"radius_angstrom\": "
       << fmt(r.radius_angstrom) << ", \"method\": \"" << r.method
       << "\", \"e_total\": " << fmt(r.e_total);
    if (r.has_fci_reference)
      os << ", \"e_error_vs_fci\": " << fmt(r.e_error_vs_fci);
    if (r.hono >= 0)
      os << ", \"hono\": " << fmt(r.hono) << ", \"luno\": " << fmt(r.luno);
    if (r.r12 >= 0) os << ", \"r12_expectation\": " << fmt(r.r12);
    if (r.rdm_l2_error_vs_fci >= 0)
      os << ", \"rdm_l2_error\": " << fmt(r.rdm_l2_error_vs_fci);
    os << ", \"converged\": " << (r.converged ? "true" : "false");
    if (r.primal_residual >= 0)
      os << ", \"primal_residual\": " << fmt(r.primal_residual)
         << ", \"dual_residual\": " << fmt(r.dual_residual)
         << ", \"gap\": " << fmt(r.gap);
    os << ", \"iterations\": " << r.iterations
       << ", \"seconds\": " << fmt(r.seconds);
    if (!r.note.empty()) os << ", \"note\": \"" << r.note << "\"";
    os << "}" << (i + 1 < records.size() ? "," : "") << "\n";
  }
  os << "]\n";
  return os.str();
}

std::string records_to_csv(const std::vector<MethodRecord>& records) {
  std::ostringstream os;
  os << "R_angstrom,method,E_total,r12_expectation,E_error_vs_FCI\n";
  for (const auto& r : records) {
    os << fmt(r.radius_angstrom) << "," << r.method << "," << fmt(r.e_total)
       << "," << (r.r12 >= 0 ? fmt(r.r12) : "") << ","
       << (r.has_fci_reference ? fmt(r.e_error_vs_fci) : "") << "\n";
  }
  return os.str();
}

void write_rdm_dump(const std::string& path, int r_spin, int n_electrons,
                    const Eigen::MatrixXd& d2) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("rdm dump: cannot open " + path);
  const char magic[4] = {'V', 'R', 'D', 'M'};
  const std::int32_t version = 1;
  const std::int32_t rs = r_spin, ne = n_electrons,
                     dim = static_cast<std::int32_t>(d2.rows());
  out.write(magic, 4);
  out.write(reinterpret_cast<const char*>(&version), 4);
  out.write(reinterpret_cast<const char*>(&rs), 4);
  out.write(reinterpret_cast<const char*>(&ne), 4);
  out.write(reinterpret_cast<const char*>(&dim), 4);
  for (int i = 0; i < d2.rows(); ++i)
    for (int j = 0; j < d2.cols(); ++j) {
      const double v = d2(i, j);
      out.write(reinterpret_cast<const char*>(&v), 8);
    }
}

RdmDump read_rdm_dump(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("rdm dump: cannot open " + path);
  char magic[4];
  std::int32_t version, rs, ne, dim;
  in.read(magic, 4);
  if (std::memcmp(magic, "VRDM", 4) != 0)
    throw std::runtime_error("rdm dump: bad magic");
  in.read(reinterpret_cast<char*>(&version), 4);
  in.read(reinterpret_cast<char*>(&rs), 4);
  in.read(reinterpret_cast<char*>(&ne), 4);
  in.read(reinterpret_cast<char*>(&dim), 4);
  RdmDump d;
  d.r_spin = rs;
  d.n_electrons = ne;
  d.d2.resize(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      double v;
      in.read(reinterpret_cast<char*>(&v), 8);
      d.d2(i, j) = v;
    }
  if (!in) throw std::runtime_error("rdm dump: truncated file");
  return d;
}

std::vector<std::string> verify_rdm_dump(const RdmDump& dump,
                                         std::optional<double> e_total,
                                         std::optional<double> e_fci,
                                         bool& ok) {
  ok = true;
  std::vector<std::string> lines;
  auto check = [&](bool pass, const std::string& what) {
    lines.push_back(std::string(pass ? "pass  " : "FAIL  ") + what);
    ok = ok && pass;
  };

  const int r = dump.r_spin;
  const int n = dump.n_electrons;
  PairIndexer pairs(r);
  if (dump.d2.rows() != pairs.size())
    throw std::runtime_error("verify: dump dimension does not match r_spin");

  check(std::abs(dump.d2.trace() - 1.0) < 1e-8, "trace(2D) = 1");
  check((dump.d2 - dump.d2.transpose()).cwiseAbs().maxCoeff() < 1e-10,
        "2D hermitian");

  RawRdms rdms;
  rdms.r_spin = r;
  rdms.n_electrons = n;
  const double c2 = binomial(n, 2);
  rdms.m2 = dump.d2 * c2;
  rdms.gamma.setZero(r, r);
  for (int p = 0; p < r; ++p)
    for (int q = 0; q < r; ++q) {
      double acc = 0.0;
      for (int k = 0; k < r; ++k) {
        if (k == p || k == q) continue;
        acc += ((p < k) ? 1 : -1) * ((q < k) ? 1 : -1) *
               rdms.m2(pairs(p, k), pairs(q, k));
      }
      rdms.gamma(p, q) = acc / (n - 1);
    }

  for (const char* cname : {"D2", "Q2", "G2", "T1", "T2"}) {
    const ConstraintMap map = build_constraint_map(cname, r);
    const Eigen::MatrixXd block = map.apply(rdms);
    Vec w;
    Mat v;
    symmetric_eig(block, w, v);
    check(w.minCoeff() > -1e-7,
          std::string(cname) + " minimum eigenvalue > -1e-7 (got " +
              std::to_string(w.minCoeff()) + ")");
  }

  if (e_total && e_fci)
    check(*e_total <= *e_fci + 1e-6, "E_SDP <= E_FCI + 1e-6");
  return lines;
}

} // namespace vrdm
