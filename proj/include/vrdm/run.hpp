#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vrdm/variational.hpp"

namespace vrdm {

struct RunConfig {
  // system: a hydrogen ring or an external FCIDUMP
  int ring_atoms = 8;
  double radius_angstrom = 0.70710678118654752;
  std::vector<double> radius_grid; // scan; strictly increasing
  std::string fcidump_path;        // overrides the geometry when set
  std::string basis_file;          // basis table; built-in STO-3G if empty
  int n_electrons = -1;            // default: one per ring atom

  std::vector<std::string> methods; // HF, FCI, DQG, DQG+T1, DQG+T2,
                                    // DQG+T1+T2, DQG3
  VariationalConfig variational;
  bool deterministic = false;
  int scan_workers = 1;

  std::string out_path;      // JSON (single) / CSV (scan); empty = stdout
  std::string rdm_dump_path; // optional binary 2-RDM dump (last method)

  void validate() const;
};

struct MethodRecord {
  std::string system;
  double radius_angstrom = 0.0;
  std::string method;
  double e_total = 0.0;
  double e_error_vs_fci = 0.0;
  bool has_fci_reference = false;
  double hono = -1.0, luno = -1.0;
  double r12 = -1.0;
  double rdm_l2_error_vs_fci = -1.0;
  bool converged = false;
  double primal_residual = -1.0, dual_residual = -1.0, gap = -1.0;
  int iterations = 0;
  double seconds = 0.0;
  std::string note;
};

std::vector<MethodRecord> run_single(const RunConfig& cfg);
std::vector<MethodRecord> run_scan(const RunConfig& cfg);

std::string records_to_json(const std::vector<MethodRecord>& records);
std::string records_to_csv(const std::vector<MethodRecord>& records);

// binary 2-RDM dump: "VRDM" magic, version, r_spin, n_electrons,
// pair dimension, then row-major doubles of the trace-one 2-RDM
void write_rdm_dump(const std::string& path, int r_spin, int n_electrons,
                    const Eigen::MatrixXd& d2);
struct RdmDump {
  int r_spin = 0;
  int n_electrons = 0;
  Eigen::MatrixXd d2;
};
RdmDump read_rdm_dump(const std::string& path);

// invariant suite over a finished result (trace, hermiticity,
// positivity, three-body-free necessity maps, optional FCI bound);
// returns human-readable lines, sets ok=false on any failure
std::vector<std::string> verify_rdm_dump(const RdmDump& dump,
                                         std::optional<double> e_total,
                                         std::optional<double> e_fci,
                                         bool& ok);

} // namespace vrdm
