// Command-line front end: single points, radius scans, FCIDUMP
// import/export, and post-hoc verification of dumped 2-RDMs.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include "vrdm/fcidump.hpp"
#include "vrdm/run.hpp"

#if defined(_OPENMP)
#include <omp.h>
#endif

extern "C" void openblas_set_num_threads(int) __attribute__((weak));

namespace {

void apply_thread_settings(bool deterministic) {
  int threads = 0;
  if (const char* env = std::getenv("VRDM_NUM_THREADS")) threads = std::atoi(env);
#if defined(_OPENMP)
  if (threads > 0) omp_set_num_threads(threads);
#endif
  if (openblas_set_num_threads) {
    // block-level parallelism only; nested BLAS threading is disabled so
    // per-block results do not depend on scheduling
    openblas_set_num_threads(deterministic ? 1 : 1);
  }
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file " + path);
  out << text;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"variational 2-RDM toolkit for hydrogen rings"};
  app.require_subcommand(1);

  vrdm::RunConfig cfg;
  std::string conditions = "DQG";
  double tol = 1e-6;
  std::string config_file;

  app.set_config("--config", "", "declarative run configuration file");

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--atoms", cfg.ring_atoms, "ring size (hydrogen atoms)")
        ->capture_default_str();
    sub->add_option("--radius", cfg.radius_angstrom, "ring radius in angstrom")
        ->capture_default_str();
    sub->add_option("--electrons", cfg.n_electrons,
                    "electron count (default: one per atom)");
    sub->add_option("--fcidump", cfg.fcidump_path,
                    "read integrals from an FCIDUMP file instead");
    sub->add_option("--basis", cfg.basis_file, "basis data table file");
    sub->add_option("--methods", cfg.methods,
                    "methods: HF FCI DQG DQG+T1 DQG+T2 DQG+T1+T2 DQG3")
        ->delimiter(',');
    sub->add_option("--tol", tol, "SDP stopping tolerance")
        ->capture_default_str();
    sub->add_option("--conditions", conditions,
                    "condition set used when --methods is omitted")
        ->capture_default_str();
    sub->add_option("--max-iterations", cfg.variational.solver.max_iterations,
                    "SDP iteration cap")
        ->capture_default_str();
    sub->add_flag("--deterministic", cfg.deterministic,
                  "deterministic mode (byte-identical outputs)");
    sub->add_flag("--s2", cfg.variational.constrain_s2,
                  "add the <S^2>=0 equality");
    sub->add_flag("!--no-sz-blocking", cfg.variational.sz_blocking,
                  "disable Sz block structure");
    sub->add_option("--out", cfg.out_path, "output file (default stdout)");
    sub->add_option("--dump-rdm", cfg.rdm_dump_path,
                    "binary 2-RDM dump path (last RDM method)");
    sub->add_option("--log-every", cfg.variational.solver.log_every,
                    "solver progress stride (0 = silent)");
  };

  auto* single = app.add_subcommand("single", "run one geometry");
  add_common(single);

  auto* scan = app.add_subcommand("scan", "run a radius scan");
  add_common(scan);
  double scan_from = 0.55, scan_to = 1.30, scan_step = 0.05;
  scan->add_option("--from", scan_from, "first radius (angstrom)")
      ->capture_default_str();
  scan->add_option("--to", scan_to, "last radius (angstrom)")
      ->capture_default_str();
  scan->add_option("--step", scan_step, "radius step")->capture_default_str();
  scan->add_option("--workers", cfg.scan_workers, "scan worker pool size")
      ->capture_default_str();

  auto* fcid = app.add_subcommand("fcidump", "write integrals as FCIDUMP");
  std::string fcid_out = "ring.fcidump";
  fcid->add_option("--atoms", cfg.ring_atoms, "ring size")->capture_default_str();
  fcid->add_option("--radius", cfg.radius_angstrom, "ring radius (angstrom)")
      ->capture_default_str();
  fcid->add_option("--basis", cfg.basis_file, "basis data table file");
  fcid->add_option("--out", fcid_out, "output path")->capture_default_str();

  auto* verify = app.add_subcommand("verify", "check a finished result");
  std::string dump_path;
  double verify_e_total = 0.0, verify_e_fci = 0.0;
  bool has_e = false, has_fci = false;
  verify->add_option("--rdm", dump_path, "binary 2-RDM dump")->required();
  verify->add_option("--e-total", verify_e_total, "energy of the result")
      ->each([&](const std::string&) { has_e = true; });
  verify->add_option("--e-fci", verify_e_fci, "FCI reference energy")
      ->each([&](const std::string&) { has_fci = true; });

  CLI11_PARSE(app, argc, argv);

  apply_thread_settings(cfg.deterministic);
  cfg.variational.solver.tolerance = tol;
  if (cfg.methods.empty() && (single->parsed() || scan->parsed()))
    cfg.methods = {"HF", "FCI", conditions};

  try {
    if (single->parsed()) {
      const auto records = vrdm::run_single(cfg);
      emit(vrdm::records_to_json(records), cfg.out_path);
      for (const auto& r : records)
        if (!r.converged) return 2;
      return 0;
    }
    if (scan->parsed()) {
      if (cfg.radius_grid.empty())
        for (double r = scan_from; r <= scan_to + 1e-9; r += scan_step)
          cfg.radius_grid.push_back(r);
      const auto records = vrdm::run_scan(cfg);
      emit(vrdm::records_to_csv(records), cfg.out_path);
      for (const auto& r : records)
        if (r.method == "error") return 2;
      return 0;
    }
    if (fcid->parsed()) {
      const auto geom = vrdm::ring_geometry(cfg.ring_atoms, cfg.radius_angstrom);
      const auto prims =
          cfg.basis_file.empty()
              ? vrdm::parse_basis_table(
                    "element H\n3.425250914 0.1543289673\n0.6239137298 "
                    "0.5353281423\n0.1688554040 0.4446345422\n",
                    "H")
              : vrdm::load_basis_file(cfg.basis_file, "H");
      const auto ints = vrdm::orthonormalize(
          vrdm::compute_integrals(geom, vrdm::shells_for_geometry(geom, prims)));
      vrdm::fcidump_write(fcid_out, ints, cfg.ring_atoms, 0);
      std::cout << "wrote " << fcid_out << "\n";
      return 0;
    }
    if (verify->parsed()) {
      const auto dump = vrdm::read_rdm_dump(dump_path);
      bool ok = false;
      const auto lines = vrdm::verify_rdm_dump(
          dump, has_e ? std::optional<double>(verify_e_total) : std::nullopt,
          has_fci ? std::optional<double>(verify_e_fci) : std::nullopt, ok);
      for (const auto& l : lines) std::cout << l << "\n";
      return ok ? 0 : 3;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
