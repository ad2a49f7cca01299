#pragma once

#include <functional>
#include <map>
#include <string>

#include "vrdm/sdp.hpp"

namespace vrdm {

struct SdpSolverConfig {
  double tolerance = 1e-6;   // max of primal/dual residual and gap
  int max_iterations = 50000;
  double sigma = 1.0;        // initial penalty; adapted in [1e-4, 1e6]
  int sigma_update_every = 50;
  double cg_tolerance_floor = 1e-10;
  int cg_max_iterations = 20000;
  int log_every = 0; // 0 = silent
  std::function<void(int iter, double rp, double rd, double gap, double sigma)>
      progress;
  // diverging-residual window used to flag likely infeasibility
  int infeasibility_window = 500;
  // optional warm start, matched to blocks by name
  std::map<std::string, Eigen::MatrixXd> initial_x;
};

// Boundary-point (augmented-Lagrangian) method: alternates a dual linear
// solve on the A A^T + F F^T system (matrix-free CG, Jacobi
// preconditioned) with a single eigendecomposition per block per
// iteration that yields the PSD projection pair (Z from the positive
// part, X from sigma times the negative part).
SdpSolution solve_sdp(const SdpProblem& problem, const SdpSolverConfig& cfg = {});

struct SdpCertificate {
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double primal_residual_abs = 0.0;
  double dual_residual_abs = 0.0;
  double gap = 0.0;
  // rigorous bound on the true optimum of the min-form problem:
  //   opt >= dual_objective - margin
  // margin uses per-block spectral norms of the dual infeasibility times
  // the declared trace caps; only valid when free-variable dual
  // feasibility is tight and caps are present.
  double lower_bound = 0.0;
  double margin = 0.0;
  bool bound_valid = false;
  std::string note;
};

// Recomputes all residuals from the returned variables with compensated
// accumulation and derives the guarantee margin.
SdpCertificate certify(const SdpProblem& problem, const SdpSolution& sol);

} // namespace vrdm
