#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vrdm/constraint_map.hpp"
#include "vrdm/reduced_hamiltonian.hpp"
#include "vrdm/sdp_solver.hpp"

namespace vrdm {

// Hierarchy levels; every level contains DQG.
enum class ConditionLevel { DQG, DQG_T1, DQG_T2, DQG_T1T2, DQG3 };

struct ConditionSet {
  ConditionLevel level = ConditionLevel::DQG;

  std::vector<ConditionName> condition_names() const;
  std::string name() const;
  static ConditionSet from_string(const std::string& s);
};

struct VariationalConfig {
  SdpSolverConfig solver;
  bool sz_blocking = true;  // split blocks by Sz sectors (zeroing
                            // forbidden cross-sector elements)
  bool constrain_sz = true; // <N_alpha - N_beta> = 0
  bool constrain_s2 = false; // optional <S^2> = 0 equality
};

// Assembled primal program plus the bookkeeping needed to map solver
// blocks back onto RDM objects and to dualize.
class VariationalProblem {
public:
  SdpProblem sdp;

  int n_electrons = 0;
  int r_spin = 0;

  struct SectorBlock {
    ConditionName condition;
    int sz2 = 0;
    int sdp_block = -1;
    std::vector<int> rows; // global condition-row ids in block order
  };
  std::vector<SectorBlock> sectors;

  // constraint indices of the special rows
  int trace_row = -1;
  int sz_row = -1;
  int s2_row = -1;

  // pair-space element -> (block, r, c) for the D2 variable
  int d2_block_of_pair(int pair_idx) const { return d2_block_[pair_idx]; }
  int d2_pos_of_pair(int pair_idx) const { return d2_pos_[pair_idx]; }

  // reassemble the full pair-basis raw 2-RDM from solver blocks
  Eigen::MatrixXd extract_m2(const std::vector<Eigen::MatrixXd>& x) const;

  friend VariationalProblem assemble_primal(const ReducedHamiltonian& rh,
                                            const ConditionSet& conds,
                                            const VariationalConfig& cfg);

private:
  std::vector<int> d2_block_;
  std::vector<int> d2_pos_;
};

VariationalProblem assemble_primal(const ReducedHamiltonian& rh,
                                   const ConditionSet& conds,
                                   const VariationalConfig& cfg = {});

// Polar-cone (dual) form: maximize the energy bound subject to the
// reduced Hamiltonian minus the bound decomposing over the adjoint
// images of PSD certificate blocks. Built mechanically as the Lagrangian
// dual of the primal program.
struct PolarConeProblem {
  SdpProblem sdp;
  // rows of the dualized problem that pin the D2-space elements,
  // indexed (d2 sector block, r, c) -> constraint id
  std::vector<std::tuple<int, int, int, int>> d2_rows;
  const VariationalProblem* primal = nullptr;
};

PolarConeProblem assemble_polar_cone(const VariationalProblem& primal);

// Physical results extracted from a converged solve.
struct RdmSet {
  Eigen::MatrixXd d2; // trace-one pair-basis 2-RDM
  Eigen::MatrixXd d1; // trace-one spin-orbital 1-RDM
  double e_total = 0.0;  // dual (certified-side) energy incl. E_nn
  double e_primal = 0.0; // Tr(K 2D) + E_nn from the primal iterate
  Eigen::VectorXd occupations; // natural occupations on [0,1]
  double r12_expectation = 0.0;
  double rdm_l2_error = -1.0; // vs reference when provided
  bool converged = false;
  double primal_residual = 0.0, dual_residual = 0.0, gap = 0.0;
  int iterations = 0;
  double wall_time_seconds = 0.0;
};

RdmSet extract_rdm_set(const VariationalProblem& vp,
                       const ReducedHamiltonian& rh, const SdpSolution& sol);

RdmSet solve_variational(const ReducedHamiltonian& rh,
                         const ConditionSet& conds,
                         const VariationalConfig& cfg = {});

// Frobenius distance between two trace-one pair-basis 2-RDMs.
double rdm_l2_error(const Eigen::MatrixXd& d2, const Eigen::MatrixXd& d2_ref);

// Solve the polar-cone form and extract (energy bound, 2-RDM from the
// multipliers of the reduced-Hamiltonian constraint, certificates).
struct PolarConeSolution {
  double energy = 0.0; // electronic + nuclear
  Eigen::MatrixXd d2;  // trace-one, from Lagrange multipliers
  SdpSolution raw;
  // max-norm residual of the certificate reconstruction of K - E I
  double reconstruction_residual = 0.0;
};

PolarConeSolution solve_polar_cone(const VariationalProblem& vp,
                                   const ReducedHamiltonian& rh,
                                   const SdpSolverConfig& cfg = {});

// Folds a linear RDM functional into an equivalent pair-space matrix B
// with Tr(B m2) = value on any N-electron state: two-body terms map
// directly, one-body terms via the lifted operator over (N-1), constants
// via the identity over C(N,2).
Eigen::MatrixXd collapse_functional(const std::vector<MapTerm>& terms,
                                    int n_electrons, int r_spin);

// Two-body collapse of a weighted constraint block: the pair matrix of
// the operator sum_{IJ} w[I,J] * (defining string of element (I,J)).
// Only valid for three-body-free maps.
Eigen::MatrixXd collapse_condition(const ConstraintMap& map,
                                   const Eigen::MatrixXd& w_full,
                                   int n_electrons);

// Max-norm residual of  K - E I  against the collapsed certificate sum
// of a converged polar-cone solution (three-body-free condition sets).
double polar_cone_reconstruction_residual(const VariationalProblem& vp,
                                          const ReducedHamiltonian& rh,
                                          const PolarConeProblem& pc,
                                          const SdpSolution& sol);

// Builds raw RDMs of a single determinant (used for trace caps and
// tests).
RawRdms determinant_rdms(int r_spin, DetMask occupation, bool with_three_body);

// <S^2> as a linear functional of (1, gamma, m2), derived by normal
// ordering.
std::vector<MapTerm> s2_functional(int r_spin);

} // namespace vrdm
