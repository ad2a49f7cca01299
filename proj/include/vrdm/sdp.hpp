#pragma once

#include <Eigen/Dense>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace vrdm {

// Block-diagonal SDP with equality constraints and optional free
// (linear) variables, in the standard primal form
//
//   min  sum_b <C_b, X_b> + c_f . f
//   s.t. sum_b <A_ib, X_b> + F_i . f = b_i,   X_b >= 0,  f free.
//
// Constraint coefficients are entered as "w * X[r,c]" with the symmetric
// partner implied; internally each A_i is a symmetric matrix.
class SdpProblem {
public:
  struct Block {
    std::string name;
    int dim = 0;
  };

  struct Entry {
    std::int32_t block;
    std::int32_t row, col; // row <= col
    double value;          // matrix element of A_i (half weight off-diag)
  };

  int add_block(const std::string& name, int dim);
  int add_free_variable();
  // new constraint with right-hand side b; returns its index
  int add_constraint(double rhs);

  // adds  w * X_block[r,c]  (+ symmetric partner) to constraint i
  void add_entry(int constraint, int block, int r, int c, double w);
  // adds  w * f_k  to constraint i
  void add_free_entry(int constraint, int k, double w);
  void set_rhs(int constraint, double v) { rhs_[constraint] = v; }

  void set_objective(int block, const Eigen::MatrixXd& c);
  void set_free_objective(const Eigen::VectorXd& c);

  // sorts/merges entries, drops empty rows (with report), verifies
  // finite data; must be called once before solving
  void finalize();

  int n_blocks() const { return static_cast<int>(blocks_.size()); }
  int n_constraints() const { return static_cast<int>(rhs_.size()); }
  int n_free() const { return n_free_; }
  const Block& block(int b) const { return blocks_[b]; }
  const Eigen::MatrixXd& objective(int b) const { return objective_[b]; }
  const Eigen::VectorXd& free_objective() const { return free_objective_; }
  const std::vector<double>& rhs() const { return rhs_; }
  bool finalized() const { return finalized_; }
  const std::vector<std::string>& preprocessing_report() const {
    return report_;
  }

  // y = A(X) + F f
  void apply_forward(const std::vector<Eigen::MatrixXd>& x,
                     const Eigen::VectorXd& f, Eigen::VectorXd& out) const;
  // (X_out, f_out) = (A^T y, F^T y); X_out must be pre-sized
  void apply_adjoint(const Eigen::VectorXd& y, std::vector<Eigen::MatrixXd>& x,
                     Eigen::VectorXd& f) const;
  // diag(A A^T + F F^T), Jacobi preconditioner for the dual solve
  Eigen::VectorXd gram_diagonal() const;

  double constraint_dot_x(int i, const std::vector<Eigen::MatrixXd>& x) const;

  // post-finalize read access to a constraint row (for dualization)
  std::pair<const Entry*, const Entry*> row(int i) const {
    return {entries_.data() + row_offsets_[i],
            entries_.data() + row_offsets_[i + 1]};
  }
  std::pair<const std::pair<std::int32_t, double>*,
            const std::pair<std::int32_t, double>*>
  free_row(int i) const {
    return {free_entries_.data() + free_offsets_[i],
            free_entries_.data() + free_offsets_[i + 1]};
  }

  // per-block trace caps for certified-bound computations (optional;
  // set by assemblers that know them)
  std::vector<double> block_trace_caps;
  // reporting convention: objective printed as sense * min-form value
  double report_sign = 1.0;

  void write_text(std::ostream& os) const;
  static SdpProblem read_text(std::istream& is);

private:
  std::vector<Block> blocks_;
  std::vector<Eigen::MatrixXd> objective_;
  Eigen::VectorXd free_objective_;
  int n_free_ = 0;
  std::vector<double> rhs_;
  // pre-finalize staging
  std::vector<std::vector<Entry>> row_entries_;
  std::vector<std::vector<std::pair<std::int32_t, double>>> row_free_;
  // post-finalize flat CSR over constraints
  std::vector<std::size_t> row_offsets_;
  std::vector<Entry> entries_;
  std::vector<std::size_t> free_offsets_;
  std::vector<std::pair<std::int32_t, double>> free_entries_;
  // per-block transpose adjacency for the adjoint scatter
  struct TEntry {
    std::int32_t row, col, constraint;
    double value;
  };
  std::vector<std::vector<TEntry>> block_transpose_;
  bool finalized_ = false;
  std::vector<std::string> report_;
};

struct SdpSolution {
  std::vector<Eigen::MatrixXd> x; // primal blocks, PSD
  Eigen::VectorXd f;              // primal free variables
  Eigen::VectorXd y;              // dual vector
  std::vector<Eigen::MatrixXd> z; // dual slacks, PSD
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double primal_residual = 0.0; // ||A(X)+Ff-b|| / (1+||b||)
  double dual_residual = 0.0;   // ||A'y+Z-C|| / (1+||C||), free part included
  double gap = 0.0;             // relative duality gap
  bool converged = false;
  int iterations = 0;
  double wall_time_seconds = 0.0;
};

} // namespace vrdm
