#pragma once

#include <Eigen/Dense>
#include <vector>

#include "vrdm/combinatorics.hpp"

namespace vrdm {

// Lexicographic ranking of k-subsets of [0,n) (combinatorial number
// system); generalizes PairIndexer/TripleIndexer to arbitrary k.
class SubsetIndexer {
public:
  SubsetIndexer() = default;
  SubsetIndexer(int n, int k);

  int n() const { return n_; }
  int k() const { return k_; }
  int size() const { return static_cast<int>(subsets_.size()); }
  const std::vector<int>& subset(int idx) const { return subsets_[idx]; }
  // sorted ascending input
  int rank(const std::vector<int>& s) const;

private:
  int n_ = 0, k_ = 0;
  std::vector<std::vector<int>> subsets_;
  std::vector<std::vector<std::int64_t>> choose_; // cached binomials
};

// Extension of a q-particle operator (antisymmetric q-basis matrix) to
// the p-particle space: the matrix of its second-quantized extension
//   sum_{A,B} b[A,B] a+_{a1}..a+_{aq} a_{bq}..a_{b1}
// restricted to p-particle Slater states. This is the Grassmann wedge
// b ^ I^(p-q) in the operator-extension normalization used throughout;
// for b = I_q it equals C(p,q) I_p.
Eigen::MatrixXd wedge_identity(const Eigen::MatrixXd& b, int q, int p, int r);

// One-body special case (q = 1).
Eigen::MatrixXd one_body_extension(const Eigen::MatrixXd& g, int p, int r);

// Partial trace from p-particle to q-particle space:
//   (L m)[A,B] = sum_{K} sign(A,K) sign(B,K) m[A u K, B u K].
// Contracting the raw p-RDM of an N-electron state yields
// C(N-q, p-q) ... times the raw q-RDM via repeated application of
// sum_k <a+.. a+_k a_k ..> identities; for p=3,q=2 the factor is N-2.
Eigen::MatrixXd contract(const Eigen::MatrixXd& m, int p, int q, int r);

// Orthogonal split of a p-particle matrix into scalar, one-body and
// two-body components under the trace inner product. The components sum
// to the projection of B onto the span of wedge-lifted two-body
// operators; each component is returned in the p-particle space.
struct UnitaryDecomposition {
  Eigen::MatrixXd scalar_part;
  Eigen::MatrixXd one_body_part;
  Eigen::MatrixXd two_body_part;

  Eigen::MatrixXd low_body_projection() const {
    return scalar_part + one_body_part + two_body_part;
  }
};

UnitaryDecomposition unitary_decompose(const Eigen::MatrixXd& b, int p, int r);

// Two-body matrix whose extension equals the <=2-body projection of B
// (least-squares in the lifted basis).
Eigen::MatrixXd extract_two_body(const Eigen::MatrixXd& b, int p, int r);

// Printed closed-form coefficient alpha_{p,k} of the contraction-based
// reconstruction; finite only for r > p + 3 and p > 3 as written, with
// 0! handled for p = 3. See fit_reconstruction_coefficients for the
// numerically determined values.
double eq13_alpha(int p, int k, int r);

// Fits coefficients c_k in  P_{<=2}(B) ~ sum_k c_k ext(L_p^k B) over a
// sample of random symmetric matrices; used to cross-check the printed
// formula. Returns (c_0, c_1, c_2).
Eigen::Vector3d fit_reconstruction_coefficients(int p, int r, unsigned seed);

} // namespace vrdm
