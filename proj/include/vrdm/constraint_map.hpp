#pragma once

#include <Eigen/Dense>
#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "vrdm/combinatorics.hpp"
#include "vrdm/fci.hpp"
#include "vrdm/fermion.hpp"

namespace vrdm {

enum class ConditionName { D2, Q2, G2, T1, T2, D3, E3, F3, Q3 };

ConditionName condition_from_string(const std::string& s);
std::string to_string(ConditionName c);

// Index structure of constraint-matrix rows.
enum class IndexSpace {
  Pair,     // i<j,          dim C(r,2)   (D2, Q2)
  OrbSq,    // (p,q) any,    dim r^2      (G2)
  Triple,   // i<j<k,        dim C(r,3)   (T1, D3, Q3)
  PairPlus, // (i<j; k),     dim C(r,2)*r (T2, E3, F3)
};

int index_space_dim(IndexSpace s, int r_spin);

// One linear-functional term of a constraint-matrix element in the raw
// RDM variables: value = coeff * { 1 | gamma[a,b] | m2[a,b] | m3[a,b] }.
struct MapTerm {
  enum Kind : std::uint8_t { Constant, OneBody, TwoBody, ThreeBody };
  Kind kind;
  std::int32_t a = 0;
  std::int32_t b = 0;
  double coeff = 1.0;
};

// Sparse linear map (1, gamma, m2, m3) -> constraint-matrix block.
// Derived mechanically by normal ordering the defining operator strings;
// nothing here is hand-transcribed. Entries are stored for the upper
// triangle only; the block is symmetric for Hermitian input.
class ConstraintMap {
public:
  ConditionName name;
  IndexSpace space;
  int r_spin = 0;
  int dim = 0;
  bool three_body_free = false; // true when no m3 terms survive (T1, T2)

  struct TermRange {
    const MapTerm* begin_;
    const MapTerm* end_;
    const MapTerm* begin() const { return begin_; }
    const MapTerm* end() const { return end_; }
    std::size_t size() const { return static_cast<std::size_t>(end_ - begin_); }
  };

  // terms for element (I,J), I<=J; stored upper-triangle only, flat
  TermRange element(int i, int j) const {
    const std::size_t u = upper_index(i, j);
    return {terms_.data() + offsets_[u], terms_.data() + offsets_[u + 1]};
  }

  // Dense evaluation on raw RDMs (necessity checks, oracle tests).
  Eigen::MatrixXd apply(const RawRdms& rdms) const;

  // row/column composite indices
  std::vector<int> row_orbitals(int idx) const;
  // the defining operator string of element (I,J)
  std::vector<FermiOp> element_string(int i, int j) const;

  void serialize(std::ostream& os) const;

  friend ConstraintMap build_constraint_map(ConditionName, int);

private:
  // flat index into the upper triangle, i <= j
  std::size_t upper_index(int i, int j) const {
    return static_cast<std::size_t>(i) * dim -
           static_cast<std::size_t>(i) * (i + 1) / 2 + j;
  }
  std::vector<MapTerm> terms_;
  std::vector<std::size_t> offsets_; // upper-tri count + 1
  PairIndexer pairs_;
  TripleIndexer triples_;
};

// Builds (and caches nothing; callers cache) the named map at a given
// spin-orbital rank.
ConstraintMap build_constraint_map(ConditionName name, int r_spin);
ConstraintMap build_constraint_map(const std::string& name, int r_spin);

// Normal orders `ops`, classifies each surviving term against the RDM
// variables and appends weight-scaled MapTerms; building block for
// operator expectation functionals outside the fixed condition list.
void accumulate_functional(std::vector<MapTerm>& out,
                           const std::vector<FermiOp>& ops, double weight,
                           const PairIndexer& pairs,
                           const TripleIndexer& triples);

// Evaluates a term list on raw RDMs.
double evaluate_functional(const std::vector<MapTerm>& terms,
                           const RawRdms& rdms);

// Signed doubled Sz of a composite row index (+1 alpha, -1 beta per
// particle, holes counted with opposite sign where applicable).
int row_sz2(const ConstraintMap& map, int idx);

} // namespace vrdm
