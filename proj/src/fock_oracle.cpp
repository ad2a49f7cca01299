#include "vrdm/fock_oracle.hpp"

#include <random>
#include <stdexcept>

namespace vrdm {

FockOracle::FockOracle(int r_spin) : r_spin_(r_spin) {
  if (r_spin < 1 || r_spin > 12)
    throw std::invalid_argument("fock oracle: r_spin must be in [1,12]");
  const int d = dim();
  annihilate_.resize(r_spin);
  create_.resize(r_spin);
  using Trip = Eigen::Triplet<double>;
  for (int p = 0; p < r_spin; ++p) {
    std::vector<Trip> ta, tc;
    ta.reserve(d / 2);
    tc.reserve(d / 2);
    for (DetMask m = 0; m < static_cast<DetMask>(d); ++m) {
      DetMask ma = m;
      if (int s = apply_annihilate(ma, p); s != 0)
        ta.emplace_back(static_cast<int>(ma), static_cast<int>(m), s);
      DetMask mc = m;
      if (int s = apply_create(mc, p); s != 0)
        tc.emplace_back(static_cast<int>(mc), static_cast<int>(m), s);
    }
    annihilate_[p].resize(d, d);
    annihilate_[p].setFromTriplets(ta.begin(), ta.end());
    create_[p].resize(d, d);
    create_[p].setFromTriplets(tc.begin(), tc.end());
  }
}

const Eigen::SparseMatrix<double>& FockOracle::annihilate(int p) const {
  if (p < 0 || p >= r_spin_)
    throw std::invalid_argument("fock oracle: index out of range");
  return annihilate_[p];
}

const Eigen::SparseMatrix<double>& FockOracle::create(int p) const {
  if (p < 0 || p >= r_spin_)
    throw std::invalid_argument("fock oracle: index out of range");
  return create_[p];
}

Eigen::SparseMatrix<double> FockOracle::apply(
    const std::vector<FermiOp>& ops) const {
  Eigen::SparseMatrix<double> acc(dim(), dim());
  acc.setIdentity();
  // rightmost operator acts first
  for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
    const auto& m = it->dagger ? create(it->index) : annihilate(it->index);
    acc = (m * acc).eval();
  }
  return acc;
}

Eigen::SparseMatrix<double> FockOracle::apply(const std::string& ops) const {
  return apply(parse_operator_string(ops));
}

double FockOracle::expectation(const std::vector<FermiOp>& ops,
                               const Eigen::VectorXd& psi) const {
  Eigen::VectorXd v = psi;
  for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
    const auto& m = it->dagger ? create(it->index) : annihilate(it->index);
    v = (m * v).eval();
  }
  return psi.dot(v);
}

Eigen::VectorXd FockOracle::embed(const DeterminantBasis& basis,
                                  const Eigen::VectorXd& ci) const {
  if (static_cast<std::size_t>(ci.size()) != basis.size())
    throw std::invalid_argument("fock oracle: CI vector size mismatch");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(dim());
  for (std::size_t i = 0; i < basis.size(); ++i)
    out[static_cast<int>(basis.dets[i])] = ci[static_cast<int>(i)];
  return out;
}

Eigen::VectorXd FockOracle::random_sector_state(int n_electrons, int sz2,
                                                unsigned seed) const {
  DeterminantBasis basis(r_spin_, n_electrons, sz2);
  if (basis.size() == 0)
    throw std::invalid_argument("fock oracle: empty sector");
  std::mt19937 rng(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  Eigen::VectorXd ci(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) ci[i] = dist(rng);
  ci.normalize();
  return embed(basis, ci);
}

} // namespace vrdm
