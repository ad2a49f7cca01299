#include "vrdm/wedge.hpp"

#include <random>
#include <stdexcept>

#include "vrdm/determinants.hpp"
#include "vrdm/linalg.hpp"

namespace vrdm {

SubsetIndexer::SubsetIndexer(int n, int k) : n_(n), k_(k) {
  if (k < 0 || k > n) throw std::invalid_argument("subset indexer: bad k");
  subsets_ = k_subsets(n, k);
  choose_.assign(n + 1, std::vector<std::int64_t>(k + 1, 0));
  for (int a = 0; a <= n; ++a)
    for (int b = 0; b <= k; ++b) choose_[a][b] = binomial(a, b);
}

int SubsetIndexer::rank(const std::vector<int>& s) const {
  // lexicographic rank: count subsets preceding s
  std::int64_t rank = 0;
  int prev = -1;
  for (int i = 0; i < k_; ++i) {
    for (int v = prev + 1; v < s[i]; ++v)
      rank += choose_[n_ - 1 - v][k_ - 1 - i];
    prev = s[i];
  }
  return static_cast<int>(rank);
}

namespace {

DetMask mask_of(const std::vector<int>& s) {
  DetMask m = 0;
  for (int v : s) m |= (1ULL << v);
  return m;
}

std::vector<int> bits_of(DetMask m, int r) {
  std::vector<int> out;
  for (int v = 0; v < r; ++v)
    if (occupied(m, v)) out.push_back(v);
  return out;
}

// applies a_{s_q} ... a_{s_1} (smallest first) to |m>, returning sign
int annihilate_subset(DetMask& m, const std::vector<int>& s) {
  int sign = 1;
  for (int v : s) {
    const int ds = apply_annihilate(m, v);
    if (ds == 0) return 0;
    sign *= ds;
  }
  return sign;
}

// applies a+_{s_q} ... a+_{s_1} with the largest first so the string
// matches the adjoint of the annihilation order above
int create_subset(DetMask& m, const std::vector<int>& s) {
  int sign = 1;
  for (auto it = s.rbegin(); it != s.rend(); ++it) {
    const int ds = apply_create(m, *it);
    if (ds == 0) return 0;
    sign *= ds;
  }
  return sign;
}

} // namespace

Eigen::MatrixXd wedge_identity(const Eigen::MatrixXd& b, int q, int p, int r) {
  if (q < 1 || q > p || p > r)
    throw std::invalid_argument("wedge_identity: need 1 <= q <= p <= r");
  SubsetIndexer qs(r, q), ps(r, p);
  if (b.rows() != qs.size() || b.cols() != qs.size())
    throw std::invalid_argument("wedge_identity: dimension mismatch");
  if (p == q) return b;

  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(ps.size(), ps.size());
  const auto removals = k_subsets(p, q); // positions within a p-subset

  for (int jdx = 0; jdx < ps.size(); ++jdx) {
    const auto& jset = ps.subset(jdx);
    const DetMask jmask = mask_of(jset);
    for (const auto& pos : removals) {
      std::vector<int> removed(q);
      for (int t = 0; t < q; ++t) removed[t] = jset[pos[t]];
      DetMask base = jmask;
      const int s_ket = annihilate_subset(base, removed);
      const int col_b = qs.rank(removed);
      // re-add any q-subset disjoint from the remainder
      for (int adx = 0; adx < qs.size(); ++adx) {
        const auto& aset = qs.subset(adx);
        const DetMask amask = mask_of(aset);
        if (amask & base) continue;
        DetMask full = base;
        const int s_bra = create_subset(full, aset);
        const int idx = ps.rank(bits_of(full, r));
        out(idx, jdx) += s_ket * s_bra * b(adx, col_b);
      }
    }
  }
  return out;
}

Eigen::MatrixXd one_body_extension(const Eigen::MatrixXd& g, int p, int r) {
  if (g.rows() != r || g.cols() != r)
    throw std::invalid_argument("one_body_extension: dimension mismatch");
  SubsetIndexer ps(r, p);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(ps.size(), ps.size());
  for (int jdx = 0; jdx < ps.size(); ++jdx) {
    const auto& jset = ps.subset(jdx);
    const DetMask jmask = mask_of(jset);
    for (int b : jset) {
      DetMask base = jmask;
      const int s_ket = apply_annihilate(base, b);
      for (int a = 0; a < r; ++a) {
        if (occupied(base, a)) continue;
        DetMask full = base;
        const int s_bra = apply_create(full, a);
        const int idx = ps.rank(bits_of(full, r));
        out(idx, jdx) += s_ket * s_bra * g(a, b);
      }
    }
  }
  return out;
}

Eigen::MatrixXd contract(const Eigen::MatrixXd& m, int p, int q, int r) {
  if (q > p) throw std::invalid_argument("contract: q must not exceed p");
  if (q < 0 || p > r) throw std::invalid_argument("contract: bad ranks");
  SubsetIndexer ps(r, p), qs(r, q);
  if (m.rows() != ps.size() || m.cols() != ps.size())
    throw std::invalid_argument("contract: dimension mismatch");
  if (p == q) return m;

  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(qs.size(), qs.size());
  SubsetIndexer ks(r, p - q);

  for (int adx = 0; adx < qs.size(); ++adx) {
    const DetMask amask = mask_of(qs.subset(adx));
    for (int bdx = 0; bdx < qs.size(); ++bdx) {
      const DetMask bmask = mask_of(qs.subset(bdx));
      double acc = 0.0;
      for (int kdx = 0; kdx < ks.size(); ++kdx) {
        const auto& kset = ks.subset(kdx);
        const DetMask kmask = mask_of(kset);
        if ((kmask & amask) || (kmask & bmask)) continue;
        // sign of sorting (A,K) and (B,K) into ascending order
        std::vector<int> au = qs.subset(adx);
        au.insert(au.end(), kset.begin(), kset.end());
        std::vector<int> bu = qs.subset(bdx);
        bu.insert(bu.end(), kset.begin(), kset.end());
        const int sa = sort_with_parity(au);
        const int sb = sort_with_parity(bu);
        acc += sa * sb * m(ps.rank(au), ps.rank(bu));
      }
      out(adx, bdx) = acc;
    }
  }
  return out;
}

namespace {

// Symmetric-matrix basis of the s-dimensional operator space, and the
// lifted Gram machinery shared by the projection routines.
struct LiftedBasis {
  std::vector<Eigen::MatrixXd> lifted; // extensions to the p-space
  Eigen::MatrixXd gram;

  Eigen::VectorXd solve_coefficients(const Eigen::MatrixXd& b) const {
    Eigen::VectorXd rhs(lifted.size());
    for (std::size_t i = 0; i < lifted.size(); ++i)
      rhs[static_cast<Eigen::Index>(i)] =
          (lifted[i].array() * b.array()).sum();
    return gram.ldlt().solve(rhs);
  }

  Eigen::MatrixXd project(const Eigen::MatrixXd& b) const {
    const Eigen::VectorXd c = solve_coefficients(b);
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(b.rows(), b.cols());
    for (std::size_t i = 0; i < lifted.size(); ++i)
      out += c[static_cast<Eigen::Index>(i)] * lifted[i];
    return out;
  }
};

LiftedBasis one_body_lifted_basis(int p, int r) {
  LiftedBasis lb;
  for (int a = 0; a < r; ++a)
    for (int b = a; b < r; ++b) {
      Eigen::MatrixXd g = Eigen::MatrixXd::Zero(r, r);
      g(a, b) = g(b, a) = 1.0;
      lb.lifted.push_back(one_body_extension(g, p, r));
    }
  const int s = static_cast<int>(lb.lifted.size());
  lb.gram.resize(s, s);
  for (int i = 0; i < s; ++i)
    for (int j = 0; j <= i; ++j)
      lb.gram(i, j) = lb.gram(j, i) =
          (lb.lifted[i].array() * lb.lifted[j].array()).sum();
  return lb;
}

LiftedBasis two_body_lifted_basis(int p, int r) {
  LiftedBasis lb;
  SubsetIndexer pairs(r, 2);
  for (int i = 0; i < pairs.size(); ++i)
    for (int j = i; j < pairs.size(); ++j) {
      Eigen::MatrixXd v = Eigen::MatrixXd::Zero(pairs.size(), pairs.size());
      v(i, j) = v(j, i) = 1.0;
      lb.lifted.push_back(wedge_identity(v, 2, p, r));
    }
  const int s = static_cast<int>(lb.lifted.size());
  lb.gram.resize(s, s);
  for (int i = 0; i < s; ++i)
    for (int j = 0; j <= i; ++j)
      lb.gram(i, j) = lb.gram(j, i) =
          (lb.lifted[i].array() * lb.lifted[j].array()).sum();
  return lb;
}

} // namespace

UnitaryDecomposition unitary_decompose(const Eigen::MatrixXd& b, int p, int r) {
  if (p < 2) throw std::invalid_argument("unitary_decompose: p must be >= 2");
  SubsetIndexer ps(r, p);
  if (b.rows() != ps.size() || b.cols() != ps.size())
    throw std::invalid_argument("unitary_decompose: dimension mismatch");

  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(ps.size(), ps.size());
  const double tr = b.trace();

  UnitaryDecomposition out;
  out.scalar_part = (tr / ps.size()) * id;

  const LiftedBasis lb1 = one_body_lifted_basis(p, r);
  const Eigen::MatrixXd p1 = lb1.project(b);
  out.one_body_part = p1 - out.scalar_part;

  const LiftedBasis lb2 = two_body_lifted_basis(p, r);
  const Eigen::MatrixXd p2 = lb2.project(b);
  out.two_body_part = p2 - p1;
  return out;
}

Eigen::MatrixXd extract_two_body(const Eigen::MatrixXd& b, int p, int r) {
  SubsetIndexer pairs(r, 2);
  const LiftedBasis lb2 = two_body_lifted_basis(p, r);
  const Eigen::VectorXd c = lb2.solve_coefficients(b);
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(pairs.size(), pairs.size());
  int t = 0;
  for (int i = 0; i < pairs.size(); ++i)
    for (int j = i; j < pairs.size(); ++j) {
      v(i, j) += c[t];
      v(j, i) = v(i, j);
      ++t;
    }
  return v;
}

double eq13_alpha(int p, int k, int r) {
  auto fact = [](int n) -> double {
    if (n < 0) throw std::domain_error("eq13_alpha: negative factorial");
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
  };
  const double sign = ((3 - k) % 2 == 0) ? 1.0 : -1.0;
  const double num = sign * fact(r - p - 3) * (r - p - 2) * fact(p) * fact(p);
  const double den = fact(r - 2 - k) * fact(2 - k) * fact(p - 3) *
                     static_cast<double>(k - p) * fact(k) * fact(k);
  return num / den;
}

Eigen::Vector3d fit_reconstruction_coefficients(int p, int r, unsigned seed) {
  SubsetIndexer ps(r, p);
  std::mt19937 rng(seed);
  std::normal_distribution<double> dist(0.0, 1.0);

  // least squares over a few random samples
  Eigen::Matrix3d ata = Eigen::Matrix3d::Zero();
  Eigen::Vector3d atb = Eigen::Vector3d::Zero();
  for (int sample = 0; sample < 3; ++sample) {
    Eigen::MatrixXd b(ps.size(), ps.size());
    for (int i = 0; i < ps.size(); ++i)
      for (int j = 0; j <= i; ++j) b(i, j) = b(j, i) = dist(rng);

    const UnitaryDecomposition ud = unitary_decompose(b, p, r);
    const Eigen::MatrixXd target = ud.low_body_projection();

    const double l0 = b.trace();
    const Eigen::MatrixXd l1 = contract(b, p, 1, r);
    const Eigen::MatrixXd l2 = contract(b, p, 2, r);

    std::vector<Eigen::MatrixXd> feats(3);
    feats[0] = l0 * Eigen::MatrixXd::Identity(ps.size(), ps.size());
    feats[1] = one_body_extension(l1, p, r);
    feats[2] = wedge_identity(l2, 2, p, r);

    for (int a = 0; a < 3; ++a) {
      for (int c = 0; c < 3; ++c)
        ata(a, c) += (feats[a].array() * feats[c].array()).sum();
      atb[a] += (feats[a].array() * target.array()).sum();
    }
  }
  return ata.ldlt().solve(atb);
}

} // namespace vrdm
