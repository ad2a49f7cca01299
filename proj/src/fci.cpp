#include "vrdm/fci.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vrdm/linalg.hpp"

namespace vrdm {

SpinIntegrals::SpinIntegrals(const MolecularIntegrals& ints)
    : r_spin(2 * ints.n_orbitals), spatial_(&ints.eri) {
  const Eigen::MatrixXd hsp = ints.core_hamiltonian();
  h.setZero(r_spin, r_spin);
  for (int p = 0; p < r_spin; ++p)
    for (int q = 0; q < r_spin; ++q)
      if (p % 2 == q % 2) h(p, q) = hsp(p / 2, q / 2);
}

double SpinIntegrals::eri(int p, int q, int s, int t) const {
  if (p % 2 != q % 2 || s % 2 != t % 2) return 0.0;
  return (*spatial_)(p / 2, q / 2, s / 2, t / 2);
}

namespace {

// all occupied spin orbitals of a determinant
inline void occupied_list(DetMask m, int r_spin, std::vector<int>& occ) {
  occ.clear();
  for (int p = 0; p < r_spin; ++p)
    if (occupied(m, p)) occ.push_back(p);
}

double diagonal_element(DetMask m, int r_spin, const SpinIntegrals& si,
                        std::vector<int>& occ) {
  occupied_list(m, r_spin, occ);
  double e = 0.0;
  for (int a : occ) e += si.h(a, a);
  for (std::size_t i = 0; i < occ.size(); ++i)
    for (std::size_t j = i + 1; j < occ.size(); ++j)
      e += si.eri_antisym(occ[i], occ[j], occ[i], occ[j]);
  return e;
}

} // namespace

Eigen::SparseMatrix<double> build_hamiltonian(const DeterminantBasis& basis,
                                              const SpinIntegrals& si) {
  const int n = static_cast<int>(basis.size());
  const int r = basis.r_spin;
  std::vector<Eigen::Triplet<double>> trips;
  std::vector<int> occ, occ2;

  for (int bi = 0; bi < n; ++bi) {
    const DetMask d = basis.dets[bi];
    trips.emplace_back(bi, bi, diagonal_element(d, r, si, occ));
    occupied_list(d, r, occ);

    // single excitations p -> a
    for (int p : occ)
      for (int a = 0; a < r; ++a) {
        if (occupied(d, a)) continue;
        DetMask m = d;
        int sign = apply_annihilate(m, p);
        sign *= apply_create(m, a);
        if (m <= d) continue; // upper triangle only
        const std::int64_t bj = basis.find(m);
        if (bj < 0) continue;
        double v = si.h(a, p);
        for (int q : occ)
          if (q != p) v += si.eri_antisym(a, q, p, q);
        if (v != 0.0) trips.emplace_back(bi, static_cast<int>(bj), sign * v);
      }

    // double excitations (p<q) -> (a<b)
    for (std::size_t i = 0; i < occ.size(); ++i)
      for (std::size_t j = i + 1; j < occ.size(); ++j) {
        const int p = occ[i], q = occ[j];
        for (int a = 0; a < r; ++a) {
          if (occupied(d, a)) continue;
          for (int b = a + 1; b < r; ++b) {
            if (occupied(d, b)) continue;
            DetMask m = d;
            int sign = apply_annihilate(m, q);
            sign *= apply_annihilate(m, p);
            sign *= apply_create(m, a);
            sign *= apply_create(m, b);
            if (m <= d) continue;
            const std::int64_t bj = basis.find(m);
            if (bj < 0) continue;
            // <m|H|d> = sign * <ab||pq> under the applied operator order
            const double v = si.eri_antisym(b, a, q, p);
            if (v != 0.0)
              trips.emplace_back(bi, static_cast<int>(bj), sign * v);
          }
        }
      }
  }

  Eigen::SparseMatrix<double> hmat(n, n);
  hmat.setFromTriplets(trips.begin(), trips.end());
  Eigen::SparseMatrix<double> ht = hmat.transpose();
  Eigen::SparseMatrix<double> diag(n, n);
  {
    std::vector<Eigen::Triplet<double>> dts;
    for (int i = 0; i < n; ++i) dts.emplace_back(i, i, hmat.coeff(i, i));
    diag.setFromTriplets(dts.begin(), dts.end());
  }
  return hmat + ht - diag;
}

namespace {

// Davidson with diagonal preconditioning for the lowest eigenpair.
void davidson_lowest(const Eigen::SparseMatrix<double>& hmat, double tol,
                     int max_iter, double& eval, Eigen::VectorXd& evec,
                     double& resid, int& iters) {
  const int n = static_cast<int>(hmat.rows());
  Eigen::VectorXd hdiag = hmat.diagonal();

  const int max_space = 24;
  std::vector<Eigen::VectorXd> vs, hvs;

  // unit start vector on the lowest-diagonal determinant
  int i0 = 0;
  hdiag.minCoeff(&i0);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
  v[i0] = 1.0;
  vs.push_back(v);
  hvs.push_back(hmat * v);

  eval = hdiag[i0];
  evec = v;
  resid = 1e99;

  for (iters = 1; iters <= max_iter; ++iters) {
    const int k = static_cast<int>(vs.size());
    Eigen::MatrixXd hs(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j <= i; ++j) hs(i, j) = hs(j, i) = vs[i].dot(hvs[j]);
    Vec w;
    Mat u;
    symmetric_eig(hs, w, u);
    eval = w[0];
    evec.setZero(n);
    Eigen::VectorXd hx = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < k; ++i) {
      evec += u(i, 0) * vs[i];
      hx += u(i, 0) * hvs[i];
    }
    Eigen::VectorXd res = hx - eval * evec;
    resid = res.norm();
    if (resid < tol) return;

    if (k >= max_space) {
      // collapse to the current Ritz vector
      vs.clear();
      hvs.clear();
      evec.normalize();
      vs.push_back(evec);
      hvs.push_back(hmat * evec);
      continue;
    }

    // preconditioned correction, orthogonalized twice
    Eigen::VectorXd t(n);
    for (int i = 0; i < n; ++i) {
      const double d = hdiag[i] - eval;
      t[i] = res[i] / ((std::abs(d) > 1e-8) ? d : std::copysign(1e-8, d == 0 ? 1 : d));
    }
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : vs) t -= b.dot(t) * b;
    const double tn = t.norm();
    if (tn < 1e-12) return; // stagnated at solver precision
    t /= tn;
    vs.push_back(t);
    hvs.push_back(hmat * t);
  }
}

} // namespace

FciResult fci_ground_state(const MolecularIntegrals& ints, int n_electrons,
                           const FciConfig& cfg) {
  if (!ints.orthonormal)
    throw std::invalid_argument("fci: integrals must be orthonormal");
  const int r_spin = 2 * ints.n_orbitals;
  if (n_electrons < 0 || n_electrons > r_spin)
    throw std::invalid_argument("fci: bad electron count");

  FciResult out;
  out.basis = DeterminantBasis(r_spin, n_electrons, cfg.sz2);
  const std::size_t nd = out.basis.size();
  if (nd == 0) throw std::invalid_argument("fci: empty determinant space");
  if (nd > cfg.max_determinants)
    throw std::runtime_error("fci: determinant space too large (" +
                             std::to_string(nd) + ")");

  if (n_electrons == 0) {
    out.energy = ints.e_nuclear;
    out.ci = Eigen::VectorXd::Ones(1);
    return out;
  }

  SpinIntegrals si(ints);
  const auto hmat = build_hamiltonian(out.basis, si);

  if (nd <= cfg.dense_threshold) {
    Vec w;
    Mat v;
    symmetric_eig(Eigen::MatrixXd(hmat), w, v);
    out.energy = w[0] + ints.e_nuclear;
    out.ci = v.col(0);
    out.residual_norm = (hmat * out.ci - w[0] * out.ci).norm();
    out.iterations = 1;
  } else {
    double eval = 0.0, resid = 0.0;
    int iters = 0;
    Eigen::VectorXd evec;
    davidson_lowest(hmat, cfg.residual_tol, cfg.max_davidson_iter, eval, evec,
                    resid, iters);
    out.energy = eval + ints.e_nuclear;
    out.ci = evec.normalized();
    out.residual_norm = resid;
    out.iterations = iters;
  }
  return out;
}

RawRdms fci_rdms(const DeterminantBasis& basis, const Eigen::VectorXd& ci,
                 bool with_three_body) {
  if (static_cast<std::size_t>(ci.size()) != basis.size())
    throw std::invalid_argument("fci_rdms: CI vector size mismatch");
  if (std::abs(ci.norm() - 1.0) > 1e-8)
    throw std::invalid_argument("fci_rdms: CI vector must be normalized");

  const int r = basis.r_spin;
  RawRdms out;
  out.r_spin = r;
  out.n_electrons = basis.n_electrons;

  PairIndexer pairs(r);
  out.gamma.setZero(r, r);
  out.m2.setZero(pairs.size(), pairs.size());

  std::vector<int> occ;
  // gamma via single application, m2 via pair application
  for (std::size_t bi = 0; bi < basis.size(); ++bi) {
    const DetMask d = basis.dets[bi];
    const double cd = ci[static_cast<int>(bi)];
    if (cd == 0.0) continue;
    occupied_list(d, r, occ);

    for (int q : occ) {
      DetMask m1 = d;
      const int s1 = apply_annihilate(m1, q);
      for (int p = 0; p < r; ++p) {
        DetMask m2m = m1;
        const int s2 = apply_create(m2m, p);
        if (s2 == 0) continue;
        const std::int64_t bj = basis.find(m2m);
        if (bj < 0) continue;
        out.gamma(p, q) += s1 * s2 * ci[static_cast<int>(bj)] * cd;
      }
    }

    // a_t a_s with s<t removes the pair (s,t); re-adding (u,v) with u<v
    for (std::size_t i = 0; i < occ.size(); ++i)
      for (std::size_t j = i + 1; j < occ.size(); ++j) {
        const int s = occ[i], t = occ[j];
        DetMask m1 = d;
        int sgn = apply_annihilate(m1, s); // rightmost first
        sgn *= apply_annihilate(m1, t);
        for (int u = 0; u < r; ++u) {
          if (occupied(m1, u)) continue;
          for (int v = u + 1; v < r; ++v) {
            if (occupied(m1, v)) continue;
            DetMask m2m = m1;
            int sgn2 = apply_create(m2m, v);
            sgn2 *= apply_create(m2m, u);
            const std::int64_t bj = basis.find(m2m);
            if (bj < 0) continue;
            out.m2(pairs(u, v), pairs(s, t)) +=
                sgn * sgn2 * ci[static_cast<int>(bj)] * cd;
          }
        }
      }
  }

  if (with_three_body) {
    TripleIndexer triples(r);
    out.m3.setZero(triples.size(), triples.size());
    // group c_d * sign by the (N-3)-electron remainder mask
    std::vector<std::pair<DetMask, std::pair<int, double>>> items;
    for (std::size_t bi = 0; bi < basis.size(); ++bi) {
      const DetMask d = basis.dets[bi];
      const double cd = ci[static_cast<int>(bi)];
      if (cd == 0.0) continue;
      occupied_list(d, r, occ);
      for (std::size_t i = 0; i < occ.size(); ++i)
        for (std::size_t j = i + 1; j < occ.size(); ++j)
          for (std::size_t k = j + 1; k < occ.size(); ++k) {
            DetMask m = d;
            int sgn = apply_annihilate(m, occ[i]);
            sgn *= apply_annihilate(m, occ[j]);
            sgn *= apply_annihilate(m, occ[k]);
            items.push_back(
                {m, {triples(occ[i], occ[j], occ[k]), sgn * cd}});
          }
    }
    std::sort(items.begin(), items.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::size_t lo = 0;
    while (lo < items.size()) {
      std::size_t hi = lo;
      while (hi < items.size() && items[hi].first == items[lo].first) ++hi;
      for (std::size_t a = lo; a < hi; ++a)
        for (std::size_t b = lo; b < hi; ++b)
          out.m3(items[a].second.first, items[b].second.first) +=
              items[a].second.second * items[b].second.second;
      lo = hi;
    }
  }
  return out;
}

Eigen::VectorXd natural_occupations(const Eigen::MatrixXd& gamma) {
  const int r_spatial = static_cast<int>(gamma.rows()) / 2;
  Eigen::MatrixXd spatial(r_spatial, r_spatial);
  for (int p = 0; p < r_spatial; ++p)
    for (int q = 0; q < r_spatial; ++q)
      spatial(p, q) = gamma(2 * p, 2 * q) + gamma(2 * p + 1, 2 * q + 1);
  Vec w;
  Mat v;
  symmetric_eig(0.5 * (spatial + spatial.transpose()), w, v);
  return w.reverse() / 2.0;
}

} // namespace vrdm
