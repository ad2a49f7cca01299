#include "vrdm/integrals.hpp"

#include <cmath>
#include <stdexcept>

#include "vrdm/constants.hpp"
#include "vrdm/linalg.hpp"

namespace vrdm {

double boys_f0(double t) {
  if (t < 1e-12) return 1.0 - t / 3.0;
  const double st = std::sqrt(t);
  return 0.5 * std::sqrt(pi / t) * std::erf(st);
}

namespace {

struct Prim {
  double alpha;
  double coeff; // includes the (2a/pi)^(3/4) primitive normalization
  Eigen::Vector3d center;
};

std::vector<Prim> flatten(const ContractedShell& sh) {
  std::vector<Prim> out;
  out.reserve(sh.primitives.size());
  for (const auto& p : sh.primitives)
    out.push_back({p.exponent,
                   p.coefficient * std::pow(2.0 * p.exponent / pi, 0.75),
                   sh.center});
  return out;
}

double prim_overlap(const Prim& a, const Prim& b) {
  const double p = a.alpha + b.alpha;
  const double mu = a.alpha * b.alpha / p;
  const double r2 = (a.center - b.center).squaredNorm();
  return a.coeff * b.coeff * std::pow(pi / p, 1.5) * std::exp(-mu * r2);
}

double prim_kinetic(const Prim& a, const Prim& b) {
  const double p = a.alpha + b.alpha;
  const double mu = a.alpha * b.alpha / p;
  const double r2 = (a.center - b.center).squaredNorm();
  return prim_overlap(a, b) * mu * (3.0 - 2.0 * mu * r2);
}

double prim_nuclear(const Prim& a, const Prim& b, const Geometry& g) {
  const double p = a.alpha + b.alpha;
  const double mu = a.alpha * b.alpha / p;
  const double r2 = (a.center - b.center).squaredNorm();
  const Eigen::Vector3d pc = (a.alpha * a.center + b.alpha * b.center) / p;
  const double pref =
      -a.coeff * b.coeff * 2.0 * pi / p * std::exp(-mu * r2);
  double v = 0.0;
  for (const auto& atom : g.atoms)
    v += pref * atom.charge * boys_f0(p * (pc - atom.position).squaredNorm());
  return v;
}

double prim_eri(const Prim& a, const Prim& b, const Prim& c, const Prim& d) {
  const double p = a.alpha + b.alpha;
  const double q = c.alpha + d.alpha;
  const double mu_ab = a.alpha * b.alpha / p;
  const double mu_cd = c.alpha * d.alpha / q;
  const Eigen::Vector3d pp = (a.alpha * a.center + b.alpha * b.center) / p;
  const Eigen::Vector3d qq = (c.alpha * c.center + d.alpha * d.center) / q;
  const double rho = p * q / (p + q);
  const double pref = a.coeff * b.coeff * c.coeff * d.coeff * 2.0 *
                      std::pow(pi, 2.5) / (p * q * std::sqrt(p + q)) *
                      std::exp(-mu_ab * (a.center - b.center).squaredNorm()) *
                      std::exp(-mu_cd * (c.center - d.center).squaredNorm());
  return pref * boys_f0(rho * (pp - qq).squaredNorm());
}

} // namespace

MolecularIntegrals compute_integrals(const Geometry& g,
                                     const std::vector<ContractedShell>& shells) {
  g.validate();
  const int n = static_cast<int>(shells.size());
  std::vector<std::vector<Prim>> prims;
  prims.reserve(n);
  for (const auto& sh : shells) {
    sh.validate();
    prims.push_back(flatten(sh));
  }

  MolecularIntegrals ints;
  ints.n_orbitals = n;
  ints.overlap.setZero(n, n);
  ints.kinetic.setZero(n, n);
  ints.nuclear.setZero(n, n);
  ints.eri = EriTensor(n);
  ints.e_nuclear = g.nuclear_repulsion();

  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double s = 0.0, t = 0.0, v = 0.0;
      for (const auto& a : prims[i])
        for (const auto& b : prims[j]) {
          s += prim_overlap(a, b);
          t += prim_kinetic(a, b);
          v += prim_nuclear(a, b, g);
        }
      ints.overlap(i, j) = ints.overlap(j, i) = s;
      ints.kinetic(i, j) = ints.kinetic(j, i) = t;
      ints.nuclear(i, j) = ints.nuclear(j, i) = v;
    }

  // unique (pq|st) under the 8-fold symmetry, each entry written once
  for (int p = 0; p < n; ++p)
    for (int q = 0; q <= p; ++q)
      for (int s = 0; s <= p; ++s)
        for (int t = 0; t <= (s == p ? q : s); ++t) {
          double val = 0.0;
          for (const auto& ga : prims[p])
            for (const auto& gb : prims[q])
              for (const auto& gc : prims[s])
                for (const auto& gd : prims[t])
                  val += prim_eri(ga, gb, gc, gd);
          ints.eri(p, q, s, t) = val;
          ints.eri(q, p, s, t) = val;
          ints.eri(p, q, t, s) = val;
          ints.eri(q, p, t, s) = val;
          ints.eri(s, t, p, q) = val;
          ints.eri(t, s, p, q) = val;
          ints.eri(s, t, q, p) = val;
          ints.eri(t, s, q, p) = val;
        }
  return ints;
}

MolecularIntegrals transform_integrals(const MolecularIntegrals& ints,
                                       const Eigen::MatrixXd& x) {
  const int n = ints.n_orbitals;
  if (x.rows() != n || x.cols() != n)
    throw std::invalid_argument("transform_integrals: dimension mismatch");

  MolecularIntegrals out = ints;
  out.overlap = x.transpose() * ints.overlap * x;
  out.kinetic = x.transpose() * ints.kinetic * x;
  out.nuclear = x.transpose() * ints.nuclear * x;

  // four quarter transforms, O(n^5)
  const auto& e = ints.eri;
  EriTensor t1(n), t2(n), t3(n), t4(n);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t) {
          double acc = 0.0;
          for (int u = 0; u < n; ++u) acc += e(u, q, s, t) * x(u, p);
          t1(p, q, s, t) = acc;
        }
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t) {
          double acc = 0.0;
          for (int u = 0; u < n; ++u) acc += t1(p, u, s, t) * x(u, q);
          t2(p, q, s, t) = acc;
        }
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t) {
          double acc = 0.0;
          for (int u = 0; u < n; ++u) acc += t2(p, q, u, t) * x(u, s);
          t3(p, q, s, t) = acc;
        }
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t) {
          double acc = 0.0;
          for (int u = 0; u < n; ++u) acc += t3(p, q, s, u) * x(u, t);
          t4(p, q, s, t) = acc;
        }
  out.eri = std::move(t4);
  return out;
}

MolecularIntegrals orthonormalize(const MolecularIntegrals& ints) {
  Vec w;
  Mat v;
  symmetric_eig(ints.overlap, w, v);
  if (w.minCoeff() < 1e-8)
    throw std::runtime_error(
        "orthonormalize: near-linear dependence in overlap (min eigenvalue " +
        std::to_string(w.minCoeff()) + ")");
  const Mat x = v * w.cwiseSqrt().cwiseInverse().asDiagonal() * v.transpose();
  MolecularIntegrals out = transform_integrals(ints, x);
  out.orthonormal = true;
  return out;
}

double eri_symmetry_defect(const EriTensor& eri) {
  const int n = eri.n();
  double worst = 0.0;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t) {
          const double ref = eri(p, q, s, t);
          const double alts[7] = {eri(q, p, s, t), eri(p, q, t, s),
                                  eri(q, p, t, s), eri(s, t, p, q),
                                  eri(t, s, p, q), eri(s, t, q, p),
                                  eri(t, s, q, p)};
          for (double a : alts) worst = std::max(worst, std::abs(a - ref));
        }
  return worst;
}

} // namespace vrdm
