#include "vrdm/variational.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>

#include "vrdm/determinants.hpp"
#include "vrdm/linalg.hpp"

namespace vrdm {

std::vector<ConditionName> ConditionSet::condition_names() const {
  using C = ConditionName;
  switch (level) {
    case ConditionLevel::DQG: return {C::D2, C::Q2, C::G2};
    case ConditionLevel::DQG_T1: return {C::D2, C::Q2, C::G2, C::T1};
    case ConditionLevel::DQG_T2: return {C::D2, C::Q2, C::G2, C::T2};
    case ConditionLevel::DQG_T1T2:
      return {C::D2, C::Q2, C::G2, C::T1, C::T2};
    case ConditionLevel::DQG3:
      return {C::D2, C::Q2, C::G2, C::D3, C::E3, C::F3, C::Q3};
  }
  throw std::logic_error("unreachable");
}

std::string ConditionSet::name() const {
  switch (level) {
    case ConditionLevel::DQG: return "DQG";
    case ConditionLevel::DQG_T1: return "DQG+T1";
    case ConditionLevel::DQG_T2: return "DQG+T2";
    case ConditionLevel::DQG_T1T2: return "DQG+T1+T2";
    case ConditionLevel::DQG3: return "DQG3";
  }
  return "?";
}

ConditionSet ConditionSet::from_string(const std::string& s) {
  if (s == "DQG") return {ConditionLevel::DQG};
  if (s == "DQG+T1") return {ConditionLevel::DQG_T1};
  if (s == "DQG+T2") return {ConditionLevel::DQG_T2};
  if (s == "DQG+T1+T2" || s == "DQGT1T2") return {ConditionLevel::DQG_T1T2};
  if (s == "DQG3" || s == "2,3-POS") return {ConditionLevel::DQG3};
  throw std::invalid_argument("unknown condition set: " + s);
}

namespace {

inline int spin_sign(int orbital) { return (orbital % 2 == 0) ? 1 : -1; }

// gamma[p,q] expanded over raw m2 entries: (N-1) gamma_pq =
// sum_k sign * m2[(p,k),(q,k)]
struct GammaExpansion {
  std::vector<std::tuple<int, int, double>> entries; // (P, Q, coeff)
};

GammaExpansion expand_gamma(int p, int q, int r_spin, int n_electrons,
                            const PairIndexer& pairs) {
  GammaExpansion ge;
  const double inv = 1.0 / (n_electrons - 1);
  for (int k = 0; k < r_spin; ++k) {
    if (k == p || k == q) continue;
    const int sp = (p < k) ? 1 : -1;
    const int sq = (q < k) ? 1 : -1;
    ge.entries.push_back({pairs(p, k), pairs(q, k), sp * sq * inv});
  }
  return ge;
}

} // namespace

RawRdms determinant_rdms(int r_spin, DetMask occ, bool with_three_body) {
  RawRdms out;
  out.r_spin = r_spin;
  out.n_electrons = popcount(occ);
  PairIndexer pairs(r_spin);
  out.gamma.setZero(r_spin, r_spin);
  for (int p = 0; p < r_spin; ++p)
    if (occupied(occ, p)) out.gamma(p, p) = 1.0;
  out.m2.setZero(pairs.size(), pairs.size());
  for (int idx = 0; idx < pairs.size(); ++idx) {
    const auto [p, q] = pairs.pair(idx);
    if (occupied(occ, p) && occupied(occ, q)) out.m2(idx, idx) = 1.0;
  }
  if (with_three_body) {
    TripleIndexer triples(r_spin);
    out.m3.setZero(triples.size(), triples.size());
    for (int idx = 0; idx < triples.size(); ++idx) {
      const auto& t = triples.triple(idx);
      if (occupied(occ, t[0]) && occupied(occ, t[1]) && occupied(occ, t[2]))
        out.m3(idx, idx) = 1.0;
    }
  }
  return out;
}

std::vector<MapTerm> s2_functional(int r_spin) {
  if (r_spin % 2 != 0)
    throw std::invalid_argument("s2 functional: odd spin-orbital count");
  const int r_spatial = r_spin / 2;
  PairIndexer pairs(r_spin);
  TripleIndexer triples(r_spin);
  std::vector<MapTerm> terms;
  auto alpha = [](int p) { return 2 * p; };
  auto beta = [](int p) { return 2 * p + 1; };

  // S- S+
  for (int p = 0; p < r_spatial; ++p)
    for (int q = 0; q < r_spatial; ++q)
      accumulate_functional(terms,
                            {{beta(p), true},
                             {alpha(p), false},
                             {alpha(q), true},
                             {beta(q), false}},
                            1.0, pairs, triples);
  // Sz^2
  for (int p = 0; p < r_spin; ++p)
    for (int q = 0; q < r_spin; ++q)
      accumulate_functional(
          terms, {{p, true}, {p, false}, {q, true}, {q, false}},
          0.25 * spin_sign(p) * spin_sign(q), pairs, triples);
  // Sz
  for (int p = 0; p < r_spin; ++p)
    accumulate_functional(terms, {{p, true}, {p, false}},
                          0.5 * spin_sign(p), pairs, triples);

  // merge
  std::map<std::tuple<int, int, int>, double> acc;
  for (const auto& t : terms)
    acc[{static_cast<int>(t.kind), t.a, t.b}] += t.coeff;
  std::vector<MapTerm> out;
  for (const auto& [key, c] : acc) {
    if (std::abs(c) < 1e-14) continue;
    MapTerm t;
    t.kind = static_cast<MapTerm::Kind>(std::get<0>(key));
    t.a = std::get<1>(key);
    t.b = std::get<2>(key);
    t.coeff = c;
    out.push_back(t);
  }
  return out;
}

VariationalProblem assemble_primal(const ReducedHamiltonian& rh,
                                   const ConditionSet& conds,
                                   const VariationalConfig& cfg) {
  const int r = rh.r_spin;
  const int n = rh.n_electrons;
  const double c2 = rh.pairs();
  PairIndexer pairs(r);
  TripleIndexer triples(r);

  VariationalProblem vp;
  vp.n_electrons = n;
  vp.r_spin = r;

  const auto names = conds.condition_names();
  const bool with_m3 =
      std::find(names.begin(), names.end(), ConditionName::D3) != names.end();

  // ---- variable blocks -------------------------------------------------
  auto sector_of_rows = [&](ConditionName cname, int dim,
                            const std::function<int(int)>& sz_of) {
    std::map<int, std::vector<int>> by_sz;
    for (int i = 0; i < dim; ++i)
      by_sz[cfg.sz_blocking ? sz_of(i) : 0].push_back(i);
    std::vector<VariationalProblem::SectorBlock> out;
    for (auto& [sz, rows] : by_sz) {
      VariationalProblem::SectorBlock sb;
      sb.condition = cname;
      sb.sz2 = sz;
      sb.rows = std::move(rows);
      out.push_back(std::move(sb));
    }
    return out;
  };

  auto pair_sz = [&](int idx) {
    const auto [a, b] = pairs.pair(idx);
    return spin_sign(a) + spin_sign(b);
  };
  auto triple_sz = [&](int idx) {
    const auto& t = triples.triple(idx);
    return spin_sign(t[0]) + spin_sign(t[1]) + spin_sign(t[2]);
  };

  // D2 variable
  auto d2_sectors = sector_of_rows(ConditionName::D2, pairs.size(), pair_sz);
  vp.d2_block_.assign(pairs.size(), -1);
  vp.d2_pos_.assign(pairs.size(), -1);
  for (auto& sb : d2_sectors) {
    sb.sdp_block = vp.sdp.add_block(
        "D2/sz" + std::to_string(sb.sz2), static_cast<int>(sb.rows.size()));
    for (std::size_t k = 0; k < sb.rows.size(); ++k) {
      vp.d2_block_[sb.rows[k]] = sb.sdp_block;
      vp.d2_pos_[sb.rows[k]] = static_cast<int>(k);
    }
    vp.sectors.push_back(sb);
  }

  // M3 variable (D3 condition is the positivity of this block)
  std::vector<int> m3_block, m3_pos;
  if (with_m3) {
    auto m3_sectors =
        sector_of_rows(ConditionName::D3, triples.size(), triple_sz);
    m3_block.assign(triples.size(), -1);
    m3_pos.assign(triples.size(), -1);
    for (auto& sb : m3_sectors) {
      sb.sdp_block = vp.sdp.add_block(
          "D3/sz" + std::to_string(sb.sz2), static_cast<int>(sb.rows.size()));
      for (std::size_t k = 0; k < sb.rows.size(); ++k) {
        m3_block[sb.rows[k]] = sb.sdp_block;
        m3_pos[sb.rows[k]] = static_cast<int>(k);
      }
      vp.sectors.push_back(sb);
    }
  }

  // helper to add one RDM-functional term into a constraint
  auto add_term = [&](int con, const MapTerm& t, double scale) -> double {
    // returns any constant contribution (to fold into the rhs)
    switch (t.kind) {
      case MapTerm::Constant: return scale * t.coeff;
      case MapTerm::OneBody: {
        if (spin_sign(t.a) != spin_sign(t.b) && cfg.sz_blocking) return 0.0;
        const auto ge = expand_gamma(t.a, t.b, r, n, pairs);
        for (const auto& [pp, qq, w] : ge.entries) {
          if (cfg.sz_blocking && vp.d2_block_[pp] != vp.d2_block_[qq]) continue;
          vp.sdp.add_entry(con, vp.d2_block_[pp], vp.d2_pos_[pp],
                           vp.d2_pos_[qq], scale * t.coeff * w);
        }
        return 0.0;
      }
      case MapTerm::TwoBody: {
        if (cfg.sz_blocking && vp.d2_block_[t.a] != vp.d2_block_[t.b])
          return 0.0;
        vp.sdp.add_entry(con, vp.d2_block_[t.a], vp.d2_pos_[t.a],
                         vp.d2_pos_[t.b], scale * t.coeff);
        return 0.0;
      }
      case MapTerm::ThreeBody: {
        if (!with_m3)
          throw std::logic_error("assemble: three-body term without m3 block");
        if (cfg.sz_blocking && m3_block[t.a] != m3_block[t.b]) return 0.0;
        vp.sdp.add_entry(con, m3_block[t.a], m3_pos[t.a], m3_pos[t.b],
                         scale * t.coeff);
        return 0.0;
      }
    }
    return 0.0;
  };

  // ---- derived condition blocks and linking equalities ------------------
  for (const auto cname : names) {
    if (cname == ConditionName::D2 || cname == ConditionName::D3) continue;
    const ConstraintMap map = build_constraint_map(cname, r);
    std::function<int(int)> sz_of = [&](int idx) { return row_sz2(map, idx); };
    auto secs = sector_of_rows(cname, map.dim, sz_of);
    for (auto& sb : secs) {
      sb.sdp_block =
          vp.sdp.add_block(to_string(cname) + "/sz" + std::to_string(sb.sz2),
                           static_cast<int>(sb.rows.size()));
      const int d = static_cast<int>(sb.rows.size());
      for (int a = 0; a < d; ++a)
        for (int b = a; b < d; ++b) {
          const int gi = std::min(sb.rows[a], sb.rows[b]);
          const int gj = std::max(sb.rows[a], sb.rows[b]);
          const int con = vp.sdp.add_constraint(0.0);
          vp.sdp.add_entry(con, sb.sdp_block, a, b, 1.0);
          double rhs = 0.0;
          for (const auto& t : map.element(gi, gj)) rhs += add_term(con, t, -1.0);
          // X_c[a,b] - (gamma, m2, m3 part) = const
          vp.sdp.set_rhs(con, -rhs);
        }
      vp.sectors.push_back(sb);
    }
  }

  // ---- DQG3 contraction link: contract(m3) = (N-2) m2 -------------------
  if (with_m3) {
    for (int pi = 0; pi < pairs.size(); ++pi)
      for (int pj = pi; pj < pairs.size(); ++pj) {
        if (cfg.sz_blocking && vp.d2_block_[pi] != vp.d2_block_[pj]) continue;
        const auto [i, j] = pairs.pair(pi);
        const auto [l, m] = pairs.pair(pj);
        const int con = vp.sdp.add_constraint(0.0);
        for (int k = 0; k < r; ++k) {
          if (k == i || k == j || k == l || k == m) continue;
          std::vector<int> au = {i, j, k};
          std::vector<int> bu = {l, m, k};
          const int sa = sort_with_parity(au);
          const int sb = sort_with_parity(bu);
          const int ta = triples(au[0], au[1], au[2]);
          const int tb = triples(bu[0], bu[1], bu[2]);
          if (cfg.sz_blocking && m3_block[ta] != m3_block[tb]) continue;
          vp.sdp.add_entry(con, m3_block[ta], m3_pos[ta], m3_pos[tb],
                           static_cast<double>(sa * sb));
        }
        vp.sdp.add_entry(con, vp.d2_block_[pi], vp.d2_pos_[pi], vp.d2_pos_[pj],
                         -static_cast<double>(n - 2));
      }
  }

  // ---- normalization and spin rows --------------------------------------
  vp.trace_row = vp.sdp.add_constraint(c2);
  for (int pi = 0; pi < pairs.size(); ++pi)
    vp.sdp.add_entry(vp.trace_row, vp.d2_block_[pi], vp.d2_pos_[pi],
                     vp.d2_pos_[pi], 1.0);

  if (cfg.constrain_sz) {
    vp.sz_row = vp.sdp.add_constraint(0.0);
    for (int p = 0; p < r; ++p) {
      MapTerm t;
      t.kind = MapTerm::OneBody;
      t.a = t.b = p;
      t.coeff = spin_sign(p);
      add_term(vp.sz_row, t, 1.0);
    }
  }

  if (cfg.constrain_s2) {
    const auto s2 = s2_functional(r);
    const int con = vp.sdp.add_constraint(0.0);
    double c0 = 0.0;
    for (const auto& t : s2) c0 += add_term(con, t, 1.0);
    vp.sdp.set_rhs(con, -c0);
    vp.s2_row = con;
  }

  // ---- objective ---------------------------------------------------------
  for (const auto& sb : vp.sectors) {
    if (sb.condition != ConditionName::D2) continue;
    const int d = static_cast<int>(sb.rows.size());
    Eigen::MatrixXd c(d, d);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) c(a, b) = rh.k(sb.rows[a], sb.rows[b]) / c2;
    vp.sdp.set_objective(sb.sdp_block, c);
  }

  // ---- trace caps for certified bounds -----------------------------------
  {
    DetMask ref = 0;
    for (int p = 0; p < n; ++p) ref |= (1ULL << p);
    const RawRdms det = determinant_rdms(r, ref, with_m3);
    std::vector<double> caps(vp.sdp.n_blocks(), 0.0);
    std::map<ConditionName, ConstraintMap> cap_maps;
    for (const auto& sb : vp.sectors) {
      double cap = 0.0;
      if (sb.condition == ConditionName::D2) {
        for (int gi : sb.rows) cap += det.m2(gi, gi);
      } else if (sb.condition == ConditionName::D3) {
        for (int gi : sb.rows) cap += det.m3(gi, gi);
      } else {
        auto it = cap_maps.find(sb.condition);
        if (it == cap_maps.end())
          it = cap_maps.emplace(sb.condition,
                                build_constraint_map(sb.condition, r))
                   .first;
        for (int gi : sb.rows) {
          double v = 0.0;
          for (const auto& t : it->second.element(gi, gi))
            v += t.coeff * ((t.kind == MapTerm::Constant) ? 1.0
                            : (t.kind == MapTerm::OneBody)
                                ? det.gamma(t.a, t.b)
                                : (t.kind == MapTerm::TwoBody)
                                      ? det.m2(t.a, t.b)
                                      : det.m3(t.a, t.b));
          cap += v;
        }
      }
      caps[sb.sdp_block] = cap;
    }
    vp.sdp.block_trace_caps = caps;
  }

  vp.sdp.finalize();
  return vp;
}

Eigen::MatrixXd VariationalProblem::extract_m2(
    const std::vector<Eigen::MatrixXd>& x) const {
  PairIndexer pairs(r_spin);
  Eigen::MatrixXd m2 = Eigen::MatrixXd::Zero(pairs.size(), pairs.size());
  for (int pi = 0; pi < pairs.size(); ++pi)
    for (int pj = 0; pj < pairs.size(); ++pj) {
      if (d2_block_[pi] != d2_block_[pj]) continue;
      m2(pi, pj) = x[d2_block_[pi]](d2_pos_[pi], d2_pos_[pj]);
    }
  return 0.5 * (m2 + m2.transpose());
}

RdmSet extract_rdm_set(const VariationalProblem& vp,
                       const ReducedHamiltonian& rh, const SdpSolution& sol) {
  RdmSet out;
  const double c2 = rh.pairs();
  const Eigen::MatrixXd m2 = vp.extract_m2(sol.x);
  out.d2 = m2 / c2;

  // gamma from contraction
  const int r = vp.r_spin;
  PairIndexer pairs(r);
  Eigen::MatrixXd gamma = Eigen::MatrixXd::Zero(r, r);
  for (int p = 0; p < r; ++p)
    for (int q = 0; q < r; ++q) {
      double acc = 0.0;
      for (int k = 0; k < r; ++k) {
        if (k == p || k == q) continue;
        const int sp = (p < k) ? 1 : -1;
        const int sq = (q < k) ? 1 : -1;
        acc += sp * sq * m2(pairs(p, k), pairs(q, k));
      }
      gamma(p, q) = acc / (rh.n_electrons - 1);
    }
  out.d1 = gamma / rh.n_electrons;
  out.occupations = natural_occupations(gamma);

  out.e_primal = rh.energy(m2);
  out.e_total = sol.dual_objective + rh.e_nuclear;
  out.r12_expectation = (rh.v_pair.array() * out.d2.array()).sum();
  out.converged = sol.converged;
  out.primal_residual = sol.primal_residual;
  out.dual_residual = sol.dual_residual;
  out.gap = sol.gap;
  out.iterations = sol.iterations;
  out.wall_time_seconds = sol.wall_time_seconds;
  return out;
}

RdmSet solve_variational(const ReducedHamiltonian& rh,
                         const ConditionSet& conds,
                         const VariationalConfig& cfg) {
  const VariationalProblem vp = assemble_primal(rh, conds, cfg);
  const SdpSolution sol = solve_sdp(vp.sdp, cfg.solver);
  return extract_rdm_set(vp, rh, sol);
}

double rdm_l2_error(const Eigen::MatrixXd& d2, const Eigen::MatrixXd& d2_ref) {
  if (d2.rows() != d2_ref.rows() || d2.cols() != d2_ref.cols())
    throw std::invalid_argument("rdm_l2_error: dimension mismatch");
  return (d2 - d2_ref).norm();
}

PolarConeProblem assemble_polar_cone(const VariationalProblem& primal) {
  const SdpProblem& p = primal.sdp;
  if (!p.finalized())
    throw std::invalid_argument("polar cone: primal must be finalized");
  if (p.n_free() != 0)
    throw std::invalid_argument("polar cone: primal with free variables");

  PolarConeProblem pc;
  pc.primal = &primal;
  SdpProblem& d = pc.sdp;

  const int m = p.n_constraints();
  for (int i = 0; i < m; ++i) d.add_free_variable();

  // one certificate block per primal block
  std::vector<int> cert_block(p.n_blocks());
  for (int b = 0; b < p.n_blocks(); ++b)
    cert_block[b] = d.add_block("cert:" + p.block(b).name, p.block(b).dim);

  // one equality row per upper-triangle element of each primal block:
  //   Z_b[r,c] + sum_i y_i A_i,b[r,c] = C_b[r,c]
  std::vector<std::vector<int>> row_of(p.n_blocks());
  auto ut = [](int dim, int r, int c) { return r * dim + c; };
  for (int b = 0; b < p.n_blocks(); ++b) {
    const int dim = p.block(b).dim;
    row_of[b].assign(static_cast<std::size_t>(dim) * dim, -1);
    const auto& c = p.objective(b);
    for (int r = 0; r < dim; ++r)
      for (int cc = r; cc < dim; ++cc) {
        const int con = d.add_constraint(c(r, cc));
        d.add_entry(con, cert_block[b], r, cc, 1.0);
        row_of[b][ut(dim, r, cc)] = con;
      }
  }

  for (int i = 0; i < m; ++i) {
    const auto [eb, ee] = p.row(i);
    for (const auto* e = eb; e != ee; ++e) {
      const int con = row_of[e->block][ut(p.block(e->block).dim, e->row, e->col)];
      d.add_free_entry(con, i, e->value);
    }
  }

  Eigen::VectorXd fobj(m);
  for (int i = 0; i < m; ++i) fobj[i] = -p.rhs()[i];
  d.set_free_objective(fobj);
  d.report_sign = -1.0;

  // record the D2-space element rows for 2-RDM extraction
  for (const auto& sb : primal.sectors) {
    if (sb.condition != ConditionName::D2) continue;
    const int dim = static_cast<int>(sb.rows.size());
    for (int r = 0; r < dim; ++r)
      for (int c = r; c < dim; ++c)
        pc.d2_rows.push_back(
            {sb.sdp_block, r, c, row_of[sb.sdp_block][ut(dim, r, c)]});
  }

  d.finalize();
  return pc;
}

PolarConeSolution solve_polar_cone(const VariationalProblem& vp,
                                   const ReducedHamiltonian& rh,
                                   const SdpSolverConfig& cfg) {
  const PolarConeProblem pc = assemble_polar_cone(vp);
  const SdpSolution sol = solve_sdp(pc.sdp, cfg);

  PolarConeSolution out;
  out.raw = sol;
  // min form minimizes -b'y; the bound is its negative
  out.energy = -sol.primal_objective + rh.e_nuclear;

  // the multipliers of the element rows reproduce the primal variables
  const double c2 = rh.pairs();
  PairIndexer pairs(vp.r_spin);
  Eigen::MatrixXd m2 = Eigen::MatrixXd::Zero(pairs.size(), pairs.size());
  std::vector<std::vector<std::pair<int, int>>> sector_rows(
      vp.sdp.n_blocks());
  for (const auto& sb : vp.sectors)
    if (sb.condition == ConditionName::D2)
      for (std::size_t k = 0; k < sb.rows.size(); ++k)
        sector_rows[sb.sdp_block].push_back(
            {static_cast<int>(k), sb.rows[k]});
  for (const auto& [blk, r, c, con] : pc.d2_rows) {
    const int gi = sector_rows[blk][r].second;
    const int gj = sector_rows[blk][c].second;
    const double v = sol.y[con] * ((r == c) ? 1.0 : 0.5);
    m2(gi, gj) = v;
    m2(gj, gi) = v;
  }
  out.d2 = m2 / c2;

  // reconstruction residual of K - E I against the collapsed certificates
  out.reconstruction_residual =
      polar_cone_reconstruction_residual(vp, rh, pc, sol);
  return out;
}

Eigen::MatrixXd collapse_functional(const std::vector<MapTerm>& terms,
                                    int n_electrons, int r_spin) {
  PairIndexer pairs(r_spin);
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(r_spin, r_spin);
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(pairs.size(), pairs.size());
  double c0 = 0.0;
  for (const auto& t : terms) {
    switch (t.kind) {
      case MapTerm::Constant: c0 += t.coeff; break;
      case MapTerm::OneBody: g(t.a, t.b) += t.coeff; break;
      case MapTerm::TwoBody: v(t.a, t.b) += t.coeff; break;
      case MapTerm::ThreeBody:
        throw std::invalid_argument("collapse: three-body term present");
    }
  }
  g = 0.5 * (g + g.transpose()).eval();
  v = 0.5 * (v + v.transpose()).eval();
  const double c2 = static_cast<double>(binomial(n_electrons, 2));
  return v + pair_one_body_lift(g) / (n_electrons - 1) +
         (c0 / c2) * Eigen::MatrixXd::Identity(pairs.size(), pairs.size());
}

Eigen::MatrixXd collapse_condition(const ConstraintMap& map,
                                   const Eigen::MatrixXd& w_full,
                                   int n_electrons) {
  if (!map.three_body_free)
    throw std::invalid_argument("collapse: map carries three-body terms");
  std::vector<MapTerm> acc;
  for (int i = 0; i < map.dim; ++i)
    for (int j = i; j < map.dim; ++j) {
      const double f = ((i == j) ? 1.0 : 2.0) * w_full(i, j);
      if (f == 0.0) continue;
      for (const auto& t : map.element(i, j)) {
        MapTerm mt = t;
        mt.coeff *= f;
        acc.push_back(mt);
      }
    }
  return collapse_functional(acc, n_electrons, map.r_spin);
}

double polar_cone_reconstruction_residual(const VariationalProblem& vp,
                                          const ReducedHamiltonian& rh,
                                          const PolarConeProblem& pc,
                                          const SdpSolution& sol) {
  const int r = vp.r_spin;
  const int n = vp.n_electrons;
  const double c2 = rh.pairs();
  PairIndexer pairs(r);
  const int pd = pairs.size();

  // assemble full-space certificates per condition from sector blocks;
  // dual blocks were created in primal block order
  std::map<ConditionName, Eigen::MatrixXd> certs;
  for (const auto& sb : vp.sectors) {
    if (sb.condition == ConditionName::D3)
      throw std::invalid_argument(
          "reconstruction residual: three-body lifting not supported");
    const int dim = index_space_dim(
        sb.condition == ConditionName::D2 ? IndexSpace::Pair
        : sb.condition == ConditionName::Q2
            ? IndexSpace::Pair
            : sb.condition == ConditionName::G2 ? IndexSpace::OrbSq
              : (sb.condition == ConditionName::T1 ? IndexSpace::Triple
                                                   : IndexSpace::PairPlus),
        r);
    auto [it, inserted] = certs.try_emplace(sb.condition,
                                            Eigen::MatrixXd::Zero(dim, dim));
    Eigen::MatrixXd& w = it->second;
    const auto& x = sol.x[sb.sdp_block];
    for (std::size_t a = 0; a < sb.rows.size(); ++a)
      for (std::size_t b = 0; b < sb.rows.size(); ++b)
        w(sb.rows[a], sb.rows[b]) =
            x(static_cast<int>(a), static_cast<int>(b));
  }

  const double e_elec = -sol.primal_objective;
  Eigen::MatrixXd total = Eigen::MatrixXd::Zero(pd, pd);
  total += certs.at(ConditionName::D2); // its own collapse is the identity map
  for (const auto& [cname, w] : certs) {
    if (cname == ConditionName::D2) continue;
    const ConstraintMap map = build_constraint_map(cname, r);
    total += collapse_condition(map, w, n);
  }

  // multipliers of the symmetry rows enter as polar-cone lineality terms
  if (vp.sz_row >= 0) {
    Eigen::MatrixXd gsz = Eigen::MatrixXd::Zero(r, r);
    for (int p = 0; p < r; ++p) gsz(p, p) = spin_sign(p);
    total += sol.f[vp.sz_row] * pair_one_body_lift(gsz) / (n - 1);
  }
  if (vp.s2_row >= 0)
    total += sol.f[vp.s2_row] * collapse_functional(s2_functional(r), n, r);

  const Eigen::MatrixXd resid =
      rh.k - e_elec * Eigen::MatrixXd::Identity(pd, pd) - c2 * total;
  return resid.cwiseAbs().maxCoeff();
}

} // namespace vrdm
