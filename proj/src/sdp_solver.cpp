#include "vrdm/sdp_solver.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "vrdm/linalg.hpp"

namespace vrdm {

namespace {

// preconditioned CG on (A A' + F F') y = rhs, matrix-free
struct DualSolver {
  const SdpProblem& p;
  Eigen::VectorXd precond_inv;
  std::vector<Eigen::MatrixXd> work_x;
  Eigen::VectorXd work_f;
  int total_cg_iters = 0;

  explicit DualSolver(const SdpProblem& prob) : p(prob) {
    Eigen::VectorXd d = prob.gram_diagonal();
    precond_inv = d.unaryExpr(
        [](double v) { return (v > 1e-14) ? 1.0 / v : 1.0; });
    work_x.resize(prob.n_blocks());
    for (int b = 0; b < prob.n_blocks(); ++b)
      work_x[b].resize(prob.block(b).dim, prob.block(b).dim);
  }

  void gram_apply(const Eigen::VectorXd& v, Eigen::VectorXd& out) {
    p.apply_adjoint(v, work_x, work_f);
    p.apply_forward(work_x, work_f, out);
  }

  // solves into y (warm start), relative tolerance
  void solve(const Eigen::VectorXd& rhs, Eigen::VectorXd& y, double rel_tol,
             int max_iter) {
    const double bnorm = rhs.norm();
    if (bnorm == 0.0) {
      y.setZero();
      return;
    }
    Eigen::VectorXd r(rhs.size()), ap(rhs.size());
    gram_apply(y, r);
    r = rhs - r;
    Eigen::VectorXd z = precond_inv.asDiagonal() * r;
    Eigen::VectorXd d = z;
    double rz = r.dot(z);
    const double tol2 = rel_tol * rel_tol * bnorm * bnorm;
    for (int it = 0; it < max_iter; ++it) {
      if (r.squaredNorm() <= tol2) break;
      gram_apply(d, ap);
      const double dad = d.dot(ap);
      if (dad <= 0.0) break; // numerically singular system
      const double alpha = rz / dad;
      y += alpha * d;
      r -= alpha * ap;
      z = precond_inv.asDiagonal() * r;
      const double rz_new = r.dot(z);
      d = z + (rz_new / rz) * d;
      rz = rz_new;
      ++total_cg_iters;
    }
  }
};

} // namespace

SdpSolution solve_sdp(const SdpProblem& p, const SdpSolverConfig& cfg) {
  if (!p.finalized()) throw std::logic_error("sdp solver: problem not finalized");
  const auto t0 = std::chrono::steady_clock::now();

  const int nb = p.n_blocks();
  const int m = p.n_constraints();

  Eigen::VectorXd b(m);
  for (int i = 0; i < m; ++i) b[i] = p.rhs()[i];
  const double bnorm = b.norm();
  double cnorm = 0.0;
  for (int bi = 0; bi < nb; ++bi) cnorm += p.objective(bi).squaredNorm();
  cnorm = std::sqrt(cnorm + p.free_objective().squaredNorm());

  std::vector<Eigen::MatrixXd> x(nb), z(nb), aty(nb), u(nb);
  for (int bi = 0; bi < nb; ++bi) {
    const int d = p.block(bi).dim;
    x[bi].setZero(d, d);
    z[bi].setZero(d, d);
    aty[bi].resize(d, d);
    u[bi].resize(d, d);
    const auto it = cfg.initial_x.find(p.block(bi).name);
    if (it != cfg.initial_x.end() && it->second.rows() == d &&
        it->second.cols() == d)
      x[bi] = 0.5 * (it->second + it->second.transpose());
  }
  Eigen::VectorXd f = Eigen::VectorXd::Zero(p.n_free());
  Eigen::VectorXd y = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd aty_f(p.n_free());

  DualSolver dual(p);
  double sigma = cfg.sigma;

  Eigen::VectorXd ax(m), rhs_y(m);
  Vec w;
  Mat v;

  SdpSolution sol;
  double rp = 1.0, rd = 1.0, gap = 1.0;
  double best_infeas = 1e300;
  int stall_counter = 0;

  int iter = 0;
  for (iter = 1; iter <= cfg.max_iterations; ++iter) {
    // dual linear solve:
    // (AA' + FF') y = [b - A(X) - F f]/sigma + A(C - Z) + F c_f
    p.apply_forward(x, f, ax);
    for (int bi = 0; bi < nb; ++bi) u[bi] = p.objective(bi) - z[bi];
    p.apply_forward(u, p.free_objective(), rhs_y);
    rhs_y += (b - ax) / sigma;

    const double cg_tol =
        std::max(cfg.cg_tolerance_floor,
                 std::min(0.1, 0.05 * std::max(rp, rd)));
    dual.solve(rhs_y, y, cg_tol, cfg.cg_max_iterations);

    // projection: U = C - A'y - X/sigma, Z = U_+, X_new = -sigma U_-
    p.apply_adjoint(y, aty, aty_f);
    // per-block contributions reduced in fixed order for determinism
    Eigen::VectorXd rd_block = Eigen::VectorXd::Zero(nb);
#pragma omp parallel for schedule(dynamic)
    for (int bi = 0; bi < nb; ++bi) {
      Eigen::MatrixXd ub = p.objective(bi) - aty[bi] - x[bi] / sigma;
      Vec wb;
      Mat vb;
      symmetric_eig(ub, wb, vb);
      const int d = p.block(bi).dim;
      // split by eigenvalue sign
      Eigen::MatrixXd vpos = Eigen::MatrixXd::Zero(d, d);
      Eigen::MatrixXd vneg = Eigen::MatrixXd::Zero(d, d);
      int npos = 0, nneg = 0;
      for (int k = 0; k < d; ++k) {
        if (wb[k] > 0.0) ++npos;
        else if (wb[k] < 0.0) ++nneg;
      }
      if (npos <= nneg) {
        Eigen::MatrixXd vp(d, npos);
        Eigen::VectorXd wp(npos);
        int t = 0;
        for (int k = 0; k < d; ++k)
          if (wb[k] > 0.0) {
            vp.col(t) = vb.col(k);
            wp[t] = wb[k];
            ++t;
          }
        vpos = vp * wp.asDiagonal() * vp.transpose();
        vneg = vpos - ub;
      } else {
        Eigen::MatrixXd vn(d, nneg);
        Eigen::VectorXd wn(nneg);
        int t = 0;
        for (int k = 0; k < d; ++k)
          if (wb[k] < 0.0) {
            vn.col(t) = vb.col(k);
            wn[t] = -wb[k];
            ++t;
          }
        vneg = vn * wn.asDiagonal() * vn.transpose();
        vpos = ub + vneg;
      }
      z[bi] = vpos;
      Eigen::MatrixXd x_new = sigma * vneg;
      rd_block[bi] = (x_new - x[bi]).squaredNorm();
      x[bi] = x_new;
    }
    const double rd_acc = rd_block.sum();
    const Eigen::VectorXd f_resid = aty_f - p.free_objective();
    f += sigma * f_resid;

    rd = (std::sqrt(rd_acc) / sigma + f_resid.norm()) / (1.0 + cnorm);

    p.apply_forward(x, f, ax);
    rp = (ax - b).norm() / (1.0 + bnorm);

    double pobj = p.free_objective().dot(f);
    for (int bi = 0; bi < nb; ++bi)
      pobj += (p.objective(bi).array() * x[bi].array()).sum();
    const double dobj = b.dot(y);
    gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));

    if (cfg.log_every > 0 && iter % cfg.log_every == 0) {
      if (cfg.progress) cfg.progress(iter, rp, rd, gap, sigma);
      else
        std::fprintf(stderr,
                     "  sdp iter %6d  rp %9.3e  rd %9.3e  gap %9.3e  sigma %8.2e\n",
                     iter, rp, rd, gap, sigma);
    }

    if (std::max({rp, rd, gap}) < cfg.tolerance) {
      sol.converged = true;
      break;
    }

    // penalty adaptation, ratio rule
    if (iter % cfg.sigma_update_every == 0) {
      const double ratio = rp / std::max(rd, 1e-300);
      if (ratio > 5.0)
        sigma = std::min(sigma * 1.6, 1e6);
      else if (ratio < 0.2)
        sigma = std::max(sigma / 1.6, 1e-4);
    }

    // divergence heuristic over a sliding window
    const double infeas = std::max(rp, rd);
    if (infeas < best_infeas) {
      best_infeas = infeas;
      stall_counter = 0;
    } else if (++stall_counter >= cfg.infeasibility_window &&
               infeas > 1e3 * best_infeas) {
      break; // residuals diverging; return best effort, flagged unconverged
    }
  }

  sol.iterations = std::min(iter, cfg.max_iterations);
  sol.x = x;
  sol.f = f;
  sol.y = y;
  sol.z = z;

  // residuals recomputed from the returned variables
  p.apply_forward(x, f, ax);
  sol.primal_residual = (ax - b).norm() / (1.0 + bnorm);
  p.apply_adjoint(y, aty, aty_f);
  double rd2 = (aty_f - p.free_objective()).squaredNorm();
  for (int bi = 0; bi < nb; ++bi)
    rd2 += (aty[bi] + z[bi] - p.objective(bi)).squaredNorm();
  sol.dual_residual = std::sqrt(rd2) / (1.0 + cnorm);
  sol.primal_objective = p.free_objective().dot(f);
  for (int bi = 0; bi < nb; ++bi)
    sol.primal_objective += (p.objective(bi).array() * x[bi].array()).sum();
  sol.dual_objective = b.dot(y);
  sol.gap = std::abs(sol.primal_objective - sol.dual_objective) /
            (1.0 + std::abs(sol.primal_objective) + std::abs(sol.dual_objective));
  sol.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return sol;
}

SdpCertificate certify(const SdpProblem& p, const SdpSolution& sol) {
  SdpCertificate cert;
  const int nb = p.n_blocks();
  const int m = p.n_constraints();

  // objectives, compensated
  CompensatedSum pobj;
  for (int bi = 0; bi < nb; ++bi) {
    const auto& c = p.objective(bi);
    const auto& x = sol.x[bi];
    for (int i = 0; i < c.rows(); ++i)
      for (int j = 0; j < c.cols(); ++j) pobj.add(c(i, j) * x(i, j));
  }
  for (int k = 0; k < p.n_free(); ++k)
    pobj.add(p.free_objective()[k] * sol.f[k]);
  cert.primal_objective = pobj.value();

  CompensatedSum dobj;
  for (int i = 0; i < m; ++i) dobj.add(p.rhs()[i] * sol.y[i]);
  cert.dual_objective = dobj.value();

  // primal residual
  {
    Eigen::VectorXd ax(m);
    p.apply_forward(sol.x, sol.f, ax);
    CompensatedSum acc;
    for (int i = 0; i < m; ++i) {
      const double d = ax[i] - p.rhs()[i];
      acc.add(d * d);
    }
    cert.primal_residual_abs = std::sqrt(acc.value());
  }

  // dual residual per block and margin
  std::vector<Eigen::MatrixXd> aty(nb);
  for (int bi = 0; bi < nb; ++bi)
    aty[bi].resize(p.block(bi).dim, p.block(bi).dim);
  Eigen::VectorXd aty_f;
  p.apply_adjoint(sol.y, aty, aty_f);

  double rd2 = 0.0;
  double margin = 0.0;
  bool caps_ok = !p.block_trace_caps.empty() &&
                 p.block_trace_caps.size() == static_cast<std::size_t>(nb);
  for (int bi = 0; bi < nb; ++bi) {
    const Eigen::MatrixXd r = aty[bi] + sol.z[bi] - p.objective(bi);
    rd2 += r.squaredNorm();
    if (caps_ok) {
      Vec w;
      Mat v;
      symmetric_eig(r, w, v);
      const double spectral =
          std::max(std::abs(w.minCoeff()), std::abs(w.maxCoeff()));
      margin += spectral * p.block_trace_caps[bi];
    }
  }
  const Eigen::VectorXd fr = aty_f - p.free_objective();
  rd2 += fr.squaredNorm();
  cert.dual_residual_abs = std::sqrt(rd2);
  cert.gap = std::abs(cert.primal_objective - cert.dual_objective) /
             (1.0 + std::abs(cert.primal_objective) +
              std::abs(cert.dual_objective));

  if (caps_ok && fr.norm() < 1e-9 * (1.0 + p.free_objective().norm())) {
    cert.lower_bound = cert.dual_objective - margin;
    cert.margin = margin;
    cert.bound_valid = true;
    cert.note = "opt >= dual_objective - margin";
  } else if (!caps_ok) {
    cert.note = "no trace caps declared; bound unavailable";
  } else {
    cert.note = "free-variable dual infeasibility too large for a bound";
  }
  return cert;
}

} // namespace vrdm
