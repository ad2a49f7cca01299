#include <doctest.h>

#include <random>
#include <sstream>

#include "vrdm/linalg.hpp"
#include "vrdm/sdp_solver.hpp"

using namespace vrdm;

namespace {

Eigen::MatrixXd random_symmetric(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> dist;
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) m(i, j) = m(j, i) = dist(rng);
  return m;
}

} // namespace

TEST_CASE("min Tr(X) with unit diagonal: optimum 2, X = I") {
  SdpProblem p;
  const int b = p.add_block("x", 2);
  p.set_objective(b, Eigen::MatrixXd::Identity(2, 2));
  for (int i = 0; i < 2; ++i) {
    const int c = p.add_constraint(1.0);
    p.add_entry(c, b, i, i, 1.0);
  }
  p.finalize();
  const auto sol = solve_sdp(p);
  CHECK(sol.converged);
  CHECK(sol.primal_objective == doctest::Approx(2.0).epsilon(1e-5));
  CHECK((sol.x[0] - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() <
        1e-4);
}

TEST_CASE("max lambda s.t. C - lambda I >= 0 finds the smallest eigenvalue") {
  // formulated with one free variable and Z = C - lambda I
  const int n = 5;
  const Eigen::MatrixXd c = random_symmetric(n, 3);
  Vec w;
  Mat v;
  symmetric_eig(c, w, v);

  SdpProblem p;
  const int b = p.add_block("slack", n);
  const int lam = p.add_free_variable();
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const int con = p.add_constraint(c(i, j));
      p.add_entry(con, b, i, j, 1.0);
      if (i == j) p.add_free_entry(con, lam, 1.0);
    }
  Eigen::VectorXd fobj(1);
  fobj[0] = -1.0; // maximize lambda
  p.set_free_objective(fobj);
  p.finalize();

  const auto sol = solve_sdp(p);
  CHECK(sol.converged);
  CHECK(sol.f[lam] == doctest::Approx(w.minCoeff()).epsilon(1e-5));
}

TEST_CASE("random feasible SDP from a constructed interior solution") {
  // build A around a known strictly feasible pair so both problems are
  // solvable, then check residuals and weak duality
  std::mt19937 rng(5);
  std::normal_distribution<double> dist;
  const int n = 6, m = 8;

  Eigen::MatrixXd x0 = random_symmetric(n, 6);
  x0 = (x0 * x0.transpose() + Eigen::MatrixXd::Identity(n, n)).eval();

  SdpProblem p;
  const int b = p.add_block("x", n);
  std::vector<Eigen::MatrixXd> amats;
  for (int k = 0; k < m; ++k) amats.push_back(random_symmetric(n, 100 + k));

  // strictly feasible dual slack: C = A'y0 + Z0 with Z0 > 0
  Eigen::VectorXd y0(m);
  for (int k = 0; k < m; ++k) y0[k] = dist(rng);
  Eigen::MatrixXd z0 = random_symmetric(n, 200);
  z0 = (z0 * z0.transpose() + Eigen::MatrixXd::Identity(n, n)).eval();
  Eigen::MatrixXd c = z0;
  for (int k = 0; k < m; ++k) c += y0[k] * amats[k];
  p.set_objective(b, c);

  for (int k = 0; k < m; ++k) {
    const int con = p.add_constraint((amats[k].array() * x0.array()).sum());
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        p.add_entry(con, b, i, j, (i == j) ? amats[k](i, i)
                                           : 2.0 * amats[k](i, j));
  }
  p.finalize();

  const auto sol = solve_sdp(p);
  CHECK(sol.converged);
  CHECK(sol.primal_residual < 1e-6);
  CHECK(sol.dual_residual < 1e-6);
  CHECK(sol.gap < 1e-6);
  // weak duality for the min form
  CHECK(sol.dual_objective <= sol.primal_objective + 1e-5);

  // scaling invariance: double C doubles the optimum
  SdpProblem q;
  const int qb = q.add_block("x", n);
  q.set_objective(qb, 2.0 * c);
  for (int k = 0; k < m; ++k) {
    const int con = q.add_constraint((amats[k].array() * x0.array()).sum());
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        q.add_entry(con, qb, i, j, (i == j) ? amats[k](i, i)
                                            : 2.0 * amats[k](i, j));
  }
  q.finalize();
  const auto sol2 = solve_sdp(q);
  CHECK(sol2.primal_objective ==
        doctest::Approx(2.0 * sol.primal_objective).epsilon(1e-4));
  CHECK((sol2.x[0] - sol.x[0]).cwiseAbs().maxCoeff() < 1e-3);
}

TEST_CASE("block order permutation leaves the objective unchanged") {
  auto build = [](bool swapped) {
    SdpProblem p;
    const int b1 = p.add_block(swapped ? "b" : "a", 2);
    const int b2 = p.add_block(swapped ? "a" : "b", 3);
    const int first = swapped ? b2 : b1;
    const int second = swapped ? b1 : b2;
    p.set_objective(first, Eigen::MatrixXd::Identity(2, 2));
    p.set_objective(second, 2.0 * Eigen::MatrixXd::Identity(3, 3));
    int c = p.add_constraint(1.0);
    p.add_entry(c, first, 0, 0, 1.0);
    c = p.add_constraint(1.0);
    p.add_entry(c, second, 1, 1, 1.0);
    c = p.add_constraint(0.5);
    p.add_entry(c, first, 0, 1, 1.0);
    p.add_entry(c, second, 0, 0, 1.0);
    p.finalize();
    return solve_sdp(p).primal_objective;
  };
  CHECK(build(false) == doctest::Approx(build(true)).epsilon(1e-10));
}

TEST_CASE("certify recomputes residuals and a bound") {
  SdpProblem p;
  const int b = p.add_block("x", 2);
  p.set_objective(b, Eigen::MatrixXd::Identity(2, 2));
  for (int i = 0; i < 2; ++i) {
    const int c = p.add_constraint(1.0);
    p.add_entry(c, b, i, i, 1.0);
  }
  p.block_trace_caps = {2.0};
  p.finalize();
  auto sol = solve_sdp(p);
  const auto cert = certify(p, sol);
  CHECK(cert.primal_residual_abs < 1e-5);
  CHECK(cert.dual_residual_abs < 1e-5);
  CHECK(cert.bound_valid);
  CHECK(cert.lower_bound <= 2.0 + 1e-6);
  CHECK(cert.lower_bound > 1.9);

  // perturbing X shows up in the recomputed primal residual
  sol.x[0](0, 0) += 0.01;
  const auto cert2 = certify(p, sol);
  CHECK(cert2.primal_residual_abs == doctest::Approx(0.01).epsilon(1e-6));
}

TEST_CASE("empty rows are dropped with a report") {
  SdpProblem p;
  const int b = p.add_block("x", 2);
  p.set_objective(b, Eigen::MatrixXd::Identity(2, 2));
  int c = p.add_constraint(1.0);
  p.add_entry(c, b, 0, 0, 1.0);
  p.add_constraint(0.0); // empty
  p.finalize();
  CHECK(p.n_constraints() == 1);
  REQUIRE(p.preprocessing_report().size() == 1);

  SdpProblem bad;
  bad.add_block("x", 2);
  bad.add_constraint(1.0); // empty with nonzero rhs
  CHECK_THROWS_AS(bad.finalize(), std::runtime_error);
}

TEST_CASE("problem serialization round-trip") {
  SdpProblem p;
  const int b = p.add_block("x", 2);
  p.set_objective(b, Eigen::MatrixXd::Identity(2, 2));
  const int lam = p.add_free_variable();
  for (int i = 0; i < 2; ++i) {
    const int c = p.add_constraint(1.0);
    p.add_entry(c, b, i, i, 1.0);
    p.add_free_entry(c, lam, 0.5);
  }
  Eigen::VectorXd fobj(1);
  fobj[0] = -1.0;
  p.set_free_objective(fobj);
  p.finalize();

  std::ostringstream os;
  p.write_text(os);
  std::istringstream is(os.str());
  SdpProblem q = SdpProblem::read_text(is);
  q.finalize();

  const auto s1 = solve_sdp(p);
  const auto s2 = solve_sdp(q);
  CHECK(s1.primal_objective == doctest::Approx(s2.primal_objective).epsilon(1e-8));
}
