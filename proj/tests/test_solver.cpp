#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <random>

#include "pnsdg/solver.hpp"

using namespace pnsdg;

namespace {

double linf(const std::vector<double>& r) {
  double m = 0.0;
  for (double x : r) m = std::max(m, std::abs(x));
  return m;
}

VectorFn zero2 = [](const Vec&) { return Vec(0.0, 0.0); };

double mesh_integral_q(const DgSpace& sp, const std::vector<double>& q) {
  double acc = 0.0;
  for (int c = 0; c < sp.mesh.n_cells(); ++c)
    for (int qq = 0; qq < sp.nq(); ++qq) {
      double val = 0.0;
      for (int k = 0; k <= sp.mesh.dim; ++k)
        val += q[sp.mesh.cells[c][k]] * sp.cell_q.points[qq][k];
      acc += sp.wq(c, qq) * val;
    }
  return acc;
}

}  // namespace

TEST_CASE("residual vanishes at the zero state with zero data") {
  DgSpace sp(uniform_mesh(2, 1));
  PnsProblem pr{&sp, SolverConfig{}, zero2, VectorFn{}};
  const DiscreteState s = zero_state(sp);
  const auto R = assemble_residual(pr, s);
  CHECK(linf(R) <= 1e-14);
}

TEST_CASE("constant velocity with matching data solves the homogeneous problem") {
  // v = c0, q = 0: all convective and viscous contributions cancel at the
  // discrete level because test-side lifted gradients annihilate constants.
  DgSpace sp(uniform_mesh(2, 2));
  SolverConfig cfg;
  cfg.p = 2.75;
  cfg.convective = true;
  VectorFn bdata = [](const Vec&) { return Vec(0.7, -0.4); };
  PnsProblem pr{&sp, cfg, zero2, bdata};
  const DiscreteState s =
      interpolate_state(sp, bdata, [](const Vec&) { return 0.0; });
  const auto R = assemble_residual(pr, s);
  CHECK(linf(R) <= 1e-13);
}

TEST_CASE("rigid rotation is an exact discrete solution without convection") {
  DgSpace sp(uniform_mesh(2, 2));
  SolverConfig cfg;
  cfg.p = 2.5;
  cfg.convective = false;
  VectorFn rot = [](const Vec& x) { return Vec(x[1], -x[0]); };
  PnsProblem pr{&sp, cfg, zero2, rot};
  const DiscreteState s = interpolate_state(sp, rot, [](const Vec&) { return 0.0; });
  const auto R = assemble_residual(pr, s);
  CHECK(linf(R) <= 1e-12);
}

TEST_CASE("convective lifting defect at a linear solution shrinks under refinement") {
  // With the convective term on, pairing v (x) v against lifted test
  // gradients leaves the projection defect <{Pi_h(v x v)} - {v x v}, [[z x n]]>,
  // so the residual at the interpolated rotation state is small but nonzero.
  VectorFn rot = [](const Vec& x) { return Vec(x[1], -x[0]); };
  VectorFn conv_force = [](const Vec& x) { return Vec(-x[0], -x[1]); };
  SolverConfig cfg;
  cfg.p = 2.5;
  cfg.convective = true;
  double defect[2];
  for (int lvl : {1, 2}) {
    DgSpace sp(uniform_mesh(2, lvl));
    PnsProblem pr{&sp, cfg, conv_force, rot};
    const DiscreteState s = interpolate_state(sp, rot, [](const Vec&) { return 0.0; });
    defect[lvl - 1] = linf(assemble_residual(pr, s));
  }
  MESSAGE("convective defect level 1: ", defect[0], ", level 2: ", defect[1]);
  CHECK(defect[0] > 1e-12);   // genuinely nonzero
  CHECK(defect[0] < 1e-2);    // but small
  CHECK(defect[1] < 0.6 * defect[0]);
}

TEST_CASE("analytic Jacobian matches central finite differences") {
  DgSpace sp(uniform_mesh(2, 1));
  SolverConfig cfg;
  cfg.p = 2.7;
  cfg.delta = 1e-5;
  cfg.mu0 = 0.5;
  cfg.alpha = 2.5;
  cfg.convective = true;
  VectorFn force = [](const Vec& x) { return Vec(1.0 + x[1], -x[0]); };
  VectorFn bdata = [](const Vec& x) { return Vec(0.3 + x[1], x[0] - 0.2); };
  PnsProblem pr{&sp, cfg, force, bdata};

  DiscreteState s = zero_state(sp);
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> uni(-0.5, 0.5);
  for (double& v : s.v.raw()) v = uni(rng);
  for (double& v : s.q) v = uni(rng);
  s.lambda = 0.2;

  const auto shifts = face_shifts(pr, s);
  const Eigen::MatrixXd J = Eigen::MatrixXd(assemble_jacobian(pr, s, shifts));
  const int N = n_dof(pr);
  REQUIRE(J.rows() == N);

  const int nv = sp.mesh.n_cells() * 2 * sp.nb();
  const double h = 1e-6;
  auto bump = [&](DiscreteState& st, int j, double dh) {
    if (j < nv)
      st.v.raw()[j] += dh;
    else if (j < nv + sp.mesh.n_vertices())
      st.q[j - nv] += dh;
    else
      st.lambda += dh;
  };
  double worst = 0.0;
  for (int j = 0; j < N; ++j) {
    DiscreteState sp1 = s, sm1 = s;
    bump(sp1, j, h);
    bump(sm1, j, -h);
    const auto rp = assemble_residual(pr, sp1, &shifts);
    const auto rm = assemble_residual(pr, sm1, &shifts);
    for (int i = 0; i < N; ++i) {
      const double fd = (rp[i] - rm[i]) / (2.0 * h);
      worst = std::max(worst, std::abs(fd - J(i, j)));
    }
  }
  const double scale = std::max(1.0, J.cwiseAbs().maxCoeff());
  MESSAGE("max Jacobian FD deviation: ", worst, " at scale ", scale);
  CHECK(worst / scale <= 1e-5);
}

TEST_CASE("velocity-pressure coupling blocks are exactly antisymmetric") {
  DgSpace sp(uniform_mesh(2, 1));
  SolverConfig cfg;
  cfg.p = 2.5;
  PnsProblem pr{&sp, cfg, zero2, VectorFn{}};
  DiscreteState s = zero_state(sp);
  std::mt19937 rng(29);
  std::uniform_real_distribution<double> uni(-0.5, 0.5);
  for (double& v : s.v.raw()) v = uni(rng);
  for (double& v : s.q) v = uni(rng);
  const auto shifts = face_shifts(pr, s);
  Eigen::SparseMatrix<double> J = assemble_jacobian(pr, s, shifts);
  const int nv = sp.mesh.n_cells() * 2 * sp.nb();
  const int nq = sp.mesh.n_vertices();
  const Eigen::MatrixXd Jd = Eigen::MatrixXd(J);
  const Eigen::MatrixXd B = Jd.block(nv, 0, nq, nv);       // mass rows
  const Eigen::MatrixXd Bt = Jd.block(0, nv, nv, nq);      // pressure columns
  CHECK((B + Bt.transpose()).cwiseAbs().maxCoeff() <= 1e-14);
  // Multiplier couplings are symmetric and equal to the hat integrals.
  const Eigen::VectorXd c1 = Jd.block(nv, nv + nq, nq, 1);
  const Eigen::VectorXd c2 = Jd.block(nv + nq, nv, 1, nq).transpose();
  CHECK((c1 - c2).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK(c1.sum() == doctest::Approx(1.0).epsilon(1e-12));  // sum of hat integrals = |Omega|
}

TEST_CASE("p = 2 without convection converges in a single Newton step") {
  DgSpace sp(uniform_mesh(2, 1));
  SolverConfig cfg;
  cfg.p = 2.0;
  cfg.convective = false;
  PnsProblem pr{&sp, cfg, [](const Vec&) { return Vec(1.0, 0.0); }, VectorFn{}};
  DiscreteState s = zero_state(sp);
  const NewtonReport rep = newton_solve(pr, s);
  CHECK(rep.converged);
  CHECK(rep.iterations == 1);
  CHECK(rep.monotone);
  CHECK(std::abs(mesh_integral_q(sp, s.q)) <= 1e-10);
}

TEST_CASE("nonlinear solve with convection converges monotonically") {
  DgSpace sp(uniform_mesh(2, 2));
  SolverConfig cfg;
  cfg.p = 2.75;
  cfg.convective = true;
  PnsProblem pr{&sp, cfg, [](const Vec& x) { return Vec(1.0, 0.5 * x[0]); }, VectorFn{}};
  DiscreteState s = zero_state(sp);
  const NewtonReport rep = newton_solve(pr, s);
  MESSAGE("iterations: ", rep.iterations, ", backtracks: ", rep.total_backtracks);
  CHECK(rep.converged);
  CHECK(rep.iterations <= 25);
  CHECK(rep.monotone);
  for (size_t i = 1; i < rep.residuals.size(); ++i)
    CHECK(rep.residuals[i] < rep.residuals[i - 1]);
  CHECK(std::abs(mesh_integral_q(sp, s.q)) <= 1e-10);
  // The discrete solution is nontrivial.
  CHECK(linf(s.v.raw()) > 1e-3);
}

TEST_CASE("steep exponent from a cold start on the coarsest mesh") {
  DgSpace sp(uniform_mesh(2, 0));
  SolverConfig cfg;
  cfg.p = 3.5;
  cfg.convective = true;
  PnsProblem pr{&sp, cfg, [](const Vec&) { return Vec(1.0, 0.0); }, VectorFn{}};
  DiscreteState s = zero_state(sp);
  const NewtonReport rep = newton_solve(pr, s);
  MESSAGE("p=3.5 cold start iterations: ", rep.iterations,
          ", backtracks: ", rep.total_backtracks);
  CHECK(rep.converged);
  CHECK(rep.iterations <= 25);
}

TEST_CASE("prolongation reproduces linear velocity and pressure exactly") {
  DgSpace coarse(uniform_mesh(2, 1));
  DgSpace fine(red_refine(coarse.mesh));
  VectorFn vf = [](const Vec& x) { return Vec(1.0 + 2.0 * x[0] - x[1], x[0] + 0.5 * x[1]); };
  auto qf = [](const Vec& x) { return 0.25 - x[0] + 2.0 * x[1]; };
  DiscreteState sc = interpolate_state(coarse, vf, qf);
  sc.lambda = 0.7;
  const DiscreteState sf = prolong(coarse, fine, sc);
  const DiscreteState ref = interpolate_state(fine, vf, qf);
  double worst = 0.0;
  for (size_t i = 0; i < sf.v.raw().size(); ++i)
    worst = std::max(worst, std::abs(sf.v.raw()[i] - ref.v.raw()[i]));
  for (size_t m = 0; m < sf.q.size(); ++m)
    worst = std::max(worst, std::abs(sf.q[m] - ref.q[m]));
  CHECK(worst <= 1e-12);
  CHECK(sf.lambda == 0.7);
}
