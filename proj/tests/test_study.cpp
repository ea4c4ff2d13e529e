#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "pnsdg/study.hpp"

using namespace pnsdg;

namespace {

ErrorQuantities interpolated_errors(int level, int case_id, double p) {
  SolverConfig cfg;
  cfg.p = p;
  const ManufacturedSolution2D ms = make_case(case_id, cfg.p, cfg.delta, cfg.mu0);
  DgSpace sp(uniform_mesh(2, level));
  DiscreteState s = interpolate_state(
      sp, [&ms](const Vec& x) { return ms.velocity(x); },
      [&ms](const Vec& x) { return ms.pressure(x); });
  return error_quantities(sp, cfg, ms, s);
}

}  // namespace

// ============================================================================

TEST_CASE("eoc reproduces known order pairs") {
  CHECK(eoc(1.0, 0.5, 1.0, 0.5) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(eoc(1.0, 0.25, 1.0, 0.5) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(eoc(0.3, 0.3, 1.0, 0.5) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(std::isnan(eoc(0.0, 0.1, 1.0, 0.5)));
  CHECK(std::isnan(eoc(0.1, 0.1, 1.0, 1.0)));
}

TEST_CASE("interpolated manufactured state: errors shrink under refinement") {
  const ErrorQuantities c = interpolated_errors(1, 2, 2.5);
  const ErrorQuantities f = interpolated_errors(2, 2, 2.5);
  CHECK(c.e_F > 0.0);
  CHECK(c.e_jump > 0.0);
  CHECK(c.e_q_norm > 0.0);
  CHECK(c.e_q_modular > 0.0);
  CHECK(f.e_F < c.e_F);
  CHECK(f.e_jump < c.e_jump);
  CHECK(f.e_q_norm < c.e_q_norm);
  CHECK(f.e_q_modular < c.e_q_modular);
}

TEST_CASE("quadratic case: modular pressure error is the scaled L2 error") {
  // At p = 2 every shifted N-function is t^2/2 and so is its conjugate, hence
  // rho*(q_h - q) = ||q_h - q||_2^2 / 2 independently of delta and the shift.
  SolverConfig cfg;
  cfg.p = 2.0;
  const ManufacturedSolution2D ms = make_case(2, cfg.p, cfg.delta, cfg.mu0);
  DgSpace sp(uniform_mesh(2, 2));
  DiscreteState s = interpolate_state(
      sp, [&ms](const Vec& x) { return ms.velocity(x); },
      [&ms](const Vec& x) { return ms.pressure(x); });
  // Perturb the pressure so the error is not dominated by interpolation noise.
  for (double& qv : s.q) qv += 1e-3;
  const ErrorQuantities e = error_quantities(sp, cfg, ms, s);
  CHECK(e.e_q_modular == doctest::Approx(e.e_q_norm / std::sqrt(2.0)).epsilon(1e-8));
}

TEST_CASE("csv writer emits the exact schema") {
  StudyResult res;
  res.theory_rate = 1.0;
  StudyRow r0;
  r0.level = 0;
  r0.h = 1.0;
  r0.n_dof_v = 24;
  r0.n_dof_q = 5;
  r0.newton_iters = 3;
  r0.err = {0.5, 0.25, 0.125, 0.0625};
  r0.eoc_F = r0.eoc_jump = r0.eoc_q_norm = r0.eoc_q_modular =
      std::numeric_limits<double>::quiet_NaN();
  StudyRow r1 = r0;
  r1.level = 1;
  r1.h = 0.5;
  r1.n_dof_v = 96;
  r1.n_dof_q = 13;
  r1.newton_iters = 4;
  r1.err = {0.25, 0.125, 0.0625, 0.03125};
  r1.eoc_F = r1.eoc_jump = r1.eoc_q_norm = r1.eoc_q_modular = 1.0;
  res.rows = {r0, r1};

  std::ostringstream out;
  write_csv(res, out);
  const std::string expect =
      "level,h,n_dof_v,n_dof_q,newton_iters,"
      "e_F,e_jump,e_q_norm,e_q_modular,eoc_F,eoc_jump,eoc_q_norm,eoc_q_modular\n"
      "0,1,24,5,3,5.00000000e-01,2.50000000e-01,1.25000000e-01,6.25000000e-02,,,,\n"
      "1,0.5,96,13,4,2.50000000e-01,1.25000000e-01,6.25000000e-02,3.12500000e-02,"
      "1.0000,1.0000,1.0000,1.0000\n";
  CHECK(out.str() == expect);

  std::ostringstream md;
  write_markdown(res, md);
  CHECK(md.str().find("| level |") != std::string::npos);
  CHECK(md.str().find("expected order") != std::string::npos);

  res.failed_level = 2;
  std::ostringstream out2;
  write_csv(res, out2);
  CHECK(out2.str().find("# WARNING: newton did not converge at level 2") != std::string::npos);
}

TEST_CASE("config file: values apply, flags keys only") {
  const char* path = "pnsdg_test_config.txt";
  {
    std::ofstream f(path);
    f << "# study setup\n";
    f << "p = 3.0\n";
    f << "case=1\n";
    f << "levels = 2   # coarse smoke run\n";
    f << "format = md\n";
    f << "\n";
    f << "output = table.md\n";
  }
  StudyOptions opts;
  apply_config_file(opts, path);
  CHECK(opts.p == doctest::Approx(3.0));
  CHECK(opts.case_id == 1);
  CHECK(opts.levels == 2);
  CHECK(opts.format == "md");
  CHECK(opts.output == "table.md");
  CHECK(opts.delta == doctest::Approx(1e-5));  // untouched default

  {
    std::ofstream f(path);
    f << "viscosity = 0.5\n";
  }
  CHECK_THROWS(apply_config_file(opts, path));
  {
    std::ofstream f(path);
    f << "no equals sign here\n";
  }
  CHECK_THROWS(apply_config_file(opts, path));
  CHECK_THROWS(apply_config_file(opts, "does_not_exist.cfg"));
  std::remove(path);
}

TEST_CASE("run_study rejects invalid options") {
  StudyOptions opts;
  opts.dim = 3;
  CHECK_THROWS(run_study(opts));
  opts.dim = 2;
  opts.case_id = 7;
  CHECK_THROWS(run_study(opts));
}

TEST_CASE("two-level study converges and tabulates orders") {
  StudyOptions opts;
  opts.levels = 2;
  opts.case_id = 2;
  opts.p = 2.5;
  const StudyResult res = run_study(opts);
  REQUIRE(res.rows.size() == 3);
  CHECK(res.failed_level == -1);
  CHECK(res.theory_rate == doctest::Approx(1.0));
  for (const StudyRow& r : res.rows) {
    CHECK(r.newton_iters <= 25);
    CHECK(r.err.e_F > 0.0);
    CHECK(std::isfinite(r.err.e_q_modular));
  }
  CHECK(res.rows[0].n_dof_v == 4 * 2 * 3);
  CHECK(res.rows[0].n_dof_q == 5);
  CHECK(std::isnan(res.rows[0].eoc_F));
  CHECK(std::isfinite(res.rows[2].eoc_F));
  // Refinement decreases every error quantity from level 1 on (the 4-cell
  // level-0 mesh is pre-asymptotic and may undershoot).
  for (int i = 2; i < 3; ++i) {
    CHECK(res.rows[i].err.e_F < res.rows[i - 1].err.e_F);
    CHECK(res.rows[i].err.e_jump < res.rows[i - 1].err.e_jump);
    CHECK(res.rows[i].err.e_q_norm < res.rows[i - 1].err.e_q_norm);
    CHECK(res.rows[i].err.e_q_modular < res.rows[i - 1].err.e_q_modular);
  }
  for (const NewtonReport& rep : res.reports) {
    CHECK(rep.converged);
    CHECK(rep.monotone);
  }
}

TEST_CASE("corner diagnostic: single-point balls give ratio one") {
  const auto rows = a2_diagnostic(3.0, 1e-5, 2);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].level == 1);
  CHECK(rows[0].ball == 4);
  CHECK(rows[1].ball == 5);
  for (const DiagRow& r : rows) {
    CHECK(r.resolved);
    CHECK(r.n_points == 1);
    CHECK(r.ratio == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.W > 0.0);
  }
  // The probed ball shrinks 8x in volume per level and so does its weight.
  CHECK(rows[1].W < rows[0].W);
  CHECK(rows[1].E < rows[0].E);

  std::ostringstream out;
  write_diag_csv(rows, out);
  CHECK(out.str().rfind("level,ball,n_points,W,E,E_over_W2,resolved\n", 0) == 0);
  std::ostringstream md;
  write_diag_markdown(rows, md);
  CHECK(md.str().find("| level |") != std::string::npos);
}
