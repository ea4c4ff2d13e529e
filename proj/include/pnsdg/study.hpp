#pragma once

// Experiment layer: manufactured-solution convergence studies on the unit
// square, natural-distance error quantities with experimental orders of
// convergence, CSV / markdown table writers, the corner-weight quadrature
// diagnostic on the 3D vortex chain, and a flat key=value config reader.

#include <iosfwd>
#include <string>
#include <vector>

#include "pnsdg/manufactured.hpp"
#include "pnsdg/solver.hpp"

namespace pnsdg {

// Error quantities of a discrete state against a manufactured solution:
//   e_F         = || F(D v_h) - F(D v) ||_2
//   e_jump      = m_{phi,h}(v_h)^{1/2} with boundary data v and face shifts
//                 from the cell means of D v_h
//   e_q_norm    = || q_h - q ||_{p'}
//   e_q_modular = rho_{(phi_{|Dv|})*, Omega}(q_h - q)^{1/2}
struct ErrorQuantities {
  double e_F = 0.0;
  double e_jump = 0.0;
  double e_q_norm = 0.0;
  double e_q_modular = 0.0;
};

ErrorQuantities error_quantities(const DgSpace& sp, const SolverConfig& cfg,
                                 const ManufacturedSolution2D& ms, const DiscreteState& s);

struct StudyRow {
  int level = 0;
  double h = 0.0;
  int n_dof_v = 0;
  int n_dof_q = 0;
  int newton_iters = 0;
  ErrorQuantities err;
  // Orders against the previous row; NaN on the coarsest level.
  double eoc_F = 0.0, eoc_jump = 0.0, eoc_q_norm = 0.0, eoc_q_modular = 0.0;
};

struct StudyOptions {
  double p = 2.5;
  double delta = 1e-5;
  double mu0 = 0.5;
  double alpha = 2.5;
  int case_id = 2;  // 1: pressure at its integrability limit, 2: matched to the velocity
  int levels = 5;   // finest level; the study runs levels 0..levels
  int dim = 2;      // convergence studies are 2D; 3 selects the corner diagnostic
  std::string output;         // empty = stdout
  std::string format = "csv"; // csv | md
};

struct StudyResult {
  StudyOptions opts;
  std::vector<StudyRow> rows;
  double theory_rate = 1.0;  // expected order of the modular pressure error
  int failed_level = -1;     // level where Newton stalled, -1 if all converged
  std::vector<NewtonReport> reports;
};

// Order between consecutive levels: log(e_f / e_c) / log(h_f / h_c).
double eoc(double e_coarse, double e_fine, double h_coarse, double h_fine);

// Solve the manufactured problem on levels 0..opts.levels with nested Newton
// continuation (zero start on the coarsest mesh, prolongation upward) and
// tabulate errors and orders.  A stalled Newton truncates the table and sets
// failed_level.  Throws on invalid options (dim != 2, bad case id).
StudyResult run_study(const StudyOptions& opts);

void write_csv(const StudyResult& res, std::ostream& out);
void write_markdown(const StudyResult& res, std::ostream& out);

// Corner-weight diagnostic.  For mesh level i = 1..max_level the vortex ball
// hit by the corner probe is scanned for volume quadrature points, and the
// weight-mu pairing
//   E_i = (sum_q w_q mu(x_q)) * (sum_q w_q / mu(x_q)),   mu = (delta + |D v|)^(p-2)
// is accumulated over the points inside the closed ball, together with the
// plain weight sum W_i.  For a single point E_i collapses to W_i^2 (ratio 1).
struct DiagRow {
  int level = 0;
  int ball = 0;        // chain index of the probed ball
  int n_points = 0;    // quadrature points inside the closed ball
  double W = 0.0;      // sum of weights
  double E = 0.0;      // weight-mu pairing
  double ratio = 0.0;  // E / W^2
  bool resolved = true;  // false when the ball contains no quadrature point
};

std::vector<DiagRow> a2_diagnostic(double p, double delta, int max_level);

void write_diag_csv(const std::vector<DiagRow>& rows, std::ostream& out);
void write_diag_markdown(const std::vector<DiagRow>& rows, std::ostream& out);

// Flat key=value config, one pair per line, '#' starts a comment.  Keys
// mirror the CLI flags: p, case, levels, alpha, delta, mu0, dim, output,
// format.  Unknown keys and malformed lines throw.
void apply_config_file(StudyOptions& opts, const std::string& path);

}  // namespace pnsdg
