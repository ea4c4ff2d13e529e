#include "pnsdg/study.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <memory>
#include <ostream>
#include <stdexcept>

namespace pnsdg {

namespace {

// Field value at a cell quadrature point; the rule stores reference
// barycentric coordinates, which are the evaluation coordinates directly.
Mat mat_at(const DgSpace& sp, const BrokenField& X, int c, int q) {
  return X.eval_mat(c, sp.cell_q.points[q]);
}

// Conforming P1 pressure at a cell quadrature point.
double pressure_at(const DgSpace& sp, const std::vector<double>& qv, int c, int q) {
  const auto& lam = sp.cell_q.points[q];
  double val = 0.0;
  for (int k = 0; k <= sp.mesh.dim; ++k) val += lam[k] * qv[sp.mesh.cells[c][k]];
  return val;
}

}  // namespace

// ============================================================================
// Error quantities
// ============================================================================

ErrorQuantities error_quantities(const DgSpace& sp, const SolverConfig& cfg,
                                 const ManufacturedSolution2D& ms, const DiscreteState& s) {
  const NFunctionSpec spec = cfg.nfun();
  const int nc = sp.mesh.n_cells();
  const int nq = sp.nq();
  VectorFn bdata = [&ms](const Vec& x) { return ms.velocity(x); };

  BrokenField Gv = dg_gradient(sp, s.v, &bdata);
  BrokenField Dv = dg_sym_gradient(sp, s.v, &bdata);

  ErrorQuantities e;

  double acc_f = 0.0;
  for (int c = 0; c < nc; ++c)
    for (int q = 0; q < nq; ++q) {
      const Vec x = sp.xq(c, q);
      const Mat diff = f_transform(spec, mat_at(sp, Gv, c, q)) - f_transform(spec, ms.sym_grad(x));
      acc_f += sp.wq(c, q) * ddot(diff, diff);
    }
  e.e_F = std::sqrt(acc_f);

  const std::vector<double> shifts = face_shift_from_means(sp, cell_means(sp, Dv));
  e.e_jump = std::sqrt(modular_jump(sp, spec, shifts, s.v, &bdata));

  const double pp = spec.p / (spec.p - 1.0);
  double acc_q = 0.0;
  for (int c = 0; c < nc; ++c)
    for (int q = 0; q < nq; ++q) {
      const double d = std::abs(pressure_at(sp, s.q, c, q) - ms.pressure(sp.xq(c, q)));
      acc_q += sp.wq(c, q) * std::pow(d, pp);
    }
  e.e_q_norm = std::pow(acc_q, 1.0 / pp);

  auto shift_fn = [&](int c, int q) { return frob(ms.sym_grad(sp.xq(c, q))); };
  auto value_fn = [&](int c, int q) {
    return std::abs(pressure_at(sp, s.q, c, q) - ms.pressure(sp.xq(c, q)));
  };
  e.e_q_modular = std::sqrt(modular_domain(sp, spec, shift_fn, value_fn, true));

  return e;
}

// ============================================================================
// Convergence study
// ============================================================================

double eoc(double e_coarse, double e_fine, double h_coarse, double h_fine) {
  if (!(e_coarse > 0.0) || !(e_fine > 0.0) || !(h_coarse > 0.0) || !(h_fine > 0.0) ||
      h_coarse == h_fine)
    return std::numeric_limits<double>::quiet_NaN();
  return std::log(e_fine / e_coarse) / std::log(h_fine / h_coarse);
}

StudyResult run_study(const StudyOptions& opts) {
  if (opts.dim != 2)
    throw std::invalid_argument("convergence studies run on the unit square (dim 2)");
  if (opts.case_id != 1 && opts.case_id != 2)
    throw std::invalid_argument("case must be 1 or 2");
  if (opts.levels < 0 || opts.levels > 9) throw std::invalid_argument("levels must be in 0..9");
  if (!(opts.p > 1.0)) throw std::invalid_argument("p must exceed 1");

  StudyResult res;
  res.opts = opts;
  const double pp = opts.p / (opts.p - 1.0);
  res.theory_rate = opts.case_id == 1 ? 0.5 * pp : 1.0;

  const ManufacturedSolution2D ms = make_case(opts.case_id, opts.p, opts.delta, opts.mu0);
  SolverConfig cfg;
  cfg.p = opts.p;
  cfg.delta = opts.delta;
  cfg.mu0 = opts.mu0;
  cfg.alpha = opts.alpha;

  std::unique_ptr<DgSpace> prev, cur;
  DiscreteState state;
  for (int lvl = 0; lvl <= opts.levels; ++lvl) {
    cur = std::make_unique<DgSpace>(uniform_mesh(2, lvl));
    state = lvl == 0 ? zero_state(*cur) : prolong(*prev, *cur, state);

    PnsProblem pr;
    pr.sp = cur.get();
    pr.cfg = cfg;
    pr.forcing = [&ms](const Vec& x) { return ms.forcing(x); };
    pr.boundary = [&ms](const Vec& x) { return ms.velocity(x); };

    NewtonReport rep = newton_solve(pr, state);
    res.reports.push_back(rep);
    if (!rep.converged) {
      res.failed_level = lvl;
      break;
    }

    StudyRow row;
    row.level = lvl;
    row.h = cur->mesh.h_level();
    row.n_dof_v = cur->mesh.n_cells() * cur->mesh.dim * cur->nb();
    row.n_dof_q = cur->mesh.n_vertices();
    row.newton_iters = rep.iterations;
    row.err = error_quantities(*cur, cfg, ms, state);
    if (res.rows.empty()) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      row.eoc_F = row.eoc_jump = row.eoc_q_norm = row.eoc_q_modular = nan;
    } else {
      const StudyRow& c0 = res.rows.back();
      row.eoc_F = eoc(c0.err.e_F, row.err.e_F, c0.h, row.h);
      row.eoc_jump = eoc(c0.err.e_jump, row.err.e_jump, c0.h, row.h);
      row.eoc_q_norm = eoc(c0.err.e_q_norm, row.err.e_q_norm, c0.h, row.h);
      row.eoc_q_modular = eoc(c0.err.e_q_modular, row.err.e_q_modular, c0.h, row.h);
    }
    res.rows.push_back(row);
    prev = std::move(cur);
  }
  return res;
}

// ============================================================================
// Table writers
// ============================================================================

namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string fmt_eoc(double v) { return std::isnan(v) ? std::string() : fmt("%.4f", v); }

}  // namespace

void write_csv(const StudyResult& res, std::ostream& out) {
  out << "level,h,n_dof_v,n_dof_q,newton_iters,"
         "e_F,e_jump,e_q_norm,e_q_modular,eoc_F,eoc_jump,eoc_q_norm,eoc_q_modular\n";
  for (const StudyRow& r : res.rows) {
    char buf[320];
    std::snprintf(buf, sizeof buf, "%d,%.6g,%d,%d,%d,%.8e,%.8e,%.8e,%.8e", r.level, r.h,
                  r.n_dof_v, r.n_dof_q, r.newton_iters, r.err.e_F, r.err.e_jump, r.err.e_q_norm,
                  r.err.e_q_modular);
    out << buf << ',' << fmt_eoc(r.eoc_F) << ',' << fmt_eoc(r.eoc_jump) << ','
        << fmt_eoc(r.eoc_q_norm) << ',' << fmt_eoc(r.eoc_q_modular) << '\n';
  }
  if (res.failed_level >= 0)
    out << "# WARNING: newton did not converge at level " << res.failed_level
        << "; table truncated\n";
}

void write_markdown(const StudyResult& res, std::ostream& out) {
  out << "| level | h | n_dof_v | n_dof_q | iters | e_F | eoc | e_jump | eoc "
         "| e_q_norm | eoc | e_q_modular | eoc |\n";
  out << "|---|---|---|---|---|---|---|---|---|---|---|---|---|\n";
  for (const StudyRow& r : res.rows) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "| %d | %.6g | %d | %d | %d ", r.level, r.h, r.n_dof_v,
                  r.n_dof_q, r.newton_iters);
    out << buf << "| " << fmt("%.4e", r.err.e_F) << " | " << fmt_eoc(r.eoc_F) << " | "
        << fmt("%.4e", r.err.e_jump) << " | " << fmt_eoc(r.eoc_jump) << " | "
        << fmt("%.4e", r.err.e_q_norm) << " | " << fmt_eoc(r.eoc_q_norm) << " | "
        << fmt("%.4e", r.err.e_q_modular) << " | " << fmt_eoc(r.eoc_q_modular) << " |\n";
  }
  out << "\nexpected order of e_q_modular: " << fmt("%.4f", res.theory_rate) << "\n";
  if (res.failed_level >= 0)
    out << "\nWARNING: newton did not converge at level " << res.failed_level
        << "; table truncated\n";
}

// ============================================================================
// Corner-weight diagnostic
// ============================================================================

namespace {

// Weight mu(x) = (delta + |D v(x)|)^(p-2) of the full vortex chain; outside
// every ball the velocity vanishes and mu = delta^(p-2).
double chain_mu(const VortexChain3D& vc, const Vec& x) {
  const Vec e1(1.0, 0.0, 0.0);
  const double t = norm(x - e1);
  for (int k = 1; k < 54; ++k) {
    const double r = vc.radius(k);
    if (t > 4.0 * r) break;  // deeper balls sit strictly closer to the corner
    if (norm(x - vc.center(k)) <= r) return vc.mu(k, x);
  }
  return std::pow(vc.delta, vc.p - 2.0);
}

}  // namespace

std::vector<DiagRow> a2_diagnostic(double p, double delta, int max_level) {
  if (max_level < 1 || max_level > 8) throw std::invalid_argument("levels must be in 1..8");
  const VortexChain3D vc = make_vortex_chain(p, delta);
  const QuadRule rule = cell_rule(3);
  const int nq = rule.size();
  const double refmeas = 1.0 / 6.0;

  std::vector<DiagRow> rows;
  Mesh mesh = uniform_mesh(3, 0);
  for (int i = 1; i <= max_level; ++i) {
    mesh = red_refine(mesh);
    DiagRow row;
    row.level = i;
    row.ball = vc.ball_index(i);
    const Vec m = vc.center(row.ball);
    const double r = vc.radius(row.ball);

    double sum_mu = 0.0, sum_inv = 0.0;
    for (int c = 0; c < mesh.n_cells(); ++c) {
      const double vol = mesh.cell_volume(c);
      // Cheap reject: the cell cannot reach the ball if its centroid is far.
      if (norm(mesh.cell_centroid(c) - m) > r + mesh.cell_diameter(c)) continue;
      for (int q = 0; q < nq; ++q) {
        const auto& lam = rule.points[q];
        Vec x(0.0, 0.0, 0.0);
        for (int k = 0; k <= 3; ++k) x = x + mesh.cell_vertex(c, k) * lam[k];
        if (norm(x - m) > r) continue;
        const double w = rule.weights[q] * vol / refmeas;
        const double mu = chain_mu(vc, x);
        row.n_points += 1;
        row.W += w;
        sum_mu += w * mu;
        sum_inv += w / mu;
      }
    }
    if (row.n_points == 0) {
      row.resolved = false;
    } else {
      row.E = sum_mu * sum_inv;
      row.ratio = row.E / (row.W * row.W);
    }
    rows.push_back(row);
  }
  return rows;
}

void write_diag_csv(const std::vector<DiagRow>& rows, std::ostream& out) {
  out << "level,ball,n_points,W,E,E_over_W2,resolved\n";
  for (const DiagRow& r : rows) {
    char buf[200];
    std::snprintf(buf, sizeof buf, "%d,%d,%d,%.8e,%.8e,%.8e,%d\n", r.level, r.ball, r.n_points,
                  r.W, r.E, r.ratio, r.resolved ? 1 : 0);
    out << buf;
  }
}

void write_diag_markdown(const std::vector<DiagRow>& rows, std::ostream& out) {
  out << "| level | ball | n_points | W | E | E/W^2 | resolved |\n";
  out << "|---|---|---|---|---|---|---|\n";
  for (const DiagRow& r : rows) {
    char buf[200];
    std::snprintf(buf, sizeof buf, "| %d | %d | %d | %.6e | %.6e | %.6e | %s |\n", r.level,
                  r.ball, r.n_points, r.W, r.E, r.ratio, r.resolved ? "yes" : "no");
    out << buf;
  }
}

// ============================================================================
// Config file
// ============================================================================

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

void apply_config_file(StudyOptions& opts, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line " + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key == "p")
      opts.p = std::stod(val);
    else if (key == "case")
      opts.case_id = std::stoi(val);
    else if (key == "levels")
      opts.levels = std::stoi(val);
    else if (key == "alpha")
      opts.alpha = std::stod(val);
    else if (key == "delta")
      opts.delta = std::stod(val);
    else if (key == "mu0")
      opts.mu0 = std::stod(val);
    else if (key == "dim")
      opts.dim = std::stoi(val);
    else if (key == "output")
      opts.output = val;
    else if (key == "format")
      opts.format = val;
    else
      throw std::runtime_error("unknown config key: " + key);
  }
}

}  // namespace pnsdg
