// Command-line driver: manufactured-solution convergence studies, the 3D
// corner-weight quadrature diagnostic, and a fast self-check suite.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>

#include "pnsdg/study.hpp"

using namespace pnsdg;

namespace {

// ============================================================================
// verify: fast property checks, one PASS/FAIL line per property
// ============================================================================

int report(const char* name, bool ok, double measured, double bound) {
  std::printf("%s %-28s max %.3e (bound %.1e)\n", ok ? "PASS" : "FAIL", name, measured, bound);
  return ok ? 0 : 1;
}

int check_quadrature() {
  double worst = 0.0;
  for (int dim : {2, 3}) worst = std::max(worst, verify_exactness(cell_rule(dim), 6).max_rel_error);
  for (int fd : {1, 2}) worst = std::max(worst, verify_exactness(face_rule(fd), 6).max_rel_error);
  return report("quadrature exactness", worst <= 1e-13, worst, 1e-13);
}

int check_conjugate_duality() {
  // Legendre identity (phi_a)*(phi_a'(t)) = t phi_a'(t) - phi_a(t).
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> ua(0.0, 10.0), ut(1e-6, 50.0);
  double worst = 0.0;
  for (double p : {2.25, 2.75, 3.25}) {
    NFunctionSpec spec{p, 1e-5, 1.0};
    for (int i = 0; i < 1000; ++i) {
      const double a = ua(rng), t = ut(rng);
      const double u = phi_prime(spec, a, t);
      const double lhs = conjugate_value(spec, a, u);
      const double rhs = t * u - phi_value(spec, a, t);
      worst = std::max(worst, std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-300));
    }
  }
  return report("conjugate duality", worst <= 1e-10, worst, 1e-10);
}

BrokenField random_field(const DgSpace& sp, int ncomp, unsigned seed) {
  BrokenField w(sp.mesh.n_cells(), sp.mesh.dim, sp.degree, ncomp);
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int c = 0; c < sp.mesh.n_cells(); ++c)
    for (int comp = 0; comp < ncomp; ++comp)
      for (int i = 0; i < sp.nb(); ++i) w.coef(c, comp, i) = u(rng);
  return w;
}

int check_lifting_adjointness() {
  double worst = 0.0;
  for (int dim : {2, 3}) {
    DgSpace sp(uniform_mesh(dim, 1));
    const int d2 = dim * dim;
    const BrokenField w = random_field(sp, dim, 11);
    const BrokenField X = random_field(sp, d2, 13);
    const BrokenField R = lifting(sp, w);

    double lhs = 0.0;
    for (int c = 0; c < sp.mesh.n_cells(); ++c)
      for (int q = 0; q < sp.nq(); ++q) {
        const auto& lam = sp.cell_q.points[q];
        lhs += sp.wq(c, q) * ddot(R.eval_mat(c, lam), X.eval_mat(c, lam));
      }
    double rhs = 0.0;
    for (int f = 0; f < static_cast<int>(sp.topo.faces.size()); ++f)
      for (int q = 0; q < sp.nfq(); ++q)
        rhs += sp.fdata[f].w[q] * ddot(jump_normal(sp, w, f, q), face_average(sp, X, f, q));
    worst = std::max(worst, std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-30));
  }
  return report("lifting adjointness", worst <= 1e-11, worst, 1e-11);
}

int check_conforming_reduction() {
  // On a conforming piecewise-linear field with zero trace the lifting
  // vanishes, the lifted gradient equals the broken gradient, and the jump
  // modular is zero.
  DgSpace sp(uniform_mesh(2, 2));
  const Mesh& mesh = sp.mesh;
  std::vector<char> interior(mesh.n_vertices(), 1);
  for (const Face& f : sp.topo.faces)
    if (f.boundary)
      for (int vid : f.verts)
        if (vid >= 0) interior[vid] = 0;

  BrokenField w(mesh.n_cells(), 2, 1, 2);
  for (int c = 0; c < mesh.n_cells(); ++c)
    for (int k = 0; k < 3; ++k) {
      const int vid = mesh.cells[c][k];
      if (!interior[vid]) continue;
      const Vec v = mesh.vertices[vid];
      w.coef(c, 0, k) = std::sin(3.0 * v[0]) + v[1];
      w.coef(c, 1, k) = v[0] * v[1] + 0.25;
    }

  const BrokenField R = lifting(sp, w);
  const BrokenField G = dg_gradient(sp, w);
  double worst = 0.0;
  for (int c = 0; c < mesh.n_cells(); ++c)
    for (int q = 0; q < sp.nq(); ++q) {
      const auto& lam = sp.cell_q.points[q];
      worst = std::max(worst, frob(R.eval_mat(c, lam)));
      const Mat diff = G.eval_mat(c, lam) - w.grad_vec(c, sp.geom[c], lam);
      worst = std::max(worst, frob(diff));
    }
  const NFunctionSpec spec{2.5, 1e-5, 1.0};
  worst = std::max(worst, modular_jump(sp, spec, {}, w));
  return report("conforming reduction", worst <= 1e-12, worst, 1e-12);
}

int check_manufactured_forcing() {
  // f = -div S(D v) + [grad v] v + grad q, tested against central differences
  // of the stress and pressure away from the corner.
  const double h = 1e-6;
  double worst = 0.0;
  for (int case_id : {1, 2}) {
    const ManufacturedSolution2D ms = make_case(case_id, 2.5, 1e-5, 0.5);
    const NFunctionSpec spec{2.5, 1e-5, 0.5};
    for (const Vec& x : {Vec(0.31, 0.47), Vec(0.72, 0.11), Vec(0.15, 0.88)}) {
      Vec f_fd(2);
      for (int j = 0; j < 2; ++j) {
        Vec xp = x, xm = x;
        xp[j] += h;
        xm[j] -= h;
        const Mat ds = stress(spec, ms.sym_grad(xp)) - stress(spec, ms.sym_grad(xm));
        for (int i = 0; i < 2; ++i) f_fd[i] -= ds(i, j) / (2.0 * h);
        f_fd[j] += (ms.pressure(xp) - ms.pressure(xm)) / (2.0 * h);
      }
      const Vec conv = apply(ms.grad_v(x), ms.velocity(x));
      const Vec diff = ms.forcing(x) - (f_fd + conv);
      worst = std::max(worst, norm(diff) / std::max(norm(ms.forcing(x)), 1e-30));
    }
  }
  return report("manufactured forcing", worst <= 1e-4, worst, 1e-4);
}

int check_vortex_divergence() {
  const VortexChain3D vc = make_vortex_chain(3.0, 1e-5);
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double h = 1e-7;  // truncation error grows like h^2 / r_k near centers
  double worst = 0.0;
  for (int k : {3, 4, 5}) {
    const double r = vc.radius(k);
    const Vec m = vc.center(k);
    for (int s = 0; s < 60; ++s) {
      Vec y(u(rng), u(rng), u(rng));
      const double n = norm(y);
      if (n < 1e-12) continue;
      const Vec x = m + y * (0.9 * r / n);
      double div = 0.0;
      for (int j = 0; j < 3; ++j) {
        Vec xp = x, xm = x;
        xp[j] += h;
        xm[j] -= h;
        div += (vc.velocity(k, xp)[j] - vc.velocity(k, xm)[j]) / (2.0 * h);
      }
      worst = std::max(worst, std::abs(div));
    }
  }
  return report("vortex chain divergence", worst <= 1e-8, worst, 1e-8);
}

int run_verify() {
  int fails = 0;
  fails += check_quadrature();
  fails += check_conjugate_duality();
  fails += check_lifting_adjointness();
  fails += check_conforming_reduction();
  fails += check_manufactured_forcing();
  fails += check_vortex_divergence();
  std::printf("%s: %d checks failed\n", fails == 0 ? "OK" : "FAILURE", fails);
  return fails;
}

// ============================================================================
// option plumbing
// ============================================================================

struct Flags {
  double p = 2.5, alpha = 2.5, delta = 1e-5, mu0 = 0.5;
  int case_id = 2, levels = 5, dim = 2;
  std::string output, format = "csv", config;

  CLI::Option *o_p = nullptr, *o_alpha = nullptr, *o_delta = nullptr, *o_mu0 = nullptr;
  CLI::Option *o_case = nullptr, *o_levels = nullptr, *o_dim = nullptr;
  CLI::Option *o_output = nullptr, *o_format = nullptr, *o_config = nullptr;

  void add_to(CLI::App* sub) {
    o_p = sub->add_option("--p", p, "growth exponent p > 1");
    o_case = sub->add_option("--case", case_id, "pressure case (1 or 2)")->check(CLI::Range(1, 2));
    o_levels = sub->add_option("--levels", levels, "finest refinement level");
    o_alpha = sub->add_option("--alpha", alpha, "jump stabilization strength");
    o_delta = sub->add_option("--delta", delta, "regularization shift delta >= 0");
    o_mu0 = sub->add_option("--mu0", mu0, "viscosity scale");
    o_dim = sub->add_option("--dim", dim, "space dimension")->check(CLI::Range(2, 3));
    o_output = sub->add_option("--output", output, "output path (default stdout)");
    o_format = sub->add_option("--format", format, "table format")
                   ->check(CLI::IsMember({"csv", "md"}));
    o_config = sub->add_option("--config", config, "key=value config file; flags take precedence");
  }

  // Defaults, then the config file, then explicitly passed flags.
  StudyOptions resolve(int default_dim, int default_levels) const {
    StudyOptions opts;
    opts.dim = default_dim;
    opts.levels = default_levels;
    if (o_config->count()) apply_config_file(opts, config);
    if (o_p->count()) opts.p = p;
    if (o_case->count()) opts.case_id = case_id;
    if (o_levels->count()) opts.levels = levels;
    if (o_alpha->count()) opts.alpha = alpha;
    if (o_delta->count()) opts.delta = delta;
    if (o_mu0->count()) opts.mu0 = mu0;
    if (o_dim->count()) opts.dim = dim;
    if (o_output->count()) opts.output = output;
    if (o_format->count()) opts.format = format;
    return opts;
  }
};

// Writes through fn to opts.output or stdout.
template <class Fn>
int with_output(const StudyOptions& opts, Fn&& fn) {
  if (opts.output.empty()) {
    fn(std::cout);
    return 0;
  }
  std::ofstream out(opts.output);
  if (!out) {
    std::cerr << "error: cannot open output file: " << opts.output << "\n";
    return 1;
  }
  fn(out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stabilized LDG solver for the steady p-Navier-Stokes system"};
  app.require_subcommand(1);

  Flags conv_flags, diag_flags;
  CLI::App* conv = app.add_subcommand(
      "convergence", "manufactured-solution convergence study on the unit square");
  conv_flags.add_to(conv);
  CLI::App* diag = app.add_subcommand(
      "diagnostic-a2", "corner-weight quadrature diagnostic on the 3D vortex chain");
  diag_flags.add_to(diag);
  CLI::App* verify = app.add_subcommand("verify", "run the fast property checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (verify->parsed()) return run_verify();

    if (conv->parsed()) {
      const StudyOptions opts = conv_flags.resolve(2, 5);
      if (opts.dim != 2) {
        std::cerr << "error: convergence studies run on the unit square; use --dim 2\n";
        return 1;
      }
      const StudyResult res = run_study(opts);
      const int wrc = with_output(opts, [&](std::ostream& out) {
        opts.format == "md" ? write_markdown(res, out) : write_csv(res, out);
      });
      if (wrc != 0) return wrc;
      if (res.failed_level >= 0) {
        std::cerr << "warning: newton did not converge at level " << res.failed_level
                  << "; table truncated\n";
        return 2;
      }
      return 0;
    }

    // diagnostic-a2
    const StudyOptions opts = diag_flags.resolve(3, 4);
    if (opts.dim != 3) {
      std::cerr << "error: the corner diagnostic lives on the unit cube; use --dim 3\n";
      return 1;
    }
    const auto rows = a2_diagnostic(opts.p, opts.delta, opts.levels);
    const int wrc = with_output(opts, [&](std::ostream& out) {
      opts.format == "md" ? write_diag_markdown(rows, out) : write_diag_csv(rows, out);
    });
    if (wrc != 0) return wrc;
    for (const DiagRow& r : rows)
      if (!r.resolved)
        std::cerr << "note: level " << r.level << " ball " << r.ball
                  << " contains no quadrature points (not resolved)\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
