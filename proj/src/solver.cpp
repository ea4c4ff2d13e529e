#include "pnsdg/solver.hpp"

#include <Eigen/SparseLU>

#include <cmath>
#include <stdexcept>

namespace pnsdg {

namespace {

// Fields of single velocity basis functions have lifted gradients of the
// form G0(e_i b) = e_i (x) g, where the vector field g depends only on the
// owning cell and the scalar basis index, and is supported on the owning
// cell and its face neighbors (the stencil).  All test-side operators are
// contractions against these g tables.
struct Stencil {
  std::vector<std::vector<int>> cells;  // [K] stencil cell ids, K first
  std::vector<std::vector<Vec>> g;      // [K][(b*nslot + slot)*nq + q]
  // For each cell s: the (K, slot) pairs with stencil(K)[slot] == s.
  std::vector<std::vector<std::array<int, 2>>> incident;
};

Stencil build_stencil(const DgSpace& sp) {
  const int d = sp.mesh.dim, nbs = sp.nb(), nqs = sp.nq(), nfqs = sp.nfq();
  const int nc = sp.mesh.n_cells();
  Stencil st;
  st.cells.resize(nc);
  st.g.resize(nc);
  st.incident.resize(nc);
  std::vector<double> rhs(nbs);
  for (int K = 0; K < nc; ++K) {
    std::vector<int>& cells = st.cells[K];
    cells.push_back(K);
    for (int fi : sp.topo.cell_faces[K]) {
      const Face& face = sp.topo.faces[fi];
      const int other = (face.cell_minus == K) ? face.cell_plus : face.cell_minus;
      if (other >= 0) cells.push_back(other);
    }
    const int nslot = static_cast<int>(cells.size());
    std::vector<Vec>& g = st.g[K];
    g.assign(static_cast<size_t>(nbs) * nslot * nqs, Vec(d));
    for (int b = 0; b < nbs; ++b)
      for (int q = 0; q < nqs; ++q)
        g[(b * nslot + 0) * nqs + q] = basis_gradient(sp.basis, sp.geom[K], b, sp.cell_q.points[q]);
    for (int fi : sp.topo.cell_faces[K]) {
      const Face& face = sp.topo.faces[fi];
      const auto& fd = sp.fdata[fi];
      const double sigma = (face.cell_minus == K) ? 1.0 : -1.0;
      const double fac = face.boundary ? 1.0 : 0.5;
      const std::vector<double>& trK = (face.cell_minus == K) ? fd.bm : fd.bp;
      const int sides = face.boundary ? 1 : 2;
      for (int s = 0; s < sides; ++s) {
        const int L = (s == 0) ? face.cell_minus : face.cell_plus;
        const std::vector<double>& trL = (s == 0) ? fd.bm : fd.bp;
        int slotL = -1;
        for (int sl = 0; sl < nslot; ++sl)
          if (cells[sl] == L) slotL = sl;
        for (int b = 0; b < nbs; ++b)
          for (int j = 0; j < d; ++j) {
            std::fill(rhs.begin(), rhs.end(), 0.0);
            for (int q = 0; q < nfqs; ++q) {
              const double wj = fd.w[q] * fac * sigma * trK[q * nbs + b] * face.normal[j];
              for (int n = 0; n < nbs; ++n) rhs[n] += wj * trL[q * nbs + n];
            }
            sp.mass_solve(L, rhs.data());
            for (int q = 0; q < nqs; ++q) {
              double val = 0.0;
              for (int n = 0; n < nbs; ++n) val += rhs[n] * sp.basis_c[q * nbs + n];
              g[(b * nslot + slotL) * nqs + q][j] -= val;
            }
          }
      }
    }
  }
  for (int K = 0; K < nc; ++K)
    for (int sl = 0; sl < static_cast<int>(st.cells[K].size()); ++sl)
      st.incident[st.cells[K][sl]].push_back({K, sl});
  return st;
}

struct StateTables {
  BrokenField Gv;
  std::vector<Mat> G;     // [c*nq + q] lifted gradient values
  std::vector<Vec> v;     // velocity values
  std::vector<double> q;  // pressure values
  std::vector<double> shifts;
};

StateTables state_tables(const PnsProblem& pr, const DiscreteState& s,
                         const std::vector<double>* frozen_shift) {
  const DgSpace& sp = *pr.sp;
  const VectorFn* bd = pr.boundary ? &pr.boundary : nullptr;
  const int nqs = sp.nq(), nc = sp.mesh.n_cells(), d = sp.mesh.dim;
  StateTables t;
  t.Gv = dg_gradient(sp, s.v, bd);
  t.G.resize(static_cast<size_t>(nc) * nqs);
  t.v.resize(static_cast<size_t>(nc) * nqs);
  t.q.resize(static_cast<size_t>(nc) * nqs);
  for (int c = 0; c < nc; ++c)
    for (int q = 0; q < nqs; ++q) {
      t.G[c * nqs + q] = t.Gv.eval_mat(c, sp.cell_q.points[q]);
      t.v[c * nqs + q] = s.v.eval_vec(c, sp.cell_q.points[q]);
      double qv = 0.0;
      for (int k = 0; k <= d; ++k) qv += s.q[sp.mesh.cells[c][k]] * sp.cell_q.points[q][k];
      t.q[c * nqs + q] = qv;
    }
  if (frozen_shift) {
    t.shifts = *frozen_shift;
  } else {
    BrokenField D = t.Gv;  // symmetrize coefficientwise
    for (int c = 0; c < nc; ++c)
      for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j)
          for (int k = 0; k < D.nb(); ++k) {
            const double sym_c = 0.5 * (D.coef(c, i * d + j, k) + D.coef(c, j * d + i, k));
            D.coef(c, i * d + j, k) = sym_c;
            D.coef(c, j * d + i, k) = sym_c;
          }
    t.shifts = face_shift_from_means(sp, cell_means(sp, D));
  }
  return t;
}

std::vector<double> residual_impl(const PnsProblem& pr, const DiscreteState& s,
                                  const Stencil& stc, const StateTables& t) {
  const DgSpace& sp = *pr.sp;
  const int d = sp.mesh.dim, nbs = sp.nb(), nqs = sp.nq(), nc = sp.mesh.n_cells();
  const int nv = nc * d * nbs, nvert = sp.mesh.n_vertices();
  const NFunctionSpec full = pr.cfg.nfun();
  const VectorFn* bd = pr.boundary ? &pr.boundary : nullptr;
  std::vector<double> R(nv + nvert + 1, 0.0);

  // Pointwise flux tensor T = S(D v) - 1/2 v (x) v - q I (all symmetric).
  std::vector<Mat> T(static_cast<size_t>(nc) * nqs);
  for (int c = 0; c < nc; ++c)
    for (int q = 0; q < nqs; ++q) {
      Mat Tm = stress(full, t.G[c * nqs + q]);
      if (pr.cfg.convective) Tm -= 0.5 * outer(t.v[c * nqs + q], t.v[c * nqs + q]);
      Tm -= identity(d, t.q[c * nqs + q]);
      T[c * nqs + q] = Tm;
    }

  // (T, D0 z) over the stencil of each test dof.
  for (int K = 0; K < nc; ++K) {
    const auto& cells = stc.cells[K];
    const int nslot = static_cast<int>(cells.size());
    for (int b = 0; b < nbs; ++b) {
      double acc[3] = {0.0, 0.0, 0.0};
      for (int sl = 0; sl < nslot; ++sl) {
        const int cs = cells[sl];
        for (int q = 0; q < nqs; ++q) {
          const double w = sp.wq(cs, q);
          const Vec& gv = stc.g[K][(b * nslot + sl) * nqs + q];
          const Mat& Tm = T[cs * nqs + q];
          for (int i = 0; i < d; ++i) {
            double dotv = 0.0;
            for (int j = 0; j < d; ++j) dotv += Tm(i, j) * gv[j];
            acc[i] += w * dotv;
          }
        }
      }
      for (int i = 0; i < d; ++i) R[(K * d + i) * nbs + b] += acc[i];
    }
  }

  // Local volume terms: -(f, z) and convective + 1/2 ([G v] v, z).
  for (int c = 0; c < nc; ++c)
    for (int q = 0; q < nqs; ++q) {
      const double w = sp.wq(c, q);
      const Vec f = pr.forcing(sp.xq(c, q));
      Vec conv(d);
      if (pr.cfg.convective) conv = apply(t.G[c * nqs + q], t.v[c * nqs + q]);
      for (int b = 0; b < nbs; ++b) {
        const double bb = sp.basis_c[q * nbs + b];
        for (int i = 0; i < d; ++i)
          R[(c * d + i) * nbs + b] += w * bb * (0.5 * conv[i] - f[i]);
      }
    }

  // Stabilization: alpha <S_a(h^{-1} [[v]] (x) n), [[z]] (x) n>.
  for (size_t f = 0; f < sp.topo.faces.size(); ++f) {
    const Face& face = sp.topo.faces[f];
    const auto& fd = sp.fdata[f];
    const double hf = face.diameter, a = t.shifts[f];
    for (int q = 0; q < sp.nfq(); ++q) {
      const Mat Jv = jump_normal(sp, s.v, static_cast<int>(f), q, bd);
      const Mat Sa = shifted_stress(full, a, (1.0 / hf) * Jv);
      const Vec Sn = apply(Sa, face.normal);
      const double w = fd.w[q];
      const int sides = face.boundary ? 1 : 2;
      for (int sd = 0; sd < sides; ++sd) {
        const int K = (sd == 0) ? face.cell_minus : face.cell_plus;
        const double sigma = (sd == 0) ? 1.0 : -1.0;
        const std::vector<double>& tr = (sd == 0) ? fd.bm : fd.bp;
        for (int b = 0; b < nbs; ++b) {
          const double c_tr = pr.cfg.alpha * w * sigma * tr[q * nbs + b];
          for (int i = 0; i < d; ++i) R[(K * d + i) * nbs + b] += c_tr * Sn[i];
        }
      }
    }
  }

  // Mass rows (tr G v, chi) + lam (1, chi), and the mean row int q.
  for (int c = 0; c < nc; ++c)
    for (int q = 0; q < nqs; ++q) {
      const double w = sp.wq(c, q);
      const double divv = trace(t.G[c * nqs + q]);
      for (int k = 0; k <= d; ++k) {
        const int m = sp.mesh.cells[c][k];
        const double wl = w * sp.cell_q.points[q][k];
        R[nv + m] += wl * divv + s.lambda * wl;
      }
      R[nv + nvert] += w * t.q[c * nqs + q];
    }
  return R;
}

Eigen::SparseMatrix<double> jacobian_impl(const PnsProblem& pr, const DiscreteState& s,
                                          const Stencil& stc, const StateTables& t) {
  const DgSpace& sp = *pr.sp;
  const int d = sp.mesh.dim, nbs = sp.nb(), nqs = sp.nq(), nc = sp.mesh.n_cells();
  const int nv = nc * d * nbs, nvert = sp.mesh.n_vertices();
  const int N = nv + nvert + 1;
  const NFunctionSpec full = pr.cfg.nfun();
  NFunctionSpec stab = full;
  stab.mu0 = 1.0;
  const VectorFn* bd = pr.boundary ? &pr.boundary : nullptr;
  auto vdof = [&](int c, int i, int b) { return (c * d + i) * nbs + b; };

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<size_t>(nc) * 900);

  // Stress block: (S'(D v)[D0 w], D0 z), assembled cell by cell over all
  // test/direction dofs whose stencil covers the cell.
  std::vector<int> rows;
  std::vector<Vec> gq;
  std::vector<double> local;
  for (int cs = 0; cs < nc; ++cs) {
    const auto& inc = stc.incident[cs];
    const int ninc = static_cast<int>(inc.size());
    const int nloc = ninc * nbs * d;
    rows.assign(nloc, 0);
    for (int e = 0; e < ninc; ++e)
      for (int b = 0; b < nbs; ++b)
        for (int i = 0; i < d; ++i)
          rows[(e * nbs + b) * d + i] = vdof(inc[e][0], i, b);
    local.assign(static_cast<size_t>(nloc) * nloc, 0.0);
    gq.assign(static_cast<size_t>(ninc) * nbs, Vec(d));
    for (int q = 0; q < nqs; ++q) {
      const double w = sp.wq(cs, q);
      const Tensor4 C = stress_derivative(full, 0.0, t.G[cs * nqs + q]);
      for (int e = 0; e < ninc; ++e) {
        const int K = inc[e][0], sl = inc[e][1];
        const int nslot = static_cast<int>(stc.cells[K].size());
        for (int b = 0; b < nbs; ++b) gq[e * nbs + b] = stc.g[K][(b * nslot + sl) * nqs + q];
      }
      for (int ec = 0; ec < ninc; ++ec)
        for (int bc = 0; bc < nbs; ++bc) {
          const Vec& gc = gq[ec * nbs + bc];
          for (int ic = 0; ic < d; ++ic) {
            Vec ei(d);
            ei[ic] = 1.0;
            const Mat W = C.contract(outer(ei, gc));
            const int col = (ec * nbs + bc) * d + ic;
            for (int er = 0; er < ninc; ++er)
              for (int br = 0; br < nbs; ++br) {
                const Vec& gr = gq[er * nbs + br];
                for (int ir = 0; ir < d; ++ir) {
                  double dotv = 0.0;
                  for (int j = 0; j < d; ++j) dotv += W(ir, j) * gr[j];
                  local[static_cast<size_t>((er * nbs + br) * d + ir) * nloc + col] += w * dotv;
                }
              }
          }
        }
    }
    for (int r = 0; r < nloc; ++r)
      for (int cI = 0; cI < nloc; ++cI) {
        const double val = local[static_cast<size_t>(r) * nloc + cI];
        if (val != 0.0) trip.emplace_back(rows[r], rows[cI], val);
      }
  }

  if (pr.cfg.convective) {
    // -1/2 ((w (x) v) + (v (x) w), D0 z): direction pointwise on its cell,
    // tests over the incident stencils; and +1/2 ([G0 w] v, z) over the
    // direction's stencil with local tests; and +1/2 ([G v] w, z) local.
    for (int cK = 0; cK < nc; ++cK) {
      const auto& inc = stc.incident[cK];
      for (int q = 0; q < nqs; ++q) {
        const double w = sp.wq(cK, q);
        const Vec& vv = t.v[cK * nqs + q];
        for (const auto& pr_inc : inc) {
          const int K = pr_inc[0], sl = pr_inc[1];
          const int nslot = static_cast<int>(stc.cells[K].size());
          for (int b = 0; b < nbs; ++b) {
            const Vec& gv = stc.g[K][(b * nslot + sl) * nqs + q];
            const double vg = dot(vv, gv);
            for (int bc = 0; bc < nbs; ++bc) {
              const double bb = sp.basis_c[q * nbs + bc];
              for (int ic = 0; ic < d; ++ic)
                for (int i = 0; i < d; ++i) {
                  const double val = (i == ic ? vg : 0.0) + vv[i] * gv[ic];
                  trip.emplace_back(vdof(K, i, b), vdof(cK, ic, bc), -0.5 * w * bb * val);
                }
            }
          }
        }
      }
      // +1/2 ([G0 w] v, z): direction dofs on cK, tests local on stencil cells.
      const auto& cells = stc.cells[cK];
      const int nslot = static_cast<int>(cells.size());
      for (int sl = 0; sl < nslot; ++sl) {
        const int cs = cells[sl];
        for (int q = 0; q < nqs; ++q) {
          const double w = sp.wq(cs, q);
          const Vec& vv = t.v[cs * nqs + q];
          for (int bc = 0; bc < nbs; ++bc) {
            const double gvv = dot(stc.g[cK][(bc * nslot + sl) * nqs + q], vv);
            for (int b = 0; b < nbs; ++b) {
              const double val = 0.5 * w * gvv * sp.basis_c[q * nbs + b];
              for (int i = 0; i < d; ++i)
                trip.emplace_back(vdof(cs, i, b), vdof(cK, i, bc), val);
            }
          }
        }
      }
      // +1/2 ([G v] w, z), both local on cK.
      for (int q = 0; q < nqs; ++q) {
        const double w = sp.wq(cK, q);
        const Mat& Gm = t.G[cK * nqs + q];
        for (int b = 0; b < nbs; ++b)
          for (int bc = 0; bc < nbs; ++bc) {
            const double bb = 0.5 * w * sp.basis_c[q * nbs + b] * sp.basis_c[q * nbs + bc];
            for (int i = 0; i < d; ++i)
              for (int ic = 0; ic < d; ++ic)
                trip.emplace_back(vdof(cK, i, b), vdof(cK, ic, bc), bb * Gm(i, ic));
          }
      }
    }
  }

  // Pressure coupling -(chi, tr D0 z) / +(tr G0 w, chi): one loop emits both
  // blocks so they are antisymmetric to the last bit.
  for (int cs = 0; cs < nc; ++cs) {
    const auto& inc = stc.incident[cs];
    for (int q = 0; q < nqs; ++q) {
      const double w = sp.wq(cs, q);
      for (const auto& pr_inc : inc) {
        const int K = pr_inc[0], sl = pr_inc[1];
        const int nslot = static_cast<int>(stc.cells[K].size());
        for (int b = 0; b < nbs; ++b) {
          const Vec& gv = stc.g[K][(b * nslot + sl) * nqs + q];
          for (int k = 0; k <= d; ++k) {
            const int m = sp.mesh.cells[cs][k];
            const double wl = w * sp.cell_q.points[q][k];
            for (int i = 0; i < d; ++i) {
              trip.emplace_back(vdof(K, i, b), nv + m, -wl * gv[i]);
              trip.emplace_back(nv + m, vdof(K, i, b), wl * gv[i]);
            }
          }
        }
      }
    }
  }

  // Stabilization block: alpha <S_a'(h^{-1}[[v]](x)n)[h^{-1}[[w]](x)n], [[z]](x)n>.
  for (size_t f = 0; f < sp.topo.faces.size(); ++f) {
    const Face& face = sp.topo.faces[f];
    const auto& fd = sp.fdata[f];
    const double hf = face.diameter, a = t.shifts[f];
    const int sides = face.boundary ? 1 : 2;
    for (int q = 0; q < sp.nfq(); ++q) {
      const Mat Jv = jump_normal(sp, s.v, static_cast<int>(f), q, bd);
      const Tensor4 C = stress_derivative(stab, a, (1.0 / hf) * Jv);
      Vec wn[3];
      for (int ic = 0; ic < d; ++ic) {
        Vec ei(d);
        ei[ic] = 1.0;
        wn[ic] = apply(C.contract(outer(ei, face.normal)), face.normal);
      }
      const double base = pr.cfg.alpha * fd.w[q] / hf;
      for (int sr = 0; sr < sides; ++sr) {
        const int K = (sr == 0) ? face.cell_minus : face.cell_plus;
        const double sigK = (sr == 0) ? 1.0 : -1.0;
        const std::vector<double>& trK = (sr == 0) ? fd.bm : fd.bp;
        for (int sc = 0; sc < sides; ++sc) {
          const int L = (sc == 0) ? face.cell_minus : face.cell_plus;
          const double sigL = (sc == 0) ? 1.0 : -1.0;
          const std::vector<double>& trL = (sc == 0) ? fd.bm : fd.bp;
          for (int b = 0; b < nbs; ++b)
            for (int bc = 0; bc < nbs; ++bc) {
              const double val0 = base * sigK * sigL * trK[q * nbs + b] * trL[q * nbs + bc];
              for (int i = 0; i < d; ++i)
                for (int ic = 0; ic < d; ++ic)
                  trip.emplace_back(vdof(K, i, b), vdof(L, ic, bc), val0 * wn[ic][i]);
            }
        }
      }
    }
  }

  // Multiplier couplings lam (1, chi) and int q.
  for (int c = 0; c < nc; ++c)
    for (int q = 0; q < nqs; ++q)
      for (int k = 0; k <= d; ++k) {
        const int m = sp.mesh.cells[c][k];
        const double wl = sp.wq(c, q) * sp.cell_q.points[q][k];
        trip.emplace_back(nv + m, nv + nvert, wl);
        trip.emplace_back(nv + nvert, nv + m, wl);
      }

  Eigen::SparseMatrix<double> J(N, N);
  J.setFromTriplets(trip.begin(), trip.end());
  return J;
}

double norm2(const std::vector<double>& r) {
  double s = 0.0;
  for (double x : r) s += x * x;
  return std::sqrt(s);
}

void axpy_state(DiscreteState& s, double a, const Eigen::VectorXd& dx) {
  const size_t nv = s.v.raw().size();
  for (size_t i = 0; i < nv; ++i) s.v.raw()[i] += a * dx[static_cast<Eigen::Index>(i)];
  for (size_t m = 0; m < s.q.size(); ++m) s.q[m] += a * dx[static_cast<Eigen::Index>(nv + m)];
  s.lambda += a * dx[static_cast<Eigen::Index>(nv + s.q.size())];
}

}  // namespace

DiscreteState zero_state(const DgSpace& sp) {
  DiscreteState s;
  s.v = BrokenField(sp.mesh.n_cells(), sp.mesh.dim, sp.degree, sp.mesh.dim);
  s.q.assign(sp.mesh.n_vertices(), 0.0);
  return s;
}

DiscreteState interpolate_state(const DgSpace& sp, const VectorFn& vf,
                                const std::function<double(const Vec&)>& qf) {
  DiscreteState s = zero_state(sp);
  const int d = sp.mesh.dim;
  for (int c = 0; c < sp.mesh.n_cells(); ++c)
    for (int k = 0; k <= d; ++k) {
      const Vec x = sp.mesh.cell_vertex(c, k);
      const Vec val = vf(x);
      for (int i = 0; i < d; ++i) s.v.coef(c, i, k) = val[i];
    }
  for (int m = 0; m < sp.mesh.n_vertices(); ++m) s.q[m] = qf(sp.mesh.vertices[m]);
  return s;
}

int n_dof(const PnsProblem& pr) {
  const DgSpace& sp = *pr.sp;
  return sp.mesh.n_cells() * sp.mesh.dim * sp.nb() + sp.mesh.n_vertices() + 1;
}

std::vector<double> face_shifts(const PnsProblem& pr, const DiscreteState& s) {
  return state_tables(pr, s, nullptr).shifts;
}

std::vector<double> assemble_residual(const PnsProblem& pr, const DiscreteState& s,
                                      const std::vector<double>* frozen_shift) {
  const Stencil stc = build_stencil(*pr.sp);
  const StateTables t = state_tables(pr, s, frozen_shift);
  return residual_impl(pr, s, stc, t);
}

Eigen::SparseMatrix<double> assemble_jacobian(const PnsProblem& pr, const DiscreteState& s,
                                              const std::vector<double>& shift) {
  const Stencil stc = build_stencil(*pr.sp);
  const StateTables t = state_tables(pr, s, &shift);
  return jacobian_impl(pr, s, stc, t);
}

NewtonReport newton_solve(const PnsProblem& pr, DiscreteState& s) {
  const Stencil stc = build_stencil(*pr.sp);
  NewtonReport rep;
  StateTables t = state_tables(pr, s, nullptr);
  std::vector<double> r = residual_impl(pr, s, stc, t);
  double rn = norm2(r);
  rep.residuals.push_back(rn);
  const double r0 = rn;
  if (rn <= pr.cfg.tol_abs) {
    rep.converged = true;
    return rep;
  }
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  for (int it = 1; it <= pr.cfg.max_newton; ++it) {
    Eigen::SparseMatrix<double> J = jacobian_impl(pr, s, stc, t);
    J.makeCompressed();
    lu.compute(J);
    if (lu.info() != Eigen::Success) throw std::runtime_error("sparse LU factorization failed");
    Eigen::VectorXd rhs(r.size());
    for (size_t i = 0; i < r.size(); ++i) rhs[static_cast<Eigen::Index>(i)] = -r[i];
    Eigen::VectorXd dx = lu.solve(rhs);
    // One step of iterative refinement keeps the linear residual near
    // machine precision even on stiff configurations.
    Eigen::VectorXd lin_res = rhs - J * dx;
    if (lin_res.norm() > 1e-12 * rhs.norm()) dx += lu.solve(lin_res);
    lin_res = rhs - J * dx;
    if (lin_res.norm() > 1e-8 * rhs.norm())
      throw std::runtime_error("linear solve lost accuracy");

    double step = 1.0;
    DiscreteState trial = s;
    std::vector<double> rt;
    double rtn = 0.0;
    StateTables tt;
    bool accepted = false;
    for (int bt = 0; bt <= pr.cfg.max_backtrack; ++bt) {
      trial = s;
      axpy_state(trial, step, dx);
      tt = state_tables(pr, trial, nullptr);
      rt = residual_impl(pr, trial, stc, tt);
      rtn = norm2(rt);
      if (rtn <= (1.0 - 1e-4 * step) * rn) {
        accepted = true;
        break;
      }
      step *= 0.5;
      ++rep.total_backtracks;
    }
    if (!accepted) rep.monotone = false;
    s = trial;
    t = std::move(tt);
    r = std::move(rt);
    if (rtn >= rn) rep.monotone = false;
    rn = rtn;
    rep.residuals.push_back(rn);
    rep.iterations = it;
    if (rn <= std::max(pr.cfg.tol_abs, pr.cfg.tol_rel * r0)) {
      rep.converged = true;
      break;
    }
  }
  return rep;
}

DiscreteState prolong(const DgSpace& coarse, const DgSpace& fine, const DiscreteState& s) {
  const int d = fine.mesh.dim;
  DiscreteState out = zero_state(fine);
  for (int c = 0; c < fine.mesh.n_cells(); ++c) {
    const int P = fine.mesh.parent[c];
    for (int k = 0; k <= d; ++k) {
      const Vec x = fine.mesh.cell_vertex(c, k);
      const auto l = barycentric(coarse.geom[P], d, x);
      const Vec val = s.v.eval_vec(P, l);
      for (int i = 0; i < d; ++i) out.v.coef(c, i, k) = val[i];
      double qv = 0.0;
      for (int kk = 0; kk <= d; ++kk) qv += s.q[coarse.mesh.cells[P][kk]] * l[kk];
      out.q[fine.mesh.cells[c][k]] = qv;
    }
  }
  out.lambda = s.lambda;
  return out;
}

}  // namespace pnsdg
