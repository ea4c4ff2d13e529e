#include "pnsdg/dg.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace pnsdg {

DgSpace::DgSpace(Mesh m, int degree_) : mesh(std::move(m)), degree(degree_) {
  topo = build_faces(mesh);
  basis = make_basis(mesh.dim, degree);
  cell_q = cell_rule(mesh.dim);
  face_q = face_rule(mesh.dim - 1);

  const int d = mesh.dim;
  const int nbs = basis.size();
  const int nqs = cell_q.size();
  const double refmeas = (d == 2) ? 0.5 : 1.0 / 6.0;

  geom.resize(mesh.n_cells());
  for (int c = 0; c < mesh.n_cells(); ++c) geom[c] = compute_cell_geom(mesh, c);

  basis_c.resize(nqs * nbs);
  for (int q = 0; q < nqs; ++q)
    for (int i = 0; i < nbs; ++i) basis_c[q * nbs + i] = basis_value(basis, i, cell_q.points[q]);

  cell_w.resize(static_cast<size_t>(mesh.n_cells()) * nqs);
  cell_x.resize(static_cast<size_t>(mesh.n_cells()) * nqs);
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const double scale = geom[c].volume / refmeas;
    for (int q = 0; q < nqs; ++q) {
      cell_w[c * nqs + q] = cell_q.weights[q] * scale;
      Vec x(d);
      for (int k = 0; k <= d; ++k) x += cell_q.points[q][k] * mesh.cell_vertex(c, k);
      cell_x[c * nqs + q] = x;
    }
  }

  // Volume-normalized reference mass and its inverse.
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(nbs, nbs);
  for (int q = 0; q < nqs; ++q)
    for (int i = 0; i < nbs; ++i)
      for (int j = 0; j < nbs; ++j)
        A(i, j) += cell_q.weights[q] / refmeas * basis_c[q * nbs + i] * basis_c[q * nbs + j];
  const Eigen::MatrixXd Ainv = A.inverse();
  mass_inv.resize(nbs * nbs);
  for (int i = 0; i < nbs; ++i)
    for (int j = 0; j < nbs; ++j) mass_inv[i * nbs + j] = Ainv(i, j);

  // Face tables.
  const double ref_face = (d == 2) ? 1.0 : 0.5;
  fdata.resize(topo.faces.size());
  for (size_t f = 0; f < topo.faces.size(); ++f) {
    const Face& face = topo.faces[f];
    FaceData& fd = fdata[f];
    const int nfqs = face_q.size();
    fd.x.resize(nfqs);
    fd.w.resize(nfqs);
    for (int q = 0; q < nfqs; ++q) {
      Vec x(d);
      for (int k = 0; k < d; ++k) x += face_q.points[q][k] * mesh.vertices[face.verts[k]];
      fd.x[q] = x;
      fd.w[q] = face_q.weights[q] * face.measure / ref_face;
    }
    fd.bm.resize(nfqs * nbs);
    for (int q = 0; q < nfqs; ++q) {
      const auto lm = barycentric(geom[face.cell_minus], d, fd.x[q]);
      for (int i = 0; i < nbs; ++i) fd.bm[q * nbs + i] = basis_value(basis, i, lm);
    }
    if (!face.boundary) {
      fd.bp.resize(nfqs * nbs);
      for (int q = 0; q < nfqs; ++q) {
        const auto lp = barycentric(geom[face.cell_plus], d, fd.x[q]);
        for (int i = 0; i < nbs; ++i) fd.bp[q * nbs + i] = basis_value(basis, i, lp);
      }
    }
  }
}

void DgSpace::mass_solve(int c, double* rhs) const {
  const int n = nb();
  double tmp[20];
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += mass_inv[i * n + j] * rhs[j];
    tmp[i] = s / geom[c].volume;
  }
  for (int i = 0; i < n; ++i) rhs[i] = tmp[i];
}

BrokenField l2_project(const DgSpace& sp, int ncomp,
                       const std::function<void(const Vec&, double*)>& f) {
  BrokenField out(sp.mesh.n_cells(), sp.mesh.dim, sp.degree, ncomp);
  const int nbs = sp.nb(), nqs = sp.nq();
  std::vector<double> val(ncomp), rhs(static_cast<size_t>(ncomp) * nbs);
  for (int c = 0; c < sp.mesh.n_cells(); ++c) {
    std::fill(rhs.begin(), rhs.end(), 0.0);
    for (int q = 0; q < nqs; ++q) {
      f(sp.xq(c, q), val.data());
      const double w = sp.wq(c, q);
      for (int comp = 0; comp < ncomp; ++comp)
        for (int i = 0; i < nbs; ++i) rhs[comp * nbs + i] += w * val[comp] * sp.basis_c[q * nbs + i];
    }
    for (int comp = 0; comp < ncomp; ++comp) {
      sp.mass_solve(c, rhs.data() + comp * nbs);
      for (int i = 0; i < nbs; ++i) out.coef(c, comp, i) = rhs[comp * nbs + i];
    }
  }
  return out;
}

std::vector<Mat> cell_means(const DgSpace& sp, const BrokenField& X) {
  const int d = sp.mesh.dim;
  std::vector<Mat> means(sp.mesh.n_cells(), Mat(d));
  for (int c = 0; c < sp.mesh.n_cells(); ++c) {
    Mat m(d);
    for (int q = 0; q < sp.nq(); ++q) {
      const Mat v = X.eval_mat(c, sp.cell_q.points[q]);
      m += sp.wq(c, q) * v;
    }
    means[c] = (1.0 / sp.geom[c].volume) * m;
  }
  return means;
}

std::vector<double> face_shift_from_means(const DgSpace& sp, const std::vector<Mat>& means) {
  std::vector<double> shift(sp.topo.faces.size(), 0.0);
  for (size_t f = 0; f < sp.topo.faces.size(); ++f) {
    const Face& face = sp.topo.faces[f];
    if (face.boundary)
      shift[f] = frob(means[face.cell_minus]);
    else
      shift[f] = 0.5 * (frob(means[face.cell_minus]) + frob(means[face.cell_plus]));
  }
  return shift;
}

Mat jump_normal(const DgSpace& sp, const BrokenField& w, int f, int q, const VectorFn* bdata) {
  const Face& face = sp.topo.faces[f];
  const auto& fd = sp.fdata[f];
  const int nbs = sp.nb(), d = sp.mesh.dim;
  Vec wm(d);
  for (int i = 0; i < nbs; ++i) {
    const double b = fd.bm[q * nbs + i];
    for (int comp = 0; comp < d; ++comp) wm[comp] += w.coef(face.cell_minus, comp, i) * b;
  }
  Vec diff = wm;
  if (face.boundary) {
    if (bdata) diff -= (*bdata)(fd.x[q]);
  } else {
    Vec wp(d);
    for (int i = 0; i < nbs; ++i) {
      const double b = fd.bp[q * nbs + i];
      for (int comp = 0; comp < d; ++comp) wp[comp] += w.coef(face.cell_plus, comp, i) * b;
    }
    diff -= wp;
  }
  return outer(diff, face.normal);
}

Mat face_average(const DgSpace& sp, const BrokenField& X, int f, int q) {
  const Face& face = sp.topo.faces[f];
  const auto& fd = sp.fdata[f];
  const int d = sp.mesh.dim;
  const auto lm = barycentric(sp.geom[face.cell_minus], d, fd.x[q]);
  const Mat Xm = X.eval_mat(face.cell_minus, lm);
  if (face.boundary) return Xm;
  const auto lp = barycentric(sp.geom[face.cell_plus], d, fd.x[q]);
  return 0.5 * (Xm + X.eval_mat(face.cell_plus, lp));
}

BrokenField lifting(const DgSpace& sp, const BrokenField& w, const VectorFn* bdata) {
  const int d = sp.mesh.dim, nbs = sp.nb(), nfqs = sp.nfq();
  BrokenField R(sp.mesh.n_cells(), d, sp.degree, d * d);
  std::vector<double> rhs(nbs);
  std::vector<Mat> jumps(nfqs, Mat(d));
  for (size_t f = 0; f < sp.topo.faces.size(); ++f) {
    const Face& face = sp.topo.faces[f];
    const auto& fd = sp.fdata[f];
    for (int q = 0; q < nfqs; ++q) jumps[q] = jump_normal(sp, w, static_cast<int>(f), q, bdata);
    const double fac = face.boundary ? 1.0 : 0.5;
    const int sides = face.boundary ? 1 : 2;
    for (int s = 0; s < sides; ++s) {
      const int K = (s == 0) ? face.cell_minus : face.cell_plus;
      const std::vector<double>& tr = (s == 0) ? fd.bm : fd.bp;
      for (int ci = 0; ci < d; ++ci)
        for (int cj = 0; cj < d; ++cj) {
          std::fill(rhs.begin(), rhs.end(), 0.0);
          for (int q = 0; q < nfqs; ++q) {
            const double wj = fd.w[q] * fac * jumps[q](ci, cj);
            for (int i = 0; i < nbs; ++i) rhs[i] += wj * tr[q * nbs + i];
          }
          sp.mass_solve(K, rhs.data());
          for (int i = 0; i < nbs; ++i) R.coef(K, ci * d + cj, i) += rhs[i];
        }
    }
  }
  return R;
}

BrokenField dg_gradient(const DgSpace& sp, const BrokenField& w, const VectorFn* bdata) {
  const int d = sp.mesh.dim, nbs = sp.nb(), nqs = sp.nq();
  BrokenField G(sp.mesh.n_cells(), d, sp.degree, d * d);
  std::vector<double> rhs(nbs);
  for (int c = 0; c < sp.mesh.n_cells(); ++c) {
    for (int ci = 0; ci < d; ++ci)
      for (int cj = 0; cj < d; ++cj) {
        std::fill(rhs.begin(), rhs.end(), 0.0);
        for (int q = 0; q < nqs; ++q) {
          const Mat gw = w.grad_vec(c, sp.geom[c], sp.cell_q.points[q]);
          const double wv = sp.wq(c, q) * gw(ci, cj);
          for (int i = 0; i < nbs; ++i) rhs[i] += wv * sp.basis_c[q * nbs + i];
        }
        sp.mass_solve(c, rhs.data());
        for (int i = 0; i < nbs; ++i) G.coef(c, ci * d + cj, i) = rhs[i];
      }
  }
  const BrokenField R = lifting(sp, w, bdata);
  for (size_t i = 0; i < G.raw().size(); ++i) G.raw()[i] -= R.raw()[i];
  return G;
}

BrokenField dg_sym_gradient(const DgSpace& sp, const BrokenField& w, const VectorFn* bdata) {
  BrokenField G = dg_gradient(sp, w, bdata);
  const int d = sp.mesh.dim;
  for (int c = 0; c < G.n_cells(); ++c)
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j)
        for (int k = 0; k < G.nb(); ++k) {
          const double s = 0.5 * (G.coef(c, i * d + j, k) + G.coef(c, j * d + i, k));
          G.coef(c, i * d + j, k) = s;
          G.coef(c, j * d + i, k) = s;
        }
  return G;
}

BrokenField dg_divergence(const DgSpace& sp, const BrokenField& w, const VectorFn* bdata) {
  const BrokenField G = dg_gradient(sp, w, bdata);
  const int d = sp.mesh.dim;
  BrokenField div(sp.mesh.n_cells(), d, sp.degree, 1);
  for (int c = 0; c < div.n_cells(); ++c)
    for (int k = 0; k < div.nb(); ++k) {
      double s = 0.0;
      for (int i = 0; i < d; ++i) s += G.coef(c, i * d + i, k);
      div.coef(c, 0, k) = s;
    }
  return div;
}

DgNorms dg_norms(const DgSpace& sp, const BrokenField& w, double p, const VectorFn* bdata) {
  DgNorms out;
  double sg = 0.0, ss = 0.0;
  for (int c = 0; c < sp.mesh.n_cells(); ++c)
    for (int q = 0; q < sp.nq(); ++q) {
      const Mat g = w.grad_vec(c, sp.geom[c], sp.cell_q.points[q]);
      sg += sp.wq(c, q) * std::pow(frob(g), p);
      ss += sp.wq(c, q) * std::pow(frob(sym(g)), p);
    }
  double sj = 0.0;
  for (size_t f = 0; f < sp.topo.faces.size(); ++f) {
    const double hf = sp.topo.faces[f].diameter;
    for (int q = 0; q < sp.nfq(); ++q) {
      const Mat J = jump_normal(sp, w, static_cast<int>(f), q, bdata);
      sj += std::pow(hf, 1.0 - p) * sp.fdata[f].w[q] * std::pow(frob(J), p);
    }
  }
  out.grad_broken = std::pow(sg, 1.0 / p);
  out.sym_broken = std::pow(ss, 1.0 / p);
  out.jump = std::pow(sj, 1.0 / p);
  out.full_grad = out.grad_broken + out.jump;
  out.full_sym = out.sym_broken + out.jump;
  return out;
}

double modular_domain(const DgSpace& sp, const NFunctionSpec& spec,
                      const std::function<double(int, int)>& shift,
                      const std::function<double(int, int)>& value, bool conjugate) {
  double acc = 0.0;
  for (int c = 0; c < sp.mesh.n_cells(); ++c)
    for (int q = 0; q < sp.nq(); ++q) {
      const double a = shift ? shift(c, q) : 0.0;
      const double v = value(c, q);
      acc += sp.wq(c, q) * (conjugate ? conjugate_value(spec, a, v) : phi_value(spec, a, v));
    }
  return acc;
}

double modular_jump(const DgSpace& sp, const NFunctionSpec& spec,
                    const std::vector<double>& face_shift, const BrokenField& w,
                    const VectorFn* bdata) {
  double acc = 0.0;
  for (size_t f = 0; f < sp.topo.faces.size(); ++f) {
    const double hf = sp.topo.faces[f].diameter;
    const double a = face_shift.empty() ? 0.0 : face_shift[f];
    for (int q = 0; q < sp.nfq(); ++q) {
      const Mat J = jump_normal(sp, w, static_cast<int>(f), q, bdata);
      acc += hf * sp.fdata[f].w[q] * phi_value(spec, a, frob(J) / hf);
    }
  }
  return acc;
}

double modular_full(const DgSpace& sp, const NFunctionSpec& spec, double shift,
                    const BrokenField& w, const VectorFn* bdata) {
  double acc = 0.0;
  for (int c = 0; c < sp.mesh.n_cells(); ++c)
    for (int q = 0; q < sp.nq(); ++q) {
      const Mat g = w.grad_vec(c, sp.geom[c], sp.cell_q.points[q]);
      acc += sp.wq(c, q) * phi_value(spec, shift, frob(g));
    }
  return acc + modular_jump(sp, spec, std::vector<double>(sp.topo.faces.size(), shift), w, bdata);
}

}  // namespace pnsdg
