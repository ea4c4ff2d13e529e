#include "pnsdg/field.hpp"

#include <cmath>
#include <stdexcept>

namespace pnsdg {

CellBasis make_basis(int dim, int degree) {
  if (degree < 0) throw std::invalid_argument("make_basis: degree must be >= 0");
  CellBasis b;
  b.dim = dim;
  b.degree = degree;
  // Enumerate all (a_0..a_dim) with sum = degree, lexicographically.
  std::array<int, 4> a{0, 0, 0, 0};
  const int n = dim + 1;
  auto rec = [&](auto&& self, int pos, int left) -> void {
    if (pos == n - 1) {
      a[pos] = left;
      b.exps.push_back(a);
      return;
    }
    for (int k = left; k >= 0; --k) {
      a[pos] = k;
      self(self, pos + 1, left - k);
    }
  };
  rec(rec, 0, degree);
  return b;
}

double basis_value(const CellBasis& basis, int i, const std::array<double, 4>& lambda) {
  const auto& e = basis.exps[i];
  double v = 1.0;
  for (int k = 0; k <= basis.dim; ++k)
    for (int r = 0; r < e[k]; ++r) v *= lambda[k];
  return v;
}

CellGeom compute_cell_geom(const Mesh& mesh, int c) {
  CellGeom g;
  g.volume = mesh.cell_volume(c);
  const int d = mesh.dim;
  // Solve for the affine barycentric maps: lambda_i(P_j) = delta_ij.
  // With edge matrix E = [P_1-P_0 ... P_d-P_0], grad lambda_i (i>=1) are the
  // rows of E^{-1}, and grad lambda_0 = -sum.
  const Vec p0 = mesh.cell_vertex(c, 0);
  double E[3][3] = {};
  for (int j = 0; j < d; ++j) {
    const Vec e = mesh.cell_vertex(c, j + 1) - p0;
    for (int i = 0; i < d; ++i) E[i][j] = e[i];
  }
  double inv[3][3] = {};
  if (d == 2) {
    const double det = E[0][0] * E[1][1] - E[0][1] * E[1][0];
    inv[0][0] = E[1][1] / det;
    inv[0][1] = -E[0][1] / det;
    inv[1][0] = -E[1][0] / det;
    inv[1][1] = E[0][0] / det;
  } else {
    const double det = E[0][0] * (E[1][1] * E[2][2] - E[1][2] * E[2][1]) -
                       E[0][1] * (E[1][0] * E[2][2] - E[1][2] * E[2][0]) +
                       E[0][2] * (E[1][0] * E[2][1] - E[1][1] * E[2][0]);
    inv[0][0] = (E[1][1] * E[2][2] - E[1][2] * E[2][1]) / det;
    inv[0][1] = (E[0][2] * E[2][1] - E[0][1] * E[2][2]) / det;
    inv[0][2] = (E[0][1] * E[1][2] - E[0][2] * E[1][1]) / det;
    inv[1][0] = (E[1][2] * E[2][0] - E[1][0] * E[2][2]) / det;
    inv[1][1] = (E[0][0] * E[2][2] - E[0][2] * E[2][0]) / det;
    inv[1][2] = (E[0][2] * E[1][0] - E[0][0] * E[1][2]) / det;
    inv[2][0] = (E[1][0] * E[2][1] - E[1][1] * E[2][0]) / det;
    inv[2][1] = (E[0][1] * E[2][0] - E[0][0] * E[2][1]) / det;
    inv[2][2] = (E[0][0] * E[1][1] - E[0][1] * E[1][0]) / det;
  }
  Vec sum(d);
  for (int i = 1; i <= d; ++i) {
    Vec gl(d);
    for (int j = 0; j < d; ++j) gl[j] = inv[i - 1][j];
    g.grad_l[i] = gl;
    sum += gl;
  }
  g.grad_l[0] = -1.0 * sum;
  for (int i = 0; i <= d; ++i) g.off_l[i] = (i == 0 ? 1.0 : 0.0) - dot(g.grad_l[i], p0);
  return g;
}

std::array<double, 4> barycentric(const CellGeom& g, int dim, const Vec& x) {
  std::array<double, 4> l{0.0, 0.0, 0.0, 0.0};
  for (int i = 0; i <= dim; ++i) l[i] = g.off_l[i] + dot(g.grad_l[i], x);
  return l;
}

Vec basis_gradient(const CellBasis& basis, const CellGeom& g, int i,
                   const std::array<double, 4>& lambda) {
  const auto& e = basis.exps[i];
  Vec grad(basis.dim);
  for (int j = 0; j <= basis.dim; ++j) {
    if (e[j] == 0) continue;
    double t = static_cast<double>(e[j]);
    for (int k = 0; k <= basis.dim; ++k) {
      const int pw = e[k] - (k == j ? 1 : 0);
      for (int r = 0; r < pw; ++r) t *= lambda[k];
    }
    grad += t * g.grad_l[j];
  }
  return grad;
}

BrokenField::BrokenField(int n_cells, int dim, int degree, int ncomp)
    : n_cells_(n_cells), dim_(dim), degree_(degree), ncomp_(ncomp) {
  basis_ = make_basis(dim, degree);
  nb_ = basis_.size();
  data_.assign(static_cast<size_t>(n_cells_) * ncomp_ * nb_, 0.0);
}

double BrokenField::eval_scalar(int c, const std::array<double, 4>& lambda, int comp) const {
  double v = 0.0;
  for (int i = 0; i < nb_; ++i) v += coef(c, comp, i) * basis_value(basis_, i, lambda);
  return v;
}

Vec BrokenField::eval_vec(int c, const std::array<double, 4>& lambda) const {
  Vec v(dim_);
  for (int i = 0; i < nb_; ++i) {
    const double b = basis_value(basis_, i, lambda);
    for (int comp = 0; comp < dim_; ++comp) v[comp] += coef(c, comp, i) * b;
  }
  return v;
}

Mat BrokenField::eval_mat(int c, const std::array<double, 4>& lambda) const {
  Mat m(dim_);
  for (int i = 0; i < nb_; ++i) {
    const double b = basis_value(basis_, i, lambda);
    for (int r = 0; r < dim_; ++r)
      for (int s = 0; s < dim_; ++s) m(r, s) += coef(c, r * dim_ + s, i) * b;
  }
  return m;
}

Vec BrokenField::grad_scalar(int c, const CellGeom& g, const std::array<double, 4>& lambda,
                             int comp) const {
  Vec grad(dim_);
  for (int i = 0; i < nb_; ++i) {
    const Vec gb = basis_gradient(basis_, g, i, lambda);
    grad += coef(c, comp, i) * gb;
  }
  return grad;
}

Mat BrokenField::grad_vec(int c, const CellGeom& g, const std::array<double, 4>& lambda) const {
  Mat m(dim_);
  for (int i = 0; i < nb_; ++i) {
    const Vec gb = basis_gradient(basis_, g, i, lambda);
    for (int r = 0; r < dim_; ++r)
      for (int s = 0; s < dim_; ++s) m(r, s) += coef(c, r, i) * gb[s];
  }
  return m;
}

}  // namespace pnsdg
