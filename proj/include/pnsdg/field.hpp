#pragma once

// Broken (discontinuous piecewise-polynomial) fields on a simplicial mesh.
//
// The local basis consists of the barycentric monomials lambda^alpha with
// |alpha| = k; they span P_k on a simplex, and for k = 1 they are exactly the
// barycentric-Lagrange (vertex hat) functions.

#include <array>
#include <vector>

#include "pnsdg/mesh.hpp"

namespace pnsdg {

struct CellBasis {
  int dim = 2;
  int degree = 1;
  std::vector<std::array<int, 4>> exps;  // exponents of lambda_0..lambda_dim

  int size() const { return static_cast<int>(exps.size()); }
};

CellBasis make_basis(int dim, int degree);

double basis_value(const CellBasis& basis, int i, const std::array<double, 4>& lambda);

// Affine data of one cell: barycentric coordinates as affine functions of the
// physical point, lambda_i(x) = off_l[i] + grad_l[i] . x.
struct CellGeom {
  double volume = 0.0;
  std::array<Vec, 4> grad_l;
  std::array<double, 4> off_l;
};

CellGeom compute_cell_geom(const Mesh& mesh, int c);

std::array<double, 4> barycentric(const CellGeom& g, int dim, const Vec& x);

// Gradient of the i-th basis function at the given barycentric point.
Vec basis_gradient(const CellBasis& basis, const CellGeom& g, int i,
                   const std::array<double, 4>& lambda);

// Coefficients of a piecewise-polynomial field with ncomp components
// (1 scalar, dim vector, dim*dim row-major tensor), no continuity.
class BrokenField {
 public:
  BrokenField() = default;
  BrokenField(int n_cells, int dim, int degree, int ncomp);

  int n_cells() const { return n_cells_; }
  int dim() const { return dim_; }
  int degree() const { return degree_; }
  int ncomp() const { return ncomp_; }
  int nb() const { return basis_.size(); }
  const CellBasis& basis() const { return basis_; }

  double& coef(int c, int comp, int i) { return data_[(c * ncomp_ + comp) * nb_ + i]; }
  double coef(int c, int comp, int i) const { return data_[(c * ncomp_ + comp) * nb_ + i]; }

  double eval_scalar(int c, const std::array<double, 4>& lambda, int comp = 0) const;
  Vec eval_vec(int c, const std::array<double, 4>& lambda) const;
  Mat eval_mat(int c, const std::array<double, 4>& lambda) const;

  // Elementwise gradient of one component.
  Vec grad_scalar(int c, const CellGeom& g, const std::array<double, 4>& lambda, int comp) const;
  // (grad w)_{ij} = d_j w_i for a vector field.
  Mat grad_vec(int c, const CellGeom& g, const std::array<double, 4>& lambda) const;

  std::vector<double>& raw() { return data_; }
  const std::vector<double>& raw() const { return data_; }

 private:
  int n_cells_ = 0, dim_ = 2, degree_ = 1, ncomp_ = 1, nb_ = 0;
  CellBasis basis_;
  std::vector<double> data_;
};

}  // namespace pnsdg
