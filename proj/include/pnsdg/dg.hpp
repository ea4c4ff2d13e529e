#pragma once

// Discontinuous-Galerkin operator layer: jumps and averages across faces, the
// same-degree lifting of normal jumps, the lifted gradient / symmetric
// gradient / divergence, broken norms, and Orlicz modulars of volume and jump
// terms.
//
// Conventions.  For a face with adjacent cells (minus, plus) and unit normal n
// pointing out of the minus cell, the normal jump of a vector field w is
//   [[w (x) n]] = (w_minus - w_plus) (x) n          on interior faces,
//   [[w (x) n]] = (w_minus - v0) (x) n              on boundary faces,
// where v0 is optional Dirichlet data (zero data when absent).  The lifting
// R(w) is the degree-k tensor field with (R(w), X) = <[[w (x) n]], {X}> for
// all broken tensor fields X of the same degree, and the lifted gradient is
// G(w) = grad_h(w) - R(w).  Face-local diameters h_f replace the global mesh
// size in every jump weight.

#include <functional>

#include "pnsdg/field.hpp"
#include "pnsdg/orlicz.hpp"
#include "pnsdg/quadrature.hpp"

namespace pnsdg {

using VectorFn = std::function<Vec(const Vec&)>;

struct DgSpace {
  Mesh mesh;
  FaceTopology topo;
  int degree = 1;
  CellBasis basis;
  QuadRule cell_q, face_q;
  std::vector<CellGeom> geom;

  // Cell quadrature tables.
  std::vector<double> cell_w;   // [c*nq + q] physical weights (sum = |K|)
  std::vector<Vec> cell_x;      // [c*nq + q] physical points
  std::vector<double> basis_c;  // [q*nb + i] basis values at the reference points

  // Inverse of the volume-normalized reference mass matrix A_ij =
  // (1/refmeas) int b_i b_j; local L2 solves are coef = A^{-1} rhs / |K|.
  std::vector<double> mass_inv;

  struct FaceData {
    std::vector<Vec> x;       // physical quadrature points
    std::vector<double> w;    // physical weights, sum = face measure
    std::vector<double> bm;   // [q*nb + i] basis traces from cell_minus
    std::vector<double> bp;   // traces from cell_plus, empty on the boundary
  };
  std::vector<FaceData> fdata;

  explicit DgSpace(Mesh m, int degree_ = 1);

  int nb() const { return basis.size(); }
  int nq() const { return cell_q.size(); }
  int nfq() const { return face_q.size(); }
  const Vec& xq(int c, int q) const { return cell_x[c * nq() + q]; }
  double wq(int c, int q) const { return cell_w[c * nq() + q]; }

  // Solves |K| A coef = rhs in place (rhs has nb entries).
  void mass_solve(int c, double* rhs) const;
};

// L2 projection of a pointwise function with ncomp components onto the space.
BrokenField l2_project(const DgSpace& sp, int ncomp,
                       const std::function<void(const Vec&, double*)>& f);

// Cellwise means of a tensor field (the degree-0 projection), one Mat per cell.
std::vector<Mat> cell_means(const DgSpace& sp, const BrokenField& X);

// Face shift {|X|}: average across the face of per-cell constants.
std::vector<double> face_shift_from_means(const DgSpace& sp, const std::vector<Mat>& means);

// Normal jump tensor of a vector field at one face quadrature point.
Mat jump_normal(const DgSpace& sp, const BrokenField& w, int f, int q,
                const VectorFn* bdata = nullptr);

// Face average of a tensor field at one face quadrature point.
Mat face_average(const DgSpace& sp, const BrokenField& X, int f, int q);

// Lifting R(w) of the (data-shifted) normal jumps into the degree-k tensor space.
BrokenField lifting(const DgSpace& sp, const BrokenField& w, const VectorFn* bdata = nullptr);

// G(w) = grad_h(w) - R(w); the elementwise gradient embeds exactly since it
// has degree k-1.
BrokenField dg_gradient(const DgSpace& sp, const BrokenField& w, const VectorFn* bdata = nullptr);
BrokenField dg_sym_gradient(const DgSpace& sp, const BrokenField& w,
                            const VectorFn* bdata = nullptr);
// Scalar field tr G(w).
BrokenField dg_divergence(const DgSpace& sp, const BrokenField& w,
                          const VectorFn* bdata = nullptr);

struct DgNorms {
  double grad_broken = 0.0;  // || grad_h w ||_p
  double sym_broken = 0.0;   // || sym grad_h w ||_p
  double jump = 0.0;         // ( sum_f h_f^{1-p} int_f |[[w (x) n]]|^p )^{1/p}
  double full_grad = 0.0;    // grad_broken + jump
  double full_sym = 0.0;     // sym_broken + jump
};

DgNorms dg_norms(const DgSpace& sp, const BrokenField& w, double p,
                 const VectorFn* bdata = nullptr);

// rho_{psi_shift, Omega} of pointwise values: sum over cells and quadrature
// points of w_q * psi_{shift(c,q)}(value(c,q)); conjugate=true evaluates the
// convex conjugate (psi_shift)* instead.
double modular_domain(const DgSpace& sp, const NFunctionSpec& spec,
                      const std::function<double(int, int)>& shift,
                      const std::function<double(int, int)>& value, bool conjugate = false);

// m_{psi,h}(w) = sum_f h_f int_f psi_{a_f}(|h_f^{-1} [[w (x) n]]|) with
// per-face shifts a_f (empty vector = zero shifts).
double modular_jump(const DgSpace& sp, const NFunctionSpec& spec,
                    const std::vector<double>& face_shift, const BrokenField& w,
                    const VectorFn* bdata = nullptr);

// M_{psi,h}(w) = rho_psi(grad_h w) + m_{psi,h}(w) at a constant shift.
double modular_full(const DgSpace& sp, const NFunctionSpec& spec, double shift,
                    const BrokenField& w, const VectorFn* bdata = nullptr);

}  // namespace pnsdg
