#pragma once

// Closed-form exact solutions used by the convergence studies and the
// quadrature-weight diagnostic.
//
// 2D: a corner vortex on the unit square,
//   v(x) = |x|^beta (x2, -x1),  q(x) = |x|^gamma - <|x|^gamma>_Omega,
// with forcing f = -div S(Dv) + [grad v] v + grad q so that (v, q) solves
// the momentum equation exactly; v is divergence free and vanishes at the
// corner x = 0.
//
// 3D: a chain of rotational micro-vortices supported in shrinking balls that
// accumulate at the corner e1 of the unit cube; each velocity is divergence
// free and Lipschitz, with |D v| growing along the chain.

#include <functional>

#include "pnsdg/orlicz.hpp"
#include "pnsdg/tensor.hpp"

namespace pnsdg {

struct ManufacturedSolution2D {
  NFunctionSpec spec;      // stress parameters entering the forcing
  bool convective = true;  // include [grad v] v in the forcing
  double beta = 1e-2;
  double gamma = 0.0;
  double q_mean = 0.0;  // <|x|^gamma> over the unit square

  Vec velocity(const Vec& x) const;
  Mat grad_v(const Vec& x) const;
  Mat sym_grad(const Vec& x) const;
  Mat dsym(const Vec& x, int m) const;  // d_m of the symmetric gradient
  double pressure(const Vec& x) const;
  Vec grad_q(const Vec& x) const;
  Vec forcing(const Vec& x) const;
};

// case_id selects the pressure exponent:
//   1: gamma = 1 - 2/p' + 1e-2   (pressure regularity limits the rate)
//   2: gamma = beta (p-2)/2 + 1e-2  (pressure as smooth as F(Dv))
ManufacturedSolution2D make_case(int case_id, double p, double delta, double mu0);

// int over the unit square of |x|^gamma (gamma > -2) by polar reduction and
// Gauss-Legendre quadrature; ~1e-13 accurate, cached per gamma.
double corner_mean(double gamma);

// 3D vortex chain.  Ball k has radius 2^{-k-2} and center on the segment
// from e1 towards the anchor (the volume quadrature point of the corner
// tetrahedron closest to e1); probe(i) = e1 + 2^{-i}(anchor - e1) lands in
// ball ball_index(i), and consecutive balls are tangent.
struct VortexChain3D {
  double p = 3.0;
  double delta = 1e-5;
  Vec anchor;
  double t0 = 0.0;  // |anchor - e1|

  double radius(int k) const;
  Vec center(int k) const;
  Vec probe(int i) const;
  int ball_index(int i) const;  // minimal k with probe(i) in the closed ball k

  // Velocity of vortex k: amplitude-(k/2r_k) rotation around the ball axis,
  // zero outside the ball.
  Vec velocity(int k, const Vec& x) const;
  Mat grad_v(int k, const Vec& x) const;
  // mu = (delta + |sym grad v^k|)^(p-2).
  double mu(int k, const Vec& x) const;
};

VortexChain3D make_vortex_chain(double p, double delta);

}  // namespace pnsdg
