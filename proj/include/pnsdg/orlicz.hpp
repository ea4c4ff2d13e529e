#pragma once

// Constitutive kernels with (p, delta)-structure.
//
// The scalar family is the shifted N-function
//   phi_a'(t) = (delta + a + t)^(p-2) * t,   phi_a(t) = int_0^t phi_a'(s) ds,
// its convex conjugate (phi_a)*(u) = sup_{s>=0} (s u - phi_a(s)), and the
// induced tensor fields
//   stress          S(A)   = mu0 * (delta + |sym A|)^(p-2) * sym A
//   shifted_stress  S_a(A) =       (delta + a + |sym A|)^(p-2) * sym A
//   f_transform     F(A)   =       (delta + |sym A|)^((p-2)/2) * sym A
// together with the exact derivative of the stress with respect to A.

#include "pnsdg/tensor.hpp"

namespace pnsdg {

struct NFunctionSpec {
  double p = 2.0;      // growth exponent, p > 1
  double delta = 0.0;  // regularization shift, delta >= 0
  double mu0 = 1.0;    // viscosity scale; multiplies stress and stress_derivative only
};

// phi_a(t) for shift a >= 0 and t >= 0.  Exact closed form away from the
// small-argument regime, series expansion when t << delta + a (the closed
// form cancels catastrophically there).
double phi_value(const NFunctionSpec& spec, double shift, double t);

// phi_a'(t) = (delta + a + t)^(p-2) * t.
double phi_prime(const NFunctionSpec& spec, double shift, double t);

// (phi_a)*(u) via the monotone root of phi_a'(t*) = u, then
// (phi_a)*(u) = u t* - phi_a(t*).  Relative accuracy ~1e-12.
double conjugate_value(const NFunctionSpec& spec, double shift, double u);

// S(A) = mu0 (delta + |sym A|)^(p-2) sym A.
Mat stress(const NFunctionSpec& spec, const Mat& A);

// S_a(A) = (delta + a + |sym A|)^(p-2) sym A.  No mu0 factor.
Mat shifted_stress(const NFunctionSpec& spec, double shift, const Mat& A);

// F(A) = (delta + |sym A|)^((p-2)/2) sym A.  No mu0 factor.
Mat f_transform(const NFunctionSpec& spec, const Mat& A);

// d/dA [ mu0 S_a(A) ] as a rank-4 tensor:
//   mu0 [ (c + |A^s|)^(p-2) P_sym + (p-2)(c + |A^s|)^(p-3) (A^s x A^s)/|A^s| ]
// with c = delta + shift and P_sym the symmetrizer.  At A^s = 0 the rank-one
// part vanishes for p >= 2; for p < 2 with c = 0 the derivative is singular.
Tensor4 stress_derivative(const NFunctionSpec& spec, double shift, const Mat& A);

}  // namespace pnsdg
