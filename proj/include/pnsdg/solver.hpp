#pragma once

// Newton solver for the stabilized LDG discretization of the steady
// p-Navier-Stokes momentum/mass system.  The discrete problem reads:
// find broken P_k velocity v, conforming P1 pressure q and a scalar
// multiplier lam such that for all broken test functions z and all
// conforming P1 test functions chi
//
//   (S(D v), D0 z) - 1/2 (v (x) v, D0 z) - (q I, D0 z) + 1/2 ([G v] v, z)
//     + alpha sum_f <S_{a_f}(h_f^{-1} [[v]] (x) n), [[z]] (x) n>_f = (f, z),
//   (tr G v, chi) + lam (1, chi) = 0,
//   int_Omega q = 0,
//
// where G / D are the lifted (data-shifted) gradient and symmetric gradient
// of the trial state, G0 / D0 their homogeneous counterparts acting on test
// directions, and a_f = {|Pi0 D v|}_f are the face stabilization shifts.
// The Jacobian freezes a_f; everything else is differentiated exactly.

#include <Eigen/SparseCore>

#include <functional>
#include <vector>

#include "pnsdg/dg.hpp"

namespace pnsdg {

struct SolverConfig {
  double p = 2.5;
  double delta = 1e-5;
  double mu0 = 0.5;
  double alpha = 2.5;  // jump stabilization strength
  bool convective = true;
  int max_newton = 25;
  int max_backtrack = 30;
  double tol_abs = 1e-8;
  double tol_rel = 1e-10;  // relative to the initial residual norm

  NFunctionSpec nfun() const { return NFunctionSpec{p, delta, mu0}; }
};

// Velocity as a broken field, pressure as vertex values of a conforming P1
// function, lam the multiplier pinning the pressure mean.
struct DiscreteState {
  BrokenField v;
  std::vector<double> q;
  double lambda = 0.0;
};

DiscreteState zero_state(const DgSpace& sp);
DiscreteState interpolate_state(const DgSpace& sp, const VectorFn& vf,
                                const std::function<double(const Vec&)>& qf);

struct PnsProblem {
  const DgSpace* sp = nullptr;
  SolverConfig cfg;
  VectorFn forcing;   // volume force f(x)
  VectorFn boundary;  // Dirichlet data v0(x); empty = homogeneous
};

// Unknown layout: velocity coefficients, then one pressure dof per mesh
// vertex, then the multiplier.
int n_dof(const PnsProblem& pr);

// Stabilization shifts a_f = {|Pi0 D v|}_f at the given state.
std::vector<double> face_shifts(const PnsProblem& pr, const DiscreteState& s);

// Nonlinear residual.  Passing a frozen shift field bypasses the
// state-dependent stabilization shifts (finite-difference Jacobian checks).
std::vector<double> assemble_residual(const PnsProblem& pr, const DiscreteState& s,
                                      const std::vector<double>* frozen_shift = nullptr);

// Exact Jacobian of the residual at frozen stabilization shifts.
Eigen::SparseMatrix<double> assemble_jacobian(const PnsProblem& pr, const DiscreteState& s,
                                              const std::vector<double>& shift);

struct NewtonReport {
  int iterations = 0;
  bool converged = false;
  bool monotone = true;  // accepted residual norms strictly decrease
  int total_backtracks = 0;
  std::vector<double> residuals;  // norm history; residuals[0] = initial
};

// Damped Newton with residual-decrease backtracking; mutates the state.
NewtonReport newton_solve(const PnsProblem& pr, DiscreteState& s);

// Transfer to the once-red-refined mesh: velocity by evaluating the parent
// cell polynomial, pressure by evaluating at the fine vertices, lam copied.
DiscreteState prolong(const DgSpace& coarse, const DgSpace& fine, const DiscreteState& s);

}  // namespace pnsdg
