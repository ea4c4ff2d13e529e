#pragma once

// Fixed quadrature rules on reference simplices, stored in barycentric
// coordinates with weights summing to the reference measure (1, 1/2, 1/6 for
// dim 1, 2, 3).  Cell rules are exact to polynomial degree 6; the 1D face
// rule (4-point Gauss-Legendre) is exact to degree 7.

#include <array>
#include <vector>

namespace pnsdg {

struct QuadRule {
  int dim = 0;     // simplex dimension
  int degree = 0;  // guaranteed exactness
  std::vector<std::array<double, 4>> points;  // barycentric, dim+1 entries used
  std::vector<double> weights;                // sum = 1/dim!

  int size() const { return static_cast<int>(weights.size()); }
};

// Volume rule: dim 2 -> symmetric 12-point degree-6 triangle rule,
// dim 3 -> 24-point degree-6 tetrahedron rule.
QuadRule cell_rule(int dim);

// Rule on a face of codimension one: face_dim 1 -> 4-point Gauss-Legendre,
// face_dim 2 -> the 12-point triangle rule.
QuadRule face_rule(int face_dim);

// Closed-form integral of x^alpha over the unit reference simplex:
// prod(alpha_i!) / (|alpha| + dim)!.
double simplex_monomial_integral(int dim, const std::array<int, 3>& alpha);

struct ExactnessReport {
  int checked_degree = 0;
  double max_rel_error = 0.0;
  bool pass = false;  // max_rel_error <= 1e-13
};

// Compares the rule against the closed-form monomial integrals for every
// multi-index with |alpha| <= degree.
ExactnessReport verify_exactness(const QuadRule& rule, int degree);

}  // namespace pnsdg
