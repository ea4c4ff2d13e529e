#include "pnsdg/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace pnsdg {

namespace {

void push_perms3(QuadRule& r, double a, double b, double c, double w) {
  // All distinct permutations of the barycentric triple (a, b, c).
  const double t[3] = {a, b, c};
  int idx[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  std::vector<std::array<double, 4>> seen;
  for (auto& pm : idx) {
    std::array<double, 4> pt{t[pm[0]], t[pm[1]], t[pm[2]], 0.0};
    bool dup = false;
    for (auto& s : seen)
      if (s == pt) dup = true;
    if (dup) continue;
    seen.push_back(pt);
    r.points.push_back(pt);
    r.weights.push_back(w);
  }
}

void push_perms4(QuadRule& r, const std::array<double, 4>& t, double w) {
  // All distinct permutations of a barycentric quadruple.
  int idx[4] = {0, 1, 2, 3};
  std::vector<std::array<double, 4>> seen;
  // 24 permutations, generated by simple nested loops.
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          if (i == j || i == k || i == l || j == k || j == l || k == l) continue;
          (void)idx;
          std::array<double, 4> pt{t[i], t[j], t[k], t[l]};
          bool dup = false;
          for (auto& s : seen)
            if (s == pt) dup = true;
          if (dup) continue;
          seen.push_back(pt);
          r.points.push_back(pt);
          r.weights.push_back(w);
        }
}

QuadRule triangle12() {
  QuadRule r;
  r.dim = 2;
  r.degree = 6;
  // Symmetric 12-point degree-6 rule; weights below are normalized to sum to
  // 1 and scaled to the reference measure 1/2 on push.
  const double wA = 0.050844906370207 / 2.0;
  const double wB = 0.116786275726379 / 2.0;
  const double wC = 0.082851075618374 / 2.0;
  push_perms3(r, 0.873821971016996, 0.063089014491502, 0.063089014491502, wA);
  push_perms3(r, 0.501426509658179, 0.249286745170910, 0.249286745170910, wB);
  push_perms3(r, 0.636502499121399, 0.310352451033785, 0.053145049844816, wC);
  return r;
}

QuadRule tet24() {
  QuadRule r;
  r.dim = 3;
  r.degree = 6;
  // 24-point degree-6 tetrahedron rule (4 + 4 + 4 + 12); weights already sum
  // to the reference measure 1/6.
  struct G {
    double a, b, w;
  };
  const G g[3] = {
      {0.3561913862225449, 0.2146028712591517, 0.006653791709694643},
      {0.8779781243961660, 0.0406739585346113, 0.001679535175886773},
      {0.0329863295731731, 0.3223378901422757, 0.009226196923942399},
  };
  for (auto& gi : g) push_perms4(r, {gi.a, gi.b, gi.b, gi.b}, gi.w);
  push_perms4(r, {0.0636610018750175, 0.0636610018750175, 0.2696723314583159, 0.6030056647916491},
              0.008035714285714285);
  return r;
}

QuadRule gauss4() {
  QuadRule r;
  r.dim = 1;
  r.degree = 7;
  const double x1 = 0.069431844202973712388026755553595;
  const double x2 = 0.330009478207571867598667120448378;
  const double w1 = 0.173927422568726928686531974610999;
  const double w2 = 0.326072577431273071313468025389001;
  const double xs[4] = {x1, x2, 1.0 - x2, 1.0 - x1};
  const double ws[4] = {w1, w2, w2, w1};
  for (int i = 0; i < 4; ++i) {
    r.points.push_back({1.0 - xs[i], xs[i], 0.0, 0.0});
    r.weights.push_back(ws[i]);
  }
  return r;
}

}  // namespace

QuadRule cell_rule(int dim) {
  if (dim == 2) return triangle12();
  if (dim == 3) return tet24();
  throw std::invalid_argument("cell_rule: dim must be 2 or 3");
}

QuadRule face_rule(int face_dim) {
  if (face_dim == 1) return gauss4();
  if (face_dim == 2) return triangle12();
  throw std::invalid_argument("face_rule: face_dim must be 1 or 2");
}

double simplex_monomial_integral(int dim, const std::array<int, 3>& alpha) {
  // prod(alpha_i!) / (|alpha| + dim)!  computed as a running product to avoid
  // factorial overflow.
  int total = 0;
  for (int i = 0; i < dim; ++i) total += alpha[i];
  double val = 1.0;
  int den = 1;  // counts factors of the denominator consumed so far
  for (int i = 0; i < dim; ++i)
    for (int k = 1; k <= alpha[i]; ++k) val *= static_cast<double>(k) / (den++);
  while (den <= total + dim) val /= (den++);
  return val;
}

ExactnessReport verify_exactness(const QuadRule& rule, int degree) {
  ExactnessReport rep;
  rep.checked_degree = degree;
  const int d = rule.dim;
  // Enumerate alpha with |alpha| <= degree over d cartesian coordinates; the
  // cartesian coordinates on the reference simplex are lambda_1..lambda_d.
  std::array<int, 3> a{0, 0, 0};
  auto eval = [&](const std::array<int, 3>& al) {
    double quad = 0.0;
    for (int q = 0; q < rule.size(); ++q) {
      double m = 1.0;
      for (int i = 0; i < d; ++i) m *= std::pow(rule.points[q][i + 1], al[i]);
      quad += rule.weights[q] * m;
    }
    const double exact = simplex_monomial_integral(d, al);
    const double rel = std::abs(quad - exact) / std::abs(exact);
    rep.max_rel_error = std::max(rep.max_rel_error, rel);
  };
  if (d == 1) {
    for (a[0] = 0; a[0] <= degree; ++a[0]) eval(a);
  } else if (d == 2) {
    for (a[0] = 0; a[0] <= degree; ++a[0])
      for (a[1] = 0; a[0] + a[1] <= degree; ++a[1]) eval(a);
  } else {
    for (a[0] = 0; a[0] <= degree; ++a[0])
      for (a[1] = 0; a[0] + a[1] <= degree; ++a[1])
        for (a[2] = 0; a[0] + a[1] + a[2] <= degree; ++a[2]) eval(a);
  }
  rep.pass = rep.max_rel_error <= 1e-13;
  return rep;
}

}  // namespace pnsdg
