#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "pnsdg/quadrature.hpp"

using namespace pnsdg;

TEST_CASE("point counts, positivity, weight sums") {
  const QuadRule t = cell_rule(2);
  CHECK(t.size() == 12);
  CHECK(std::accumulate(t.weights.begin(), t.weights.end(), 0.0) == doctest::Approx(0.5).epsilon(1e-14));

  const QuadRule k = cell_rule(3);
  CHECK(k.size() == 24);
  CHECK(std::accumulate(k.weights.begin(), k.weights.end(), 0.0) ==
        doctest::Approx(1.0 / 6.0).epsilon(1e-14));

  const QuadRule g = face_rule(1);
  CHECK(g.size() == 4);
  CHECK(std::accumulate(g.weights.begin(), g.weights.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-15));

  for (const QuadRule& r : {t, k, g}) {
    for (double w : r.weights) CHECK(w > 0.0);
    for (auto& pt : r.points) {
      double s = 0.0;
      for (int i = 0; i <= r.dim; ++i) {
        CHECK(pt[i] >= 0.0);
        s += pt[i];
      }
      CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
    }
  }
}

TEST_CASE("monomial integral closed form") {
  // 1/(a+b+2 choose ...) sanity: int over triangle of 1 = 1/2, of x = 1/6,
  // of x*y = 1/24; over tet of 1 = 1/6.
  CHECK(simplex_monomial_integral(2, {0, 0, 0}) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(simplex_monomial_integral(2, {1, 0, 0}) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(simplex_monomial_integral(2, {1, 1, 0}) == doctest::Approx(1.0 / 24.0).epsilon(1e-15));
  CHECK(simplex_monomial_integral(3, {0, 0, 0}) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(simplex_monomial_integral(3, {2, 1, 0}) == doctest::Approx(2.0 / 720.0).epsilon(1e-14));
  CHECK(simplex_monomial_integral(1, {6, 0, 0}) == doctest::Approx(1.0 / 7.0).epsilon(1e-14));
}

TEST_CASE("degree-6 exactness of the cell rules") {
  for (int dim : {2, 3}) {
    const ExactnessReport rep = verify_exactness(cell_rule(dim), 6);
    CHECK(rep.pass);
    CHECK(rep.max_rel_error <= 1e-13);
  }
}

TEST_CASE("face rules: 1D degree 7, 2D degree 6") {
  const ExactnessReport g = verify_exactness(face_rule(1), 7);
  CHECK(g.pass);
  const ExactnessReport f = verify_exactness(face_rule(2), 6);
  CHECK(f.pass);
}

TEST_CASE("degree-7 monomials are NOT integrated exactly by the triangle rule") {
  const ExactnessReport rep = verify_exactness(cell_rule(2), 7);
  CHECK_FALSE(rep.pass);
  CHECK(rep.max_rel_error > 1e-8);
}

TEST_CASE("affine mapping: rule integrates barycentric polynomials on a skew triangle") {
  // Exact value of int_T l0^a l1^b l2^c dx = 2|T| a! b! c! / (a+b+c+2)!.
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  const double x0 = d(rng), y0 = d(rng), x1 = d(rng), y1 = d(rng), x2 = d(rng), y2 = d(rng);
  const double det = (x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0);
  const double area = 0.5 * std::abs(det);
  const QuadRule r = cell_rule(2);
  auto fact = [](int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
  };
  for (int a = 0; a <= 2; ++a)
    for (int b = 0; b <= 2; ++b)
      for (int c = 0; c <= 2 && a + b + c <= 6; ++c) {
        double quad = 0.0;
        for (int q = 0; q < r.size(); ++q) {
          const double l0 = r.points[q][0], l1 = r.points[q][1], l2 = r.points[q][2];
          quad += r.weights[q] * std::pow(l0, a) * std::pow(l1, b) * std::pow(l2, c);
        }
        quad *= area / 0.5;  // physical measure over reference measure
        const double exact = 2.0 * area * fact(a) * fact(b) * fact(c) / fact(a + b + c + 2);
        CHECK(quad == doctest::Approx(exact).epsilon(1e-13));
      }
}
