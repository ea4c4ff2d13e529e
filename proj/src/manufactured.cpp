#include "pnsdg/manufactured.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "pnsdg/mesh.hpp"
#include "pnsdg/quadrature.hpp"

namespace pnsdg {

Vec ManufacturedSolution2D::velocity(const Vec& x) const {
  const double r = std::hypot(x[0], x[1]);
  const double rb = std::pow(r, beta);
  return Vec(rb * x[1], -rb * x[0]);
}

Mat ManufacturedSolution2D::grad_v(const Vec& x) const {
  const double r = std::hypot(x[0], x[1]);
  const double rb = std::pow(r, beta);
  const double s = std::pow(r, beta - 2.0);
  Mat G(2);
  G(0, 0) = beta * s * x[0] * x[1];
  G(0, 1) = rb + beta * s * x[1] * x[1];
  G(1, 0) = -rb - beta * s * x[0] * x[0];
  G(1, 1) = -beta * s * x[0] * x[1];
  return G;
}

Mat ManufacturedSolution2D::sym_grad(const Vec& x) const { return sym(grad_v(x)); }

Mat ManufacturedSolution2D::dsym(const Vec& x, int m) const {
  const double r = std::hypot(x[0], x[1]);
  const double s = std::pow(r, beta - 2.0);
  const double ds = (beta - 2.0) * std::pow(r, beta - 4.0) * x[m];
  Mat D(2);
  const double d11 =
      beta * (ds * x[0] * x[1] + s * (m == 0 ? x[1] : x[0]));
  const double d12 =
      0.5 * beta * (ds * (x[1] * x[1] - x[0] * x[0]) + s * (m == 0 ? -2.0 * x[0] : 2.0 * x[1]));
  D(0, 0) = d11;
  D(0, 1) = d12;
  D(1, 0) = d12;
  D(1, 1) = -d11;
  return D;
}

double ManufacturedSolution2D::pressure(const Vec& x) const {
  return std::pow(std::hypot(x[0], x[1]), gamma) - q_mean;
}

Vec ManufacturedSolution2D::grad_q(const Vec& x) const {
  const double r = std::hypot(x[0], x[1]);
  const double c = gamma * std::pow(r, gamma - 2.0);
  return Vec(c * x[0], c * x[1]);
}

Vec ManufacturedSolution2D::forcing(const Vec& x) const {
  const double r = std::hypot(x[0], x[1]);
  if (r < 1e-300) throw std::domain_error("forcing is singular at the corner");
  const Tensor4 C = stress_derivative(spec, 0.0, sym_grad(x));
  Vec f(2);
  for (int j = 0; j < 2; ++j) {
    const Mat dS = C.contract(dsym(x, j));
    for (int i = 0; i < 2; ++i) f[i] -= dS(i, j);
  }
  if (convective) f += apply(grad_v(x), velocity(x));
  f += grad_q(x);
  return f;
}

ManufacturedSolution2D make_case(int case_id, double p, double delta, double mu0) {
  ManufacturedSolution2D ms;
  ms.spec = NFunctionSpec{p, delta, mu0};
  if (case_id == 1) {
    const double pprime = p / (p - 1.0);
    ms.gamma = 1.0 - 2.0 / pprime + 1e-2;
  } else if (case_id == 2) {
    ms.gamma = ms.beta * (p - 2.0) / 2.0 + 1e-2;
  } else {
    throw std::invalid_argument("case_id must be 1 or 2");
  }
  ms.q_mean = corner_mean(ms.gamma);
  return ms;
}

double corner_mean(double gamma) {
  if (gamma <= -2.0) throw std::invalid_argument("corner_mean requires gamma > -2");
  static std::map<double, double> cache;
  const auto it = cache.find(gamma);
  if (it != cache.end()) return it->second;
  // 2/(gamma+2) int_0^{pi/4} sec(t)^{gamma+2} dt, smooth integrand <= sqrt(2).
  static const double gl_x[8] = {0.0198550717512319, 0.1016667612931866, 0.2372337950418355,
                                 0.4082826787521751, 0.5917173212478249, 0.7627662049581645,
                                 0.8983332387068134, 0.9801449282487681};
  static const double gl_w[8] = {0.0506142681451881, 0.1111905172266872, 0.1568533229389436,
                                 0.1813418916891810, 0.1813418916891810, 0.1568533229389436,
                                 0.1111905172266872, 0.0506142681451881};
  const int panels = 32;
  const double hi = std::atan(1.0);  // pi/4
  double acc = 0.0;
  for (int pnl = 0; pnl < panels; ++pnl) {
    const double a = hi * pnl / panels, b = hi * (pnl + 1) / panels;
    for (int g = 0; g < 8; ++g) {
      const double t = a + (b - a) * gl_x[g];
      acc += (b - a) * gl_w[g] * std::pow(1.0 / std::cos(t), gamma + 2.0);
    }
  }
  const double val = 2.0 / (gamma + 2.0) * acc;
  cache[gamma] = val;
  return val;
}

// ------------------------------------------------------------------ 3D ----

double VortexChain3D::radius(int k) const { return std::ldexp(1.0, -k - 2); }

Vec VortexChain3D::center(int k) const {
  const Vec e1(1.0, 0.0, 0.0);
  return e1 + (3.0 * radius(k) / t0) * (anchor - e1);
}

Vec VortexChain3D::probe(int i) const {
  const Vec e1(1.0, 0.0, 0.0);
  return e1 + std::ldexp(1.0, -i) * (anchor - e1);
}

int VortexChain3D::ball_index(int i) const {
  const double dist = std::ldexp(1.0, -i) * t0;
  for (int k = 0; k < 1024; ++k)
    if (dist >= std::ldexp(1.0, -k - 1) && dist <= std::ldexp(1.0, -k)) return k;
  throw std::runtime_error("probe point outside every ball");
}

Vec VortexChain3D::velocity(int k, const Vec& x) const {
  const Vec c = center(k);
  const double r = radius(k);
  const Vec dx = x - c;
  const double rho = norm(dx);
  if (rho > r) return Vec(0.0, 0.0, 0.0);
  const double g = (k / (2.0 * r)) * (r - rho);
  return Vec(g * dx[1], -g * dx[0], 0.0);
}

Mat VortexChain3D::grad_v(int k, const Vec& x) const {
  const Vec c = center(k);
  const double r = radius(k);
  const Vec dx = x - c;
  const double rho = norm(dx);
  Mat G(3);
  if (rho > r) return G;
  const double amp = k / (2.0 * r);
  const double g = amp * (r - rho);
  if (rho > 1e-14) {
    const Vec w(dx[1], -dx[0], 0.0);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) G(i, j) = -amp * dx[j] / rho * w[i];
  }
  G(0, 1) += g;
  G(1, 0) -= g;
  return G;
}

double VortexChain3D::mu(int k, const Vec& x) const {
  return std::pow(delta + frob(sym(grad_v(k, x))), p - 2.0);
}

VortexChain3D make_vortex_chain(double p, double delta) {
  VortexChain3D vc;
  vc.p = p;
  vc.delta = delta;
  const Mesh mesh = unit_cube_kuhn();
  const QuadRule rule = cell_rule(3);
  const Vec e1(1.0, 0.0, 0.0);
  Vec best(3);
  double best_d = 1e300;
  for (int q = 0; q < rule.size(); ++q) {
    Vec x(3);
    for (int k = 0; k < 4; ++k) x += rule.points[q][k] * mesh.cell_vertex(0, k);
    const double dist = norm(x - e1);
    bool take = dist < best_d - 1e-14;
    if (!take && std::abs(dist - best_d) <= 1e-14) {
      for (int i = 0; i < 3; ++i) {
        if (x[i] < best[i] - 1e-14) {
          take = true;
          break;
        }
        if (x[i] > best[i] + 1e-14) break;
      }
    }
    if (take) {
      best = x;
      best_d = dist;
    }
  }
  vc.anchor = best;
  vc.t0 = best_d;
  return vc;
}

}  // namespace pnsdg
