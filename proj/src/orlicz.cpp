#include "pnsdg/orlicz.hpp"

#include <cmath>
#include <stdexcept>

namespace pnsdg {

namespace {

void check_spec(const NFunctionSpec& spec, double shift) {
  if (!(spec.p > 1.0)) throw std::invalid_argument("NFunctionSpec: requires p > 1");
  if (spec.delta < 0.0) throw std::invalid_argument("NFunctionSpec: requires delta >= 0");
  if (shift < 0.0) throw std::invalid_argument("shift must be nonnegative");
}

// Generalized binomial coefficient C(q, m).
double gbinom(double q, int m) {
  double r = 1.0;
  for (int i = 0; i < m; ++i) r *= (q - i) / (i + 1);
  return r;
}

}  // namespace

double phi_value(const NFunctionSpec& spec, double shift, double t) {
  check_spec(spec, shift);
  if (t < 0.0) throw std::invalid_argument("phi_value: requires t >= 0");
  const double p = spec.p;
  const double c = spec.delta + shift;
  if (t == 0.0) return 0.0;
  if (c == 0.0) return std::pow(t, p) / p;
  if (t < 1e-3 * c) {
    // phi_a(t) = c^(p-2) sum_m C(p-2, m) t^(m+2) / ((m+2) c^m); the closed
    // form loses all relative accuracy for t << c.
    const double tau = t / c;
    double sum = 0.0, pw = t * t;
    for (int m = 0; m <= 6; ++m) {
      sum += gbinom(p - 2.0, m) * pw / (m + 2);
      pw *= tau;
    }
    return std::pow(c, p - 2.0) * sum;
  }
  return (std::pow(c + t, p - 1.0) * ((p - 1.0) * t - c) + std::pow(c, p)) / (p * (p - 1.0));
}

double phi_prime(const NFunctionSpec& spec, double shift, double t) {
  check_spec(spec, shift);
  if (t < 0.0) throw std::invalid_argument("phi_prime: requires t >= 0");
  const double c = spec.delta + shift;
  if (t == 0.0) return 0.0;
  if (c == 0.0 && t == 0.0) return 0.0;
  return std::pow(c + t, spec.p - 2.0) * t;
}

double conjugate_value(const NFunctionSpec& spec, double shift, double u) {
  check_spec(spec, shift);
  if (u < 0.0) throw std::invalid_argument("conjugate_value: requires u >= 0");
  if (u == 0.0) return 0.0;
  const double p = spec.p;
  const double c = spec.delta + shift;

  // Bracket the root of g(t) = phi_a'(t) - u.
  double hi = std::max(1.0, 2.0 * std::pow(u, 1.0 / (p - 1.0)) + c);
  int grow = 0;
  while (phi_prime(spec, shift, hi) < u) {
    hi *= 2.0;
    if (++grow > 200) throw std::runtime_error("conjugate_value: failed to bracket root");
  }
  double lo = 0.0;

  // Guarded Newton on g; g'(t) = (c+t)^(p-3) ((p-1) t + c) > 0.
  double t = 0.5 * hi;
  for (int it = 0; it < 200; ++it) {
    const double g = phi_prime(spec, shift, t) - u;
    if (g > 0.0)
      hi = t;
    else
      lo = t;
    const double dg = std::pow(c + t, p - 3.0) * ((p - 1.0) * t + c);
    double tn = t - g / dg;
    if (!(tn > lo && tn < hi)) tn = 0.5 * (lo + hi);
    const double step = std::abs(tn - t);
    t = tn;
    if (step <= 1e-15 * (1.0 + std::abs(t))) break;
  }
  return u * t - phi_value(spec, shift, t);
}

namespace {

// Common scalar factor h(|A^s|) * A^s with h(t) = (c + t)^q.
Mat radial_stress(const Mat& A, double c, double q) {
  const Mat As = sym(A);
  const double t = frob(As);
  if (t == 0.0) return Mat(A.dim);
  return std::pow(c + t, q) * As;
}

}  // namespace

Mat stress(const NFunctionSpec& spec, const Mat& A) {
  check_spec(spec, 0.0);
  return spec.mu0 * radial_stress(A, spec.delta, spec.p - 2.0);
}

Mat shifted_stress(const NFunctionSpec& spec, double shift, const Mat& A) {
  check_spec(spec, shift);
  return radial_stress(A, spec.delta + shift, spec.p - 2.0);
}

Mat f_transform(const NFunctionSpec& spec, const Mat& A) {
  check_spec(spec, 0.0);
  return radial_stress(A, spec.delta, 0.5 * (spec.p - 2.0));
}

Tensor4 stress_derivative(const NFunctionSpec& spec, double shift, const Mat& A) {
  check_spec(spec, shift);
  const double p = spec.p;
  const double c = spec.delta + shift;
  const Mat As = sym(A);
  const double t = frob(As);

  if (t == 0.0) {
    if (p < 2.0 && c == 0.0)
      throw std::domain_error("stress_derivative: singular at sym A = 0 for p < 2, delta + shift = 0");
    // Limit of the rank-one part is 0 for p >= 2 (and for p < 2 with c > 0).
    const double h = (c == 0.0 && p > 2.0) ? 0.0 : std::pow(c, p - 2.0);
    return sym_projector(A.dim, spec.mu0 * h);
  }

  Tensor4 D = sym_projector(A.dim, spec.mu0 * std::pow(c + t, p - 2.0));
  const double r1 = spec.mu0 * (p - 2.0) * std::pow(c + t, p - 3.0) / t;
  for (int i = 0; i < A.dim; ++i)
    for (int j = 0; j < A.dim; ++j)
      for (int k = 0; k < A.dim; ++k)
        for (int l = 0; l < A.dim; ++l) D(i, j, k, l) += r1 * As(i, j) * As(k, l);
  return D;
}

}  // namespace pnsdg
