#pragma once

// Small runtime-dimension (d = 2 or 3) vector / rank-2 / rank-4 tensor types
// used by the constitutive kernels and the assembly loops.  Fixed capacity 3,
// value semantics, no heap.

#include <array>
#include <cassert>
#include <cmath>

namespace pnsdg {

struct Vec {
  int dim = 2;
  std::array<double, 3> x{0.0, 0.0, 0.0};

  Vec() = default;
  explicit Vec(int d) : dim(d) {}
  Vec(double a, double b) : dim(2), x{a, b, 0.0} {}
  Vec(double a, double b, double c) : dim(3), x{a, b, c} {}

  double& operator[](int i) { return x[i]; }
  double operator[](int i) const { return x[i]; }

  Vec& operator+=(const Vec& o) {
    for (int i = 0; i < dim; ++i) x[i] += o.x[i];
    return *this;
  }
  Vec& operator-=(const Vec& o) {
    for (int i = 0; i < dim; ++i) x[i] -= o.x[i];
    return *this;
  }
  Vec& operator*=(double s) {
    for (int i = 0; i < dim; ++i) x[i] *= s;
    return *this;
  }
};

inline Vec operator+(Vec a, const Vec& b) { return a += b; }
inline Vec operator-(Vec a, const Vec& b) { return a -= b; }
inline Vec operator*(double s, Vec a) { return a *= s; }
inline Vec operator*(Vec a, double s) { return a *= s; }

inline double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (int i = 0; i < a.dim; ++i) s += a.x[i] * b.x[i];
  return s;
}
inline double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

inline Vec cross(const Vec& a, const Vec& b) {
  Vec c(3);
  c[0] = a[1] * b[2] - a[2] * b[1];
  c[1] = a[2] * b[0] - a[0] * b[2];
  c[2] = a[0] * b[1] - a[1] * b[0];
  return c;
}

// Rank-2 tensor (d x d matrix).
struct Mat {
  int dim = 2;
  std::array<double, 9> a{};  // row-major, dim x dim

  Mat() = default;
  explicit Mat(int d) : dim(d) { a.fill(0.0); }

  double& operator()(int i, int j) { return a[3 * i + j]; }
  double operator()(int i, int j) const { return a[3 * i + j]; }

  Mat& operator+=(const Mat& o) {
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) (*this)(i, j) += o(i, j);
    return *this;
  }
  Mat& operator-=(const Mat& o) {
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) (*this)(i, j) -= o(i, j);
    return *this;
  }
  Mat& operator*=(double s) {
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) (*this)(i, j) *= s;
    return *this;
  }
};

inline Mat operator+(Mat a, const Mat& b) { return a += b; }
inline Mat operator-(Mat a, const Mat& b) { return a -= b; }
inline Mat operator*(double s, Mat a) { return a *= s; }
inline Mat operator*(Mat a, double s) { return a *= s; }

inline Mat identity(int dim, double scale = 1.0) {
  Mat I(dim);
  for (int i = 0; i < dim; ++i) I(i, i) = scale;
  return I;
}

// Symmetric part (A + A^T)/2.
inline Mat sym(const Mat& A) {
  Mat S(A.dim);
  for (int i = 0; i < A.dim; ++i)
    for (int j = 0; j < A.dim; ++j) S(i, j) = 0.5 * (A(i, j) + A(j, i));
  return S;
}

inline Mat transpose(const Mat& A) {
  Mat T(A.dim);
  for (int i = 0; i < A.dim; ++i)
    for (int j = 0; j < A.dim; ++j) T(i, j) = A(j, i);
  return T;
}

inline double trace(const Mat& A) {
  double t = 0.0;
  for (int i = 0; i < A.dim; ++i) t += A(i, i);
  return t;
}

// Frobenius inner product A : B.
inline double ddot(const Mat& A, const Mat& B) {
  double s = 0.0;
  for (int i = 0; i < A.dim; ++i)
    for (int j = 0; j < A.dim; ++j) s += A(i, j) * B(i, j);
  return s;
}
inline double frob(const Mat& A) { return std::sqrt(ddot(A, A)); }

inline Mat outer(const Vec& u, const Vec& v) {
  Mat M(u.dim);
  for (int i = 0; i < u.dim; ++i)
    for (int j = 0; j < u.dim; ++j) M(i, j) = u[i] * v[j];
  return M;
}

// Matrix-vector product A v.
inline Vec apply(const Mat& A, const Vec& v) {
  Vec r(A.dim);
  for (int i = 0; i < A.dim; ++i) {
    double s = 0.0;
    for (int j = 0; j < A.dim; ++j) s += A(i, j) * v[j];
    r[i] = s;
  }
  return r;
}

// Rank-4 tensor C_{ijkl}; acts on rank-2 tensors by double contraction
// (C B)_{ij} = C_{ijkl} B_{kl}.
struct Tensor4 {
  int dim = 2;
  std::array<double, 81> c{};  // [((i*3+j)*3+k)*3+l]

  Tensor4() = default;
  explicit Tensor4(int d) : dim(d) { c.fill(0.0); }

  double& operator()(int i, int j, int k, int l) { return c[((i * 3 + j) * 3 + k) * 3 + l]; }
  double operator()(int i, int j, int k, int l) const { return c[((i * 3 + j) * 3 + k) * 3 + l]; }

  Mat contract(const Mat& B) const {
    Mat R(dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) {
        double s = 0.0;
        for (int k = 0; k < dim; ++k)
          for (int l = 0; l < dim; ++l) s += (*this)(i, j, k, l) * B(k, l);
        R(i, j) = s;
      }
    return R;
  }
};

// Symmetrizer P_{ijkl} = (delta_ik delta_jl + delta_il delta_jk)/2, scaled.
inline Tensor4 sym_projector(int dim, double scale = 1.0) {
  Tensor4 P(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      P(i, j, i, j) += 0.5 * scale;
      P(i, j, j, i) += 0.5 * scale;
    }
  return P;
}

}  // namespace pnsdg
