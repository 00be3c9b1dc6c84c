#pragma once

// Linear algebra over Minkowski 4-space E^4_1 (signature -,+,+,+) and
// small dense 3x3 operators. Everything is templated on the scalar so the
// same code runs on doubles and on Jet3 (see jet.hpp).

#include <array>
#include <cmath>
#include <cstddef>

#include "bicons4/error.hpp"

namespace bicons4 {

template <class T>
struct Vec4T {
  std::array<T, 4> x{};

  T& operator[](std::size_t i) { return x[i]; }
  const T& operator[](std::size_t i) const { return x[i]; }

  friend Vec4T operator+(const Vec4T& a, const Vec4T& b) {
    return {{a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]}};
  }
  friend Vec4T operator-(const Vec4T& a, const Vec4T& b) {
    return {{a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]}};
  }
  friend Vec4T operator*(const T& c, const Vec4T& a) { return {{c * a[0], c * a[1], c * a[2], c * a[3]}}; }
  friend Vec4T operator*(const Vec4T& a, const T& c) { return c * a; }
  friend Vec4T operator/(const Vec4T& a, const T& c) { return {{a[0] / c, a[1] / c, a[2] / c, a[3] / c}}; }
  Vec4T operator-() const { return {{-x[0], -x[1], -x[2], -x[3]}}; }
};

using Vec4 = Vec4T<double>;

template <class T>
using Vec3T = std::array<T, 3>;
using Vec3 = Vec3T<double>;

/// 3x3 matrix, row-major: m[row][col].
template <class T>
struct Mat3T {
  std::array<std::array<T, 3>, 3> m{};

  std::array<T, 3>& operator[](std::size_t r) { return m[r]; }
  const std::array<T, 3>& operator[](std::size_t r) const { return m[r]; }

  static Mat3T identity() {
    Mat3T r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r[i][j] = T(i == j ? 1.0 : 0.0);
    return r;
  }
};

using Mat3 = Mat3T<double>;

enum class CausalClass { Timelike, Spacelike, Null };

/// -a0 b0 + a1 b1 + a2 b2 + a3 b3
template <class T>
T inner4(const Vec4T<T>& a, const Vec4T<T>& b) {
  return a[1] * b[1] + a[2] * b[2] + a[3] * b[3] - a[0] * b[0];
}

/// Minkowski cross product: inner4(cross4(a,b,c), d) == det[a;b;c;d] for
/// every d. Cofactor expansion along the last row, then the time component
/// is negated to raise the index.
template <class T>
Vec4T<T> cross4(const Vec4T<T>& a, const Vec4T<T>& b, const Vec4T<T>& c) {
  auto det3 = [](const T& a0, const T& a1, const T& a2, const T& b0, const T& b1, const T& b2, const T& c0,
                 const T& c1, const T& c2) {
    return a0 * (b1 * c2 - b2 * c1) - a1 * (b0 * c2 - b2 * c0) + a2 * (b0 * c1 - b1 * c0);
  };
  // Cofactor C_k of d_k in det[a;b;c;d] = (-1)^(3+k) * minor(k).
  T m0 = det3(a[1], a[2], a[3], b[1], b[2], b[3], c[1], c[2], c[3]);
  T m1 = det3(a[0], a[2], a[3], b[0], b[2], b[3], c[0], c[2], c[3]);
  T m2 = det3(a[0], a[1], a[3], b[0], b[1], b[3], c[0], c[1], c[3]);
  T m3 = det3(a[0], a[1], a[2], b[0], b[1], b[2], c[0], c[1], c[2]);
  Vec4T<T> w;
  w[0] = m0;  // -(cofactor C_0 = -m0)
  w[1] = m1;
  w[2] = -m2;
  w[3] = m3;
  return w;
}

/// Numerical thresholds shared by the linear-algebra layer.
struct LinAlgTolerances {
  double null_rel = 1e-9;   // |<v,v>| <= null_rel * |v|_E^2  => null
  double det_rel = 1e-12;   // |det M| <= det_rel * |M|_max^3 => singular
  double disc_rel = 1e-10;  // complex pair when discriminant < -disc_rel * scale^2
};

/// Euclidean max-abs of the components; the "scale of v" for null tests.
double max_abs(const Vec4& v);

CausalClass causal_class(const Vec4& v, const LinAlgTolerances& tol = {});

struct Normalized4 {
  Vec4 unit;
  int sign;  // <unit,unit>
};

/// Returns v / sqrt|<v,v>| and sign<v,v>. Throws NullVector.
Normalized4 normalize4(const Vec4& v, const LinAlgTolerances& tol = {});

template <class T>
Mat3T<T> mul(const Mat3T<T>& a, const Mat3T<T>& b) {
  Mat3T<T> r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j];
  return r;
}

template <class T>
Vec3T<T> mul(const Mat3T<T>& a, const Vec3T<T>& v) {
  return {a[0][0] * v[0] + a[0][1] * v[1] + a[0][2] * v[2], a[1][0] * v[0] + a[1][1] * v[1] + a[1][2] * v[2],
          a[2][0] * v[0] + a[2][1] * v[1] + a[2][2] * v[2]};
}

template <class T>
T det3(const Mat3T<T>& a) {
  return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
         a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
}

template <class T>
Mat3T<T> adjugate(const Mat3T<T>& a) {
  Mat3T<T> r;
  r[0][0] = a[1][1] * a[2][2] - a[1][2] * a[2][1];
  r[0][1] = a[0][2] * a[2][1] - a[0][1] * a[2][2];
  r[0][2] = a[0][1] * a[1][2] - a[0][2] * a[1][1];
  r[1][0] = a[1][2] * a[2][0] - a[1][0] * a[2][2];
  r[1][1] = a[0][0] * a[2][2] - a[0][2] * a[2][0];
  r[1][2] = a[0][2] * a[1][0] - a[0][0] * a[1][2];
  r[2][0] = a[1][0] * a[2][1] - a[1][1] * a[2][0];
  r[2][1] = a[0][1] * a[2][0] - a[0][0] * a[2][1];
  r[2][2] = a[0][0] * a[1][1] - a[0][1] * a[1][0];
  return r;
}

/// Inverse by adjugate; generic over the scalar (used on jets for the
/// derivative pipeline). No singularity check; callers check det first.
template <class T>
Mat3T<T> inverse_unchecked(const Mat3T<T>& a) {
  Mat3T<T> adj = adjugate(a);
  T inv_det = T(1.0) / det3(a);
  for (auto& row : adj.m)
    for (auto& e : row) e = e * inv_det;
  return adj;
}

double max_abs(const Mat3& m);

/// True when |det M| <= det_rel * max|M_ij|^3.
bool is_singular(const Mat3& m, const LinAlgTolerances& tol = {});

/// Solves M x = rhs by partial-pivot elimination with one step of
/// iterative refinement. Throws SingularMetric.
Vec3 solve3(const Mat3& m, const Vec3& rhs, const LinAlgTolerances& tol = {});

struct SpectralResult {
  std::array<double, 3> eigenvalues{};       // descending
  std::array<Vec3, 3> eigenvectors{};        // Euclidean unit vectors; unset when complex
  bool is_real_diagonalizable = false;
  double residual = 0.0;                     // max |M v - lambda v|
  double discriminant = 0.0;                 // of the deflated quadratic; < 0 means complex pair
};

/// Eigen-decomposition of a general real 3x3 matrix. Eigenvalues come from
/// the trigonometric solution of the characteristic cubic, with the most
/// isolated root polished by Newton and the remaining pair recovered from
/// the deflated quadratic. Eigenvectors by null-space extraction.
SpectralResult eig3(const Mat3& m, const LinAlgTolerances& tol = {});

}  // namespace bicons4
