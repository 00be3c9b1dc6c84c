#include "bicons4/minkowski.hpp"

#include <algorithm>
#include <limits>
#include <numbers>

namespace bicons4 {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NullVector: return "NullVector";
    case ErrorKind::SingularMetric: return "SingularMetric";
    case ErrorKind::DivisionNearZero: return "DivisionNearZero";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::OrderOverflow: return "OrderOverflow";
    case ErrorKind::DegenerateMetric: return "DegenerateMetric";
    case ErrorKind::NullNormal: return "NullNormal";
    case ErrorKind::NonDiagonalizable: return "NonDiagonalizable";
    case ErrorKind::UmbilicPoint: return "UmbilicPoint";
    case ErrorKind::BadParams: return "BadParams";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::SingularEndpoint: return "SingularEndpoint";
    case ErrorKind::GuardHit: return "GuardHit";
    case ErrorKind::NoBracket: return "NoBracket";
    case ErrorKind::IntervalMismatch: return "IntervalMismatch";
    case ErrorKind::EmptyDomain: return "EmptyDomain";
    case ErrorKind::GradTooSmall: return "GradTooSmall";
    case ErrorKind::UnknownFamily: return "UnknownFamily";
    case ErrorKind::MissingParam: return "MissingParam";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

double max_abs(const Vec4& v) {
  return std::max({std::abs(v[0]), std::abs(v[1]), std::abs(v[2]), std::abs(v[3])});
}

double max_abs(const Mat3& m) {
  double r = 0.0;
  for (const auto& row : m.m)
    for (double e : row) r = std::max(r, std::abs(e));
  return r;
}

CausalClass causal_class(const Vec4& v, const LinAlgTolerances& tol) {
  double scale = max_abs(v);
  double q = inner4(v, v);
  double thr = tol.null_rel * scale * scale;
  if (q < -thr) return CausalClass::Timelike;
  if (q > thr) return CausalClass::Spacelike;
  return CausalClass::Null;
}

Normalized4 normalize4(const Vec4& v, const LinAlgTolerances& tol) {
  double scale = max_abs(v);
  double q = inner4(v, v);
  if (!(std::abs(q) > tol.null_rel * scale * scale)) {
    throw Error(ErrorKind::NullVector, "vector has (near-)zero Minkowski norm");
  }
  double n = std::sqrt(std::abs(q));
  return {v / n, q < 0 ? -1 : 1};
}

bool is_singular(const Mat3& m, const LinAlgTolerances& tol) {
  double s = max_abs(m);
  return !(std::abs(det3(m)) > tol.det_rel * s * s * s);
}

namespace {

Vec3 gauss_solve(Mat3 a, Vec3 b) {
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    std::swap(a[col], a[piv]);
    std::swap(b[col], b[piv]);
    for (int r = col + 1; r < 3; ++r) {
      double f = a[r][col] / a[col][col];
      for (int c = col; c < 3; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  Vec3 x{};
  for (int r = 2; r >= 0; --r) {
    double acc = b[r];
    for (int c = r + 1; c < 3; ++c) acc -= a[r][c] * x[c];
    x[r] = acc / a[r][r];
  }
  return x;
}

}  // namespace

Vec3 solve3(const Mat3& m, const Vec3& rhs, const LinAlgTolerances& tol) {
  if (is_singular(m, tol)) throw Error(ErrorKind::SingularMetric, "matrix is singular to tolerance");
  Vec3 x = gauss_solve(m, rhs);
  Vec3 mx = mul(m, x);
  Vec3 r{rhs[0] - mx[0], rhs[1] - mx[1], rhs[2] - mx[2]};
  Vec3 dx = gauss_solve(m, r);
  for (int i = 0; i < 3; ++i) x[i] += dx[i];
  return x;
}

namespace {

Vec3 cross3(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double norm3(const Vec3& a) { return std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]); }

Vec3 unit3(const Vec3& a) {
  double n = norm3(a);
  return {a[0] / n, a[1] / n, a[2] / n};
}

// Largest-magnitude component made positive.
Vec3 canonical_sign(Vec3 v) {
  int k = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(v[i]) > std::abs(v[k]) * (1.0 + 1e-12)) k = i;
  if (v[k] < 0)
    for (double& e : v) e = -e;
  return v;
}

Vec3 simple_null_vector(const Mat3& a) {
  Vec3 best{};
  double best_n = -1.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      Vec3 c = cross3(a[i], a[j]);
      double n = norm3(c);
      if (n > best_n) {
        best_n = n;
        best = c;
      }
    }
  }
  if (!(best_n > 0)) return {1.0, 0.0, 0.0};
  return unit3(best);
}

std::array<Vec3, 2> rank1_null_space(const Mat3& a) {
  int r = 0;
  for (int i = 1; i < 3; ++i)
    if (norm3(a[i]) > norm3(a[r])) r = i;
  Vec3 row = a[r];
  if (!(norm3(row) > 0)) return {Vec3{1, 0, 0}, Vec3{0, 1, 0}};
  int k = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(row[i]) < std::abs(row[k])) k = i;
  Vec3 ek{};
  ek[k] = 1.0;
  Vec3 va = unit3(cross3(row, ek));
  Vec3 vb = unit3(cross3(row, va));
  return {va, vb};
}

}  // namespace

SpectralResult eig3(const Mat3& m, const LinAlgTolerances& tol) {
  SpectralResult out;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double shift = (m[0][0] + m[1][1] + m[2][2]) / 3.0;
  Mat3 b = m;
  for (int i = 0; i < 3; ++i) b[i][i] -= shift;
  const double scale = max_abs(b);
  const double mscale = std::max(max_abs(m), std::numeric_limits<double>::min());

  std::array<double, 3> mu{0.0, 0.0, 0.0};
  int multiplicity_pattern = 3;  // 3 = triple root, 2 = simple+double, 1 = all simple

  if (scale <= 64 * eps * mscale) {
    out.discriminant = 0.0;
    multiplicity_pattern = 3;
  } else {
    // Depressed cubic mu^3 + p mu + q = 0 for the traceless part.
    const double p = (b[0][0] * b[1][1] - b[0][1] * b[1][0]) + (b[0][0] * b[2][2] - b[0][2] * b[2][0]) +
                     (b[1][1] * b[2][2] - b[1][2] * b[2][1]);
    const double q = -det3(b);
    auto poly = [&](double x) { return (x * x + p) * x + q; };
    std::array<double, 3> r{};
    if (p < 0) {
      const double a = 2.0 * std::sqrt(-p / 3.0);
      double arg = (3.0 * q / (p * a));  // = (3q/2p) sqrt(-3/p)
      arg = std::clamp(arg, -1.0, 1.0);
      const double theta = std::acos(arg) / 3.0;
      for (int k = 0; k < 3; ++k) r[k] = a * std::cos(theta - 2.0 * std::numbers::pi * k / 3.0);
    } else {
      // At most one real root: Cardano.
      double d = q * q / 4.0 + p * p * p / 27.0;
      double sd = std::sqrt(std::max(d, 0.0));
      double root = std::cbrt(-q / 2.0 + sd) + std::cbrt(-q / 2.0 - sd);
      r = {root, root, root};
    }
    // Most isolated candidate root.
    int iso = 0;
    double best_sep = -1.0;
    for (int k = 0; k < 3; ++k) {
      double sep = std::min(std::abs(r[k] - r[(k + 1) % 3]), std::abs(r[k] - r[(k + 2) % 3]));
      if (sep > best_sep) {
        best_sep = sep;
        iso = k;
      }
    }
    double mu1 = r[iso];
    for (int it = 0; it < 4; ++it) {
      double f = poly(mu1);
      double fp = 3.0 * mu1 * mu1 + p;
      if (fp == 0.0) break;
      double cand = mu1 - f / fp;
      if (std::abs(poly(cand)) < std::abs(f)) mu1 = cand;
      else break;
    }
    // Deflated quadratic for the remaining pair: sum = -mu1, product = p + mu1^2.
    const double disc = -3.0 * mu1 * mu1 - 4.0 * p;
    out.discriminant = disc;
    const double snap = 256.0 * eps * scale * scale;
    if (disc < -tol.disc_rel * scale * scale) {
      out.is_real_diagonalizable = false;
      out.eigenvalues = {mu1 + shift, std::numeric_limits<double>::quiet_NaN(),
                         std::numeric_limits<double>::quiet_NaN()};
      out.residual = std::numeric_limits<double>::quiet_NaN();
      return out;
    }
    double half = (disc <= snap) ? 0.0 : 0.5 * std::sqrt(disc);
    mu = {mu1, -0.5 * mu1 + half, -0.5 * mu1 - half};
    if (half == 0.0) {
      multiplicity_pattern = (std::abs(1.5 * mu1) <= std::sqrt(snap)) ? 3 : 2;
    } else {
      multiplicity_pattern = 1;
    }
  }

  out.is_real_diagonalizable = true;
  std::array<double, 3> lam{mu[0] + shift, mu[1] + shift, mu[2] + shift};
  std::array<Vec3, 3> vec{};

  auto shifted = [&](double l) {
    Mat3 a = m;
    for (int i = 0; i < 3; ++i) a[i][i] -= l;
    return a;
  };

  if (multiplicity_pattern == 3) {
    double l = shift;
    lam = {l, l, l};
    vec = {Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}};
  } else if (multiplicity_pattern == 2) {
    // lam[1] == lam[2] is the double root.
    vec[0] = simple_null_vector(shifted(lam[0]));
    auto ns = rank1_null_space(shifted(lam[1]));
    vec[1] = ns[0];
    vec[2] = ns[1];
  } else {
    for (int k = 0; k < 3; ++k) vec[k] = simple_null_vector(shifted(lam[k]));
  }
  for (auto& v : vec) v = canonical_sign(v);

  std::array<int, 3> order{0, 1, 2};
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    if (lam[i] != lam[j]) return lam[i] > lam[j];
    return vec[i] < vec[j];
  });
  double res = 0.0;
  for (int k = 0; k < 3; ++k) {
    out.eigenvalues[k] = lam[order[k]];
    out.eigenvectors[k] = vec[order[k]];
    Vec3 mv = mul(m, out.eigenvectors[k]);
    for (int i = 0; i < 3; ++i) res = std::max(res, std::abs(mv[i] - out.eigenvalues[k] * out.eigenvectors[k][i]));
  }
  out.residual = res;
  return out;
}

}  // namespace bicons4
