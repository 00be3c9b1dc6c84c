#include <gtest/gtest.h>

#include <random>

#include "bicons4/error.hpp"
#include "bicons4/minkowski.hpp"
#include "oracles.hpp"

using namespace bicons4;

namespace {

Vec4 rand4(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-2, 2);
  return Vec4{{d(rng), d(rng), d(rng), d(rng)}};
}

Mat3 rand3(std::mt19937_64& rng, bool symmetric) {
  std::uniform_real_distribution<double> d(-3, 3);
  Mat3 m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m[i][j] = d(rng);
  if (symmetric)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < i; ++j) m[i][j] = m[j][i];
  return m;
}

double det4(const Vec4& a, const Vec4& b, const Vec4& c, const Vec4& d) {
  // Laplace expansion along the last row.
  double r = 0;
  for (int k = 0; k < 4; ++k) {
    int idx[3], n = 0;
    for (int j = 0; j < 4; ++j)
      if (j != k) idx[n++] = j;
    double minor = a[idx[0]] * (b[idx[1]] * c[idx[2]] - b[idx[2]] * c[idx[1]]) -
                   a[idx[1]] * (b[idx[0]] * c[idx[2]] - b[idx[2]] * c[idx[0]]) +
                   a[idx[2]] * (b[idx[0]] * c[idx[1]] - b[idx[1]] * c[idx[0]]);
    r += ((3 + k) % 2 ? -1.0 : 1.0) * d[k] * minor;
  }
  return r;
}

}  // namespace

TEST(Inner4, Signature) {
  EXPECT_EQ(inner4(Vec4{{1, 0, 0, 0}}, Vec4{{1, 0, 0, 0}}), -1.0);
  EXPECT_EQ(inner4(Vec4{{1, 1, 0, 0}}, Vec4{{1, 1, 0, 0}}), 0.0);
  EXPECT_EQ(inner4(Vec4{{3, 1, 2, 2}}, Vec4{{3, 1, 2, 2}}), 0.0);
}

TEST(Inner4, BilinearSymmetric) {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 200; ++k) {
    Vec4 a = rand4(rng), b = rand4(rng), c = rand4(rng);
    EXPECT_DOUBLE_EQ(inner4(a, b), inner4(b, a));
    EXPECT_NEAR(inner4(a + 2.5 * b, c), inner4(a, c) + 2.5 * inner4(b, c), 1e-13);
  }
}

TEST(Cross4, BasisAndDeterminantIdentity) {
  Vec4 e2{{0, 1, 0, 0}}, e3{{0, 0, 1, 0}}, e4{{0, 0, 0, 1}};
  Vec4 w = cross4(e2, e3, e4);
  EXPECT_EQ(w[0], 1.0);
  EXPECT_EQ(w[1], 0.0);
  EXPECT_EQ(w[2], 0.0);
  EXPECT_EQ(w[3], 0.0);
  EXPECT_EQ(inner4(w, Vec4{{1, 0, 0, 0}}), -1.0);

  std::mt19937_64 rng(3);
  for (int k = 0; k < 100; ++k) {
    Vec4 a = rand4(rng), b = rand4(rng), c = rand4(rng), d = rand4(rng);
    Vec4 x = cross4(a, b, c);
    EXPECT_NEAR(inner4(x, d), det4(a, b, c, d), 1e-11);
    EXPECT_NEAR(inner4(x, a), 0.0, 1e-12);
    EXPECT_NEAR(inner4(x, b), 0.0, 1e-12);
    EXPECT_NEAR(inner4(x, c), 0.0, 1e-12);
    Vec4 y = cross4(b, a, c);
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(x[i], -y[i], 1e-13);
  }
}

TEST(Cross4, RepeatedRowVanishes) {
  Vec4 a{{1, 2, 3, 4}}, c{{0.5, -1, 2, 0}};
  Vec4 w = cross4(a, a, c);
  for (int i = 0; i < 4; ++i) EXPECT_EQ(w[i], 0.0);
}

TEST(Normalize4, Cases) {
  auto t = normalize4(Vec4{{2, 0, 0, 0}});
  EXPECT_EQ(t.sign, -1);
  EXPECT_EQ(t.unit[0], 1.0);
  auto s = normalize4(Vec4{{0, 0, 0, 5}});
  EXPECT_EQ(s.sign, 1);
  EXPECT_EQ(s.unit[3], 1.0);
  try {
    normalize4(Vec4{{1, 1, 0, 0}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NullVector);
  }
  EXPECT_EQ(causal_class(Vec4{{1, 1, 0, 0}}), CausalClass::Null);
  EXPECT_EQ(causal_class(Vec4{{2, 1, 0, 0}}), CausalClass::Timelike);
  EXPECT_EQ(causal_class(Vec4{{1, 2, 0, 0}}), CausalClass::Spacelike);
}

TEST(Solve3, Examples) {
  Vec3 x = solve3(Mat3::identity(), Vec3{1, 2, 3});
  EXPECT_EQ(x[0], 1.0);
  EXPECT_EQ(x[2], 3.0);
  Mat3 d2{};
  d2[0][0] = d2[1][1] = d2[2][2] = 2;
  x = solve3(d2, Vec3{2, 4, 6});
  EXPECT_DOUBLE_EQ(x[1], 2.0);
  Mat3 rank2{};
  rank2[0] = {1, 2, 3};
  rank2[1] = {2, 4, 6};
  rank2[2] = {0, 1, 1};
  try {
    solve3(rank2, Vec3{1, 1, 1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SingularMetric);
  }
}

TEST(Solve3, RandomResidual) {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 200; ++k) {
    Mat3 m = rand3(rng, false);
    Vec3 b{1.5, -2.0, 0.25};
    Vec3 x = solve3(m, b);
    Vec3 r = mul(m, x);
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(r[i], b[i], 1e-12 * (1 + std::abs(b[i])) * max_abs(m) * 10);
  }
}

TEST(Eig3, Diagonal) {
  Mat3 m{};
  m[0][0] = 2;
  m[1][1] = 1;
  m[2][2] = 1;
  auto r = eig3(m);
  ASSERT_TRUE(r.is_real_diagonalizable);
  EXPECT_NEAR(r.eigenvalues[0], 2, 1e-14);
  EXPECT_NEAR(r.eigenvalues[1], 1, 1e-14);
  EXPECT_NEAR(r.eigenvalues[2], 1, 1e-14);
}

TEST(Eig3, RotationBlockIsComplex) {
  Mat3 m{};
  m[0][0] = std::cos(0.7);
  m[0][1] = -std::sin(0.7);
  m[1][0] = std::sin(0.7);
  m[1][1] = std::cos(0.7);
  m[2][2] = 1;
  auto r = eig3(m);
  EXPECT_FALSE(r.is_real_diagonalizable);
  EXPECT_LT(r.discriminant, 0);
}

TEST(Eig3, BisectionOracleSymmetric) {
  std::mt19937_64 rng(17);
  for (int k = 0; k < 50; ++k) {
    Mat3 m = rand3(rng, true);
    auto r = eig3(m);
    auto ref = oracle::eig_bisection(m);
    ASSERT_TRUE(r.is_real_diagonalizable);
    ASSERT_EQ(ref.size(), 3u);
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(r.eigenvalues[i], ref[i], 1e-10);
    EXPECT_NEAR(r.eigenvalues[0] + r.eigenvalues[1] + r.eigenvalues[2], m[0][0] + m[1][1] + m[2][2], 1e-10);
    EXPECT_NEAR(r.eigenvalues[0] * r.eigenvalues[1] * r.eigenvalues[2], det3(m), 1e-10 * (1 + std::abs(det3(m))));
    EXPECT_LT(r.residual, 1e-10);
  }
}

TEST(Eig3, NonSymmetricRealSpectrum) {
  // Similar to diag(3, -1, 0.5) through a fixed non-orthogonal basis.
  Mat3 P{}, D{};
  P[0] = {1, 2, 0};
  P[1] = {0, 1, 1};
  P[2] = {1, 0, 3};
  D[0][0] = 3;
  D[1][1] = -1;
  D[2][2] = 0.5;
  Mat3 M = mul(mul(P, D), inverse_unchecked(P));
  auto r = eig3(M);
  ASSERT_TRUE(r.is_real_diagonalizable);
  EXPECT_NEAR(r.eigenvalues[0], 3, 1e-12);
  EXPECT_NEAR(r.eigenvalues[1], 0.5, 1e-12);
  EXPECT_NEAR(r.eigenvalues[2], -1, 1e-12);
  for (int i = 0; i < 3; ++i) {
    Vec3 v = r.eigenvectors[i], mv = mul(M, v);
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(mv[j], r.eigenvalues[i] * v[j], 1e-10);
  }
}
