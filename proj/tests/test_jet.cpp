#include <gtest/gtest.h>

#include <random>

#include "bicons4/error.hpp"
#include "bicons4/jet.hpp"
#include "oracles.hpp"

using namespace bicons4;

TEST(Jet, Seed) {
  auto [s, t, u] = seed(2, 0, 0);
  EXPECT_EQ(s(0, 0, 0), 2.0);
  EXPECT_EQ(s(1, 0, 0), 1.0);
  for (std::size_t k = 2; k < Jet3::kSize; ++k) EXPECT_EQ(s.coefficients()[k], 0.0);
  EXPECT_EQ(t(0, 1, 0), 1.0);
  EXPECT_EQ((s * t)(1, 1, 0), 1.0);
}

TEST(Jet, PlainDerivativeConvention) {
  auto j = seed(1.5, 0, 0);
  EXPECT_EQ((j.s * j.s)(2, 0, 0), 2.0);
  Jet3 a = j.s * j.s + Jet3(3.0) * j.s;
  Jet3 b = sin(j.s) + Jet3(2.0);
  EXPECT_DOUBLE_EQ((a * b).value(), a.value() * b.value());
  Jet3 one = a / a;
  EXPECT_DOUBLE_EQ(one.value(), 1.0);
  for (std::size_t k = 1; k < Jet3::kSize; ++k) EXPECT_NEAR(one.coefficients()[k], 0.0, 1e-14);
}

TEST(Jet, LeibnizMixed) {
  auto j = seed(0.3, -0.7, 1.1);
  Jet3 f = sin(j.s * j.t) + j.u * j.u, g = exp(j.t - j.u) * j.s;
  Jet3 p = f * g;
  double expect = f(1, 1, 0) * g(0, 0, 0) + f(1, 0, 0) * g(0, 1, 0) + f(0, 1, 0) * g(1, 0, 0) + f(0, 0, 0) * g(1, 1, 0);
  EXPECT_NEAR(p(1, 1, 0), expect, 1e-14);
}

TEST(Jet, Functions) {
  auto j = seed(0, 0, 0);
  Jet3 sn = sin(j.s);
  EXPECT_EQ(sn.extract({1, 0, 0}), 1.0);
  EXPECT_EQ(sn(3, 0, 0), -1.0);
  auto k = seed(1, 0, 0);
  Jet3 ln = log(k.s);
  EXPECT_EQ(ln(1, 0, 0), 1.0);
  EXPECT_EQ(ln(2, 0, 0), -1.0);
  EXPECT_EQ(Jet3(4.0)(0, 2, 1), 0.0);
  Jet3 neg = seed(-1, 0, 0).s;
  EXPECT_THROW(sqrt(neg), Error);
  EXPECT_THROW(log(neg), Error);
  EXPECT_THROW(pow(neg, 0.5), Error);
  try {
    sqrt(neg);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DomainError);
  }
  EXPECT_THROW(Jet3(1.0) / Jet3(0.0), Error);
  EXPECT_THROW(sn.extract({2, 1, 1}), Error);
}

TEST(Jet, Identities) {
  auto j = seed(0.4, 1.3, -0.2);
  Jet3 x = j.s * j.t + sin(j.u) * j.s;
  Jet3 one = sin(x) * sin(x) + cos(x) * cos(x);
  Jet3 hone = cosh(x) * cosh(x) - sinh(x) * sinh(x);
  EXPECT_NEAR(one.value(), 1.0, 1e-14);
  EXPECT_NEAR(hone.value(), 1.0, 1e-13);
  for (std::size_t k = 1; k < Jet3::kSize; ++k) {
    EXPECT_NEAR(one.coefficients()[k], 0.0, 1e-12);
    EXPECT_NEAR(hone.coefficients()[k], 0.0, 1e-12);
  }
  Jet3 p = pow(j.s + Jet3(2.0), 1.5), q = sqrt(j.s + Jet3(2.0)) * (j.s + Jet3(2.0));
  for (std::size_t k = 0; k < Jet3::kSize; ++k) EXPECT_NEAR(p.coefficients()[k], q.coefficients()[k], 1e-12);
  Jet3 r = jet_fn(JetFn::Ln, exp(x));
  for (std::size_t k = 0; k < Jet3::kSize; ++k) EXPECT_NEAR(r.coefficients()[k], x.coefficients()[k], 1e-12);
}

namespace {

// A small family of composite expressions, evaluated both as jets and as
// plain doubles for the finite-difference oracle.
template <class T>
T expr(int which, const T& s, const T& t, const T& u) {
  using std::cos;
  using std::cosh;
  using std::exp;
  using std::log;
  using std::sin;
  using std::sinh;
  using std::sqrt;
  switch (which % 5) {
    case 0: return sin(s * t) * cosh(u) + s * s * u;
    case 1: return exp(s - u) / (T(2.0) + cos(t));
    case 2: return log(T(3.0) + s * s + t * u) * sinh(t);
    case 3: return sqrt(T(4.0) + s * t * u) * cos(s + u);
    default: return (s + T(2.0)) * (t - T(1.5)) / (u * u + T(1.0));
  }
}

}  // namespace

TEST(Jet, FiniteDifferenceOracle) {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> d(-1, 1);
  const double h1 = 1e-5, h2 = 1e-4;
  for (int n = 0; n < 100; ++n) {
    std::array<double, 3> p{d(rng), d(rng), d(rng)};
    int which = n;
    auto j = seed(p[0], p[1], p[2]);
    Jet3 J = expr<Jet3>(which, j.s, j.t, j.u);
    std::function<double(double, double, double)> f = [which](double s, double t, double u) {
      return expr<double>(which, s, t, u);
    };
    for (int a = 0; a < 3; ++a) {
      MultiIndex ia{a == 0, a == 1, a == 2};
      double ref = oracle::fd1(f, p, a, h1);
      EXPECT_NEAR(J.extract(ia), ref, 1e-5 * std::max(1.0, std::abs(ref)));
      for (int b = a; b < 3; ++b) {
        MultiIndex iab{(a == 0) + (b == 0), (a == 1) + (b == 1), (a == 2) + (b == 2)};
        double r2 = oracle::fd2(f, p, a, b, h2);
        EXPECT_NEAR(J.extract(iab), r2, 1e-5 * std::max(1.0, std::abs(r2)));
      }
    }
    // Third order: differences of the jet's own second derivatives would
    // not be independent, so difference the scalar map directly.
    std::function<double(double, double, double)> fss = [&](double s, double t, double u) {
      return oracle::fd2(f, {s, t, u}, 0, 0, 1e-3);
    };
    double r3 = oracle::fd1(fss, p, 1, 1e-3);
    EXPECT_NEAR(J(2, 1, 0), r3, 1e-3 * std::max(1.0, std::abs(r3)));
  }
}

TEST(Jet, DerivativeShift) {
  auto j = seed(0.5, 0.2, 0.1);
  Jet3 f = sin(j.s) * j.t * j.t * j.u;
  Jet3 fs = f.derivative(0);
  EXPECT_DOUBLE_EQ(fs.value(), f(1, 0, 0));
  EXPECT_DOUBLE_EQ(fs(0, 2, 0), f(1, 2, 0));
  EXPECT_DOUBLE_EQ(fs(0, 1, 1), f(1, 1, 1));
}

TEST(Jet, ComposeMatchesFunction) {
  auto j = seed(0.7, 0.1, -0.3);
  Jet3 x = j.s * j.t + j.u;
  double v = x.value();
  Jet3 a = compose(x, {std::exp(v), std::exp(v), std::exp(v), std::exp(v)});
  Jet3 b = exp(x);
  for (std::size_t k = 0; k < Jet3::kSize; ++k) EXPECT_NEAR(a.coefficients()[k], b.coefficients()[k], 1e-13);
}
