#include "bicons4/jet.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace bicons4 {

namespace {

struct Tables {
  std::array<MultiIndex, Jet3::kSize> index{};
  int slot_of[4][4][4]{};
  struct Term {
    std::size_t out, a, b;
    double weight;
  };
  std::vector<Term> product;
  std::array<std::array<int, Jet3::kSize>, 3> raise{};  // slot -> slot of idx + e_axis (or -1)

  Tables() {
    std::size_t n = 0;
    for (int ord = 0; ord <= 3; ++ord)
      for (int i = ord; i >= 0; --i)
        for (int j = ord - i; j >= 0; --j) {
          int k = ord - i - j;
          index[n] = {i, j, k};
          slot_of[i][j][k] = static_cast<int>(n);
          ++n;
        }
    auto binom = [](int a, int b) {
      static const int table[4][4] = {{1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}};
      return table[a][b];
    };
    for (std::size_t o = 0; o < Jet3::kSize; ++o) {
      MultiIndex al = index[o];
      for (int i = 0; i <= al.s; ++i)
        for (int j = 0; j <= al.t; ++j)
          for (int k = 0; k <= al.u; ++k) {
            double w = binom(al.s, i) * binom(al.t, j) * binom(al.u, k);
            product.push_back({o, static_cast<std::size_t>(slot_of[i][j][k]),
                               static_cast<std::size_t>(slot_of[al.s - i][al.t - j][al.u - k]), w});
          }
    }
    for (int ax = 0; ax < 3; ++ax)
      for (std::size_t o = 0; o < Jet3::kSize; ++o) {
        MultiIndex m = index[o];
        if (m.order() == 3) {
          raise[ax][o] = -1;
          continue;
        }
        if (ax == 0) ++m.s;
        if (ax == 1) ++m.t;
        if (ax == 2) ++m.u;
        raise[ax][o] = slot_of[m.s][m.t][m.u];
      }
  }
};

const Tables& tables() {
  static const Tables t;
  return t;
}

}  // namespace

std::size_t Jet3::slot(MultiIndex idx) {
  if (idx.s < 0 || idx.t < 0 || idx.u < 0 || idx.order() > kOrder)
    throw Error(ErrorKind::OrderOverflow, "multi-index (" + std::to_string(idx.s) + "," + std::to_string(idx.t) +
                                              "," + std::to_string(idx.u) + ") exceeds jet order 3");
  return static_cast<std::size_t>(tables().slot_of[idx.s][idx.t][idx.u]);
}

MultiIndex Jet3::index_of(std::size_t slot) { return tables().index[slot]; }

double Jet3::extract(MultiIndex idx) const { return c_[slot(idx)]; }

void Jet3::set(MultiIndex idx, double v) { c_[slot(idx)] = v; }

Jet3 Jet3::derivative(int axis) const {
  const auto& up = tables().raise[static_cast<std::size_t>(axis)];
  Jet3 r;
  for (std::size_t o = 0; o < kSize; ++o)
    if (up[o] >= 0) r.c_[o] = c_[static_cast<std::size_t>(up[o])];
  return r;
}

Jet3& Jet3::operator+=(const Jet3& o) {
  for (std::size_t i = 0; i < kSize; ++i) c_[i] += o.c_[i];
  return *this;
}

Jet3& Jet3::operator-=(const Jet3& o) {
  for (std::size_t i = 0; i < kSize; ++i) c_[i] -= o.c_[i];
  return *this;
}

Jet3 Jet3::operator-() const {
  Jet3 r;
  for (std::size_t i = 0; i < kSize; ++i) r.c_[i] = -c_[i];
  return r;
}

Jet3 operator*(const Jet3& a, const Jet3& b) {
  Jet3 r;
  for (const auto& term : tables().product) r.c_[term.out] += term.weight * a.c_[term.a] * b.c_[term.b];
  return r;
}

Jet3& Jet3::operator*=(const Jet3& o) { return *this = *this * o; }

Jet3 operator/(const Jet3& a, const Jet3& b) {
  double v = b.value();
  if (!(std::abs(v) > kJetDivisionTol))
    throw Error(ErrorKind::DivisionNearZero, "jet divisor value is (near) zero", v);
  double inv = 1.0 / v;
  Jet3 recip = compose(b, {inv, -inv * inv, 2.0 * inv * inv * inv, -6.0 * inv * inv * inv * inv});
  return a * recip;
}

Jet3& Jet3::operator/=(const Jet3& o) { return *this = *this / o; }

SeedJets seed(double s, double t, double u) {
  SeedJets r{Jet3(s), Jet3(t), Jet3(u)};
  r.s.set({1, 0, 0}, 1.0);
  r.t.set({0, 1, 0}, 1.0);
  r.u.set({0, 0, 1}, 1.0);
  return r;
}

Jet3 compose(const Jet3& a, const std::array<double, 4>& d) {
  // g = f0 + f1 h + f2 h^2/2 + f3 h^3/6 with h = a - a0 (zero value, so h^4 = 0).
  Jet3 h = a;
  h.coefficients()[0] = 0.0;
  Jet3 acc(d[3] / 6.0);
  acc = acc * h + Jet3(d[2] / 2.0);
  acc = acc * h + Jet3(d[1]);
  acc = acc * h + Jet3(d[0]);
  return acc;
}

Jet3 sin(const Jet3& a) {
  double s = std::sin(a.value()), c = std::cos(a.value());
  return compose(a, {s, c, -s, -c});
}

Jet3 cos(const Jet3& a) {
  double s = std::sin(a.value()), c = std::cos(a.value());
  return compose(a, {c, -s, -c, s});
}

Jet3 sinh(const Jet3& a) {
  double s = std::sinh(a.value()), c = std::cosh(a.value());
  return compose(a, {s, c, s, c});
}

Jet3 cosh(const Jet3& a) {
  double s = std::sinh(a.value()), c = std::cosh(a.value());
  return compose(a, {c, s, c, s});
}

Jet3 exp(const Jet3& a) {
  double e = std::exp(a.value());
  return compose(a, {e, e, e, e});
}

Jet3 log(const Jet3& a) {
  double x = a.value();
  if (!(x > 0)) throw Error(ErrorKind::DomainError, "ln of non-positive value " + std::to_string(x), x);
  double i = 1.0 / x;
  return compose(a, {std::log(x), i, -i * i, 2.0 * i * i * i});
}

Jet3 sqrt(const Jet3& a) {
  double x = a.value();
  if (!(x > 0)) throw Error(ErrorKind::DomainError, "sqrt of non-positive value " + std::to_string(x), x);
  double r = std::sqrt(x);
  return compose(a, {r, 0.5 / r, -0.25 / (r * x), 0.375 / (r * x * x)});
}

Jet3 abs(const Jet3& a) {
  double x = a.value();
  if (x == 0.0) throw Error(ErrorKind::DomainError, "abs is not differentiable at 0", x);
  return x > 0 ? a : -a;
}

Jet3 pow(const Jet3& a, double p) {
  double x = a.value();
  bool integer = std::floor(p) == p;
  if (!integer && !(x > 0))
    throw Error(ErrorKind::DomainError, "fractional power of non-positive value " + std::to_string(x), x);
  if (integer && x == 0.0 && p < 3) {
    if (p < 0) throw Error(ErrorKind::DomainError, "negative power of zero", x);
    // Polynomial powers at zero: expand by repeated multiplication.
    Jet3 r(1.0);
    for (int i = 0; i < static_cast<int>(p); ++i) r = r * a;
    return r;
  }
  auto pw = [&](double e) { return std::pow(x, e); };
  return compose(a, {pw(p), p * pw(p - 1), p * (p - 1) * pw(p - 2), p * (p - 1) * (p - 2) * pw(p - 3)});
}

Jet3 jet_fn(JetFn f, const Jet3& a, double exponent) {
  switch (f) {
    case JetFn::Sin: return sin(a);
    case JetFn::Cos: return cos(a);
    case JetFn::Sinh: return sinh(a);
    case JetFn::Cosh: return cosh(a);
    case JetFn::Exp: return exp(a);
    case JetFn::Ln: return log(a);
    case JetFn::Sqrt: return sqrt(a);
    case JetFn::PowConst: return pow(a, exponent);
  }
  return a;
}

}  // namespace bicons4
