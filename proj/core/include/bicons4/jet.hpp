#pragma once

// Truncated multivariate Taylor jets in the three chart variables (s,t,u),
// complete to total order 3.
//
// Storage convention: coefficient (i,j,k) is the plain partial derivative
//   d^{i+j+k} f / ds^i dt^j du^k
// at the base point, NOT divided by i! j! k!. The product rule therefore
// carries the multinomial weights C(a,b) = prod binom(a_n, b_n).

#include <array>
#include <cstddef>

#include "bicons4/minkowski.hpp"

namespace bicons4 {

struct MultiIndex {
  int s = 0, t = 0, u = 0;
  constexpr int order() const { return s + t + u; }
  friend constexpr bool operator==(const MultiIndex&, const MultiIndex&) = default;
};

class Jet3 {
 public:
  static constexpr int kOrder = 3;
  static constexpr std::size_t kSize = 20;

  constexpr Jet3() = default;
  /// Constant jet.
  constexpr Jet3(double value) { c_[0] = value; }  // NOLINT(google-explicit-constructor)

  double value() const { return c_[0]; }
  /// Plain partial derivative for `idx`; throws OrderOverflow when |idx| > 3.
  double extract(MultiIndex idx) const;
  double operator()(int i, int j, int k) const { return extract({i, j, k}); }
  void set(MultiIndex idx, double v);

  const std::array<double, kSize>& coefficients() const { return c_; }
  std::array<double, kSize>& coefficients() { return c_; }

  /// Gradient (first partials).
  std::array<double, 3> gradient() const { return {c_[1], c_[2], c_[3]}; }

  /// Jet of the partial derivative along `axis` (0=s,1=t,2=u). Order drops
  /// by one: the result is exact through order 2; its order-3 slots are 0.
  Jet3 derivative(int axis) const;

  Jet3& operator+=(const Jet3& o);
  Jet3& operator-=(const Jet3& o);
  Jet3& operator*=(const Jet3& o);
  Jet3& operator/=(const Jet3& o);
  Jet3 operator-() const;

  friend Jet3 operator+(Jet3 a, const Jet3& b) { return a += b; }
  friend Jet3 operator-(Jet3 a, const Jet3& b) { return a -= b; }
  friend Jet3 operator*(const Jet3& a, const Jet3& b);
  friend Jet3 operator/(const Jet3& a, const Jet3& b);

  static std::size_t slot(MultiIndex idx);
  static MultiIndex index_of(std::size_t slot);

 private:
  std::array<double, kSize> c_{};
};

using JetPoint4 = Vec4T<Jet3>;

struct SeedJets {
  Jet3 s, t, u;
};

/// Coordinate jets at (s,t,u): value = coordinate, unit first derivative in
/// its own slot.
SeedJets seed(double s, double t, double u);

/// Threshold below which a divisor's value counts as zero.
inline constexpr double kJetDivisionTol = 1e-300;

/// Compose a scalar function given its derivatives f(a0), f'(a0), f''(a0),
/// f'''(a0) at the jet's value.
Jet3 compose(const Jet3& a, const std::array<double, 4>& derivs);

Jet3 sin(const Jet3& a);
Jet3 cos(const Jet3& a);
Jet3 sinh(const Jet3& a);
Jet3 cosh(const Jet3& a);
Jet3 exp(const Jet3& a);
Jet3 log(const Jet3& a);   // DomainError for value <= 0
Jet3 sqrt(const Jet3& a);  // DomainError for value <= 0
Jet3 abs(const Jet3& a);   // sign of the value; DomainError at 0
/// a^p for constant p. Integer p accepts any nonzero base (and zero when
/// p >= 0); fractional p requires a positive base.
Jet3 pow(const Jet3& a, double p);

enum class JetFn { Sin, Cos, Sinh, Cosh, Exp, Ln, Sqrt, PowConst };
Jet3 jet_fn(JetFn f, const Jet3& a, double exponent = 1.0);

}  // namespace bicons4
