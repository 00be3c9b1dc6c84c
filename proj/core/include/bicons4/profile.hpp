#pragma once

// Profile functions f(s) of the catalogue families, tabulated on a strictly
// increasing grid of s with f, f', f''. Between nodes:
//   f   : cubic Hermite on (f, f')
//   f'  : cubic Hermite on (f', f'')
//   f'' : cubic Hermite on (f'', finite-difference slopes of f'')
//   f''': derivative of the f'' interpolant
// Closed-form profiles carry analytic derivatives and bypass interpolation
// for f', f'', f'''.

#include <array>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bicons4/jet.hpp"

namespace bicons4 {

enum class Provenance { Quadrature, ExplicitODE, Synthesized, Tabulated };
std::string_view to_string(Provenance p);

struct ClosedForm {
  std::function<double(double)> f;                      // optional; otherwise f is integrated from the table
  std::function<std::array<double, 3>(double)> derivs;  // f', f'', f'''
};

class ProfileSolution {
 public:
  ProfileSolution() = default;
  ProfileSolution(std::vector<double> s, std::vector<double> f, std::vector<double> fp, std::vector<double> fpp,
                  Provenance prov);

  const std::vector<double>& s() const { return s_; }
  const std::vector<double>& f() const { return f_; }
  const std::vector<double>& fp() const { return fp_; }
  const std::vector<double>& fpp() const { return fpp_; }
  Provenance provenance() const { return prov_; }
  std::array<double, 2> valid_interval() const { return {s_.front(), s_.back()}; }

  void set_closed_form(ClosedForm cf) { closed_ = std::move(cf); }
  bool has_closed_form() const { return closed_.has_value(); }

  /// f, f', f'', f''' at s. Throws IntervalMismatch outside the table.
  std::array<double, 4> eval(double s) const;
  /// Composes the profile with a jet in s.
  Jet3 lift(const Jet3& s) const;

  void write_csv(std::ostream& os) const;
  /// Reads "s,f,fp,fpp" CSV. Throws Io on malformed input.
  static ProfileSolution read_csv(std::istream& is);
  static ProfileSolution read_csv_file(const std::string& path);

 private:
  std::size_t locate(double s) const;

  std::vector<double> s_, f_, fp_, fpp_, fpp_slope_;
  Provenance prov_ = Provenance::Tabulated;
  std::optional<ClosedForm> closed_;
};

/// Adaptive Gauss-Kronrod (7/15) quadrature to |error estimate| < tol.
/// Throws SingularEndpoint when fn is not finite at an endpoint (unless
/// allowed), NoConvergence when refinement fails or fn is not finite inside.
double integrate(const std::function<double(double)>& fn, double a, double b, double tol = 1e-10,
                 bool allow_singular_endpoints = false);

struct OdeInit {
  double s0 = 0, f0 = 0, fp0 = 0;
};

using SecondOrderRhs = std::function<double(double s, double f, double fp)>;

struct OdeGuard {
  std::string name;
  std::function<double(double s, double f, double fp)> g;  // must stay |g| > delta
};

struct Rk4Options {
  double step = 1e-3;
  double delta = 1e-4;
  int max_halvings = 10;
  Provenance provenance = Provenance::ExplicitODE;
};

/// Classical fixed-step RK4 for f'' = F(s,f,f') from s0 in both directions
/// over [lo, hi] (s0 inside). A step whose stages violate a guard or give a
/// non-finite F is halved; below step * 2^-max_halvings, GuardHit is thrown
/// with the offending s.
ProfileSolution ode_rk4(const SecondOrderRhs& F, const OdeInit& init, std::array<double, 2> interval,
                        const std::vector<OdeGuard>& guards = {}, const Rk4Options& opt = {});

}  // namespace bicons4
