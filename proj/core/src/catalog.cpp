#include "bicons4/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

namespace bicons4 {

namespace {

using MS = MetricSignature;
constexpr double kInf = std::numeric_limits<double>::infinity();

const std::vector<FamilyInfo>& registry() {
  static const std::vector<FamilyInfo> r = {
      {FamilyId::X1, "x1", "two distinct curvatures, round-sphere slices",
       "(f(s), s cos t sin u, s sin t sin u, s cos u)",
       {{"c1", "integration constant of the closed-form profile", true},
        {"branch", "printed | complement", false},
        {"signature", "riemannian | lorentzian", true}},
       {MS::Riemannian, MS::Lorentzian}, "closed-form"},
      {FamilyId::X2, "x2", "two distinct curvatures, de Sitter slices",
       "(s sinh u sin t, s cosh u sin t, s cos t, f(s))",
       {{"signature", "lorentzian", true}, {"init", "s0,f0,fp0", false}},
       {MS::Lorentzian}, "synthesized"},
      {FamilyId::X3, "x3", "two distinct curvatures, hyperbolic-plane slices",
       "(s cosh t, s sinh t sin u, s sinh t cos u, f(s))",
       {{"signature", "riemannian | lorentzian", true}, {"init", "s0,f0,fp0", false}},
       {MS::Riemannian, MS::Lorentzian}, "synthesized"},
      {FamilyId::X4, "x4", "two distinct curvatures, flat marginally trapped slices",
       "(s(t^2+u^2)/2 + s + f(s), s t, s u, s(t^2+u^2)/2 + f(s))",
       {{"signature", "riemannian | lorentzian", true}, {"init", "s0,f0,fp0", false}},
       {MS::Riemannian, MS::Lorentzian}, "synthesized"},
      {FamilyId::CylE3, "cyl-e3", "cylinder over a rotational surface of E^3 times a timelike line",
       "(u, s cos t, s sin t, f(s))",
       {{"signature", "lorentzian", true}, {"init", "s0,f0,fp0", false}},
       {MS::Lorentzian}, "synthesized"},
      {FamilyId::CylE31Riem, "cyl-e31-riem", "cylinder over a spacelike rotational surface of E^3_1",
       "(f(s), s cos t, s sin t, u), |f'| < 1",
       {{"signature", "riemannian", true}, {"init", "s0,f0,fp0", false}},
       {MS::Riemannian}, "synthesized"},
      {FamilyId::CylE31Lor, "cyl-e31-lor", "cylinder over a timelike rotational surface of E^3_1",
       "(f(s), s cos t, s sin t, u), |f'| > 1",
       {{"signature", "lorentzian", true}, {"init", "s0,f0,fp0", false}},
       {MS::Lorentzian}, "synthesized"},
      {FamilyId::RotCoshSinh, "rot-cosh", "three distinct curvatures, hyperbolic-circle times circle slices",
       "(s cosh t, s sinh t, f(s) cos u, f(s) sin u)",
       {{"signature", "riemannian | lorentzian", true},
        {"ode", "printed | corrected | synthesize", false},
        {"init", "s0,f0,fp0", false}},
       {MS::Riemannian, MS::Lorentzian}, "ode"},
      {FamilyId::RotSinhCosh, "rot-sinh", "three distinct curvatures, Lorentzian torus slices",
       "(s sinh t, s cosh t, f(s) cos u, f(s) sin u)",
       {{"signature", "riemannian | lorentzian", true},
        {"ode", "printed | corrected | synthesize", false},
        {"init", "s0,f0,fp0", false}},
       {MS::Riemannian, MS::Lorentzian}, "ode"},
      {FamilyId::NullCone, "nullcone", "three distinct curvatures, degenerate-hyperplane slices",
       "(s(t^2+u^2)/2 + a u^2 + s + phi(s), s t, (s+2a) u, s(t^2+u^2)/2 + a u^2 + phi(s))",
       {{"a", "nonzero shape constant", true},
        {"c1", "nonzero integration constant", true},
        {"signature", "riemannian | lorentzian", true}},
       {MS::Riemannian, MS::Lorentzian}, "closed-form"},
      {FamilyId::NullConeDegenerate, "nullcone-degenerate", "the null-cone construction with one shape constant zero",
       "(s t^2/2 + s + phi(s), s t, s t^2/2 + phi(s), u)",
       {{"signature", "riemannian | lorentzian", true}, {"init", "s0,f0,fp0", false}},
       {MS::Riemannian, MS::Lorentzian}, "synthesized"},
  };
  return r;
}

double sig_eps(MS sig) { return sig == MS::Riemannian ? -1.0 : 1.0; }

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

const std::vector<FamilyInfo>& family_registry() { return registry(); }

const FamilyInfo& family_info(FamilyId id) {
  for (const auto& f : registry())
    if (f.id == id) return f;
  throw Error(ErrorKind::UnknownFamily, "unregistered family id");
}

std::optional<FamilyId> parse_family(std::string_view name) {
  for (const auto& f : registry())
    if (f.name == name) return f.id;
  return std::nullopt;
}

std::string_view to_string(FamilyId id) { return family_info(id).name; }
std::string_view to_string(Branch b) { return b == Branch::Printed ? "printed" : "complement"; }
std::string_view to_string(OdeVariant v) {
  switch (v) {
    case OdeVariant::Printed: return "printed";
    case OdeVariant::Corrected: return "corrected";
    case OdeVariant::Synthesize: return "synthesize";
  }
  return "?";
}

double require_param(const Params& p, const std::string& name) {
  auto it = p.find(name);
  if (it == p.end()) throw Error(ErrorKind::MissingParam, "missing required parameter '" + name + "'");
  if (!std::isfinite(it->second)) throw Error(ErrorKind::BadParams, "parameter '" + name + "' must be finite");
  return it->second;
}

std::vector<Interval> domain_guard(const FamilySpec& spec, double delta) {
  std::vector<Interval> out;
  switch (spec.id) {
    case FamilyId::X1: {
      double c = require_param(spec.params, "c1");
      if (c == 0) throw Error(ErrorKind::BadParams, "parameter 'c1' must be nonzero");
      if (spec.branch == Branch::Complement) {
        out.push_back({delta, kInf});
      } else if (spec.signature == MS::Riemannian) {
        out.push_back({std::pow((1.0 + delta) / (c * c), 0.25), kInf});
      } else {
        if (c * c - delta <= delta)
          throw Error(ErrorKind::EmptyDomain, "c1^2 - s^(4/3) > delta has no solution with s > delta for c1=" + fmt(c));
        out.push_back({delta, std::pow(c * c - delta, 0.75)});
      }
      break;
    }
    case FamilyId::NullCone: {
      double a = require_param(spec.params, "a");
      if (a == 0) throw Error(ErrorKind::BadParams, "parameter 'a' must be nonzero");
      out.push_back({std::max(delta, -2.0 * a + delta), kInf});
      break;
    }
    default:
      out.push_back({delta, kInf});
  }
  return out;
}

std::array<std::array<double, 2>, 2> default_tu_range(FamilyId id) {
  switch (id) {
    case FamilyId::X1: return {{{0.2, 1.2}, {0.4, 1.4}}};
    case FamilyId::X2: return {{{0.4, 1.4}, {-0.5, 0.5}}};
    case FamilyId::X3: return {{{0.3, 1.3}, {0.2, 1.2}}};
    case FamilyId::CylE3:
    case FamilyId::CylE31Riem:
    case FamilyId::CylE31Lor: return {{{0.2, 1.2}, {-0.5, 0.5}}};
    case FamilyId::RotCoshSinh:
    case FamilyId::RotSinhCosh: return {{{-0.5, 0.5}, {0.2, 1.2}}};
    case FamilyId::X4:
    case FamilyId::NullCone:
    case FamilyId::NullConeDegenerate: return {{{-0.5, 0.5}, {-0.5, 0.5}}};
  }
  return {{{0, 1}, {0, 1}}};
}

std::array<double, 2> default_s_range(const FamilySpec& spec) {
  Interval iv = domain_guard(spec).front();
  if (std::isfinite(iv.hi)) return {iv.lo + 0.2 * (iv.hi - iv.lo), iv.lo + 0.8 * (iv.hi - iv.lo)};
  return {iv.lo + 0.5, iv.lo + 3.0};
}

namespace {

ClosedForm x1_closed_form(const FamilySpec& spec) {
  const double c = require_param(spec.params, "c1");
  ClosedForm cf;
  const bool riem = spec.signature == MS::Riemannian;
  if (riem && spec.branch == Branch::Printed) {
    cf.derivs = [c](double s) {
      double w = c * c * s * s * s * s - 1.0;
      double fp = c * s * s / std::sqrt(w);
      double fpp = -2.0 * c * s * std::pow(w, -1.5);
      double fppp = -2.0 * c * std::pow(w, -1.5) + 12.0 * c * c * c * s * s * s * s * std::pow(w, -2.5);
      return std::array<double, 3>{fp, fpp, fppp};
    };
  } else if (riem) {
    cf.derivs = [c](double s) {
      double w = 1.0 + c * c * s * s * s * s;
      double fp = c * s * s / std::sqrt(w);
      double fpp = 2.0 * c * s * std::pow(w, -1.5);
      double fppp = 2.0 * c * std::pow(w, -1.5) - 12.0 * c * c * c * s * s * s * s * std::pow(w, -2.5);
      return std::array<double, 3>{fp, fpp, fppp};
    };
  } else if (spec.branch == Branch::Printed) {
    cf.derivs = [c](double s) {
      double w = c * c - std::pow(s, 4.0 / 3.0);
      double fp = c / std::sqrt(w);
      double fpp = (2.0 * c / 3.0) * std::cbrt(s) * std::pow(w, -1.5);
      double fppp = (2.0 * c / 3.0) * (std::pow(s, -2.0 / 3.0) / 3.0 * std::pow(w, -1.5) +
                                      2.0 * std::pow(s, 2.0 / 3.0) * std::pow(w, -2.5));
      return std::array<double, 3>{fp, fpp, fppp};
    };
  } else {
    cf.derivs = [c](double s) {
      double w = c * c + std::pow(s, 4.0 / 3.0);
      double fp = c / std::sqrt(w);
      double fpp = -(2.0 * c / 3.0) * std::cbrt(s) * std::pow(w, -1.5);
      double fppp = -(2.0 * c / 3.0) * (std::pow(s, -2.0 / 3.0) / 3.0 * std::pow(w, -1.5) -
                                       2.0 * std::pow(s, 2.0 / 3.0) * std::pow(w, -2.5));
      return std::array<double, 3>{fp, fpp, fppp};
    };
  }
  return cf;
}

ClosedForm nullcone_closed_form(const FamilySpec& spec) {
  const double a = require_param(spec.params, "a");
  const double c = require_param(spec.params, "c1");
  if (a == 0) throw Error(ErrorKind::BadParams, "parameter 'a' must be nonzero");
  if (c == 0) throw Error(ErrorKind::BadParams, "parameter 'c1' must be nonzero");
  ClosedForm cf;
  if (spec.signature == MS::Riemannian) {
    cf.f = [a, c](double s) {
      return c * (std::log(s + 2 * a) - std::log(s) - a / s - a / (s + 2 * a)) - 0.5 * s;
    };
    cf.derivs = [a, c](double s) {
      double q = s * (s + 2 * a);
      double a3 = a * a * a;
      double fp = 4 * c * a3 / (q * q) - 0.5;
      double fpp = -16 * c * a3 * (s + a) / (q * q * q);
      double fppp = -16 * c * a3 * (1.0 / (q * q * q) - 6 * (s + a) * (s + a) / (q * q * q * q));
      return std::array<double, 3>{fp, fpp, fppp};
    };
  } else {
    cf.derivs = [a, c](double s) {
      double q = s * (s + 2 * a);
      double fp = c * std::pow(q, 2.0 / 3.0) - 0.5;
      double fpp = (4 * c / 3) * (s + a) * std::pow(q, -1.0 / 3.0);
      double fppp = (4 * c / 3) * (std::pow(q, -1.0 / 3.0) - (2.0 / 3.0) * (s + a) * (s + a) * std::pow(q, -4.0 / 3.0));
      return std::array<double, 3>{fp, fpp, fppp};
    };
  }
  return cf;
}

}  // namespace

ProfileSolution profile_closed_form(const FamilySpec& spec, std::array<double, 2> interval, int nodes) {
  ClosedForm cf;
  if (spec.id == FamilyId::X1)
    cf = x1_closed_form(spec);
  else if (spec.id == FamilyId::NullCone)
    cf = nullcone_closed_form(spec);
  else
    throw Error(ErrorKind::BadParams, "family '" + std::string(to_string(spec.id)) + "' has no closed-form profile");
  if (nodes < 2) throw Error(ErrorKind::BadParams, "at least two profile nodes are required");
  if (!(interval[0] < interval[1])) throw Error(ErrorKind::BadParams, "profile interval must be increasing");

  std::vector<Interval> dom = domain_guard(spec, kDeltaGuard);
  bool inside = false;
  for (const Interval& iv : dom) inside = inside || (interval[0] >= iv.lo && interval[1] <= iv.hi);
  if (!inside) {
    const Interval& iv = dom.front();
    throw Error(ErrorKind::BadParams,
                "s-interval [" + fmt(interval[0]) + ", " + fmt(interval[1]) + "] leaves the guarded domain (" +
                    fmt(iv.lo) + ", " + fmt(iv.hi) + ")",
                interval[0] < iv.lo ? interval[0] : interval[1]);
  }

  std::vector<double> s(static_cast<std::size_t>(nodes)), f(s.size()), fp(s.size()), fpp(s.size());
  for (int i = 0; i < nodes; ++i) {
    double x = interval[0] + (interval[1] - interval[0]) * i / (nodes - 1);
    if (i == nodes - 1) x = interval[1];
    s[static_cast<std::size_t>(i)] = x;
  }
  auto fprime = [&cf](double x) { return cf.derivs(x)[0]; };
  for (std::size_t i = 0; i < s.size(); ++i) {
    std::array<double, 3> d = cf.derivs(s[i]);
    fp[i] = d[0];
    fpp[i] = d[1];
    if (cf.f)
      f[i] = cf.f(s[i]);
    else
      f[i] = i == 0 ? 0.0 : f[i - 1] + integrate(fprime, s[i - 1], s[i], 1e-13);
  }
  ProfileSolution prof(std::move(s), std::move(f), std::move(fp), std::move(fpp), Provenance::Quadrature);
  prof.set_closed_form(cf);
  return prof;
}

Skeleton family_skeleton(const FamilySpec& spec) {
  switch (spec.id) {
    case FamilyId::X1:
      return [](const Jet3& s, const Jet3& t, const Jet3& u, const Jet3& f) {
        Jet3 su = sin(u);
        return JetPoint4{{f, s * cos(t) * su, s * sin(t) * su, s * cos(u)}};
      };
    case FamilyId::X2:
      return [](const Jet3& s, const Jet3& t, const Jet3& u, const Jet3& f) {
        Jet3 st = sin(t);
        return JetPoint4{{s * sinh(u) * st, s * cosh(u) * st, s * cos(t), f}};
      };
    case FamilyId::X3:
      return [](const Jet3& s, const Jet3& t, const Jet3& u, const Jet3& f) {
        Jet3 sh = s * sinh(t);
        return JetPoint4{{s * cosh(t), sh * sin(u), sh * cos(u), f}};
      };
    case FamilyId::CylE3:
      return [](const Jet3& s, const Jet3& t, const Jet3& u, const Jet3& f) {
        return JetPoint4{{u, s * cos(t), s * sin(t), f}};
      };
    case FamilyId::CylE31Riem:
    case FamilyId::CylE31Lor:
      return [](const Jet3& s, const Jet3& t, const Jet3& u, const Jet3& f) {
        return JetPoint4{{f, s * cos(t), s * sin(t), u}};
      };
    case FamilyId::RotCoshSinh:
      return [](const Jet3& s, const Jet3& t, const Jet3& u, const Jet3& f) {
        return JetPoint4{{s * cosh(t), s * sinh(t), f * cos(u), f * sin(u)}};
      };
    case FamilyId::RotSinhCosh:
      return [](const Jet3& s, const Jet3& t, const Jet3& u, const Jet3& f) {
        return JetPoint4{{s * sinh(t), s * cosh(t), f * cos(u), f * sin(u)}};
      };
    case FamilyId::X4:
    case FamilyId::NullCone: {
      double a = spec.id == FamilyId::X4 ? 0.0 : require_param(spec.params, "a");
      return [a](const Jet3& s, const Jet3& t, const Jet3& u, const Jet3& f) {
        Jet3 q = Jet3(0.5) * s * (t * t + u * u) + Jet3(a) * u * u + f;
        return JetPoint4{{q + s, s * t, (s + Jet3(2 * a)) * u, q}};
      };
    }
    case FamilyId::NullConeDegenerate:
      return [](const Jet3& s, const Jet3& t, const Jet3& u, const Jet3& f) {
        Jet3 q = Jet3(0.5) * s * t * t + f;
        return JetPoint4{{q + s, s * t, q, u}};
      };
  }
  throw Error(ErrorKind::UnknownFamily, "no skeleton for family");
}

OdeInit default_init(const FamilySpec& spec) {
  const bool riem = spec.signature == MS::Riemannian;
  switch (spec.id) {
    case FamilyId::X2: return {1.0, 0.0, 0.5};
    case FamilyId::X3: return {1.0, 0.0, riem ? 2.0 : 0.5};
    case FamilyId::X4:
    case FamilyId::NullCone:
    case FamilyId::NullConeDegenerate: return {1.0, 0.0, riem ? -1.0 : 0.0};
    case FamilyId::CylE3: return {1.0, 0.0, 0.5};
    case FamilyId::CylE31Riem: return {1.0, 0.0, 0.5};
    case FamilyId::CylE31Lor: return {1.0, 0.0, 2.0};
    case FamilyId::RotCoshSinh: return {1.0, 1.0, riem ? 2.0 : 0.5};
    case FamilyId::RotSinhCosh: return {1.0, 1.0, 0.5};
    case FamilyId::X1: return {1.0, 0.0, riem ? 0.5 : 2.0};
  }
  return {1.0, 0.0, 0.5};
}

SecondOrderRhs rotational_ode(FamilyId id, MetricSignature sig, OdeVariant variant) {
  if (variant == OdeVariant::Synthesize) throw Error(ErrorKind::BadParams, "synthesis has no explicit right-hand side");
  const bool printed = variant == OdeVariant::Printed;
  if (id == FamilyId::RotCoshSinh) {
    if (sig == MS::Riemannian) {
      if (printed) return [](double s, double f, double fp) { return (fp * fp - 1) * (f * fp + s) / (s * f); };
      return [](double s, double f, double fp) { return -(fp * fp - 1) * (f * fp + s) / (s * f); };
    }
    if (printed) return [](double s, double f, double fp) { return -(fp * fp - 1) * (f * fp + s) / (3 * s * f); };
    return [](double s, double f, double fp) { return (fp * fp - 1) * (f * fp + s) / (3 * s * f); };
  }
  if (id == FamilyId::RotSinhCosh) {
    if (printed) return [](double s, double f, double fp) { return (fp * fp + 1) * (f * fp + s) / (s * f); };
    return [](double s, double f, double fp) { return (1 + fp * fp) * (s - f * fp) / (3 * s * f); };
  }
  throw Error(ErrorKind::BadParams, "family '" + std::string(to_string(id)) + "' has no explicit ODE");
}

std::vector<OdeGuard> rotational_guards(FamilyId id) {
  std::vector<OdeGuard> g = {{"s != 0", [](double s, double, double) { return s; }},
                             {"f != 0", [](double, double f, double) { return f; }}};
  if (id == FamilyId::RotCoshSinh) g.push_back({"f'^2 != 1", [](double, double, double fp) { return fp * fp - 1; }});
  return g;
}

ScalarCondition scalar_condition(const FamilySpec& spec, double s, double f, double fp, double fpp) {
  Skeleton sk = family_skeleton(spec);
  auto tu = default_tu_range(spec.id);
  ImmersionPatch patch;
  patch.eval = [&](const Jet3& sj, const Jet3& tj, const Jet3& uj) {
    return sk(sj, tj, uj, compose(sj, {f, fp, fpp, 0.0}));
  };
  ChartPoint p{s, 0.5 * (tu[0][0] + tu[0][1]), 0.5 * (tu[1][0] + tu[1][1])};
  FrameData fr = frame_values(patch, p);
  double k1 = fr.S[0][0];
  double rest = fr.S[1][1] + fr.S[2][2];
  double v = fr.epsilon < 0 ? k1 - rest : 3.0 * k1 + rest;
  return {v, fr.epsilon};
}

namespace {

double solve_fpp(const FamilySpec& spec, double s, double f, double fp, const SynthesisOptions& opt) {
  const int want = static_cast<int>(sig_eps(spec.signature));
  auto cond = [&](double x) {
    ScalarCondition c = scalar_condition(spec, s, f, fp, x);
    if (c.epsilon != want)
      throw Error(ErrorKind::BadParams, std::string("profile realises the ") +
                                            (c.epsilon < 0 ? "riemannian" : "lorentzian") + " signature", s);
    return c.value;
  };
  double c0 = cond(0.0);
  if (c0 == 0.0) return 0.0;
  double lo = 0, hi = 0, clo = c0, chi = c0;
  bool found = false;
  for (double w = 1.0; w < 1e18; w *= 2.0) {
    double cp = cond(w);
    if ((cp > 0) != (c0 > 0) || cp == 0) {
      lo = 0, clo = c0, hi = w, chi = cp;
      found = true;
      break;
    }
    double cm = cond(-w);
    if ((cm > 0) != (c0 > 0) || cm == 0) {
      lo = -w, clo = cm, hi = 0, chi = c0;
      found = true;
      break;
    }
  }
  if (!found) throw Error(ErrorKind::NoBracket, "no sign change of the scalar condition in f''", s);
  // Illinois regula falsi.
  double x = lo;
  int side = 0;
  for (int it = 0; it < 200; ++it) {
    x = (lo * chi - hi * clo) / (chi - clo);
    double cx = cond(x);
    if (cx == 0.0 || std::abs(hi - lo) <= opt.root_tol * std::max(1.0, std::abs(x))) return x;
    if ((cx > 0) == (chi > 0)) {
      hi = x;
      chi = cx;
      if (side == -1) clo *= 0.5;
      side = -1;
    } else {
      lo = x;
      clo = cx;
      if (side == 1) chi *= 0.5;
      side = 1;
    }
    if (std::abs(cx) <= 1e-15 * std::max(1.0, std::abs(c0))) return x;
  }
  return x;
}

}  // namespace

ProfileSolution profile_synthesize(const FamilySpec& spec, const OdeInit& init, std::array<double, 2> interval,
                                   const SynthesisOptions& opt) {
  const FamilyInfo& info = family_info(spec.id);
  if (std::find(info.signatures.begin(), info.signatures.end(), spec.signature) == info.signatures.end() &&
      spec.id != FamilyId::RotSinhCosh)
    throw Error(ErrorKind::BadParams, "family '" + info.name + "' does not admit the " +
                                          std::string(to_string(spec.signature)) + " signature");
  // Probe: the condition must be strictly monotone in f'' near the initial data.
  double c_m = scalar_condition(spec, init.s0, init.f0, init.fp0, -1.0).value;
  ScalarCondition c_0 = scalar_condition(spec, init.s0, init.f0, init.fp0, 0.0);
  double c_p = scalar_condition(spec, init.s0, init.f0, init.fp0, 1.0).value;
  if (c_0.epsilon != static_cast<int>(sig_eps(spec.signature)))
    throw Error(ErrorKind::BadParams, "initial data realise the " +
                                          std::string(c_0.epsilon < 0 ? "riemannian" : "lorentzian") +
                                          " signature, not the requested one",
                init.s0);
  double d1 = c_0.value - c_m, d2 = c_p - c_0.value;
  if (!(d1 != 0 && d2 != 0 && (d1 > 0) == (d2 > 0)))
    throw Error(ErrorKind::BadParams, "scalar condition is not monotone in f'' at the initial data", init.s0);

  SecondOrderRhs rhs = [&](double s, double f, double fp) { return solve_fpp(spec, s, f, fp, opt); };
  std::vector<OdeGuard> guards = {{"s != 0", [](double s, double, double) { return s; }}};
  Rk4Options ro;
  ro.step = opt.step;
  ro.delta = opt.delta;
  ro.provenance = Provenance::Synthesized;
  return ode_rk4(rhs, init, interval, guards, ro);
}

ImmersionPatch build_family(const FamilySpec& spec, const ProfileSolution& profile, std::array<double, 2> s_range) {
  auto vi = profile.valid_interval();
  double slack = 1e-12 * std::max(1.0, vi[1] - vi[0]);
  if (!(s_range[0] < s_range[1]) || s_range[0] < vi[0] - slack || s_range[1] > vi[1] + slack)
    throw Error(ErrorKind::IntervalMismatch,
                "requested s-range [" + fmt(s_range[0]) + ", " + fmt(s_range[1]) + "] is not inside the profile interval [" +
                    fmt(vi[0]) + ", " + fmt(vi[1]) + "]",
                s_range[0] < vi[0] ? s_range[0] : s_range[1]);
  auto tu = default_tu_range(spec.id);
  ImmersionPatch patch;
  patch.domain.lo = {s_range[0], tu[0][0], tu[1][0]};
  patch.domain.hi = {s_range[1], tu[0][1], tu[1][1]};
  patch.params = spec.params;
  patch.label = std::string(to_string(spec.id));
  auto prof = std::make_shared<const ProfileSolution>(profile);
  Skeleton sk = family_skeleton(spec);
  patch.eval = [prof, sk](const Jet3& s, const Jet3& t, const Jet3& u) { return sk(s, t, u, prof->lift(s)); };
  return patch;
}

}  // namespace bicons4
