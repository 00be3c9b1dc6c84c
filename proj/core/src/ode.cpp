#include <cmath>
#include <vector>

#include "bicons4/profile.hpp"

namespace bicons4 {

namespace {

struct State {
  double s, f, fp;
};

struct Marcher {
  const SecondOrderRhs& F;
  const std::vector<OdeGuard>& guards;
  const Rk4Options& opt;

  // Returns the name of the violated guard, or empty when the state is fine.
  std::string violation(double s, double f, double fp, double fpp) const {
    if (!std::isfinite(f) || !std::isfinite(fp) || !std::isfinite(fpp)) return "non-finite right-hand side";
    for (const OdeGuard& g : guards)
      if (!(std::abs(g.g(s, f, fp)) > opt.delta)) return g.name;
    return {};
  }

  double rhs(double s, double f, double fp) const {
    try {
      return F(s, f, fp);
    } catch (const Error&) {
      return std::nan("");
    }
  }

  bool try_step(const State& y, double h, State& out, std::string& why) const {
    double k1f = y.fp, k1p = rhs(y.s, y.f, y.fp);
    if (!(why = violation(y.s, y.f, y.fp, k1p)).empty()) return false;
    double s2 = y.s + 0.5 * h, f2 = y.f + 0.5 * h * k1f, p2 = y.fp + 0.5 * h * k1p;
    double k2f = p2, k2p = rhs(s2, f2, p2);
    if (!(why = violation(s2, f2, p2, k2p)).empty()) return false;
    double f3 = y.f + 0.5 * h * k2f, p3 = y.fp + 0.5 * h * k2p;
    double k3f = p3, k3p = rhs(s2, f3, p3);
    if (!(why = violation(s2, f3, p3, k3p)).empty()) return false;
    double s4 = y.s + h, f4 = y.f + h * k3f, p4 = y.fp + h * k3p;
    double k4f = p4, k4p = rhs(s4, f4, p4);
    if (!(why = violation(s4, f4, p4, k4p)).empty()) return false;
    out.s = s4;
    out.f = y.f + h / 6.0 * (k1f + 2 * k2f + 2 * k3f + k4f);
    out.fp = y.fp + h / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p);
    double endp = rhs(out.s, out.f, out.fp);
    return (why = violation(out.s, out.f, out.fp, endp)).empty();
  }

  std::vector<State> march(State y, double end, double dir) const {
    std::vector<State> path;
    const double hmin = opt.step * std::ldexp(1.0, -opt.max_halvings);
    int n = 0;
    const State start = y;
    while (dir * (end - y.s) > 1e-12 * opt.step) {
      double h = opt.step;
      // Nominal nodes sit at s0 + n*step; recompute from the start to avoid drift.
      double target = start.s + dir * (n + 1) * opt.step;
      if (dir * (target - end) > 0) target = end;
      h = std::abs(target - y.s);
      State next{};
      std::string why;
      while (!try_step(y, dir * h, next, why)) {
        h *= 0.5;
        if (h < hmin) {
          char buf[64];
          std::snprintf(buf, sizeof buf, " near s=%.17g", y.s);
          throw Error(ErrorKind::GuardHit, "guard '" + why + "' violated" + buf, y.s);
        }
      }
      if (std::abs(next.s - target) < 1e-15 * std::max(1.0, std::abs(target))) next.s = target;
      y = next;
      path.push_back(y);
      if (std::abs(y.s - target) <= 1e-15 * std::max(1.0, std::abs(target))) ++n;
    }
    return path;
  }
};

}  // namespace

ProfileSolution ode_rk4(const SecondOrderRhs& F, const OdeInit& init, std::array<double, 2> interval,
                        const std::vector<OdeGuard>& guards, const Rk4Options& opt) {
  if (!(opt.step > 0) || !std::isfinite(opt.step)) throw Error(ErrorKind::BadParams, "step must be positive");
  if (!(interval[0] < interval[1]) || init.s0 < interval[0] || init.s0 > interval[1])
    throw Error(ErrorKind::BadParams, "interval must be increasing and contain the initial abscissa s0");
  Marcher m{F, guards, opt};
  State y0{init.s0, init.f0, init.fp0};
  double f0pp = m.rhs(y0.s, y0.f, y0.fp);
  std::string why = m.violation(y0.s, y0.f, y0.fp, f0pp);
  if (!why.empty()) throw Error(ErrorKind::GuardHit, "guard '" + why + "' violated at the initial point", y0.s);

  std::vector<State> back = m.march(y0, interval[0], -1.0);
  std::vector<State> fwd = m.march(y0, interval[1], 1.0);
  std::vector<double> s, f, fp, fpp;
  auto push = [&](const State& st) {
    s.push_back(st.s);
    f.push_back(st.f);
    fp.push_back(st.fp);
    fpp.push_back(m.rhs(st.s, st.f, st.fp));
  };
  for (auto it = back.rbegin(); it != back.rend(); ++it) push(*it);
  push(y0);
  for (const State& st : fwd) push(st);
  return ProfileSolution(std::move(s), std::move(f), std::move(fp), std::move(fpp), opt.provenance);
}

}  // namespace bicons4
