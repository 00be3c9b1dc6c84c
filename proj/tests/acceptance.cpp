// Acceptance run: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria (capped at 1).

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bicons4/biconservative.hpp"
#include "bicons4/catalog.hpp"
#include "bicons4/cli.hpp"
#include "json.hpp"
#include "oracles.hpp"

using namespace bicons4;
using MS = MetricSignature;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int id, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", id, detail.c_str());
  if (!pass) ++failures;
}

void info(const std::string& detail) { std::printf("[INFO] %s\n", detail.c_str()); }

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string name_of(const FamilySpec& spec) {
  std::string n = std::string(to_string(spec.id)) + "/" + std::string(to_string(spec.signature));
  if (spec.id == FamilyId::X1) n += "/" + std::string(to_string(spec.branch));
  return n;
}

std::string tmp_path(const std::string& name) {
  const char* d = std::getenv("BICONS4_TEST_TMP");
  return std::string(d ? d : "/tmp") + "/acceptance_" + name;
}

struct CliRun {
  int code;
  std::string out;
};

CliRun cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str()};
}

void criterion1() {
  auto t0 = Clock::now();
  std::mt19937_64 rng(20241);
  double worst = 0;
  for (const auto& patch : {oracle::de_sitter(), oracle::hyperplane()}) {
    std::array<std::uniform_real_distribution<double>, 3> d{
        std::uniform_real_distribution<double>(patch.domain.lo[0], patch.domain.hi[0]),
        std::uniform_real_distribution<double>(patch.domain.lo[1], patch.domain.hi[1]),
        std::uniform_real_distribution<double>(patch.domain.lo[2], patch.domain.hi[2])};
    for (int i = 0; i < 100; ++i) {
      ChartPoint p{d[0](rng), d[1](rng), d[2](rng)};
      worst = std::max(worst, residual(patch, p).residual_norm);
    }
  }
  double dt = seconds_since(t0);
  report(1, worst < 1e-10 && dt < 1.0,
         fmt("de Sitter + hyperplane, 200 random points: max residual %.2e (< 1e-10), %.3f s (< 1 s)", worst, dt));
}

void criterion2() {
  auto t0 = Clock::now();
  FamilySpec spec{FamilyId::NullCone, MS::Riemannian, {{"a", 1}, {"c1", -1}}};
  auto prof = profile_closed_form(spec, {0.5, 3});
  auto v = grid_verify(build_family(spec, prof, {0.5, 3}), {8, 8, 8});
  double dt = seconds_since(t0);
  double gate = 0, oracle_gap = 0;
  const double a = 1, c1 = -1;
  for (int i = 0; i <= 250; ++i) {
    double s = 0.5 + 2.5 * i / 250.0;
    auto d = prof.eval(s);
    gate = std::max(gate, std::abs(-d[2] / (2 * d[1] + 1) - (1 / s + 1 / (s + 2 * a))));
    double q = s * (s + 2 * a);
    oracle_gap = std::max(oracle_gap, std::abs((2 * d[1] + 1) - 8 * c1 * a * a * a / (q * q)));
  }
  int three = v.distinct_histogram[2];
  bool three_ok = three >= 0.95 * v.points && v.case_histogram[static_cast<std::size_t>(PointCase::ThreeDistinct)] >= 0.95 * v.points;
  bool pass = v.max_residual < 1e-6 && three_ok && v.epsilon == -1 && gate < 1e-10 && oracle_gap < 1e-10 && dt < 5;
  report(2, pass,
         fmt("null cone riemannian a=1 c1=-1, 8^3: max residual %.2e, ThreeDistinct %d/%d, eps %d, gate %.2e, "
             "2phi'+1 oracle gap %.2e, %.3f s",
             v.max_residual, three, v.points, v.epsilon, gate, oracle_gap, dt));
}

void criterion3() {
  FamilySpec spec{FamilyId::NullCone, MS::Lorentzian, {{"a", 1}, {"c1", 1}}};
  auto prof = profile_closed_form(spec, {0.5, 3});
  double gate = 0;
  for (int i = 0; i <= 250; ++i) {
    double s = 0.5 + 2.5 * i / 250.0;
    auto d = prof.eval(s);
    gate = std::max(gate, std::abs(3 * d[2] / (2 * d[1] + 1) - (1 / s + 1 / (s + 2))));
  }
  auto v = grid_verify(build_family(spec, prof, {0.5, 3}), {8, 8, 8});
  report(3, gate < 1e-8 && v.max_residual < 1e-5 && v.epsilon == 1,
         fmt("null cone lorentzian a=1 c1=1: gate %.2e (< 1e-8), 8^3 max residual %.2e (< 1e-5), eps %d", gate,
             v.max_residual, v.epsilon));
}

void criterion4() {
  bool ok = true;
  std::string detail;
  for (auto br : {Branch::Printed, Branch::Complement})
    for (auto sig : {MS::Riemannian, MS::Lorentzian}) {
      FamilySpec spec{FamilyId::X1, sig, {{"c1", 2}}, br};
      auto r = default_s_range(spec);
      auto recs = evaluate_grid(build_family(spec, profile_closed_form(spec, r), r), {6, 6, 6});
      double riem = 0, lor = 0, res = 0;
      int eps = recs.front().report.epsilon;
      for (const auto& rec : recs) {
        riem = std::max(riem, std::abs(rec.report.scalar_riemannian));
        lor = std::max(lor, std::abs(rec.report.scalar_lorentzian));
        res = std::max(res, rec.report.residual_norm);
        if (rec.report.epsilon != eps) eps = 0;
      }
      bool one = (riem < 1e-6) != (lor < 1e-6);
      // The vanishing condition must be the one belonging to the realised eps
      // exactly when the vector residual vanishes.
      bool matches = eps != 0 && ((riem < 1e-6 && eps == -1) || (lor < 1e-6 && eps == 1));
      bool agree = matches == (res < 1e-6);
      ok = ok && one && agree;
      detail += fmt(" %s/%s: k1-(k2+k3) %.1e, 3k1+(k2+k3) %.1e, eps %+d, residual %.1e;",
                    std::string(to_string(br)).c_str(), std::string(to_string(sig)).c_str(), riem, lor, eps, res);
    }
  detail.pop_back();
  report(4, ok, "x1 branch x scalar condition:" + detail);
}

struct OdeCase {
  const char* label;
  FamilyId id;
  MS sig;
  std::vector<OdeInit> inits;
};

std::vector<OdeCase> ode_cases() {
  return {{"(iv)", FamilyId::RotCoshSinh, MS::Riemannian, {{1, 1, 2}, {1, 2, 1.5}, {1.5, 1, 3}}},
          {"(v)", FamilyId::RotCoshSinh, MS::Lorentzian, {{1, 1, 0.5}, {1, 2, -0.3}, {1.5, 1, 0.2}}},
          {"(vi)", FamilyId::RotSinhCosh, MS::Lorentzian, {{1, 1, 0.5}, {1, 2, -0.3}, {1.5, 1, 0.2}}}};
}

struct OdeOutcome {
  bool pass = true;
  std::string detail;
};

OdeOutcome run_odes(OdeVariant variant) {
  OdeOutcome o;
  for (const auto& c : ode_cases()) {
    double worst_res = 0, worst_gap = 0;
    int checked = 0, mismatched = 0, errors = 0;
    for (const auto& init : c.inits) {
      FamilySpec spec{c.id, c.sig, {}};
      std::array<double, 2> iv{init.s0, init.s0 + 0.1};
      try {
        auto ode = ode_rk4(rotational_ode(c.id, c.sig, variant), init, iv, rotational_guards(c.id));
        auto v = grid_verify(build_family(spec, ode, iv), {5, 5, 5});
        int want = c.sig == MS::Riemannian ? -1 : 1;
        if (v.epsilon != want) {
          ++mismatched;
          continue;
        }
        ++checked;
        worst_res = std::max(worst_res, v.max_residual);
        auto syn = profile_synthesize(spec, init, iv);
        for (double s : ode.s()) worst_gap = std::max(worst_gap, std::abs(ode.eval(s)[0] - syn.eval(s)[0]));
      } catch (const Error& e) {
        ++errors;
      }
    }
    bool ok = checked > 0 && errors == 0 && worst_res < 1e-5 && worst_gap < 1e-6;
    o.pass = o.pass && ok;
    o.detail += fmt(" %s %d checked, %d eps mismatch, %d errors, max residual %.1e, |f_ode - f_syn| %.1e;", c.label,
                    checked, mismatched, errors, worst_res, worst_gap);
  }
  o.detail.pop_back();
  return o;
}

void criterion5() {
  auto printed = run_odes(OdeVariant::Printed);
  report(5, printed.pass, "rotational families, printed ODEs:" + printed.detail);
  auto corrected = run_odes(OdeVariant::Corrected);
  info(std::string("criterion 5 with sign-corrected ODEs: ") + (corrected.pass ? "pass" : "fail") + ";" +
       corrected.detail);
}

Params lemma_params(LemmaCase c) {
  switch (c) {
    case LemmaCase::V:
    case LemmaCase::VI: return {{"A", 1.5}, {"B", 0.75}};
    case LemmaCase::VII: return {{"A", 1}, {"B", 0.5}};
    case LemmaCase::VIII:
    case LemmaCase::IX:
    case LemmaCase::X: return {{"r", 2}};
    default: return {{"A", 1}, {"B", 1}};
  }
}

// Profiles for which the family is biconservative: closed forms, the
// corrected rotational ODEs, and synthesis for the rest.
struct FamilyCase {
  FamilySpec spec;
  ProfileSolution profile;
  std::array<double, 2> range;
};

std::vector<FamilyCase> biconservative_families() {
  std::vector<FamilyCase> out;
  for (const auto& info : family_registry())
    for (auto sig : info.signatures) {
      FamilySpec spec{info.id, sig, {{"a", 1}, {"c1", sig == MS::Riemannian ? -1.0 : 1.0}}};
      if (info.id == FamilyId::X1) {
        spec.params = {{"c1", 2}};
        spec.branch = sig == MS::Riemannian ? Branch::Complement : Branch::Printed;
      }
      FamilyCase fc{spec, {}, {}};
      if (info.id == FamilyId::X1 || info.id == FamilyId::NullCone) {
        fc.range = default_s_range(spec);
        fc.profile = profile_closed_form(spec, fc.range);
        out.push_back(fc);
        continue;
      }
      OdeInit init = default_init(spec);
      if (info.id == FamilyId::RotCoshSinh || info.id == FamilyId::RotSinhCosh) {
        fc.range = {init.s0, init.s0 + 0.2};
        try {
          fc.profile = ode_rk4(rotational_ode(info.id, sig, OdeVariant::Corrected), init, fc.range,
                               rotational_guards(info.id));
          // Initial data that cannot realise the requested sign are skipped.
          profile_synthesize(spec, init, fc.range);
        } catch (const Error& e) {
          if (e.kind() == ErrorKind::BadParams) continue;
          throw;
        }
      } else {
        fc.range = {init.s0, init.s0 + 0.5};
        fc.profile = profile_synthesize(spec, init, fc.range);
      }
      out.push_back(fc);
    }
  return out;
}

void criterion6(const std::vector<FamilyCase>& families) {
  bool ok = true;
  double offdiag = 0, variance = 0, pmc = 0, gauss = 0;
  bool trapped = false;
  for (int k = 1; k <= 11; ++k) {
    auto c = static_cast<LemmaCase>(k);
    auto r = slice_check(build_lemma_surface(c, lemma_params(c)));
    offdiag = std::max(offdiag, r.max_offdiag);
    variance = std::max(variance, r.diag_variance);
    pmc = std::max(pmc, r.pmc_residual);
    if (k <= 7) {
      gauss = std::max(gauss, r.max_abs_gauss);
      ok = ok && r.is_flat;
    }
    if (c == LemmaCase::XI) trapped = r.is_marginally_trapped;
  }
  ok = ok && offdiag < 1e-8 && variance < 1e-8 && pmc < 1e-8 && gauss < 1e-8 && trapped;
  double flat = 0;
  int slices = 0;
  for (const auto& fc : families) {
    auto patch = build_family(fc.spec, fc.profile, fc.range);
    auto v = grid_verify(patch, {3, 3, 3});
    if (v.distinct_histogram[2] != v.points) continue;
    for (double w : {0.25, 0.5, 0.75}) {
      auto r = slice_check(slice_of(patch, fc.range[0] + w * (fc.range[1] - fc.range[0])));
      flat = std::max(flat, std::abs(r.flat_relation));
      ++slices;
    }
  }
  ok = ok && slices > 0 && flat < 1e-8;
  report(6, ok,
         fmt("eleven slice surfaces: offdiag %.1e, variance %.1e, pmc %.1e, |K| (i)-(vii) %.1e, (xi) trapped %s; "
             "flat relation on %d three-distinct family slices %.1e",
             offdiag, variance, pmc, gauss, trapped ? "yes" : "no", slices, flat));
}

void criterion7(const std::vector<FamilyCase>& families) {
  bool ok = true;
  std::string bad;
  double dh = 0, om = 0, gc = 0, k1 = 0;
  for (const auto& fc : families) {
    auto v = grid_verify(build_family(fc.spec, fc.profile, fc.range), {6, 6, 6});
    double fam_om = 0;
    for (const auto& w : v.omega_max)
      if (w) fam_om = std::max(fam_om, *w);
    double fam_dh = std::max(v.max_dH_t, v.max_dH_u);
    double fam_gc = std::max(v.max_gauss, v.max_codazzi);
    double fam_k1 = v.max_k1_relation.value_or(0.0);
    bool fam_ok = fam_dh < 1e-7 && fam_om < 1e-6 && fam_gc < 1e-6 && fam_k1 < 1e-6;
    if (!fam_ok) bad += " " + name_of(fc.spec);
    ok = ok && fam_ok;
    dh = std::max(dh, fam_dh);
    om = std::max(om, fam_om);
    gc = std::max(gc, fam_gc);
    k1 = std::max(k1, fam_k1);
  }
  report(7, ok,
         fmt("%zu family realisations: |dH/dt|,|dH/du| %.1e, connection forms %.1e, Gauss/Codazzi %.1e, "
             "k1 relation %.1e",
             families.size(), dh, om, gc, k1) +
             (bad.empty() ? "" : "; failing:" + bad));
}

void criterion8() {
  // eig3 against characteristic-polynomial bisection on random symmetric
  // matrices (real spectrum guaranteed).
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-2, 2);
  double eig_gap = 0;
  for (int n = 0; n < 20; ++n) {
    Mat3 m;
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) m[i][j] = m[j][i] = u(rng);
    auto ref = oracle::eig_bisection(m);
    auto got = eig3(m);
    if (ref.size() != 3) {
      eig_gap = INFINITY;
      continue;
    }
    for (std::size_t i = 0; i < 3; ++i) eig_gap = std::max(eig_gap, std::abs(ref[i] - got.eigenvalues[i]));
  }

  // Jet derivatives against central differences.
  auto expr = [](auto s, auto t, auto u) {
    using std::cos;
    using std::exp;
    using std::sin;
    using std::sqrt;
    return sin(s * t) * exp(u) + cos(t) / (s * s + 1.0) + sqrt(s * s + t * u + 3.0);
  };
  auto fd_fn = [&](double s, double t, double uu) { return expr(s, t, uu); };
  double jet_rel = 0;
  for (int n = 0; n < 10; ++n) {
    std::array<double, 3> p{u(rng) * 0.5, u(rng) * 0.5, u(rng) * 0.5};
    auto sj = seed(p[0], p[1], p[2]);
    Jet3 j = expr(sj.s, sj.t, sj.u);
    for (int a = 0; a < 3; ++a) {
      MultiIndex idx{a == 0, a == 1, a == 2};
      double ref = oracle::fd1(fd_fn, p, a, 1e-5);
      jet_rel = std::max(jet_rel, std::abs(j.extract(idx) - ref) / std::max(1.0, std::abs(ref)));
      for (int b = a; b < 3; ++b) {
        MultiIndex i2{(a == 0) + (b == 0), (a == 1) + (b == 1), (a == 2) + (b == 2)};
        double ref2 = oracle::fd2(fd_fn, p, a, b, 1e-4);
        jet_rel = std::max(jet_rel, std::abs(j.extract(i2) - ref2) / std::max(1.0, std::abs(ref2)));
      }
    }
  }

  // Adaptive quadrature against a 10^6-panel midpoint rule.
  auto w = [](double x) { return std::pow(x * (x + 2), 2.0 / 3.0); };
  double quad_gap = std::abs(integrate(w, 1, 2) - oracle::midpoint(w, 1, 2, 1000000));

  // Negative controls through the CLI.
  std::string path = tmp_path("wrong.csv");
  {
    std::ofstream f(path);
    f << "s,f,fp,fpp\n";
    for (int i = 0; i <= 50; ++i) {
      double s = 1.0 + i * 0.02;
      f << s << "," << s * s << "," << 2 * s << ",2\n";
    }
  }
  bool neg_ok = true;
  std::string neg;
  for (const char* fam : {"x1", "rot-cosh"}) {
    auto r = cli({"verify", "--family", fam, "--a", "1", "--c1", "-1", "--profile-file", path, "--grid", "4x4x4"});
    double res = r.code == 1 ? nlohmann::json::parse(r.out)["max_residual"].get<double>() : 0;
    neg_ok = neg_ok && r.code != 0 && res > 1e-2;
    neg += fmt(" %s exit %d residual %.1e;", fam, r.code, res);
  }
  neg.pop_back();
  bool ok = eig_gap < 1e-10 && jet_rel < 1e-5 && quad_gap < 1e-8 && neg_ok;
  report(8, ok,
         fmt("eig3 vs bisection %.1e, jet vs FD %.1e rel, quadrature vs midpoint %.1e; negative controls:", eig_gap,
             jet_rel, quad_gap) +
             neg);
}

void criterion9() {
  std::vector<std::vector<std::string>> runs = {
      {"verify", "--family", "nullcone", "--a", "1", "--c1", "-1", "--s", "0.5:3", "--grid", "8x8x8"},
      {"verify", "--family", "rot-cosh", "--signature", "lorentzian", "--init", "1,1,0.5", "--ode", "corrected"},
      {"verify", "--family", "x3", "--signature", "lorentzian", "--init", "1,0,0.5"}};
  bool ok = true;
  for (const auto& args : runs) {
    setenv("BICONS4_THREADS", "1", 1);
    auto a = cli(args), a2 = cli(args);
    setenv("BICONS4_THREADS", "4", 1);
    auto b = cli(args), b2 = cli(args);
    ok = ok && !a.out.empty() && a.out == a2.out && a.out == b.out && b.out == b2.out && a.code == b.code;
  }
  unsetenv("BICONS4_THREADS");
  report(9, ok, fmt("verify JSON byte-identical across BICONS4_THREADS=1,4 and repeats for %zu runs", runs.size()));
}

}  // namespace

int main() {
  auto step = [](void (*fn)(), int id) {
    try {
      fn();
    } catch (const std::exception& e) {
      report(id, false, std::string("aborted: ") + e.what());
    }
  };
  step(criterion1, 1);
  step(criterion2, 2);
  step(criterion3, 3);
  step(criterion4, 4);
  step(criterion5, 5);
  std::vector<FamilyCase> families;
  try {
    families = biconservative_families();
  } catch (const std::exception& e) {
    info(std::string("family construction failed: ") + e.what());
  }
  try {
    criterion6(families);
  } catch (const std::exception& e) {
    report(6, false, std::string("aborted: ") + e.what());
  }
  try {
    criterion7(families);
  } catch (const std::exception& e) {
    report(7, false, std::string("aborted: ") + e.what());
  }
  step(criterion8, 8);
  step(criterion9, 9);
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
