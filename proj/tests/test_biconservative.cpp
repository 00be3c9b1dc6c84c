#include <gtest/gtest.h>

#include <cstdlib>
#include <random>

#include "bicons4/biconservative.hpp"
#include "bicons4/catalog.hpp"
#include "bicons4/error.hpp"
#include "bicons4/report.hpp"
#include "oracles.hpp"

using namespace bicons4;

namespace {

ImmersionPatch nullcone(MetricSignature sig, std::array<double, 2> r = {0.5, 3}) {
  FamilySpec spec{FamilyId::NullCone, sig, {{"a", 1}, {"c1", sig == MetricSignature::Riemannian ? -1.0 : 1.0}}};
  return build_family(spec, profile_closed_form(spec, r), r);
}

ImmersionPatch x1(MetricSignature sig, Branch br, double c1 = 2) {
  FamilySpec spec{FamilyId::X1, sig, {{"c1", c1}}, br};
  auto r = default_s_range(spec);
  return build_family(spec, profile_closed_form(spec, r), r);
}

ImmersionPatch synthesized(FamilyId id, MetricSignature sig) {
  FamilySpec spec{id, sig, {{"a", 1}}};
  OdeInit init = default_init(spec);
  std::array<double, 2> iv{init.s0, init.s0 + 0.5};
  return build_family(spec, profile_synthesize(spec, init, iv), iv);
}

// f1(s) = s^2 tabulated: a deliberately wrong x1 profile.
ImmersionPatch x1_wrong() {
  std::vector<double> s, f, fp, fpp;
  for (int i = 0; i <= 40; ++i) {
    double x = 0.5 + 1.5 * i / 40.0;
    s.push_back(x);
    f.push_back(x * x);
    fp.push_back(2 * x);
    fpp.push_back(2);
  }
  FamilySpec spec{FamilyId::X1, MetricSignature::Riemannian, {}};
  return build_family(spec, ProfileSolution(s, f, fp, fpp, Provenance::Tabulated), {0.5, 2});
}

struct ThreadEnv {
  explicit ThreadEnv(const char* n) { setenv("BICONS4_THREADS", n, 1); }
  ~ThreadEnv() { unsetenv("BICONS4_THREADS"); }
};

}  // namespace

TEST(Residual, DeSitterIsCmc) {
  auto r = residual(oracle::de_sitter(), {0.2, 0.6, 0.4});
  EXPECT_LT(r.residual_norm, 1e-10);
  EXPECT_EQ(r.kase, PointCase::CMC);
  EXPECT_EQ(r.epsilon, 1);
}

TEST(Residual, HyperplaneGrid) {
  auto v = grid_verify(oracle::hyperplane(), {5, 5, 5});
  EXPECT_EQ(v.max_residual, 0.0);
  EXPECT_EQ(v.points, 125);
  EXPECT_TRUE(v.pass);
}

TEST(Residual, NullConeRiemannian) {
  auto p = nullcone(MetricSignature::Riemannian);
  for (ChartPoint q : {ChartPoint{0.7, 0.1, -0.2}, ChartPoint{1.9, -0.4, 0.3}, ChartPoint{2.8, 0.0, 0.45}}) {
    auto r = residual(p, q);
    EXPECT_LT(r.residual_norm, 1e-6);
    EXPECT_EQ(r.kase, PointCase::ThreeDistinct);
    EXPECT_EQ(r.epsilon, -1);
    EXPECT_LT(std::abs(r.scalar_riemannian), 1e-6);
  }
}

TEST(Residual, WrongProfileNegativeControl) {
  auto v = grid_verify(x1_wrong(), {4, 4, 4});
  EXPECT_GT(v.max_residual, 1e-2);
  EXPECT_FALSE(v.pass);
  auto pts = grid_points(x1_wrong().domain, {4, 4, 4});
  int big = 0;
  for (const auto& q : pts) big += residual(x1_wrong(), q).residual_norm > 1e-2;
  EXPECT_EQ(big, static_cast<int>(pts.size()));
}

TEST(K1Relation, Signatures) {
  auto pr = nullcone(MetricSignature::Riemannian);
  auto c = principal_curvatures(pr, {1.2, 0.1, 0.1});
  EXPECT_LT(check_k1_relation(c), 1e-7);
  EXPECT_NEAR(c.k[0], 1.5 * c.H, 1e-7);
  auto pl = nullcone(MetricSignature::Lorentzian);
  auto d = principal_curvatures(pl, {1.2, 0.1, 0.1});
  EXPECT_LT(check_k1_relation(d), 1e-7);
  EXPECT_NEAR(-3 * d.k[0], d.k[1] + d.k[2], 1e-7);
  try {
    check_k1_relation(principal_curvatures(oracle::de_sitter(), {0.1, 0.5, 0.5}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::GradTooSmall);
  }
}

TEST(Residual, ScalarAndVectorFormsAgree) {
  std::vector<ImmersionPatch> good = {nullcone(MetricSignature::Riemannian), nullcone(MetricSignature::Lorentzian),
                                      x1(MetricSignature::Lorentzian, Branch::Printed),
                                      x1(MetricSignature::Riemannian, Branch::Complement)};
  for (const auto& p : good) {
    for (const auto& q : grid_points(p.domain, {3, 3, 3})) {
      auto r = residual(p, q);
      ASSERT_GT(r.grad_norm, 1e-8);
      EXPECT_LT(r.residual_norm, 1e-6);
      EXPECT_LT(std::abs(r.epsilon == -1 ? r.scalar_riemannian : r.scalar_lorentzian), 1e-6) << p.label;
      ASSERT_TRUE(r.k1_relation.has_value());
      EXPECT_LT(*r.k1_relation, 1e-6);
    }
  }
  // Wrong profiles fail both forms together.
  std::vector<ImmersionPatch> bad = {x1_wrong(), x1(MetricSignature::Riemannian, Branch::Printed),
                                     x1(MetricSignature::Lorentzian, Branch::Complement)};
  for (const auto& p : bad) {
    for (const auto& q : grid_points(p.domain, {3, 3, 3})) {
      auto r = residual(p, q);
      double sc = std::abs(r.epsilon == -1 ? r.scalar_riemannian : r.scalar_lorentzian);
      EXPECT_GT(r.residual_norm, 1e-3);
      EXPECT_GT(sc, 1e-3);
    }
  }
}

TEST(Residual, TwoDistinctSpecializations) {
  std::vector<ImmersionPatch> fams = {x1(MetricSignature::Lorentzian, Branch::Printed),
                                      x1(MetricSignature::Riemannian, Branch::Complement),
                                      synthesized(FamilyId::X2, MetricSignature::Lorentzian),
                                      synthesized(FamilyId::X3, MetricSignature::Riemannian),
                                      synthesized(FamilyId::X4, MetricSignature::Lorentzian)};
  for (const auto& p : fams) {
    for (const auto& q : grid_points(p.domain, {3, 3, 3})) {
      auto c = principal_curvatures(p, q);
      ASSERT_EQ(c.distinct_count, 2) << p.label;
      if (c.epsilon == -1) EXPECT_LT(std::abs(c.k[0] - 2 * c.k[1]), 1e-6) << p.label;
      else EXPECT_LT(std::abs(3 * c.k[0] + 2 * c.k[1]), 1e-6) << p.label;
    }
  }
}

TEST(GridVerify, DegenerateLocusReportsPoint) {
  // f = s^2/2 has f' = 1 at s = 1, where x_s turns null.
  ImmersionPatch p;
  p.domain = {{0.5, 0.2, 0.4}, {1.5, 1.2, 1.4}};
  p.eval = [](const Jet3& s, const Jet3& t, const Jet3& u) {
    return JetPoint4{{Jet3(0.5) * s * s, s * cos(t) * sin(u), s * sin(t) * sin(u), s * cos(u)}};
  };
  try {
    grid_verify(p, {3, 2, 2});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateMetric);
    ASSERT_TRUE(e.location().has_value());
    EXPECT_DOUBLE_EQ(*e.location(), 1.0);
    EXPECT_NE(std::string(e.what()).find("(s,t,u)=(1,"), std::string::npos) << e.what();
  }
}

TEST(GridVerify, NullConeSummary) {
  auto v = grid_verify(nullcone(MetricSignature::Riemannian), {8, 8, 8});
  EXPECT_LT(v.max_residual, 1e-6);
  EXPECT_EQ(v.kase, PointCase::ThreeDistinct);
  EXPECT_EQ(v.distinct_histogram[2], 512);
  EXPECT_EQ(v.epsilon, -1);
  EXPECT_TRUE(v.signature_consistent);
  EXPECT_LT(v.max_gauss, 1e-6);
  EXPECT_LT(v.max_codazzi, 1e-6);
  for (const auto& w : v.omega_max) {
    ASSERT_TRUE(w.has_value());
    EXPECT_LT(*w, 1e-6);
  }
  EXPECT_LT(v.max_dH_t, 1e-7);
  EXPECT_LT(v.max_dH_u, 1e-7);
  EXPECT_TRUE(v.pass);
}

TEST(GridVerify, ThreadCountDoesNotChangeOutput) {
  auto p = nullcone(MetricSignature::Lorentzian);
  std::string one, four;
  {
    ThreadEnv env("1");
    EXPECT_EQ(thread_count(), 1);
    one = to_json(grid_verify(p, {6, 5, 4}));
  }
  {
    ThreadEnv env("4");
    EXPECT_EQ(thread_count(), 4);
    four = to_json(grid_verify(p, {6, 5, 4}));
  }
  EXPECT_EQ(one, four);
}

TEST(GridVerify, RotationalCorrectedOde) {
  FamilySpec spec{FamilyId::RotCoshSinh, MetricSignature::Riemannian, {}};
  OdeInit init{1, 1, 2};
  auto prof = ode_rk4(rotational_ode(spec.id, spec.signature, OdeVariant::Corrected), init, {1.0, 1.1},
                      rotational_guards(spec.id));
  auto v = grid_verify(build_family(spec, prof, {1.0, 1.1}), {10, 10, 10});
  EXPECT_LT(v.max_residual, 1e-5);
  EXPECT_EQ(v.epsilon, -1);
}

TEST(GridVerify, JsonFieldOrder) {
  auto js = to_json(grid_verify(oracle::hyperplane(), {2, 2, 2}), {{"family", std::string("plane")}});
  const char* keys[] = {"\"family\"", "\"label\"", "\"max_residual\"", "\"mean_residual\"", "\"epsilon\"",
                        "\"case\"", "\"worst_point\"", "\"distinct_count\"", "\"gauss_residual\"",
                        "\"codazzi_residual\"", "\"connection_forms\"", "\"pass\""};
  std::size_t pos = 0;
  for (const char* k : keys) {
    auto at = js.find(k, pos);
    ASSERT_NE(at, std::string::npos) << k;
    pos = at;
  }
  EXPECT_EQ(format_real(0.1), "0.10000000000000001");
}
