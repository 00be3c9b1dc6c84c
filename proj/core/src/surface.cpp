#include "bicons4/surface.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace bicons4 {

namespace {

constexpr std::array<std::string_view, 11> kRoman{"i", "ii", "iii", "iv", "v", "vi", "vii", "viii", "ix", "x", "xi"};

using Vec4J = Vec4T<Jet3>;

Vec4 values(const Vec4J& v) { return {{v[0].value(), v[1].value(), v[2].value(), v[3].value()}}; }
Vec4 grad_part(const Vec4J& v, int axis) {
  return {{v[0].gradient()[axis], v[1].gradient()[axis], v[2].gradient()[axis], v[3].gradient()[axis]}};
}

double euclid(const Vec4& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2] + v[3] * v[3]); }

struct SurfaceJets {
  std::array<Vec4J, 2> yd;
  std::array<std::array<Vec4J, 2>, 2> ydd;
  std::array<std::array<Jet3, 2>, 2> G, Ginv;
};

SurfaceJets surface_jets(const SurfacePatch& patch, double t, double u, const SurfaceOptions& opt) {
  SeedJets sj = seed(0.0, t, u);
  JetPoint4 Y = patch.eval(sj.t, sj.u);
  SurfaceJets j;
  for (int a = 0; a < 2; ++a)
    for (int c = 0; c < 4; ++c) j.yd[a][c] = Y[c].derivative(a + 1);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 4; ++c) j.ydd[a][b][c] = j.yd[a][c].derivative(b + 1);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) j.G[a][b] = inner4(j.yd[a], j.yd[b]);
  Jet3 det = j.G[0][0] * j.G[1][1] - j.G[0][1] * j.G[1][0];
  double scale = std::max({std::abs(j.G[0][0].value()), std::abs(j.G[1][1].value()), std::abs(j.G[0][1].value())});
  if (!(std::abs(det.value()) > opt.linalg.det_rel * scale * scale))
    throw Error(ErrorKind::DegenerateMetric, "surface metric is degenerate", t);
  j.Ginv[0][0] = j.G[1][1] / det;
  j.Ginv[1][1] = j.G[0][0] / det;
  j.Ginv[0][1] = -j.G[0][1] / det;
  j.Ginv[1][0] = j.Ginv[0][1];
  return j;
}

/// Normal part of a vector given tangent values and inverse metric values.
template <class T>
Vec4T<T> normal_part(const Vec4T<T>& v, const std::array<Vec4T<T>, 2>& yd, const std::array<std::array<T, 2>, 2>& Gi) {
  Vec4T<T> r = v;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      T coef = Gi[a][b] * inner4(v, yd[a]);
      r = r - coef * yd[b];
    }
  return r;
}

std::array<Vec4, 2> tangent_values(const SurfaceJets& j) { return {values(j.yd[0]), values(j.yd[1])}; }
std::array<std::array<double, 2>, 2> ginv_values(const SurfaceJets& j) {
  return {{{j.Ginv[0][0].value(), j.Ginv[0][1].value()}, {j.Ginv[1][0].value(), j.Ginv[1][1].value()}}};
}

bool first_nonzero_negative(const Vec4& v) {
  double m = max_abs(v);
  for (int c = 0; c < 4; ++c)
    if (std::abs(v[c]) > 1e-12 * m) return v[c] < 0;
  return false;
}

SurfaceFrame frame_from(const SurfacePatch& patch, double t, double u, const SurfaceJets& j, const Vec4& Hv,
                        const SurfaceOptions& opt) {
  SurfaceFrame fr;
  auto yd = tangent_values(j);
  auto Gi = ginv_values(j);

  if (patch.parent) {
    FrameData hf = frame_values(*patch.parent, {patch.s0, t, u}, {opt.linalg});
    Normalized4 n3 = normalize4(normal_part(hf.xs, yd, Gi), opt.linalg);
    fr.f3 = n3.unit;
    fr.eps3 = n3.sign;
    fr.f4 = hf.normal;
    fr.eps4 = hf.epsilon;
    return fr;
  }

  double hs = max_abs(Hv);
  double hh = inner4(Hv, Hv);
  double tan_scale = std::max(max_abs(yd[0]), max_abs(yd[1]));
  bool h_nonzero = hs > 1e-12 * std::max(1.0, 1.0 / std::max(tan_scale, 1e-300));

  std::array<Vec4, 4> axes;
  for (int c = 0; c < 4; ++c) {
    Vec4 e{};
    e[c] = 1.0;
    axes[c] = normal_part(e, yd, Gi);
  }

  if (h_nonzero && std::abs(hh) <= opt.linalg.null_rel * hs * hs) {
    // Null mean curvature vector: l = H, m the other null normal with <l,m> = -1.
    fr.degenerate = true;
    Vec4 l = Hv;
    Vec4 w = axes[0];
    double best = -1;
    for (const Vec4& a : axes) {
      double q = std::abs(inner4(a, l)) / std::max(euclid(a) * euclid(l), 1e-300);
      if (q > best) {
        best = q;
        w = a;
      }
    }
    double wl = inner4(w, l);
    double alpha = -1.0 / wl;
    double beta = -alpha * inner4(w, w) / (2.0 * wl);
    Vec4 m = alpha * w + beta * l;
    fr.null_l = l;
    fr.null_m = m;
    const double r2 = std::sqrt(0.5);
    fr.f3 = r2 * (l + m);
    fr.eps3 = -1;
    fr.f4 = r2 * (l - m);
    fr.eps4 = 1;
    return fr;
  }

  Vec4 seed3{};
  bool have = false;
  if (h_nonzero) {
    seed3 = Hv;
    have = true;
  } else {
    // Minimal surface: fall back to the least null curvature normal, then
    // to projected coordinate axes.
    double best = 0;
    for (int a = 0; a < 2; ++a)
      for (int b = a; b < 2; ++b) {
        Vec4 h = values(normal_part(j.ydd[a][b], j.yd, j.Ginv));
        double sc = max_abs(h);
        if (sc > 1e-12 && std::abs(inner4(h, h)) > opt.linalg.null_rel * sc * sc) {
          double q = std::abs(inner4(h, h)) / (sc * sc);
          if (q > best) {
            best = q;
            seed3 = h;
            have = true;
          }
        }
      }
    if (!have) {
      double bestq = 0;
      for (const Vec4& a : axes) {
        double sc = max_abs(a);
        if (sc <= 0) continue;
        double q = std::abs(inner4(a, a)) / (sc * sc);
        if (q > bestq + 1e-12) {
          bestq = q;
          seed3 = a;
          have = true;
        }
      }
    }
    if (have && first_nonzero_negative(seed3)) seed3 = -seed3;
  }
  if (!have) throw Error(ErrorKind::NullNormal, "no non-null normal direction found", t);
  Normalized4 n3 = normalize4(seed3, opt.linalg);
  Normalized4 n4 = normalize4(cross4(yd[0], yd[1], n3.unit), opt.linalg);
  fr.f3 = n3.unit;
  fr.eps3 = n3.sign;
  fr.f4 = n4.unit;
  fr.eps4 = n4.sign;
  return fr;
}

Mat2 shape_operator(const SurfaceJets& j, const Vec4& f) {
  Mat2 bm, A;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) bm[a][b] = inner4(values(j.ydd[a][b]), f);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) A[a][b] = j.Ginv[a][0].value() * bm[0][b] + j.Ginv[a][1].value() * bm[1][b];
  return A;
}

}  // namespace

std::string_view to_string(LemmaCase c) { return kRoman[static_cast<std::size_t>(c) - 1]; }

std::optional<LemmaCase> parse_lemma_case(std::string_view roman) {
  for (std::size_t i = 0; i < kRoman.size(); ++i)
    if (kRoman[i] == roman) return static_cast<LemmaCase>(i + 1);
  return std::nullopt;
}

SurfacePoint surface_point(const SurfacePatch& patch, double t, double u, const SurfaceOptions& opt) {
  SurfaceJets j = surface_jets(patch, t, u, opt);
  SurfacePoint sp;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) sp.G[a][b] = j.G[a][b].value();
  double detG = sp.G[0][0] * sp.G[1][1] - sp.G[0][1] * sp.G[1][0];
  sp.signature = detG > 0 ? MetricSignature::Riemannian : MetricSignature::Lorentzian;

  std::array<std::array<Vec4J, 2>, 2> h;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) h[a][b] = normal_part(j.ydd[a][b], j.yd, j.Ginv);
  Vec4J Hj{};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) Hj = Hj + (Jet3(0.5) * j.Ginv[a][b]) * h[a][b];
  sp.Hvec = values(Hj);

  auto yd = tangent_values(j);
  auto Gi = ginv_values(j);
  for (int axis = 1; axis <= 2; ++axis) {
    Vec4 dn = normal_part(grad_part(Hj, axis), yd, Gi);
    sp.pmc_residual = std::max(sp.pmc_residual, euclid(dn));
  }

  Vec4 h00 = values(h[0][0]), h11 = values(h[1][1]), h01 = values(h[0][1]);
  sp.K_extrinsic = (inner4(h00, h11) - inner4(h01, h01)) / detG;

  // Intrinsic curvature from Christoffel symbols of G.
  std::array<std::array<std::array<Jet3, 2>, 2>, 2> G1, G2;  // G1[i][j][l] = Gamma_{ij,l}
  for (int i = 0; i < 2; ++i)
    for (int jj = 0; jj < 2; ++jj)
      for (int l = 0; l < 2; ++l)
        G1[i][jj][l] = Jet3(0.5) * (j.G[jj][l].derivative(i + 1) + j.G[i][l].derivative(jj + 1) -
                                    j.G[i][jj].derivative(l + 1));
  for (int m = 0; m < 2; ++m)
    for (int i = 0; i < 2; ++i)
      for (int jj = 0; jj < 2; ++jj) G2[m][i][jj] = j.Ginv[m][0] * G1[i][jj][0] + j.Ginv[m][1] * G1[i][jj][1];
  // R(d_t, d_u) d_u = R^m d_m
  std::array<double, 2> Rm{};
  for (int m = 0; m < 2; ++m) {
    double r = G2[m][1][1].gradient()[1] - G2[m][0][1].gradient()[2];
    for (int q = 0; q < 2; ++q)
      r += G2[m][0][q].value() * G2[q][1][1].value() - G2[m][1][q].value() * G2[q][0][1].value();
    Rm[m] = r;
  }
  sp.K_intrinsic = (sp.G[0][0] * Rm[0] + sp.G[0][1] * Rm[1]) / detG;

  sp.frame = frame_from(patch, t, u, j, sp.Hvec, opt);
  sp.A3 = shape_operator(j, sp.frame.f3);
  sp.A4 = shape_operator(j, sp.frame.f4);
  return sp;
}

SurfaceFrame surface_frame(const SurfacePatch& patch, double t, double u, const SurfaceOptions& opt) {
  return surface_point(patch, t, u, opt).frame;
}

SliceReport slice_check(const SurfacePatch& patch, const SurfaceOptions& opt) {
  SliceReport rep;
  double tm = 0.5 * (patch.t_range[0] + patch.t_range[1]);
  double um = 0.5 * (patch.u_range[0] + patch.u_range[1]);
  SurfacePoint c = surface_point(patch, tm, um, opt);
  rep.shape_op_f3 = c.A3;
  rep.shape_op_f4 = c.A4;
  rep.c1 = c.A3[0][0];
  rep.c2 = c.A3[1][1];
  rep.d1 = c.A4[0][0];
  rep.d2 = c.A4[1][1];
  rep.eps3 = c.frame.eps3;
  rep.eps4 = c.frame.eps4;
  rep.gauss_curvature = c.K_intrinsic;
  rep.gauss_extrinsic = c.K_extrinsic;
  rep.flat_relation = rep.eps3 * rep.c1 * rep.c2 + rep.eps4 * rep.d1 * rep.d2;
  rep.mean_curvature_vec = c.Hvec;
  rep.mean_curvature_sq = inner4(c.Hvec, c.Hvec);
  rep.signature = c.signature;
  rep.degenerate_normal_plane = c.frame.degenerate;

  int n = std::max(opt.grid, 1);
  std::array<std::vector<double>, 4> diag;
  bool trapped = true;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      double t = patch.t_range[0] + (a + 0.5) * (patch.t_range[1] - patch.t_range[0]) / n;
      double u = patch.u_range[0] + (b + 0.5) * (patch.u_range[1] - patch.u_range[0]) / n;
      SurfacePoint p = surface_point(patch, t, u, opt);
      rep.max_offdiag = std::max({rep.max_offdiag, std::abs(p.A3[0][1]), std::abs(p.A3[1][0]), std::abs(p.A4[0][1]),
                                  std::abs(p.A4[1][0])});
      rep.max_abs_gauss = std::max(rep.max_abs_gauss, std::abs(p.K_intrinsic));
      rep.pmc_residual = std::max(rep.pmc_residual, p.pmc_residual);
      diag[0].push_back(p.A3[0][0]);
      diag[1].push_back(p.A3[1][1]);
      diag[2].push_back(p.A4[0][0]);
      diag[3].push_back(p.A4[1][1]);
      double hs = max_abs(p.Hvec);
      trapped = trapped && hs > 1e-12 && std::abs(inner4(p.Hvec, p.Hvec)) <= opt.linalg.null_rel * hs * hs;
      ++rep.samples;
    }
  for (const auto& v : diag) {
    double mean = 0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double var = 0;
    for (double x : v) var += (x - mean) * (x - mean);
    if (v.size() > 1) var /= static_cast<double>(v.size() - 1);
    rep.diag_variance = std::max(rep.diag_variance, var);
  }
  rep.is_flat = rep.max_abs_gauss < 1e-8;
  rep.is_marginally_trapped = trapped;
  return rep;
}

namespace {

double need(const Params& p, const char* name, bool nonzero = true) {
  auto it = p.find(name);
  if (it == p.end()) throw Error(ErrorKind::MissingParam, std::string("missing required parameter '") + name + "'");
  if (!std::isfinite(it->second) || (nonzero && it->second == 0.0))
    throw Error(ErrorKind::BadParams, std::string("parameter '") + name + "' must be finite and nonzero");
  return it->second;
}

}  // namespace

SurfacePatch build_lemma_surface(LemmaCase c, const Params& params) {
  SurfacePatch sp;
  sp.label = std::string("lemma-") + std::string(to_string(c));
  sp.t_range = {-1.0, 1.0};
  sp.u_range = {0.1, 2.1};
  switch (c) {
    case LemmaCase::I: {
      double B = need(params, "B");
      sp.params = {{"B", B}};
      sp.eval = [B](const Jet3& t, const Jet3& u) { return JetPoint4{{Jet3(1.0), t, B * cos(u), B * sin(u)}}; };
      break;
    }
    case LemmaCase::II: {
      double A = need(params, "A");
      sp.params = {{"A", A}};
      sp.u_range = {-1.0, 1.0};
      sp.eval = [A](const Jet3& t, const Jet3& u) { return JetPoint4{{A * cosh(t), A * sinh(t), u, Jet3(1.0)}}; };
      break;
    }
    case LemmaCase::III: {
      double B = need(params, "B");
      sp.params = {{"B", B}};
      sp.eval = [B](const Jet3& t, const Jet3& u) { return JetPoint4{{t, B * cos(u), B * sin(u), Jet3(1.0)}}; };
      break;
    }
    case LemmaCase::IV: {
      double A = need(params, "A");
      sp.params = {{"A", A}};
      sp.u_range = {-1.0, 1.0};
      sp.eval = [A](const Jet3& t, const Jet3& u) { return JetPoint4{{A * sinh(t), A * cosh(t), u, Jet3(1.0)}}; };
      break;
    }
    case LemmaCase::V: {
      double A = need(params, "A"), B = need(params, "B");
      sp.params = {{"A", A}, {"B", B}};
      sp.eval = [A, B](const Jet3& t, const Jet3& u) {
        return JetPoint4{{A * cosh(t), A * sinh(t), B * cos(u), B * sin(u)}};
      };
      break;
    }
    case LemmaCase::VI: {
      double A = need(params, "A"), B = need(params, "B");
      sp.params = {{"A", A}, {"B", B}};
      sp.eval = [A, B](const Jet3& t, const Jet3& u) {
        return JetPoint4{{A * sinh(t), A * cosh(t), B * cos(u), B * sin(u)}};
      };
      break;
    }
    case LemmaCase::VII: {
      double A = need(params, "A"), B = need(params, "B");
      sp.params = {{"A", A}, {"B", B}};
      sp.u_range = {-1.0, 1.0};
      sp.eval = [A, B](const Jet3& t, const Jet3& u) {
        Jet3 q = A * t * t + B * u * u;
        return JetPoint4{{q, t, u, q}};
      };
      break;
    }
    case LemmaCase::VIII: {
      double r = need(params, "r");
      sp.params = {{"r", r}};
      sp.t_range = {0.1, 2.1};
      sp.u_range = {0.4, 2.4};
      double R = 1.0 / r;
      sp.eval = [R](const Jet3& t, const Jet3& u) {
        return JetPoint4{{Jet3(0.0), R * cos(t) * sin(u), R * sin(t) * sin(u), R * cos(u)}};
      };
      break;
    }
    case LemmaCase::IX: {
      double r = need(params, "r");
      sp.params = {{"r", r}};
      double R = 1.0 / r;
      sp.eval = [R](const Jet3& t, const Jet3& u) {
        return JetPoint4{{R * sinh(t), R * cosh(t) * cos(u), R * cosh(t) * sin(u), Jet3(0.0)}};
      };
      break;
    }
    case LemmaCase::X: {
      double r = need(params, "r");
      sp.params = {{"r", r}};
      sp.t_range = {0.3, 1.3};
      double R = 1.0 / r;
      sp.eval = [R](const Jet3& t, const Jet3& u) {
        return JetPoint4{{R * cosh(t), R * sinh(t) * cos(u), R * sinh(t) * sin(u), Jet3(0.0)}};
      };
      break;
    }
    case LemmaCase::XI: {
      double A = need(params, "A");
      sp.params = {{"A", A}};
      sp.u_range = {-1.0, 1.0};
      sp.eval = [A](const Jet3& t, const Jet3& u) {
        Jet3 q = A * (t * t + u * u);
        return JetPoint4{{q, t, u, q}};
      };
      break;
    }
  }
  return sp;
}

SurfacePatch slice_of(const ImmersionPatch& patch, double s0) {
  SurfacePatch sp;
  sp.label = patch.label + "@s";
  sp.params = patch.params;
  sp.t_range = {patch.domain.lo[1], patch.domain.hi[1]};
  sp.u_range = {patch.domain.lo[2], patch.domain.hi[2]};
  sp.parent = patch;
  sp.s0 = s0;
  HypersurfaceEvaluator ev = patch.eval;
  sp.eval = [ev, s0](const Jet3& t, const Jet3& u) { return ev(Jet3(s0), t, u); };
  return sp;
}

}  // namespace bicons4
