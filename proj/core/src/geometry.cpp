#include "bicons4/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace bicons4 {

std::string_view to_string(MetricSignature sig) {
  return sig == MetricSignature::Riemannian ? "riemannian" : "lorentzian";
}

namespace {

double val(double x) { return x; }
double val(const Jet3& x) { return x.value(); }

std::string where(const ChartPoint& p) {
  char buf[96];
  std::snprintf(buf, sizeof buf, " at (s,t,u)=(%.17g, %.17g, %.17g)", p.s, p.t, p.u);
  return buf;
}

template <class T>
struct Extrinsic {
  Mat3T<T> g;
  Vec4T<T> N;
  int eps = -1;
  Mat3T<T> b;
  Mat3T<T> ginv;
  Mat3T<T> S;
};

template <class T>
Extrinsic<T> extrinsic(const std::array<Vec4T<T>, 3>& xd, const std::array<std::array<Vec4T<T>, 3>, 3>& xdd,
                       const ChartPoint& p, const GeometryOptions& opt) {
  Extrinsic<T> r;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      r.g[i][j] = inner4(xd[i], xd[j]);
      r.g[j][i] = r.g[i][j];
    }
  Mat3 gv;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) gv[i][j] = val(r.g[i][j]);
  if (is_singular(gv, opt.linalg))
    throw Error(ErrorKind::DegenerateMetric, "induced metric is degenerate" + where(p), p.s);

  Vec4T<T> n = cross4(xd[0], xd[1], xd[2]);
  T nn = inner4(n, n);
  Vec4 nv{{val(n[0]), val(n[1]), val(n[2]), val(n[3])}};
  double scale = max_abs(nv);
  if (!(std::abs(val(nn)) > opt.linalg.null_rel * scale * scale))
    throw Error(ErrorKind::NullNormal, "normal vector is null" + where(p), p.s);
  r.eps = val(nn) > 0 ? 1 : -1;
  using std::sqrt;
  T len = sqrt(T(static_cast<double>(r.eps)) * nn);
  r.N = n / len;

  bool flip = false;
  for (int c = 0; c < 4; ++c) {
    if (std::abs(nv[c]) > 1e-12 * scale) {
      flip = nv[c] < 0;
      break;
    }
  }
  if (opt.flip_normal) flip = !flip;
  if (flip) r.N = -r.N;

  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      r.b[i][j] = inner4(xdd[i][j], r.N);
      r.b[j][i] = r.b[i][j];
    }
  r.ginv = inverse_unchecked(r.g);
  r.S = mul(r.ginv, r.b);
  return r;
}

struct JetDerivs {
  std::array<Vec4T<Jet3>, 3> xd;
  std::array<std::array<Vec4T<Jet3>, 3>, 3> xdd;
};

JetDerivs jet_derivs(const ImmersionPatch& patch, const ChartPoint& p) {
  SeedJets sj = seed(p.s, p.t, p.u);
  JetPoint4 X = patch.eval(sj.s, sj.t, sj.u);
  JetDerivs d;
  for (int i = 0; i < 3; ++i)
    for (int c = 0; c < 4; ++c) d.xd[i][c] = X[c].derivative(i);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int c = 0; c < 4; ++c) d.xdd[i][j][c] = d.xd[i][c].derivative(j);
  return d;
}

Vec4 values(const Vec4T<Jet3>& v) { return {{v[0].value(), v[1].value(), v[2].value(), v[3].value()}}; }

template <class T>
Mat3 values(const Mat3T<T>& m) {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[i][j] = val(m[i][j]);
  return r;
}

double gdot(const Mat3& g, const Vec3& a, const Vec3& b) {
  double r = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r += g[i][j] * a[i] * b[j];
  return r;
}

void fix_sign(Vec3& v) {
  double m = std::max({std::abs(v[0]), std::abs(v[1]), std::abs(v[2])});
  for (double c : v)
    if (std::abs(c) > 1e-9 * m) {
      if (c < 0)
        for (double& x : v) x = -x;
      return;
    }
}

}  // namespace

FrameData frame_values(const ImmersionPatch& patch, const ChartPoint& p, const GeometryOptions& opt) {
  SeedJets sj = seed(p.s, p.t, p.u);
  JetPoint4 X = patch.eval(sj.s, sj.t, sj.u);
  std::array<Vec4, 3> xd;
  std::array<std::array<Vec4, 3>, 3> xdd;
  for (int i = 0; i < 3; ++i) {
    MultiIndex mi{i == 0, i == 1, i == 2};
    for (int c = 0; c < 4; ++c) xd[i][c] = X[c].extract(mi);
    for (int j = 0; j < 3; ++j) {
      MultiIndex mij{(i == 0) + (j == 0), (i == 1) + (j == 1), (i == 2) + (j == 2)};
      for (int c = 0; c < 4; ++c) xdd[i][j][c] = X[c].extract(mij);
    }
  }
  Extrinsic<double> e = extrinsic(xd, xdd, p, opt);
  FrameData f;
  f.xs = xd[0];
  f.xt = xd[1];
  f.xu = xd[2];
  f.g = e.g;
  f.signature = det3(e.g) > 0 ? MetricSignature::Riemannian : MetricSignature::Lorentzian;
  f.normal = e.N;
  f.epsilon = e.eps;
  f.b = e.b;
  f.S = e.S;
  return f;
}

PointGeometry analyze_point(const ImmersionPatch& patch, const ChartPoint& p, const GeometryOptions& opt) {
  JetDerivs d = jet_derivs(patch, p);
  Extrinsic<Jet3> e = extrinsic(d.xd, d.xdd, p, opt);

  PointGeometry pg;
  FrameData& f = pg.frame;
  f.xs = values(d.xd[0]);
  f.xt = values(d.xd[1]);
  f.xu = values(d.xd[2]);
  f.g = values(e.g);
  f.signature = det3(f.g) > 0 ? MetricSignature::Riemannian : MetricSignature::Lorentzian;
  f.normal = values(e.N);
  f.epsilon = e.eps;
  f.b = values(e.b);
  f.S = values(e.S);
  pg.ginv = values(e.ginv);

  Jet3 Hj = (e.S[0][0] + e.S[1][1] + e.S[2][2]) * Jet3(1.0 / 3.0);
  pg.H = Hj.value();
  pg.dH = Hj.gradient();
  pg.gradH = mul(pg.ginv, pg.dH);
  for (int k = 0; k < 3; ++k)
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) pg.dS[k][a][b] = e.S[a][b].gradient()[k];

  // Christoffel symbols as jets (valid through order 1).
  std::array<std::array<std::array<Jet3, 3>, 3>, 3> dg;  // dg[k][i][j] = d_k g_ij
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) dg[k][i][j] = e.g[i][j].derivative(k);
  std::array<std::array<std::array<Jet3, 3>, 3>, 3> G1;  // Gamma_{ij,l}
  std::array<std::array<std::array<Jet3, 3>, 3>, 3> G2;  // Gamma^m_{ij}
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int l = 0; l < 3; ++l) {
        G1[i][j][l] = Jet3(0.5) * (dg[i][j][l] + dg[j][i][l] - dg[l][i][j]);
        pg.christoffel1[i][j][l] = G1[i][j][l].value();
      }
  for (int m = 0; m < 3; ++m)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        Jet3 acc;
        for (int l = 0; l < 3; ++l) acc += e.ginv[m][l] * G1[i][j][l];
        G2[m][i][j] = acc;
      }

  // Gauss: <R(d_i,d_j)d_k, d_l> versus eps (b_jk b_il - b_ik b_jl).
  double gauss = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        std::array<double, 3> Rm{};
        for (int m = 0; m < 3; ++m) {
          double r = G2[m][j][k].gradient()[i] - G2[m][i][k].gradient()[j];
          for (int q = 0; q < 3; ++q)
            r += G2[m][i][q].value() * G2[q][j][k].value() - G2[m][j][q].value() * G2[q][i][k].value();
          Rm[m] = r;
        }
        for (int l = 0; l < 3; ++l) {
          double lhs = 0;
          for (int m = 0; m < 3; ++m) lhs += f.g[l][m] * Rm[m];
          double rhs = f.epsilon * (f.b[j][k] * f.b[i][l] - f.b[i][k] * f.b[j][l]);
          gauss = std::max(gauss, std::abs(lhs - rhs));
        }
      }

  // Codazzi: nabla_k b_ij symmetric in (k,i).
  auto cov_b = [&](int k, int i, int j) {
    double r = e.b[i][j].gradient()[k];
    for (int m = 0; m < 3; ++m) r -= G2[m][k][i].value() * f.b[m][j] + G2[m][k][j].value() * f.b[i][m];
    return r;
  };
  double codazzi = 0;
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) codazzi = std::max(codazzi, std::abs(cov_b(k, i, j) - cov_b(i, k, j)));
  pg.gauss_codazzi = {gauss, codazzi};
  return pg;
}

FrameData frame_at(const ImmersionPatch& patch, const ChartPoint& p, const GeometryOptions& opt) {
  return analyze_point(patch, p, opt).frame;
}

int distinct_count(const std::array<double, 3>& k, double rel) {
  auto same = [&](double a, double b) { return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)}); };
  bool s01 = same(k[0], k[1]), s02 = same(k[0], k[2]), s12 = same(k[1], k[2]);
  if (s01 && s02 && s12) return 1;
  if (s01 || s02 || s12) return 2;
  return 3;
}

PrincipalFrame principal_frame(const Mat3& g, const SpectralResult& spec, double dist_rel) {
  PrincipalFrame pf;
  pf.k = spec.eigenvalues;
  std::array<Vec3, 3> v = spec.eigenvectors;
  auto same = [&](double a, double b) { return std::abs(a - b) <= dist_rel * std::max({1.0, std::abs(a), std::abs(b)}); };

  // Group indices of equal eigenvalues (eigenvalues are sorted).
  std::array<int, 3> group{0, 1, 2};
  for (int i = 1; i < 3; ++i)
    if (same(pf.k[static_cast<std::size_t>(i - 1)], pf.k[static_cast<std::size_t>(i)])) group[i] = group[i - 1];

  for (int g0 = 0; g0 < 3; ++g0) {
    std::vector<int> idx;
    for (int i = 0; i < 3; ++i)
      if (group[i] == g0) idx.push_back(i);
    if (idx.empty()) continue;
    // Indefinite Gram-Schmidt with pivoting on |g(v,v)| / |v|^2.
    std::vector<Vec3> basis;
    for (int i : idx) basis.push_back(v[static_cast<std::size_t>(i)]);
    std::vector<Vec3> out;
    std::vector<int> sg;
    while (!basis.empty()) {
      std::size_t best = 0;
      double best_q = -1;
      for (std::size_t q = 0; q < basis.size(); ++q) {
        double e2 = basis[q][0] * basis[q][0] + basis[q][1] * basis[q][1] + basis[q][2] * basis[q][2];
        double qv = e2 > 0 ? std::abs(gdot(g, basis[q], basis[q])) / e2 : 0;
        if (qv > best_q) {
          best_q = qv;
          best = q;
        }
      }
      if (best_q < 1e-10 && basis.size() > 1) {
        // All remaining candidates null: a sum of two of them is not.
        Vec3 a = basis[0], b = basis[1];
        double sp = gdot(g, a, b);
        for (int c = 0; c < 3; ++c) basis[0][c] = a[c] + (sp >= 0 ? b[c] : -b[c]);
        continue;
      }
      Vec3 w = basis[best];
      basis.erase(basis.begin() + static_cast<std::ptrdiff_t>(best));
      double q = gdot(g, w, w);
      double nrm = std::sqrt(std::abs(q));
      for (double& c : w) c /= nrm;
      int sgn = q > 0 ? 1 : -1;
      for (Vec3& r : basis) {
        double proj = sgn * gdot(g, r, w);
        for (int c = 0; c < 3; ++c) r[c] -= proj * w[c];
      }
      out.push_back(w);
      sg.push_back(sgn);
    }
    for (std::size_t q = 0; q < idx.size(); ++q) {
      fix_sign(out[q]);
      pf.e[static_cast<std::size_t>(idx[q])] = out[q];
      pf.sign[static_cast<std::size_t>(idx[q])] = sg[q];
    }
  }
  return pf;
}

double frame_norm(const Mat3& g, const PrincipalFrame& frame, const Vec3& v) {
  double acc = 0;
  for (const Vec3& e : frame.e) {
    double c = gdot(g, v, e);
    acc += c * c;
  }
  return std::sqrt(acc);
}

CurvatureReport curvature_report(const PointGeometry& pg, const GeometryOptions& opt) {
  SpectralResult spec = eig3(pg.frame.S, opt.linalg);
  CurvatureReport rep;
  rep.H = pg.H;
  rep.dH = pg.dH;
  rep.gradH = pg.gradH;
  rep.epsilon = pg.frame.epsilon;
  rep.signature = pg.frame.signature;
  rep.discriminant = spec.discriminant;
  if (!spec.is_real_diagonalizable) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "shape operator has a complex eigenvalue pair (discriminant %.6g)", spec.discriminant);
    throw Error(ErrorKind::NonDiagonalizable, buf);
  }
  PrincipalFrame pf = principal_frame(pg.frame.g, spec, opt.dist_rel);
  rep.grad_norm = frame_norm(pg.frame.g, pf, pg.gradH);

  std::array<int, 3> order{0, 1, 2};
  if (rep.grad_norm > opt.grad_tol) {
    int best = 0;
    double best_c = -1;
    for (int i = 0; i < 3; ++i) {
      double c = std::abs(gdot(pg.frame.g, pg.gradH, pf.e[static_cast<std::size_t>(i)]));
      if (c > best_c) {
        best_c = c;
        best = i;
      }
    }
    order = {best, best == 0 ? 1 : 0, best == 2 ? 1 : 2};
  }
  for (int i = 0; i < 3; ++i) {
    auto o = static_cast<std::size_t>(order[i]);
    rep.k[i] = pf.k[o];
    rep.directions[i] = pf.e[o];
    rep.direction_signs[i] = pf.sign[o];
  }
  rep.epsilon1 = rep.direction_signs[0];
  rep.distinct_count = distinct_count(rep.k, opt.dist_rel);
  rep.diagonalizable = true;
  return rep;
}

CurvatureReport principal_curvatures(const ImmersionPatch& patch, const ChartPoint& p, const GeometryOptions& opt) {
  return curvature_report(analyze_point(patch, p, opt), opt);
}

Vec3 mean_curvature_gradient(const ImmersionPatch& patch, const ChartPoint& p, const GeometryOptions& opt) {
  return analyze_point(patch, p, opt).gradH;
}

ConnectionData connection_forms(const PointGeometry& pg, const CurvatureReport& rep, const GeometryOptions& opt) {
  if (rep.distinct_count < 2) throw Error(ErrorKind::UmbilicPoint, "principal frame is undetermined at an umbilic point");
  const Mat3& g = pg.frame.g;
  auto same = [&](double a, double b) { return std::abs(a - b) <= opt.dist_rel * std::max({1.0, std::abs(a), std::abs(b)}); };
  ConnectionData cd;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const Vec3& ei = rep.directions[static_cast<std::size_t>(i)];
      const Vec3& ej = rep.directions[static_cast<std::size_t>(j)];
      if (i == j || same(rep.k[i], rep.k[j])) {
        for (int l = 0; l < 3; ++l) cd.omega[i][j][l] = i == j ? 0.0 : nan;
        continue;
      }
      std::array<double, 3> along_chart{};
      for (int k = 0; k < 3; ++k) {
        Vec3 dSe = mul(pg.dS[k], ei);
        double d_ei_ej = gdot(g, dSe, ej) / (rep.k[i] - rep.k[j]);
        double christ = 0;
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b) christ += pg.christoffel1[a][k][b] * ei[a] * ej[b];
        along_chart[k] = rep.direction_signs[j] * (d_ei_ej + christ);
      }
      for (int l = 0; l < 3; ++l) {
        const Vec3& el = rep.directions[static_cast<std::size_t>(l)];
        cd.omega[i][j][l] = el[0] * along_chart[0] + el[1] * along_chart[1] + el[2] * along_chart[2];
      }
    }
  return cd;
}

ConnectionData connection_forms(const ImmersionPatch& patch, const ChartPoint& p, const GeometryOptions& opt) {
  PointGeometry pg = analyze_point(patch, p, opt);
  return connection_forms(pg, curvature_report(pg, opt), opt);
}

GaussCodazzi gauss_codazzi_residual(const ImmersionPatch& patch, const ChartPoint& p, const GeometryOptions& opt) {
  return analyze_point(patch, p, opt).gauss_codazzi;
}

}  // namespace bicons4
