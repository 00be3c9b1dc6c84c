#include "bicons4/biconservative.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <thread>
#include <vector>

namespace bicons4 {

std::string_view to_string(PointCase c) {
  switch (c) {
    case PointCase::CMC: return "CMC";
    case PointCase::TwoDistinct: return "TwoDistinct";
    case PointCase::ThreeDistinct: return "ThreeDistinct";
    case PointCase::Umbilic: return "Umbilic";
    case PointCase::NonDiagonalizable: return "NonDiagonalizable";
  }
  return "?";
}

BiconservativeReport residual(const PointGeometry& pg, const BiconservativeOptions& opt) {
  BiconservativeReport r;
  const FrameData& f = pg.frame;
  r.epsilon = f.epsilon;
  r.H = pg.H;
  r.dH = pg.dH;
  Vec3 Sg = mul(f.S, pg.gradH);
  for (int i = 0; i < 3; ++i) r.residual_vec[i] = Sg[i] + f.epsilon * 1.5 * pg.H * pg.gradH[i];

  SpectralResult spec = eig3(f.S, opt.geometry.linalg);
  if (!spec.is_real_diagonalizable) {
    r.kase = PointCase::NonDiagonalizable;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    r.k = {nan, nan, nan};
    r.scalar_riemannian = r.scalar_lorentzian = nan;
    r.residual_norm = std::sqrt(r.residual_vec[0] * r.residual_vec[0] + r.residual_vec[1] * r.residual_vec[1] +
                                r.residual_vec[2] * r.residual_vec[2]);
    r.grad_norm = std::sqrt(pg.gradH[0] * pg.gradH[0] + pg.gradH[1] * pg.gradH[1] + pg.gradH[2] * pg.gradH[2]);
    r.distinct_count = 0;
    r.passes = false;
    return r;
  }
  CurvatureReport cr = curvature_report(pg, opt.geometry);
  PrincipalFrame pf = principal_frame(f.g, spec, opt.geometry.dist_rel);
  r.residual_norm = frame_norm(f.g, pf, r.residual_vec);
  r.grad_norm = cr.grad_norm;
  r.k = cr.k;
  r.epsilon1 = cr.epsilon1;
  r.distinct_count = cr.distinct_count;
  r.scalar_riemannian = cr.k[0] - (cr.k[1] + cr.k[2]);
  r.scalar_lorentzian = 3.0 * cr.k[0] + (cr.k[1] + cr.k[2]);
  if (cr.grad_norm <= opt.geometry.grad_tol)
    r.kase = PointCase::CMC;
  else if (cr.distinct_count == 1)
    r.kase = PointCase::Umbilic;
  else
    r.kase = cr.distinct_count == 2 ? PointCase::TwoDistinct : PointCase::ThreeDistinct;
  if (r.kase != PointCase::CMC) r.k1_relation = std::abs(cr.k[0] + 1.5 * cr.epsilon * cr.H);
  double kmax = std::max({1.0, std::abs(r.k[0]), std::abs(r.k[1]), std::abs(r.k[2])});
  r.passes = r.residual_norm <= opt.tau_bic * kmax;
  return r;
}

BiconservativeReport residual(const ImmersionPatch& patch, const ChartPoint& p, const BiconservativeOptions& opt) {
  return residual(analyze_point(patch, p, opt.geometry), opt);
}

double check_k1_relation(const CurvatureReport& report, double grad_tol) {
  if (!(report.grad_norm > grad_tol))
    throw Error(ErrorKind::GradTooSmall, "grad H vanishes; the k1 labelling is undefined");
  return std::abs(report.k[0] + 1.5 * report.epsilon * report.H);
}

std::vector<ChartPoint> grid_points(const Box3& box, const GridSpec& grid) {
  std::vector<ChartPoint> pts;
  pts.reserve(static_cast<std::size_t>(grid.ns) * grid.nt * grid.nu);
  auto centre = [&](int axis, int i, int n) {
    auto a = static_cast<std::size_t>(axis);
    return box.lo[a] + (i + 0.5) * (box.hi[a] - box.lo[a]) / n;
  };
  for (int i = 0; i < grid.ns; ++i)
    for (int j = 0; j < grid.nt; ++j)
      for (int k = 0; k < grid.nu; ++k) pts.push_back({centre(0, i, grid.ns), centre(1, j, grid.nt), centre(2, k, grid.nu)});
  return pts;
}

int thread_count() {
  if (const char* env = std::getenv("BICONS4_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<int>(std::min(v, 256L));
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

namespace {

template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  int nt = std::max(1, std::min<int>(thread_count(), static_cast<int>(n)));
  std::vector<std::exception_ptr> errors(n);
  auto work = [&](std::size_t begin, std::size_t step) {
    for (std::size_t i = begin; i < n; i += step) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (nt <= 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nt; ++t) pool.emplace_back(work, static_cast<std::size_t>(t), static_cast<std::size_t>(nt));
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::string where(const ChartPoint& p) {
  char buf[96];
  std::snprintf(buf, sizeof buf, " [at (s,t,u)=(%.17g, %.17g, %.17g)]", p.s, p.t, p.u);
  return buf;
}

}  // namespace

std::vector<PointRecord> evaluate_grid(const ImmersionPatch& patch, const GridSpec& grid,
                                       const BiconservativeOptions& opt) {
  if (grid.ns < 1 || grid.nt < 1 || grid.nu < 1) throw Error(ErrorKind::BadParams, "grid sizes must be positive");
  std::vector<ChartPoint> pts = grid_points(patch.domain, grid);
  std::vector<PointRecord> out(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) {
    const ChartPoint& p = pts[i];
    try {
      PointGeometry pg = analyze_point(patch, p, opt.geometry);
      PointRecord& rec = out[i];
      rec.p = p;
      SeedJets sj = seed(p.s, p.t, p.u);
      JetPoint4 X = patch.eval(sj.s, sj.t, sj.u);
      rec.x = {{X[0].value(), X[1].value(), X[2].value(), X[3].value()}};
      rec.report = residual(pg, opt);
      rec.gc = pg.gauss_codazzi;
      rec.omega.fill(std::numeric_limits<double>::quiet_NaN());
      if (rec.report.kase != PointCase::NonDiagonalizable && rec.report.kase != PointCase::CMC &&
          rec.report.distinct_count >= 2) {
        ConnectionData cd = connection_forms(pg, curvature_report(pg, opt.geometry), opt.geometry);
        rec.omega = {cd.omega[0][1][0], cd.omega[0][1][2], cd.omega[0][2][0], cd.omega[0][2][1], cd.omega[1][2][0]};
      }
    } catch (const Error& e) {
      throw Error(e.kind(), e.message() + where(p), p.s);
    }
  });
  return out;
}

VerifySummary grid_verify(const ImmersionPatch& patch, const GridSpec& grid, const BiconservativeOptions& opt) {
  std::vector<PointRecord> recs = evaluate_grid(patch, grid, opt);
  VerifySummary v;
  v.label = patch.label;
  v.grid = grid;
  v.domain = patch.domain;
  v.points = static_cast<int>(recs.size());
  v.tau_bic = opt.tau_bic;
  v.min_separation = std::numeric_limits<double>::infinity();
  v.min_abs_k = std::numeric_limits<double>::infinity();
  bool all_pass = true;
  double sum = 0;
  int eps0 = 0, eps10 = 0;
  bool eps1_consistent = true;
  for (std::size_t i = 0; i < recs.size(); ++i) {
    const PointRecord& r = recs[i];
    const BiconservativeReport& b = r.report;
    sum += b.residual_norm;
    if (i == 0 || b.residual_norm > v.max_residual) {
      v.max_residual = b.residual_norm;
      v.worst_point = r.p;
    }
    double kmax = std::max({1.0, std::abs(b.k[0]), std::abs(b.k[1]), std::abs(b.k[2])});
    v.max_scaled_residual = std::max(v.max_scaled_residual, b.residual_norm / kmax);
    all_pass = all_pass && b.passes;
    if (i == 0) {
      eps0 = b.epsilon;
      eps10 = b.epsilon1;
    }
    if (b.epsilon != eps0) v.signature_consistent = false;
    if (b.epsilon1 != eps10) eps1_consistent = false;
    v.case_histogram[static_cast<std::size_t>(b.kase)]++;
    if (b.distinct_count >= 1) v.distinct_histogram[static_cast<std::size_t>(b.distinct_count - 1)]++;
    if (b.kase != PointCase::NonDiagonalizable) {
      v.min_separation = std::min({v.min_separation, std::abs(b.k[0] - b.k[1]), std::abs(b.k[0] - b.k[2]),
                                   std::abs(b.k[1] - b.k[2])});
      v.max_abs_k = std::max({v.max_abs_k, std::abs(b.k[0]), std::abs(b.k[1]), std::abs(b.k[2])});
      v.min_abs_k = std::min({v.min_abs_k, std::abs(b.k[0]), std::abs(b.k[1]), std::abs(b.k[2])});
    }
    v.max_gauss = std::max(v.max_gauss, r.gc.gauss_max);
    v.max_codazzi = std::max(v.max_codazzi, r.gc.codazzi_max);
    for (std::size_t q = 0; q < 5; ++q)
      if (std::isfinite(r.omega[q])) v.omega_max[q] = std::max(v.omega_max[q].value_or(0.0), std::abs(r.omega[q]));
    v.max_dH_t = std::max(v.max_dH_t, std::abs(b.dH[1]));
    v.max_dH_u = std::max(v.max_dH_u, std::abs(b.dH[2]));
    if (b.k1_relation) v.max_k1_relation = std::max(v.max_k1_relation.value_or(0.0), *b.k1_relation);
    if (b.kase == PointCase::TwoDistinct || b.kase == PointCase::ThreeDistinct) {
      double sc = std::abs(b.epsilon < 0 ? b.scalar_riemannian : b.scalar_lorentzian);
      v.max_scalar_condition = std::max(v.max_scalar_condition.value_or(0.0), sc);
    }
  }
  if (!std::isfinite(v.min_separation)) v.min_separation = 0;
  if (!std::isfinite(v.min_abs_k)) v.min_abs_k = 0;
  v.mean_residual = recs.empty() ? 0 : sum / static_cast<double>(recs.size());
  v.epsilon = v.signature_consistent ? eps0 : 0;
  v.epsilon1 = eps1_consistent ? eps10 : 0;
  // Most frequent case; ties resolved by the precedence order of the enum.
  static constexpr std::array<std::size_t, 5> precedence{4, 0, 3, 1, 2};
  std::size_t best = precedence[0];
  for (std::size_t c : precedence)
    if (v.case_histogram[c] > v.case_histogram[best]) best = c;
  v.kase = static_cast<PointCase>(best);
  v.pass = all_pass && v.signature_consistent && !recs.empty();
  return v;
}

}  // namespace bicons4
