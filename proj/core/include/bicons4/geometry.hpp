#pragma once

// Extrinsic geometry of a hypersurface patch x(s,t,u) in E^4_1.
//
// Conventions:
//   g_ij = <x_i, x_j>,  N = unit(cross4(x_s, x_t, x_u)),  eps = <N,N>,
//   b_ij = <x_ij, N>,   S = g^{-1} b,  H = tr(S)/3,  grad H = g^{-1} dH.
// N is oriented so that its first nonzero component is positive.
// The biconservative residual is S(grad H) + eps (3H/2) grad H.

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>

#include "bicons4/jet.hpp"
#include "bicons4/minkowski.hpp"

namespace bicons4 {

struct ChartPoint {
  double s = 0, t = 0, u = 0;
  double operator[](int i) const { return i == 0 ? s : (i == 1 ? t : u); }
};

struct Box3 {
  std::array<double, 3> lo{}, hi{};
  bool contains(const ChartPoint& p) const {
    for (int i = 0; i < 3; ++i)
      if (p[i] < lo[static_cast<std::size_t>(i)] || p[i] > hi[static_cast<std::size_t>(i)]) return false;
    return true;
  }
};

using Params = std::map<std::string, double>;
using HypersurfaceEvaluator = std::function<JetPoint4(const Jet3& s, const Jet3& t, const Jet3& u)>;

struct ImmersionPatch {
  Box3 domain;
  HypersurfaceEvaluator eval;
  Params params;
  std::string label;
};

enum class MetricSignature { Riemannian, Lorentzian };
std::string_view to_string(MetricSignature sig);

struct GeometryOptions {
  LinAlgTolerances linalg{};
  double dist_rel = 1e-6;  // distinct-count tolerance, relative to max(1,|k|)
  double grad_tol = 1e-8;  // |grad H| below this counts as zero
  bool flip_normal = false;
};

struct FrameData {
  Vec4 xs, xt, xu;
  Mat3 g;
  MetricSignature signature = MetricSignature::Riemannian;
  Vec4 normal;
  int epsilon = -1;
  Mat3 b;
  Mat3 S;
};

struct CurvatureReport {
  std::array<double, 3> k{};               // k[0] = k1 (grad H direction when grad H != 0)
  std::array<Vec3, 3> directions{};        // chart components, |g(e,e)| = 1
  std::array<int, 3> direction_signs{};    // g(e_i,e_i)
  double H = 0;
  Vec3 dH{};                               // dH/ds, dH/dt, dH/du
  Vec3 gradH{};                            // g^{-1} dH
  double grad_norm = 0;                    // positive-definite norm in the principal frame
  int epsilon = -1;
  int epsilon1 = 1;                        // g(e_1, e_1)
  int distinct_count = 3;
  bool diagonalizable = true;
  double discriminant = 0;
  MetricSignature signature = MetricSignature::Riemannian;
};

/// omega[i][j][l] = <D_{e_l} e_i, e_j> * eps_j for the labelled principal
/// frame. Entries whose pair (i,j) shares a principal curvature are NaN.
struct ConnectionData {
  std::array<std::array<std::array<double, 3>, 3>, 3> omega{};
};

struct GaussCodazzi {
  double gauss_max = 0;
  double codazzi_max = 0;
};

/// Everything the pointwise checks need, computed in one jet pass.
struct PointGeometry {
  FrameData frame;
  Mat3 ginv;
  std::array<Mat3, 3> dS;              // chart derivatives of S
  std::array<std::array<std::array<double, 3>, 3>, 3> christoffel1{};  // Gamma_{ij,l} = <x_ij, x_l>
  GaussCodazzi gauss_codazzi;
  double H = 0;
  Vec3 dH{};
  Vec3 gradH{};
};

PointGeometry analyze_point(const ImmersionPatch& patch, const ChartPoint& p, const GeometryOptions& opt = {});

FrameData frame_at(const ImmersionPatch& patch, const ChartPoint& p, const GeometryOptions& opt = {});

/// Cheap value-only shape operator (no derivative pipeline).
FrameData frame_values(const ImmersionPatch& patch, const ChartPoint& p, const GeometryOptions& opt = {});

CurvatureReport principal_curvatures(const ImmersionPatch& patch, const ChartPoint& p, const GeometryOptions& opt = {});
/// Labels the spectrum of an already analysed point. Throws NonDiagonalizable.
CurvatureReport curvature_report(const PointGeometry& pg, const GeometryOptions& opt = {});

Vec3 mean_curvature_gradient(const ImmersionPatch& patch, const ChartPoint& p, const GeometryOptions& opt = {});

ConnectionData connection_forms(const ImmersionPatch& patch, const ChartPoint& p, const GeometryOptions& opt = {});
ConnectionData connection_forms(const PointGeometry& pg, const CurvatureReport& rep, const GeometryOptions& opt = {});

GaussCodazzi gauss_codazzi_residual(const ImmersionPatch& patch, const ChartPoint& p, const GeometryOptions& opt = {});

/// Number of clusters among k under |k_i - k_j| <= rel * max(1,|k_i|,|k_j|).
int distinct_count(const std::array<double, 3>& k, double rel);

/// g-orthonormal principal frame: eigenvectors grouped by equal eigenvalue
/// and orthonormalised within each group. Signs: first significant chart
/// component positive.
struct PrincipalFrame {
  std::array<double, 3> k{};
  std::array<Vec3, 3> e{};
  std::array<int, 3> sign{};
};
PrincipalFrame principal_frame(const Mat3& g, const SpectralResult& spec, double dist_rel);

/// sqrt(sum_i g(v, e_i)^2) over a g-orthonormal frame.
double frame_norm(const Mat3& g, const PrincipalFrame& frame, const Vec3& v);

}  // namespace bicons4
