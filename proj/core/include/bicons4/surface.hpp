#pragma once

// Codimension-2 surfaces y(t,u) in E^4_1: normal frames, the two shape
// operators, mean curvature vector and Gauss curvature. Used for the
// eleven standard slice surfaces and for s = const slices of a
// hypersurface family.

#include <array>
#include <functional>
#include <optional>
#include <string>

#include "bicons4/geometry.hpp"

namespace bicons4 {

using SurfaceEvaluator = std::function<JetPoint4(const Jet3& t, const Jet3& u)>;

enum class LemmaCase { I = 1, II, III, IV, V, VI, VII, VIII, IX, X, XI };
std::string_view to_string(LemmaCase c);
std::optional<LemmaCase> parse_lemma_case(std::string_view roman);

struct SurfacePatch {
  std::array<double, 2> t_range{}, u_range{};
  SurfaceEvaluator eval;
  std::string label;
  Params params;
  /// Set for an s = s0 slice of a hypersurface: the normal frame is then
  /// {unit part of x_s normal to the slice, N}.
  std::optional<ImmersionPatch> parent;
  double s0 = 0;
};

struct Mat2 {
  std::array<std::array<double, 2>, 2> m{};
  std::array<double, 2>& operator[](std::size_t r) { return m[r]; }
  const std::array<double, 2>& operator[](std::size_t r) const { return m[r]; }
};

struct SurfaceFrame {
  Vec4 f3, f4;
  int eps3 = 1, eps4 = 1;
  bool degenerate = false;  // mean curvature vector is null: null frame below is filled
  Vec4 null_l, null_m;      // <l,l>=<m,m>=0, <l,m>=-1
};

struct SurfaceOptions {
  LinAlgTolerances linalg{};
  int grid = 20;            // samples per axis for slice_check
};

struct SurfacePoint {
  Mat2 G;
  MetricSignature signature = MetricSignature::Riemannian;
  SurfaceFrame frame;
  Mat2 A3, A4;              // shape operators along f3, f4 (chart basis)
  Vec4 Hvec;
  double K_intrinsic = 0;
  double K_extrinsic = 0;
  double pmc_residual = 0;
};

struct SliceReport {
  Mat2 shape_op_f3, shape_op_f4;  // at the patch centre
  double c1 = 0, c2 = 0, d1 = 0, d2 = 0;
  int eps3 = 1, eps4 = 1;
  double max_offdiag = 0;
  double diag_variance = 0;       // max sample variance of c1,c2,d1,d2 over the grid
  double gauss_curvature = 0;     // intrinsic, at the centre
  double gauss_extrinsic = 0;
  double max_abs_gauss = 0;       // over the grid
  double flat_relation = 0;       // eps3 c1 c2 + eps4 d1 d2 at the centre
  Vec4 mean_curvature_vec;
  double mean_curvature_sq = 0;   // <H,H>
  double pmc_residual = 0;        // max over the grid
  bool is_flat = false;
  bool is_marginally_trapped = false;
  bool degenerate_normal_plane = false;
  MetricSignature signature = MetricSignature::Riemannian;
  int samples = 0;
};

SurfaceFrame surface_frame(const SurfacePatch& patch, double t, double u, const SurfaceOptions& opt = {});
SurfacePoint surface_point(const SurfacePatch& patch, double t, double u, const SurfaceOptions& opt = {});
SliceReport slice_check(const SurfacePatch& patch, const SurfaceOptions& opt = {});

SurfacePatch build_lemma_surface(LemmaCase c, const Params& params);
/// The s = s0 slice of a hypersurface patch, over its t,u chart range.
SurfacePatch slice_of(const ImmersionPatch& patch, double s0);

}  // namespace bicons4
