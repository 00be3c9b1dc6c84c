#pragma once

// Pointwise biconservativity S(grad H) + eps (3H/2) grad H = 0, its scalar
// reductions, and grid verification of a patch.

#include <array>
#include <optional>
#include <string>

#include "bicons4/geometry.hpp"

namespace bicons4 {

enum class PointCase { CMC, TwoDistinct, ThreeDistinct, Umbilic, NonDiagonalizable };
std::string_view to_string(PointCase c);

struct BiconservativeOptions {
  GeometryOptions geometry{};
  double tau_bic = 1e-6;     // pass threshold, scaled by max(1, max|k|)
  double tau_scalar = 1e-6;
};

struct BiconservativeReport {
  Vec3 residual_vec{};
  double residual_norm = 0;   // positive-definite norm in the principal frame
  double scalar_riemannian = 0;  // k1 - (k2 + k3)
  double scalar_lorentzian = 0;  // 3 k1 + (k2 + k3)
  int epsilon = -1;
  int epsilon1 = 1;
  double grad_norm = 0;
  PointCase kase = PointCase::ThreeDistinct;
  std::array<double, 3> k{};
  double H = 0;
  Vec3 dH{};
  int distinct_count = 3;
  std::optional<double> k1_relation;  // |k1 + (3 eps/2) H|, unset when grad H = 0
  bool passes = true;
};

BiconservativeReport residual(const ImmersionPatch& patch, const ChartPoint& p, const BiconservativeOptions& opt = {});
BiconservativeReport residual(const PointGeometry& pg, const BiconservativeOptions& opt = {});

/// |k1 + (3 eps/2) H|. Throws GradTooSmall when grad H vanishes.
double check_k1_relation(const CurvatureReport& report, double grad_tol = 1e-8);

struct GridSpec {
  int ns = 8, nt = 8, nu = 8;
};

/// Cell-centred interior sample points of a box, in (s,t,u) index order.
std::vector<ChartPoint> grid_points(const Box3& box, const GridSpec& grid);

struct VerifySummary {
  std::string label;
  GridSpec grid;
  Box3 domain;
  int points = 0;
  double max_residual = 0;
  double mean_residual = 0;
  double max_scaled_residual = 0;  // residual / max(1, max|k|)
  int epsilon = 0;                 // 0 when the sign changes across the patch
  int epsilon1 = 0;
  bool signature_consistent = true;
  PointCase kase = PointCase::ThreeDistinct;
  std::array<int, 5> case_histogram{};
  std::array<int, 3> distinct_histogram{};  // counts of 1, 2, 3 distinct
  ChartPoint worst_point;
  double min_separation = 0;
  double max_abs_k = 0;
  double min_abs_k = 0;               // min over points of min_i |k_i|
  double max_gauss = 0;
  double max_codazzi = 0;
  std::array<std::optional<double>, 5> omega_max;  // w12(e1), w12(e3), w13(e1), w13(e2), w23(e1)
  double max_dH_t = 0;
  double max_dH_u = 0;
  std::optional<double> max_k1_relation;
  std::optional<double> max_scalar_condition;  // the scalar condition of the realised eps
  double tau_bic = 0;
  bool pass = false;
};

inline constexpr std::array<const char*, 5> kOmegaNames{"omega12_e1", "omega12_e3", "omega13_e1", "omega13_e2",
                                                        "omega23_e1"};

/// Evaluates every grid point (in parallel, see BICONS4_THREADS) and reduces
/// in index order. Any point-level error aborts with the point's location.
VerifySummary grid_verify(const ImmersionPatch& patch, const GridSpec& grid, const BiconservativeOptions& opt = {});

/// Per-point record used by grid_verify and mesh export.
struct PointRecord {
  ChartPoint p;
  Vec4 x;
  BiconservativeReport report;
  GaussCodazzi gc;
  std::array<double, 5> omega{};  // NaN where undefined
};
std::vector<PointRecord> evaluate_grid(const ImmersionPatch& patch, const GridSpec& grid,
                                       const BiconservativeOptions& opt = {});

/// Number of worker threads: BICONS4_THREADS when set and positive, else
/// the hardware concurrency.
int thread_count();

}  // namespace bicons4
