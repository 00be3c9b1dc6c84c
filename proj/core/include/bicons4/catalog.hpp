#pragma once

// Constructors for the classified biconservative families and their
// profile functions.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "bicons4/geometry.hpp"
#include "bicons4/profile.hpp"
#include "bicons4/surface.hpp"

namespace bicons4 {

enum class FamilyId {
  X1,
  X2,
  X3,
  X4,
  CylE3,
  CylE31Riem,
  CylE31Lor,
  RotCoshSinh,
  RotSinhCosh,
  NullCone,
  NullConeDegenerate,
};

/// Which of the two closed-form x1 branches: the printed one, or the
/// complementary branch solving the same ODE with the other sign under
/// the square root.
enum class Branch { Printed, Complement };

/// Explicit ODE used for the rotational families: the printed equations,
/// sign-corrected equations, or implicit synthesis.
enum class OdeVariant { Printed, Corrected, Synthesize };

struct ParamSpec {
  std::string name;
  std::string description;
  bool required = true;
};

struct FamilyInfo {
  FamilyId id;
  std::string name;
  std::string description;
  std::string parametrization;
  std::vector<ParamSpec> params;
  std::vector<MetricSignature> signatures;
  std::string profile_source;  // closed-form, synthesized, ode
};

const std::vector<FamilyInfo>& family_registry();
const FamilyInfo& family_info(FamilyId id);
std::optional<FamilyId> parse_family(std::string_view name);
std::string_view to_string(FamilyId id);
std::string_view to_string(Branch b);
std::string_view to_string(OdeVariant v);

struct FamilySpec {
  FamilyId id = FamilyId::X1;
  MetricSignature signature = MetricSignature::Riemannian;
  Params params;
  Branch branch = Branch::Printed;
};

inline constexpr double kDeltaGuard = 1e-4;

struct Interval {
  double lo, hi;  // open interval; hi may be +inf
};

/// Open s-intervals where square-root arguments and denominators exceed
/// delta. Throws EmptyDomain.
std::vector<Interval> domain_guard(const FamilySpec& spec, double delta = kDeltaGuard);

/// Chart box in (t,u) used for a family (the s range is supplied).
std::array<std::array<double, 2>, 2> default_tu_range(FamilyId id);

/// A default s-range inside the guarded domain.
std::array<double, 2> default_s_range(const FamilySpec& spec);

/// Closed-form or quadrature profiles: x1 (both branches, both signatures)
/// and the null-cone family. Tabulated on `nodes` points over `interval`.
ProfileSolution profile_closed_form(const FamilySpec& spec, std::array<double, 2> interval, int nodes = 201);

/// Skeleton x(s,t,u) with the profile supplied as a jet in s.
using Skeleton = std::function<JetPoint4(const Jet3& s, const Jet3& t, const Jet3& u, const Jet3& f)>;
Skeleton family_skeleton(const FamilySpec& spec);

/// Default initial data realising the requested signature.
OdeInit default_init(const FamilySpec& spec);

/// Explicit ODE f'' = F(s,f,f') for the rotational families.
SecondOrderRhs rotational_ode(FamilyId id, MetricSignature sig, OdeVariant variant);
std::vector<OdeGuard> rotational_guards(FamilyId id);

struct SynthesisOptions {
  double step = 1e-3;
  double delta = kDeltaGuard;
  double root_tol = 1e-13;
};

/// Integrates the scalar biconservative condition of the family skeleton
/// (k1 - (k2+k3) = 0 for eps = -1, 3k1 + (k2+k3) = 0 for eps = +1), solving
/// for f'' at every RK4 stage. Throws NoBracket, GuardHit, BadParams.
ProfileSolution profile_synthesize(const FamilySpec& spec, const OdeInit& init, std::array<double, 2> interval,
                                   const SynthesisOptions& opt = {});

/// The scalar condition as a function of f'' at (s, f, f'), evaluated at
/// the chart centre. Also reports the realised eps.
struct ScalarCondition {
  double value;
  int epsilon;
};
ScalarCondition scalar_condition(const FamilySpec& spec, double s, double f, double fp, double fpp);

/// Builds the hypersurface patch over s in `s_range` (must lie inside the
/// profile's valid interval; throws IntervalMismatch otherwise).
ImmersionPatch build_family(const FamilySpec& spec, const ProfileSolution& profile, std::array<double, 2> s_range);

/// Lemma surfaces are produced by the surface module; provided here for
/// symmetry with the family constructors.
inline SurfacePatch build_lemma_family(LemmaCase c, const Params& params) { return build_lemma_surface(c, params); }

double require_param(const Params& p, const std::string& name);

}  // namespace bicons4
