#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>

#include <json.hpp>

#include "gnep/cones.hpp"
#include "gnep/nikaido.hpp"
#include "gnep/oracle.hpp"
#include "gnep/solution_set.hpp"

namespace gnep {

// Points closer to X* than this are excluded from ratio minima (0/0 there).
inline constexpr double kExclusionRadius = 1e-6;

struct ConeGamma {
  double value = 0.0;
  bool exact = true;
  bool vacuous = false;  // every evaluated cone was {0}
};

// Best gamma for the cone criterion <F(x*), z> >= gamma |z| over
// z in T_X(x*) /\ N_{X*}(x*), minimized over the evaluation points of X*
// (vertices for a polytopal X*). Positive value => weak sharpness
// certificate at those points. Throws InvalidInput when X* fails its
// residual certification.
ConeGamma gamma_from_cones(const Game& game, const FeasibleSet& set, const SolutionSet& xstar);

struct RatioMin {
  double value = std::numeric_limits<double>::infinity();  // +inf when no grid point qualifies
  long points_used = 0;
};

// min over grid x with d(x, X*) > exclusion radius of V_a(x) / d(x, X*).
RatioMin check_error_bound(const RegularizedEvaluator& ev, const FeasibleSet& set,
                           const SolutionSet& xstar, const GridSpec& grid);

// min over the same grid of psi_a(x, P_{X*}(x)) / d(x, X*). Pointwise below
// the error-bound ratio since V_a is the max over y.
RatioMin check_linear_conditioning(const RegularizedEvaluator& ev, const FeasibleSet& set,
                                   const SolutionSet& xstar, const GridSpec& grid);

struct GridIndicator {
  double value = 0.0;
  double refined_value = 0.0;
  long points_used = 0;
  long refined_points_used = 0;
  std::vector<int> grid;
  std::vector<int> refined_grid;
};

// Grid minima are estimates of an infimum; verdicts use sign and refinement
// trends, never raw closeness to gamma_cone.
struct SharpnessReport {
  std::string instance_id;
  double a = 0.0;
  bool convexity_prerequisite = true;
  std::optional<double> gamma_cone;  // nullopt => vacuous (cone trivial)
  bool gamma_cone_exact = true;
  GridIndicator error_bound;
  GridIndicator linear_conditioning;
  std::string verdict_weak_sharpness;       // "sharp" | "degenerate" | "vacuous"
  std::string verdict_error_bound;          // same vocabulary
  std::string verdict_linear_conditioning;  // same vocabulary
  std::string verdict_equivalence;          // "PASS-sharp" | "PASS-degenerate" | "FAIL" | "NOT-APPLICABLE" | "VACUOUS"
  double exclusion_radius = kExclusionRadius;

  nlohmann::json to_json() const;
};

// Sign-agreement verdict across the three indicators. NOT-APPLICABLE when
// the convexity prerequisite (a <= delta) fails.
std::string check_equivalence(const SharpnessReport& report);

// Full diagnostic pass: cone gamma, grid minima at the base grid and at a
// 4x-density refinement, per-indicator verdicts and the equivalence verdict.
SharpnessReport diagnose(const RegularizedEvaluator& ev, const FeasibleSet& set,
                         const SolutionSet& xstar, int base_grid_n,
                         const std::string& instance_id);

}  // namespace gnep
