#pragma once

#include <Eigen/Core>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "gnep/nikaido.hpp"
#include "gnep/vi.hpp"

namespace gnep {

// Proximal point configuration. The r-schedule is either a constant or an
// explicit list extended by its last value; every r_k must be positive and
// the schedule floor strictly so. epsilon must dominate sup_k 1/r_k; when
// omitted it is recorded as that supremum inflated by 1e-12 relative.
struct PPAConfig {
  std::vector<double> r_schedule{1.0};
  std::optional<double> epsilon;
  double tol_sub = 1e-9;
  double tol_term = 1e-7;
  long max_iterations = 1000;

  double r_at(long k) const;
  double sup_inverse_r() const;
  double effective_epsilon() const;
  void validate() const;  // throws InvalidInput
};

struct SubproblemResult {
  Eigen::VectorXd u;
  double certificate = 0.0;  // Phi_k(u) = max_z [psi_a(u,z) - (1/r_k)<z-u, u-x_k>]
  int passes = 0;
  bool accepted = false;
};

// One proximal step from x_k: damped fixed-point iteration on the anchored
// best response, accepted purely on the Phi_k certificate (Phi_k >= 0 always;
// Phi_k <= tol_sub means the step inequality holds to tolerance).
SubproblemResult ppa_subproblem(const RegularizedEvaluator& ev, const FeasibleSet& set,
                                const Eigen::VectorXd& x_k, double r_k, double tol_sub);

struct PPAStepRecord {
  Eigen::VectorXd x;
  double gap = 0.0;
  double vi_residual = 0.0;
  double step_norm = 0.0;     // |x_k - x_{k-1}|, 0 at k = 0
  double sub_residual = 0.0;  // certificate of the step that produced x_k
};

struct PPATrace {
  std::vector<PPAStepRecord> steps;
  std::optional<long> termination_index;  // first k with gap <= tol_term
  std::optional<bool> convexity_prerequisite;
  bool hit_cap = false;
  std::vector<std::string> notes;

  long iterations() const { return static_cast<long>(steps.size()) - 1; }
  // Columns: k, x (flattened), gap_Va, vi_residual, step_norm, sub_residual.
  void write_csv(std::ostream& out) const;
};

// Run the proximal point algorithm from x0 until gap_Va(x_k) <= tol_term or
// the iteration cap. The convexity prerequisite (a <= delta for quadratic
// games) is checked and recorded, not enforced.
PPATrace ppa_run(const RegularizedEvaluator& ev, const FeasibleSet& set,
                 const Eigen::VectorXd& x0, const PPAConfig& config);

// d0^2 eps^2 / gamma^2. Throws PreconditionMissing when gamma <= 0 (no weak
// sharpness, the bound is undefined) and InvalidInput on bad d0/eps.
double iteration_bound(double d0, double epsilon, double gamma);

struct FejerReport {
  bool all_hold = true;
  long worst_index = -1;
  double worst_violation = 0.0;  // max over pairs of lhs - rhs, <= slack when holding
  bool prerequisite_ok = true;
  std::vector<double> slack;  // rhs - lhs per consecutive pair
};

// Checks |x_{k+1} - x_k|^2 <= |x* - x_k|^2 - |x* - x_{k+1}|^2 up to 1e-6
// slack for every consecutive pair. x_star must certify as a solution
// (natural residual <= 1e-6). Violations are reported, never thrown.
FejerReport fejer_check(const PPATrace& trace, const Eigen::VectorXd& x_star, const Game& game,
                        const FeasibleSet& set);

}  // namespace gnep
