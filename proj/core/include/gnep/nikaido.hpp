#pragma once

#include <Eigen/Core>
#include <memory>
#include <optional>

#include "gnep/feasible_set.hpp"
#include "gnep/game.hpp"

namespace gnep {

// Nikaido-Isoda value: sum_i [theta_i(x) - theta_i(x_{-i}, y_i)].
double ni_psi(const Game& game, const Eigen::VectorXd& x, const Eigen::VectorXd& y);

// Inner-solver tolerance ladder. Inner errors sit an order below every
// downstream test tolerance: movement 1e-10, stationarity 1e-8, consumers
// quote 1e-8.
struct InnerSettings {
  double movement_tol = 1e-10;
  double stationarity_tol = 1e-8;
  long max_iterations = 100000;
};

struct BestResponse {
  Eigen::VectorXd y;
  long iterations = 0;
  double residual = 0.0;  // |y - P_X(y + grad)| at the returned point
  bool converged = true;
};

// Evaluator of the regularized Nikaido-Isoda machinery for a fixed weight
// a > 0: psi_a, the gap V_a(x) = max_y psi_a(x, y), its unique maximizer
// y_a(x), and grad V_a. Immutable; evaluations are pure.
class RegularizedEvaluator {
 public:
  RegularizedEvaluator(std::shared_ptr<const Game> game, double a, InnerSettings inner = {});

  const Game& game() const { return *game_; }
  std::shared_ptr<const Game> game_ptr() const { return game_; }
  double a() const { return a_; }
  const InnerSettings& inner() const { return inner_; }

  double ni_psi(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;
  // psi_a(x, y) = psi(x, y) - a/2 |x - y|^2.
  double reg_psi(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;

  // Unique maximizer of psi_a(x, .) over the set. Boxes over scalar blocks
  // solve in closed form per coordinate; everything else runs projected
  // gradient ascent (constant step 1/L for quadratic games, backtracking
  // otherwise).
  BestResponse best_response(const FeasibleSet& set, const Eigen::VectorXd& x) const;

  // V_a(x); throws IterationCap if the inner solve does not certify.
  double gap(const FeasibleSet& set, const Eigen::VectorXd& x) const;

  // grad V_a(x) =
  //   sum_i [grad theta_i(x) - grad theta_i(x_{-i}, y_i)]
  //   - a (x - y) + stack_i(partial_grad_i(x_{-i}, y_i)),   y = y_a(x).
  Eigen::VectorXd gap_gradient(const FeasibleSet& set, const Eigen::VectorXd& x) const;

  // Whether psi_a(., y) is convex: for quadratic games this is exactly
  // a <= delta + 1e-10 (Hessian (C + C') - aI psd). Unsupported for smooth
  // games.
  bool psi_convex_in_x() const;
  // Same check, but nullopt instead of throwing for smooth games.
  std::optional<bool> convexity_prerequisite() const;

  // Shared inner engine: maximize over z in X
  //   sum_i -theta_i(u_{-i}, z_i) - a/2 |z - u|^2 + <g, z> - rho/2 |z - w|^2.
  // best_response is (g = 0, rho = 0); the proximal subproblems add the
  // linear and anchor terms.
  BestResponse maximize_anchored(const FeasibleSet& set, const Eigen::VectorXd& u,
                                 const Eigen::VectorXd& g, double rho,
                                 const Eigen::VectorXd& w) const;

 private:
  Eigen::VectorXd anchored_gradient(const Eigen::VectorXd& u, const Eigen::VectorXd& z,
                                    const Eigen::VectorXd& g, double rho,
                                    const Eigen::VectorXd& w) const;
  double anchored_value(const Eigen::VectorXd& u, const Eigen::VectorXd& z,
                        const Eigen::VectorXd& g, double rho, const Eigen::VectorXd& w) const;
  bool closed_form_applicable(const FeasibleSet& set) const;

  std::shared_ptr<const Game> game_;
  double a_;
  InnerSettings inner_;
};

}  // namespace gnep
