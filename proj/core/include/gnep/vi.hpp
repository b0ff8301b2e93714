#pragma once

#include <Eigen/Core>
#include <optional>

#include "gnep/feasible_set.hpp"
#include "gnep/game.hpp"

namespace gnep {

// F(x): stacked per-player own-block gradients.
Eigen::VectorXd F_map(const Game& game, const Eigen::VectorXd& x);

// Natural-map residual |x - P_X(x - F(x))|; zero exactly at solutions of
// VI(F, X).
double vi_residual(const Game& game, const FeasibleSet& set, const Eigen::VectorXd& x);

struct VIResult {
  Eigen::VectorXd x;
  double residual = 0.0;
  long iterations = 0;
  bool converged = false;
  double step_used = 0.0;
};

struct ExtragradientOptions {
  std::optional<double> step;  // default 0.9 / Lip(F) when computable, else 1e-2 with halving
  double tol = 1e-10;
  long max_iterations = 100000;
};

// Extragradient reference solver (two projections per step). Converges for
// monotone F; caps out, with the best residual reported, when it is not.
VIResult solve_vi_extragradient(const Game& game, const FeasibleSet& set,
                                const Eigen::VectorXd& x0, ExtragradientOptions opts = {});

}  // namespace gnep
