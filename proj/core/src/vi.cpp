#include "gnep/vi.hpp"

#include <cmath>

namespace gnep {

Eigen::VectorXd F_map(const Game& game, const Eigen::VectorXd& x) {
  const Dims& d = game.dims();
  Eigen::VectorXd F(game.n());
  for (int i = 0; i < game.players(); ++i)
    F.segment(d.offset(i), d.size(i)) = game.partial_grad(i, x);
  return F;
}

double vi_residual(const Game& game, const FeasibleSet& set, const Eigen::VectorXd& x) {
  return (x - set.project(x - F_map(game, x))).norm();
}

VIResult solve_vi_extragradient(const Game& game, const FeasibleSet& set,
                                const Eigen::VectorXd& x0, ExtragradientOptions opts) {
  if (!set.contains(x0, kActiveTol))
    fail(ErrorKind::InvalidInput, "extragradient: x0 is not in the set");

  double step = 0.0;
  bool adaptive = false;
  if (opts.step) {
    step = *opts.step;
    if (!(step > 0.0)) fail(ErrorKind::InvalidInput, "extragradient: step must be positive");
  } else if (game.is_quadratic() &&
             static_cast<const QuadraticGame&>(game).lipschitz_F() > 1e-14) {
    step = 0.9 / static_cast<const QuadraticGame&>(game).lipschitz_F();
  } else {
    step = 1e-2;  // safe default, halved whenever the residual grows
    adaptive = true;
  }

  VIResult result;
  result.step_used = step;
  Eigen::VectorXd x = set.project(x0);
  double prev_residual = std::numeric_limits<double>::infinity();

  long it = 0;
  for (; it < opts.max_iterations; ++it) {
    const Eigen::VectorXd Fx = F_map(game, x);
    const double residual = (x - set.project(x - Fx)).norm();
    if (residual <= opts.tol) {
      result.x = x;
      result.residual = residual;
      result.iterations = it;
      result.converged = true;
      return result;
    }
    if (adaptive && residual > prev_residual) step *= 0.5;
    prev_residual = residual;

    const Eigen::VectorXd y = set.project(x - step * Fx);
    x = set.project(x - step * F_map(game, y));
  }

  result.x = x;
  result.residual = vi_residual(game, set, x);
  result.iterations = it;
  result.converged = result.residual <= opts.tol;
  result.step_used = step;
  return result;
}

}  // namespace gnep
