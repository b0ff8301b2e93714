#include "gnep/nikaido.hpp"

#include <cmath>

namespace gnep {

double ni_psi(const Game& game, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  if (x.size() != game.n() || y.size() != game.n())
    fail(ErrorKind::InvalidInput, "ni_psi: profile length mismatch");
  const Dims& d = game.dims();
  double value = 0.0;
  for (int i = 0; i < game.players(); ++i) {
    const Eigen::VectorXd swapped = with_block(d, x, i, y.segment(d.offset(i), d.size(i)));
    value += game.loss(i, x) - game.loss(i, swapped);
  }
  return value;
}

RegularizedEvaluator::RegularizedEvaluator(std::shared_ptr<const Game> game, double a,
                                           InnerSettings inner)
    : game_(std::move(game)), a_(a), inner_(inner) {
  if (!game_) fail(ErrorKind::InvalidInput, "evaluator: null game");
  if (!(a_ > 0.0)) fail(ErrorKind::InvalidInput, "evaluator: regularization weight a must be > 0");
}

double RegularizedEvaluator::ni_psi(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
  return gnep::ni_psi(*game_, x, y);
}

double RegularizedEvaluator::reg_psi(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
  return ni_psi(x, y) - 0.5 * a_ * (x - y).squaredNorm();
}

bool RegularizedEvaluator::closed_form_applicable(const FeasibleSet& set) const {
  if (!game_->is_quadratic() || !set.is_box()) return false;
  for (int s : game_->dims().sizes())
    if (s != 1) return false;
  return true;
}

Eigen::VectorXd RegularizedEvaluator::anchored_gradient(const Eigen::VectorXd& u,
                                                        const Eigen::VectorXd& z,
                                                        const Eigen::VectorXd& g, double rho,
                                                        const Eigen::VectorXd& w) const {
  const Dims& d = game_->dims();
  Eigen::VectorXd grad(game_->n());
  for (int i = 0; i < game_->players(); ++i) {
    const Eigen::VectorXd swapped = with_block(d, u, i, z.segment(d.offset(i), d.size(i)));
    grad.segment(d.offset(i), d.size(i)) = -game_->partial_grad(i, swapped);
  }
  grad -= a_ * (z - u);
  grad += g;
  if (rho != 0.0) grad -= rho * (z - w);
  return grad;
}

double RegularizedEvaluator::anchored_value(const Eigen::VectorXd& u, const Eigen::VectorXd& z,
                                            const Eigen::VectorXd& g, double rho,
                                            const Eigen::VectorXd& w) const {
  const Dims& d = game_->dims();
  double value = 0.0;
  for (int i = 0; i < game_->players(); ++i) {
    const Eigen::VectorXd swapped = with_block(d, u, i, z.segment(d.offset(i), d.size(i)));
    value -= game_->loss(i, swapped);
  }
  value -= 0.5 * a_ * (z - u).squaredNorm();
  value += g.dot(z);
  if (rho != 0.0) value -= 0.5 * rho * (z - w).squaredNorm();
  return value;
}

BestResponse RegularizedEvaluator::maximize_anchored(const FeasibleSet& set,
                                                     const Eigen::VectorXd& u,
                                                     const Eigen::VectorXd& g, double rho,
                                                     const Eigen::VectorXd& w) const {
  const Eigen::Index n = game_->n();
  if (u.size() != n) fail(ErrorKind::InvalidInput, "maximize_anchored: wrong anchor length");

  BestResponse out;

  if (closed_form_applicable(set)) {
    // Scalar blocks over a box: the objective separates per coordinate into
    // a clipped quadratic maximum.
    const auto& M = static_cast<const QuadraticGame&>(*game_).jacobian_F();
    const Eigen::VectorXd Fu = M * u;
    Eigen::VectorXd z(n);
    bool usable = true;
    for (Eigen::Index c = 0; c < n; ++c) {
      const double acc = M(c, c);
      const double denom = acc + a_ + rho;
      if (denom <= 1e-14) {
        usable = false;
        break;
      }
      const double b = Fu[c] - acc * u[c];  // cross terms at the anchor
      const double num = a_ * u[c] + g[c] + rho * w[c] - b;
      z[c] = std::clamp(num / denom, set.lower()[c], set.upper()[c]);
    }
    if (usable) {
      out.y = z;
      out.iterations = 0;
      out.residual = (z - set.project(z + anchored_gradient(u, z, g, rho, w))).norm();
      out.converged = out.residual <= inner_.stationarity_tol;
      if (out.converged) return out;
      // Loss of concavity (negative own-curvature beyond a + rho): fall
      // through to the iterative path, which will report honestly.
    }
  }

  Eigen::VectorXd z = set.project(u);
  double step;
  const bool quadratic = game_->is_quadratic();
  if (quadratic) {
    const auto& qg = static_cast<const QuadraticGame&>(*game_);
    step = 1.0 / (std::max(qg.own_block_lmax(), 0.0) + a_ + rho);
  } else {
    step = 1.0;  // refined by backtracking below
  }

  double value = quadratic ? 0.0 : anchored_value(u, z, g, rho, w);
  long it = 0;
  for (; it < inner_.max_iterations; ++it) {
    const Eigen::VectorXd grad = anchored_gradient(u, z, g, rho, w);
    const double residual = (z - set.project(z + grad)).norm();
    if (residual <= inner_.stationarity_tol) {
      out.y = z;
      out.iterations = it;
      out.residual = residual;
      out.converged = true;
      return out;
    }
    Eigen::VectorXd next = set.project(z + step * grad);
    if (!quadratic) {
      // Projected Armijo backtracking on the concave objective.
      double t = step;
      double next_value = anchored_value(u, next, g, rho, w);
      int shrink = 0;
      while (next_value < value + 1e-4 * grad.dot(next - z) && shrink < 60) {
        t *= 0.5;
        next = set.project(z + t * grad);
        next_value = anchored_value(u, next, g, rho, w);
        ++shrink;
      }
      value = next_value;
      step = std::min(1.0, t * 2.0);
    }
    const double movement = (next - z).norm();
    z = next;
    if (movement <= inner_.movement_tol) break;
  }

  out.y = z;
  out.iterations = it;
  out.residual = (z - set.project(z + anchored_gradient(u, z, g, rho, w))).norm();
  out.converged = out.residual <= inner_.stationarity_tol;
  return out;
}

BestResponse RegularizedEvaluator::best_response(const FeasibleSet& set,
                                                 const Eigen::VectorXd& x) const {
  return maximize_anchored(set, x, Eigen::VectorXd::Zero(game_->n()), 0.0, x);
}

double RegularizedEvaluator::gap(const FeasibleSet& set, const Eigen::VectorXd& x) const {
  const BestResponse br = best_response(set, x);
  if (!br.converged)
    fail(ErrorKind::IterationCap,
         "gap: best response hit the iteration cap (residual " + std::to_string(br.residual) + ")");
  return reg_psi(x, br.y);
}

Eigen::VectorXd RegularizedEvaluator::gap_gradient(const FeasibleSet& set,
                                                   const Eigen::VectorXd& x) const {
  const BestResponse br = best_response(set, x);
  if (!br.converged)
    fail(ErrorKind::IterationCap, "gap gradient: best response hit the iteration cap");
  const Eigen::VectorXd& y = br.y;
  const Dims& d = game_->dims();

  Eigen::VectorXd grad = Eigen::VectorXd::Zero(game_->n());
  for (int i = 0; i < game_->players(); ++i) {
    const Eigen::VectorXd swapped = with_block(d, x, i, y.segment(d.offset(i), d.size(i)));
    grad += game_->full_grad(i, x) - game_->full_grad(i, swapped);
    grad.segment(d.offset(i), d.size(i)) += game_->partial_grad(i, swapped);
  }
  grad -= a_ * (x - y);
  return grad;
}

bool RegularizedEvaluator::psi_convex_in_x() const {
  if (!game_->is_quadratic())
    fail(ErrorKind::Unsupported, "psi convexity check is defined for quadratic games only");
  const auto& qg = static_cast<const QuadraticGame&>(*game_);
  return a_ <= qg.delta() + 1e-10;
}

std::optional<bool> RegularizedEvaluator::convexity_prerequisite() const {
  if (!game_->is_quadratic()) return std::nullopt;
  return psi_convex_in_x();
}

}  // namespace gnep
