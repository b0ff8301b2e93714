#pragma once

#include <Eigen/Core>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "gnep/profile.hpp"

namespace gnep {

// Abstract N-player game over a shared strategy space. Implementations are
// immutable after construction and safe to share across threads.
class Game {
 public:
  explicit Game(Dims dims) : dims_(std::move(dims)) {}
  virtual ~Game() = default;

  const Dims& dims() const { return dims_; }
  int players() const { return dims_.players(); }
  Eigen::Index n() const { return dims_.total(); }

  virtual double loss(int i, const Eigen::VectorXd& x) const = 0;
  // Gradient of theta_i with respect to the player's own block (length n_i).
  virtual Eigen::VectorXd partial_grad(int i, const Eigen::VectorXd& x) const = 0;
  // Gradient of theta_i with respect to the full profile (length n).
  virtual Eigen::VectorXd full_grad(int i, const Eigen::VectorXd& x) const = 0;

  virtual bool is_quadratic() const { return false; }

 protected:
  void check_player(int i) const;
  void check_point(const Eigen::VectorXd& x) const;

 private:
  Dims dims_;
};

// Ordered pair (l, i) of 0-based player indices keying the coupling block
// of shape n_l x n_i.
using BlockKey = std::pair<int, int>;
using BlockMap = std::map<BlockKey, Eigen::MatrixXd>;

// Quadratic game: theta_i(x) = 1/2 x_i' A_ii x_i + sum_{l != i} x_l' A_li x_i.
// Missing blocks act as zeros. Diagonal blocks must be symmetric to 1e-12 and
// are symmetrized on build. delta is the smallest eigenvalue of C + C', where
// C stacks 1/2 A_ii on the diagonal and A_li off it.
class QuadraticGame final : public Game {
 public:
  double loss(int i, const Eigen::VectorXd& x) const override;
  Eigen::VectorXd partial_grad(int i, const Eigen::VectorXd& x) const override;
  Eigen::VectorXd full_grad(int i, const Eigen::VectorXd& x) const override;
  bool is_quadratic() const override { return true; }

  const Eigen::MatrixXd& block(int l, int i) const;
  const Eigen::MatrixXd& C() const { return C_; }
  const Eigen::MatrixXd& C_plus_Ct() const { return S_; }
  double delta() const { return delta_; }
  // Unit eigenvector attaining delta; the flattest curvature direction of
  // x -> x'Cx, handy as a probe in convexity checks.
  const Eigen::VectorXd& min_curvature_direction() const { return delta_dir_; }

  // F(x) = M x with M stacking A_ii on the diagonal and A_li' off it.
  const Eigen::MatrixXd& jacobian_F() const { return M_; }
  double lipschitz_F() const { return lipschitz_; }
  // lambda_max over the diagonal blocks; step-size constant for the inner
  // best-response ascent.
  double own_block_lmax() const { return own_block_lmax_; }

  const std::vector<std::string>& build_warnings() const { return warnings_; }

 private:
  friend QuadraticGame build_quadratic_game(const Dims& dims, const BlockMap& blocks);
  explicit QuadraticGame(Dims dims) : Game(std::move(dims)) {}

  std::vector<Eigen::MatrixXd> blocks_;  // dense N*N grid, row-major (l, i)
  Eigen::MatrixXd C_, S_, M_;
  Eigen::VectorXd delta_dir_;
  double delta_ = 0.0;
  double lipschitz_ = 0.0;
  double own_block_lmax_ = 0.0;
  std::vector<std::string> warnings_;
};

QuadraticGame build_quadratic_game(const Dims& dims, const BlockMap& blocks);

// Smooth game defined by user-supplied callables. The block gradient must be
// consistent with central finite differences of the loss; validate_gradients
// checks that at sampled points.
class SmoothGame final : public Game {
 public:
  using LossFn = std::function<double(int, const Eigen::VectorXd&)>;
  using BlockGradFn = std::function<Eigen::VectorXd(int, const Eigen::VectorXd&)>;
  using FullGradFn = std::function<Eigen::VectorXd(int, const Eigen::VectorXd&)>;

  SmoothGame(Dims dims, LossFn loss, BlockGradFn block_grad, FullGradFn full_grad);

  double loss(int i, const Eigen::VectorXd& x) const override;
  Eigen::VectorXd partial_grad(int i, const Eigen::VectorXd& x) const override;
  Eigen::VectorXd full_grad(int i, const Eigen::VectorXd& x) const override;

 private:
  LossFn loss_;
  BlockGradFn block_grad_;
  FullGradFn full_grad_;
};

// Max relative error between partial_grad and central finite differences of
// the loss over the given points.
double gradient_consistency_error(const Game& game, const std::vector<Eigen::VectorXd>& points,
                                  double h = 1e-6);

}  // namespace gnep
