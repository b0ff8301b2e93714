#include "gnep/game.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <sstream>

namespace gnep {

namespace {

constexpr double kSymmetryTol = 1e-12;

std::string block_name(int l, int i) {
  std::ostringstream os;
  os << "A[" << (l + 1) << "," << (i + 1) << "]";
  return os.str();
}

}  // namespace

void Game::check_player(int i) const {
  if (i < 0 || i >= players())
    fail(ErrorKind::InvalidInput, "player index " + std::to_string(i) + " out of range");
}

void Game::check_point(const Eigen::VectorXd& x) const {
  if (x.size() != n())
    fail(ErrorKind::InvalidInput, "profile has length " + std::to_string(x.size()) +
                                      ", expected " + std::to_string(n()));
}

QuadraticGame build_quadratic_game(const Dims& dims, const BlockMap& blocks) {
  const int N = dims.players();
  const Eigen::Index n = dims.total();
  QuadraticGame game(dims);
  game.blocks_.assign(static_cast<std::size_t>(N) * static_cast<std::size_t>(N),
                      Eigen::MatrixXd());

  auto slot = [&](int l, int i) -> Eigen::MatrixXd& {
    return game.blocks_[static_cast<std::size_t>(l) * static_cast<std::size_t>(N) +
                        static_cast<std::size_t>(i)];
  };

  for (const auto& [key, mat] : blocks) {
    const auto [l, i] = key;
    if (l < 0 || l >= N || i < 0 || i >= N)
      fail(ErrorKind::InvalidInput, "block index (" + std::to_string(l + 1) + "," +
                                        std::to_string(i + 1) + ") out of range");
    if (mat.rows() != dims.size(l) || mat.cols() != dims.size(i))
      fail(ErrorKind::InvalidInput,
           block_name(l, i) + " has shape " + std::to_string(mat.rows()) + "x" +
               std::to_string(mat.cols()) + ", expected " + std::to_string(dims.size(l)) + "x" +
               std::to_string(dims.size(i)));
    slot(l, i) = mat;
  }

  // Missing blocks are zero; sparse games only list their couplings.
  for (int l = 0; l < N; ++l)
    for (int i = 0; i < N; ++i)
      if (slot(l, i).size() == 0) {
        slot(l, i) = Eigen::MatrixXd::Zero(dims.size(l), dims.size(i));
        game.warnings_.push_back("missing block " + block_name(l, i) + " treated as zero");
      }

  for (int i = 0; i < N; ++i) {
    Eigen::MatrixXd& Aii = slot(i, i);
    const double dev = (Aii - Aii.transpose()).cwiseAbs().maxCoeff();
    if (dev > kSymmetryTol)
      fail(ErrorKind::InvalidInput,
           block_name(i, i) + " is asymmetric beyond tolerance (max deviation " +
               std::to_string(dev) + ")");
    if (dev > 0.0) {
      Aii = 0.5 * (Aii + Aii.transpose()).eval();
      game.warnings_.push_back(block_name(i, i) + " symmetrized (deviation within 1e-12)");
    }
  }

  game.C_ = Eigen::MatrixXd::Zero(n, n);
  game.M_ = Eigen::MatrixXd::Zero(n, n);
  for (int l = 0; l < N; ++l) {
    for (int i = 0; i < N; ++i) {
      const Eigen::MatrixXd& A = slot(l, i);
      if (l == i) {
        game.C_.block(dims.offset(l), dims.offset(i), dims.size(l), dims.size(i)) = 0.5 * A;
        game.M_.block(dims.offset(l), dims.offset(i), dims.size(l), dims.size(i)) = A;
      } else {
        game.C_.block(dims.offset(l), dims.offset(i), dims.size(l), dims.size(i)) = A;
        // F_i(x) = A_ii x_i + sum_{l != i} A_li' x_l.
        game.M_.block(dims.offset(i), dims.offset(l), dims.size(i), dims.size(l)) = A.transpose();
      }
    }
  }

  game.S_ = game.C_ + game.C_.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(game.S_);
  game.delta_ = eig.eigenvalues()(0);
  game.delta_dir_ = eig.eigenvectors().col(0);

  if (n > 0) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(game.M_);
    game.lipschitz_ = svd.singularValues()(0);
  }

  double lmax = 0.0;
  for (int i = 0; i < N; ++i) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> be(slot(i, i));
    lmax = std::max(lmax, be.eigenvalues().maxCoeff());
  }
  game.own_block_lmax_ = lmax;

  return game;
}

const Eigen::MatrixXd& QuadraticGame::block(int l, int i) const {
  check_player(l);
  check_player(i);
  return blocks_[static_cast<std::size_t>(l) * static_cast<std::size_t>(players()) +
                 static_cast<std::size_t>(i)];
}

double QuadraticGame::loss(int i, const Eigen::VectorXd& x) const {
  check_player(i);
  check_point(x);
  const auto& d = dims();
  const auto xi = x.segment(d.offset(i), d.size(i));
  double value = 0.5 * xi.dot(block(i, i) * xi);
  for (int l = 0; l < players(); ++l) {
    if (l == i) continue;
    const auto xl = x.segment(d.offset(l), d.size(l));
    value += xl.dot(block(l, i) * xi);
  }
  return value;
}

Eigen::VectorXd QuadraticGame::partial_grad(int i, const Eigen::VectorXd& x) const {
  check_player(i);
  check_point(x);
  const auto& d = dims();
  return M_.middleRows(d.offset(i), d.size(i)) * x;
}

Eigen::VectorXd QuadraticGame::full_grad(int i, const Eigen::VectorXd& x) const {
  check_player(i);
  check_point(x);
  const auto& d = dims();
  const auto xi = x.segment(d.offset(i), d.size(i));
  Eigen::VectorXd g = Eigen::VectorXd::Zero(n());
  g.segment(d.offset(i), d.size(i)) = partial_grad(i, x);
  for (int l = 0; l < players(); ++l) {
    if (l == i) continue;
    g.segment(d.offset(l), d.size(l)) = block(l, i) * xi;
  }
  return g;
}

SmoothGame::SmoothGame(Dims dims, LossFn loss, BlockGradFn block_grad, FullGradFn full_grad)
    : Game(std::move(dims)),
      loss_(std::move(loss)),
      block_grad_(std::move(block_grad)),
      full_grad_(std::move(full_grad)) {
  if (!loss_ || !block_grad_ || !full_grad_)
    fail(ErrorKind::InvalidInput, "smooth game requires loss, block gradient and full gradient");
}

double SmoothGame::loss(int i, const Eigen::VectorXd& x) const {
  check_player(i);
  check_point(x);
  return loss_(i, x);
}

Eigen::VectorXd SmoothGame::partial_grad(int i, const Eigen::VectorXd& x) const {
  check_player(i);
  check_point(x);
  Eigen::VectorXd g = block_grad_(i, x);
  if (g.size() != dims().size(i))
    fail(ErrorKind::InvalidInput, "block gradient callable returned wrong length");
  return g;
}

Eigen::VectorXd SmoothGame::full_grad(int i, const Eigen::VectorXd& x) const {
  check_player(i);
  check_point(x);
  Eigen::VectorXd g = full_grad_(i, x);
  if (g.size() != n()) fail(ErrorKind::InvalidInput, "full gradient callable returned wrong length");
  return g;
}

double gradient_consistency_error(const Game& game, const std::vector<Eigen::VectorXd>& points,
                                  double h) {
  double worst = 0.0;
  const Dims& d = game.dims();
  for (const auto& x : points) {
    for (int i = 0; i < game.players(); ++i) {
      const Eigen::VectorXd g = game.partial_grad(i, x);
      for (int c = 0; c < d.size(i); ++c) {
        Eigen::VectorXd xp = x, xm = x;
        xp[d.offset(i) + c] += h;
        xm[d.offset(i) + c] -= h;
        const double fd = (game.loss(i, xp) - game.loss(i, xm)) / (2.0 * h);
        const double scale = std::max({1.0, std::abs(fd), std::abs(g[c])});
        worst = std::max(worst, std::abs(fd - g[c]) / scale);
      }
    }
  }
  return worst;
}

}  // namespace gnep
