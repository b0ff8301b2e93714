#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <functional>
#include <vector>

#include "gnep/feasible_set.hpp"
#include "gnep/game.hpp"
#include "gnep/nikaido.hpp"

namespace gnep {

// Dense evaluation grid over the bounding box of a feasible set, row-major
// (last coordinate fastest). Grid points are projected into the set before
// use. Hard guard: at most 1e7 points.
class GridSpec {
 public:
  static GridSpec over(const FeasibleSet& set, int points_per_dim);
  static GridSpec over(const FeasibleSet& set, const std::vector<int>& counts);
  static GridSpec single(const Eigen::VectorXd& point);

  std::size_t total() const;
  const std::vector<int>& counts() const { return counts_; }
  const Eigen::VectorXd& lo() const { return lo_; }
  const Eigen::VectorXd& up() const { return up_; }
  Eigen::Index dim() const { return lo_.size(); }

  // Euclidean diagonal of one grid cell; the h in the L*h/2 error estimate.
  double cell_diagonal() const;
  Eigen::VectorXd step_sizes() const;

  Eigen::VectorXd point_at(std::size_t flat_index) const;

 private:
  GridSpec() = default;
  std::vector<int> counts_;
  Eigen::VectorXd lo_, up_;
};

// Applies fn to every grid point, projected into the set.
void for_each_grid_point(const GridSpec& grid, const FeasibleSet& set,
                         const std::function<void(const Eigen::VectorXd&)>& fn);

struct GridMax {
  double value = 0.0;
  double grid_error = 0.0;  // L * h / 2, L a crude sampled-gradient Lipschitz estimate
  Eigen::VectorXd at;
};

// Brute-force suprema at desk scale. These never touch the iterative inner
// solvers; they evaluate psi, psi_a and F in closed form only, so they stay
// independent of the implementation paths they cross-check.

// sup over the grid of psi(x, y) -- the unregularized gap V(x) up to grid error.
GridMax grid_V(const Game& game, const FeasibleSet& set, const Eigen::VectorXd& x,
               const GridSpec& grid);

// sup over the grid of <F(w), y - w> -- the dual gap G(y) up to grid error.
GridMax grid_dual_gap(const Game& game, const FeasibleSet& set, const Eigen::VectorXd& y,
                      const GridSpec& grid);

struct NNEScan {
  std::vector<Eigen::VectorXd> points;  // grid points with near-floor residual
  std::vector<double> residuals;
  double floor = 0.0;      // smallest residual seen on the grid
  double threshold = 0.0;  // 2 * floor + 1e-12
  Eigen::VectorXd steps;   // per-dimension grid spacing

  bool contains_within_cell(const Eigen::VectorXd& p) const;
};

// Residual scan: returns the grid cells that could host a solution.
NNEScan grid_scan_nne(const Game& game, const FeasibleSet& set, const GridSpec& grid);

// sup over the grid of psi_a(u, z) - (1/r_k) <z - u, u - x_k>: the
// independent check of a proximal-step certificate.
GridMax grid_phi_residual(const RegularizedEvaluator& ev, const FeasibleSet& set,
                          const Eigen::VectorXd& u, const Eigen::VectorXd& x_k, double r_k,
                          const GridSpec& grid);

}  // namespace gnep
