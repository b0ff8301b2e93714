#include "gnep/oracle.hpp"

#include <cmath>

#include "gnep/vi.hpp"

namespace gnep {

namespace {

constexpr std::size_t kGridGuard = 10000000;  // 1e7 points

// Crude Lipschitz estimate: max central-difference gradient norm over a
// deterministic sample of grid points. Feeds the honest L*h/2 error term.
double sampled_lipschitz(const GridSpec& grid, const FeasibleSet& set,
                         const std::function<double(const Eigen::VectorXd&)>& f) {
  const std::size_t total = grid.total();
  const std::size_t samples = std::min<std::size_t>(total, 16);
  const std::size_t stride = std::max<std::size_t>(1, total / samples);
  const double h = 1e-6;
  double worst = 0.0;
  for (std::size_t s = 0; s < total; s += stride) {
    const Eigen::VectorXd p = set.project(grid.point_at(s));
    double sq = 0.0;
    for (Eigen::Index j = 0; j < p.size(); ++j) {
      Eigen::VectorXd a = p, b = p;
      a[j] += h;
      b[j] -= h;
      const double d = (f(a) - f(b)) / (2.0 * h);
      sq += d * d;
    }
    worst = std::max(worst, std::sqrt(sq));
  }
  return worst;
}

GridMax grid_max_of(const GridSpec& grid, const FeasibleSet& set,
                    const std::function<double(const Eigen::VectorXd&)>& f) {
  GridMax out;
  out.value = -std::numeric_limits<double>::infinity();
  for_each_grid_point(grid, set, [&](const Eigen::VectorXd& p) {
    const double v = f(p);
    if (v > out.value) {
      out.value = v;
      out.at = p;
    }
  });
  out.grid_error = 0.5 * grid.cell_diagonal() * sampled_lipschitz(grid, set, f);
  return out;
}

}  // namespace

GridSpec GridSpec::over(const FeasibleSet& set, int points_per_dim) {
  return over(set, std::vector<int>(static_cast<std::size_t>(set.dim()), points_per_dim));
}

GridSpec GridSpec::over(const FeasibleSet& set, const std::vector<int>& counts) {
  if (static_cast<Eigen::Index>(counts.size()) != set.dim())
    fail(ErrorKind::InvalidInput, "grid: one count per dimension required");
  GridSpec g;
  g.counts_ = counts;
  auto [lo, up] = set.bounding_box();
  g.lo_ = std::move(lo);
  g.up_ = std::move(up);
  std::size_t total = 1;
  for (int c : counts) {
    if (c < 1) fail(ErrorKind::InvalidInput, "grid: counts must be >= 1");
    total *= static_cast<std::size_t>(c);
    if (total > kGridGuard) fail(ErrorKind::InvalidInput, "grid guard exceeded (limit 1e7 points)");
  }
  return g;
}

GridSpec GridSpec::single(const Eigen::VectorXd& point) {
  GridSpec g;
  g.counts_.assign(static_cast<std::size_t>(point.size()), 1);
  g.lo_ = point;
  g.up_ = point;
  return g;
}

std::size_t GridSpec::total() const {
  std::size_t t = 1;
  for (int c : counts_) t *= static_cast<std::size_t>(c);
  return t;
}

Eigen::VectorXd GridSpec::step_sizes() const {
  Eigen::VectorXd s(lo_.size());
  for (Eigen::Index j = 0; j < lo_.size(); ++j) {
    const int c = counts_[static_cast<std::size_t>(j)];
    s[j] = c > 1 ? (up_[j] - lo_[j]) / static_cast<double>(c - 1) : 0.0;
  }
  return s;
}

double GridSpec::cell_diagonal() const { return step_sizes().norm(); }

Eigen::VectorXd GridSpec::point_at(std::size_t flat_index) const {
  Eigen::VectorXd p(lo_.size());
  std::size_t rem = flat_index;
  for (Eigen::Index j = lo_.size() - 1; j >= 0; --j) {  // row-major: last fastest
    const std::size_t c = static_cast<std::size_t>(counts_[static_cast<std::size_t>(j)]);
    const std::size_t idx = rem % c;
    rem /= c;
    p[j] = c > 1 ? lo_[j] + static_cast<double>(idx) * (up_[j] - lo_[j]) /
                               static_cast<double>(c - 1)
                 : lo_[j];
  }
  return p;
}

void for_each_grid_point(const GridSpec& grid, const FeasibleSet& set,
                         const std::function<void(const Eigen::VectorXd&)>& fn) {
  const std::size_t total = grid.total();
  const bool needs_projection = !set.is_box();
  for (std::size_t s = 0; s < total; ++s) {
    Eigen::VectorXd p = grid.point_at(s);
    if (needs_projection) p = set.project(p);
    fn(p);
  }
}

GridMax grid_V(const Game& game, const FeasibleSet& set, const Eigen::VectorXd& x,
               const GridSpec& grid) {
  return grid_max_of(grid, set, [&](const Eigen::VectorXd& y) { return ni_psi(game, x, y); });
}

GridMax grid_dual_gap(const Game& game, const FeasibleSet& set, const Eigen::VectorXd& y,
                      const GridSpec& grid) {
  return grid_max_of(grid, set,
                     [&](const Eigen::VectorXd& w) { return F_map(game, w).dot(y - w); });
}

NNEScan grid_scan_nne(const Game& game, const FeasibleSet& set, const GridSpec& grid) {
  NNEScan scan;
  scan.steps = grid.step_sizes();
  std::vector<Eigen::VectorXd> pts;
  std::vector<double> res;
  pts.reserve(grid.total());
  res.reserve(grid.total());
  scan.floor = std::numeric_limits<double>::infinity();
  for_each_grid_point(grid, set, [&](const Eigen::VectorXd& p) {
    const double r = vi_residual(game, set, p);
    pts.push_back(p);
    res.push_back(r);
    scan.floor = std::min(scan.floor, r);
  });
  scan.threshold = 2.0 * scan.floor + 1e-12;
  for (std::size_t s = 0; s < pts.size(); ++s) {
    if (res[s] <= scan.threshold) {
      scan.points.push_back(pts[s]);
      scan.residuals.push_back(res[s]);
    }
  }
  return scan;
}

bool NNEScan::contains_within_cell(const Eigen::VectorXd& p) const {
  for (const auto& q : points) {
    bool close = true;
    for (Eigen::Index j = 0; j < p.size(); ++j)
      if (std::abs(q[j] - p[j]) > steps[j] * 1.0001 + 1e-12) close = false;
    if (close) return true;
  }
  return false;
}

GridMax grid_phi_residual(const RegularizedEvaluator& ev, const FeasibleSet& set,
                          const Eigen::VectorXd& u, const Eigen::VectorXd& x_k, double r_k,
                          const GridSpec& grid) {
  if (!(r_k > 0.0)) fail(ErrorKind::InvalidInput, "grid phi: r_k must be positive");
  return grid_max_of(grid, set, [&](const Eigen::VectorXd& z) {
    return ev.reg_psi(u, z) - (z - u).dot(u - x_k) / r_k;
  });
}

}  // namespace gnep
