#include "gnep/feasible_set.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "gnep/cones.hpp"

namespace gnep {

namespace {

constexpr double kDykstraTol = 1e-12;
constexpr long kDykstraSweepCap = 100000;

}  // namespace

FeasibleSet FeasibleSet::box(Eigen::VectorXd lower, Eigen::VectorXd upper) {
  if (lower.size() == 0 || lower.size() != upper.size())
    fail(ErrorKind::InvalidInput, "box: lower/upper must be nonempty and of equal length");
  for (Eigen::Index j = 0; j < lower.size(); ++j)
    if (!(lower[j] <= upper[j]))
      fail(ErrorKind::InvalidInput,
           "box: empty at coordinate " + std::to_string(j) + " (lower > upper)");
  FeasibleSet s;
  s.kind_ = Kind::Box;
  s.dim_ = lower.size();
  s.lower_ = std::move(lower);
  s.upper_ = std::move(upper);
  s.reference_ = 0.5 * (s.lower_ + s.upper_);
  return s;
}

FeasibleSet FeasibleSet::polytope(Eigen::MatrixXd G, Eigen::VectorXd h) {
  if (G.rows() == 0 || G.cols() == 0 || G.rows() != h.size())
    fail(ErrorKind::InvalidInput, "polytope: G must be m x n with h of length m");
  for (Eigen::Index j = 0; j < G.rows(); ++j)
    if (G.row(j).norm() <= 1e-14 && h[j] < 0.0)
      fail(ErrorKind::InvalidInput, "polytope: row " + std::to_string(j) +
                                        " is 0 <= negative, the set is empty");
  FeasibleSet s;
  s.kind_ = Kind::Polytope;
  s.dim_ = G.cols();
  s.G_ = std::move(G);
  s.h_ = std::move(h);
  // Phase 1: Dykstra from the origin converges to a point of X when X is
  // nonempty; otherwise the result still violates some row.
  Eigen::VectorXd candidate =
      project_onto_halfspaces(s.G_, s.h_, Eigen::VectorXd::Zero(s.dim_));
  if (((s.G_ * candidate - s.h_).array() > kActiveTol).any())
    fail(ErrorKind::InvalidInput, "polytope: infeasible (no point satisfies all rows)");
  s.reference_ = candidate;
  return s;
}

const Eigen::VectorXd& FeasibleSet::lower() const {
  if (!is_box()) fail(ErrorKind::Unsupported, "lower(): not a box");
  return lower_;
}
const Eigen::VectorXd& FeasibleSet::upper() const {
  if (!is_box()) fail(ErrorKind::Unsupported, "upper(): not a box");
  return upper_;
}
const Eigen::MatrixXd& FeasibleSet::G() const {
  if (is_box()) fail(ErrorKind::Unsupported, "G(): not a polytope");
  return G_;
}
const Eigen::VectorXd& FeasibleSet::h() const {
  if (is_box()) fail(ErrorKind::Unsupported, "h(): not a polytope");
  return h_;
}

Eigen::VectorXd FeasibleSet::project(const Eigen::VectorXd& z) const {
  if (z.size() != dim_) fail(ErrorKind::InvalidInput, "project: wrong dimension");
  if (is_box()) return z.cwiseMax(lower_).cwiseMin(upper_);
  return project_onto_halfspaces(G_, h_, z);
}

double FeasibleSet::distance(const Eigen::VectorXd& z) const { return (z - project(z)).norm(); }

bool FeasibleSet::contains(const Eigen::VectorXd& z, double tol) const {
  if (z.size() != dim_) return false;
  if (is_box())
    return ((z - lower_).minCoeff() >= -tol) && ((upper_ - z).minCoeff() >= -tol);
  return ((G_ * z - h_).array() <= tol).all();
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> FeasibleSet::bounding_box() const {
  if (is_box()) return {lower_, upper_};
  const auto verts = vertices();
  Eigen::VectorXd lo = verts.front(), up = verts.front();
  for (const auto& v : verts) {
    lo = lo.cwiseMin(v);
    up = up.cwiseMax(v);
  }
  return {lo, up};
}

std::vector<Eigen::VectorXd> FeasibleSet::vertices() const {
  if (is_box()) {
    if (dim_ > 3) fail(ErrorKind::Unsupported, "vertices(): box dimension > 3");
    std::vector<Eigen::VectorXd> out;
    const long corners = 1L << dim_;
    for (long mask = 0; mask < corners; ++mask) {
      Eigen::VectorXd v(dim_);
      for (Eigen::Index j = 0; j < dim_; ++j)
        v[j] = (mask >> j & 1) ? upper_[j] : lower_[j];
      bool dup = false;
      for (const auto& w : out)
        if ((w - v).norm() <= 1e-12) dup = true;
      if (!dup) out.push_back(v);
    }
    return out;
  }
  return enumerate_polytope_vertices(G_, h_);
}

Eigen::VectorXd project_onto_halfspaces(const Eigen::MatrixXd& G, const Eigen::VectorXd& h,
                                        const Eigen::VectorXd& z) {
  const Eigen::Index m = G.rows();
  Eigen::VectorXd x = z;
  Eigen::MatrixXd increments = Eigen::MatrixXd::Zero(m, G.cols());
  Eigen::VectorXd row_sq(m);
  for (Eigen::Index j = 0; j < m; ++j) row_sq[j] = G.row(j).squaredNorm();

  for (long sweep = 0; sweep < kDykstraSweepCap; ++sweep) {
    const Eigen::VectorXd before = x;
    for (Eigen::Index j = 0; j < m; ++j) {
      if (row_sq[j] <= 1e-28) continue;  // zero row: vacuous or caught at build
      const Eigen::VectorXd y = x + increments.row(j).transpose();
      const double viol = G.row(j).dot(y) - h[j];
      if (viol > 0.0)
        x = y - G.row(j).transpose() * (viol / row_sq[j]);
      else
        x = y;
      increments.row(j) = (y - x).transpose();
    }
    if ((x - before).norm() <= kDykstraTol) break;
  }
  return x;
}

std::vector<Eigen::VectorXd> enumerate_polytope_vertices(const Eigen::MatrixXd& G,
                                                         const Eigen::VectorXd& h) {
  const Eigen::Index d = G.cols();
  const Eigen::Index m = G.rows();
  if (d > 3)
    fail(ErrorKind::Unsupported, "polytope vertex enumeration is supported up to dimension 3");

  // Unbounded iff the recession cone {Gz <= 0} is nontrivial.
  if (!PolyhedralCone::from_halfspaces(d, G).is_trivial())
    fail(ErrorKind::InvalidInput, "polytope is unbounded, no vertex list exists");

  std::vector<Eigen::VectorXd> out;
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(d));
  auto try_basis = [&](const std::vector<Eigen::Index>& rows) {
    Eigen::MatrixXd B(d, d);
    Eigen::VectorXd rhs(d);
    for (Eigen::Index r = 0; r < d; ++r) {
      B.row(r) = G.row(rows[static_cast<std::size_t>(r)]);
      rhs[r] = h[rows[static_cast<std::size_t>(r)]];
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(B);
    lu.setThreshold(1e-10);
    if (lu.rank() < d) return;
    const Eigen::VectorXd v = lu.solve(rhs);
    if (!v.allFinite()) return;
    if (((G * v - h).array() > kActiveTol).any()) return;
    for (const auto& w : out)
      if ((w - v).norm() <= 1e-8) return;
    out.push_back(v);
  };

  if (d == 1) {
    for (Eigen::Index j = 0; j < m; ++j) try_basis({j});
  } else if (d == 2) {
    for (Eigen::Index j = 0; j < m; ++j)
      for (Eigen::Index k = j + 1; k < m; ++k) try_basis({j, k});
  } else {
    for (Eigen::Index j = 0; j < m; ++j)
      for (Eigen::Index k = j + 1; k < m; ++k)
        for (Eigen::Index l = k + 1; l < m; ++l) try_basis({j, k, l});
  }

  if (out.empty()) fail(ErrorKind::InvalidInput, "polytope has no vertices (empty set?)");
  return out;
}

}  // namespace gnep
