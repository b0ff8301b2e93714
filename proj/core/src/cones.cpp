#include "gnep/cones.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "gnep/rng.hpp"

namespace gnep {

namespace {

constexpr double kRayTol = 1e-10;

// Drop near-zero rows, normalize the rest, dedup parallel equal-direction rows.
Eigen::MatrixXd clean_rows(Eigen::Index dim, const Eigen::MatrixXd& rows) {
  std::vector<Eigen::VectorXd> kept;
  for (Eigen::Index j = 0; j < rows.rows(); ++j) {
    const double nrm = rows.row(j).norm();
    if (nrm <= 1e-13) continue;
    Eigen::VectorXd r = rows.row(j).transpose() / nrm;
    bool dup = false;
    for (const auto& k : kept)
      if (k.dot(r) >= 1.0 - 1e-12) dup = true;
    if (!dup) kept.push_back(std::move(r));
  }
  Eigen::MatrixXd out(static_cast<Eigen::Index>(kept.size()), dim);
  for (Eigen::Index j = 0; j < out.rows(); ++j)
    out.row(j) = kept[static_cast<std::size_t>(j)].transpose();
  return out;
}

void push_unique_ray(std::vector<Eigen::VectorXd>& rays, const Eigen::VectorXd& r) {
  for (const auto& q : rays)
    if (q.dot(r) >= 1.0 - kRayTol) return;
  rays.push_back(r);
}

// Extreme rays of the pointed cone {w : Mw <= 0} in dimension 1, 2 or 3.
// Every edge lies on the intersection of dim-1 facet hyperplanes, so the
// candidates are the hyperplane perps (2D) / pairwise cross products (3D).
std::vector<Eigen::VectorXd> pointed_rays(const Eigen::MatrixXd& M) {
  const Eigen::Index d = M.cols();
  const Eigen::Index m = M.rows();
  std::vector<Eigen::VectorXd> rays;
  auto feasible = [&](const Eigen::VectorXd& c) { return ((M * c).array() <= kRayTol).all(); };

  if (d == 1) {
    for (double s : {1.0, -1.0}) {
      Eigen::VectorXd c(1);
      c << s;
      if (feasible(c)) push_unique_ray(rays, c);
    }
  } else if (d == 2) {
    for (Eigen::Index j = 0; j < m; ++j) {
      Eigen::VectorXd perp(2);
      perp << -M(j, 1), M(j, 0);
      for (double s : {1.0, -1.0}) {
        Eigen::VectorXd c = s * perp;
        const double nrm = c.norm();
        if (nrm <= 1e-13) continue;
        c /= nrm;
        if (feasible(c)) push_unique_ray(rays, c);
      }
    }
  } else if (d == 3) {
    for (Eigen::Index j = 0; j < m; ++j) {
      for (Eigen::Index k = j + 1; k < m; ++k) {
        const Eigen::Vector3d cr =
            Eigen::Vector3d(M.row(j)).cross(Eigen::Vector3d(M.row(k)));
        const double nrm = cr.norm();
        if (nrm <= 1e-12) continue;  // near-parallel rows pin no edge
        for (double s : {1.0, -1.0}) {
          Eigen::VectorXd c = s * cr / nrm;
          if (feasible(c)) push_unique_ray(rays, c);
        }
      }
    }
  }
  return rays;
}

// NNLS by projected gradient: min over lambda >= 0 of |R lambda - z|^2.
Eigen::VectorXd project_onto_generated_cone(const std::vector<Eigen::VectorXd>& gens,
                                            const Eigen::VectorXd& z) {
  if (gens.empty()) return Eigen::VectorXd::Zero(z.size());
  const Eigen::Index m = static_cast<Eigen::Index>(gens.size());
  Eigen::MatrixXd R(z.size(), m);
  for (Eigen::Index j = 0; j < m; ++j) R.col(j) = gens[static_cast<std::size_t>(j)];
  const Eigen::MatrixXd RtR = R.transpose() * R;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(RtR);
  const double lmax = std::max(eig.eigenvalues().maxCoeff(), 1e-12);
  const double step = 1.0 / lmax;
  Eigen::VectorXd lambda = Eigen::VectorXd::Zero(m);
  const Eigen::VectorXd Rtz = R.transpose() * z;
  for (int it = 0; it < 20000; ++it) {
    const Eigen::VectorXd next =
        (lambda - step * (RtR * lambda - Rtz)).cwiseMax(0.0);
    if ((next - lambda).norm() <= 1e-14 * (1.0 + lambda.norm())) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return R * lambda;
}

}  // namespace

PolyhedralCone PolyhedralCone::full_space(Eigen::Index dim) {
  PolyhedralCone k;
  k.dim_ = dim;
  k.rows_ = Eigen::MatrixXd(0, dim);
  std::vector<Eigen::VectorXd> gens;
  for (Eigen::Index j = 0; j < dim; ++j) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(dim);
    e[j] = 1.0;
    gens.push_back(e);
    gens.push_back(-e);
  }
  k.rays_ = std::move(gens);
  k.lineality_dim_ = static_cast<int>(dim);
  return k;
}

PolyhedralCone PolyhedralCone::trivial(Eigen::Index dim) {
  PolyhedralCone k;
  k.dim_ = dim;
  Eigen::MatrixXd rows(2 * dim, dim);
  rows.topRows(dim) = Eigen::MatrixXd::Identity(dim, dim);
  rows.bottomRows(dim) = -Eigen::MatrixXd::Identity(dim, dim);
  k.rows_ = std::move(rows);
  k.rays_ = std::vector<Eigen::VectorXd>{};
  k.lineality_dim_ = 0;
  return k;
}

PolyhedralCone PolyhedralCone::from_halfspaces(Eigen::Index dim, const Eigen::MatrixXd& rows) {
  if (rows.rows() > 0 && rows.cols() != dim)
    fail(ErrorKind::InvalidInput, "cone rows must have the ambient dimension");
  PolyhedralCone k;
  k.dim_ = dim;
  Eigen::MatrixXd M = clean_rows(dim, rows);
  k.rows_ = M;

  if (M.rows() == 0) return full_space(dim);
  if (dim > 3) return k;  // halfspace form only; generators stay unknown

  // Lineality space = ker M; the pointed part lives in its orthogonal
  // complement, spanned by the right singular vectors of the row space.
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullV);
  svd.setThreshold(1e-10);
  const Eigen::Index rank = svd.rank();
  const Eigen::MatrixXd V = svd.matrixV();
  const Eigen::MatrixXd W = V.leftCols(rank);          // row space basis
  const Eigen::MatrixXd Lb = V.rightCols(dim - rank);  // kernel basis

  std::vector<Eigen::VectorXd> gens;
  for (Eigen::Index j = 0; j < Lb.cols(); ++j) {
    push_unique_ray(gens, Lb.col(j));
    push_unique_ray(gens, -Lb.col(j));
  }

  if (rank > 0) {
    const Eigen::MatrixXd Mw = M * W;  // constraints in the pointed subspace
    for (const auto& w : pointed_rays(Mw)) {
      Eigen::VectorXd lifted = W * w;
      lifted /= lifted.norm();
      push_unique_ray(gens, lifted);
    }
  }

  k.rays_ = std::move(gens);
  k.lineality_dim_ = static_cast<int>(dim - rank);
  return k;
}

PolyhedralCone PolyhedralCone::from_generators(Eigen::Index dim,
                                               const std::vector<Eigen::VectorXd>& gens) {
  std::vector<Eigen::VectorXd> unit;
  for (const auto& g : gens) {
    if (g.size() != dim) fail(ErrorKind::InvalidInput, "generator has wrong dimension");
    const double nrm = g.norm();
    if (nrm <= 1e-13) continue;
    push_unique_ray(unit, g / nrm);
  }
  if (unit.empty()) return trivial(dim);

  if (dim <= 3) {
    // Recover the halfspace form through the polar: the polar of cone(R) is
    // {z : Rz <= 0}; its generators are this cone's facet normals.
    Eigen::MatrixXd polar_rows(static_cast<Eigen::Index>(unit.size()), dim);
    for (Eigen::Index j = 0; j < polar_rows.rows(); ++j)
      polar_rows.row(j) = unit[static_cast<std::size_t>(j)].transpose();
    const PolyhedralCone polar = from_halfspaces(dim, polar_rows);
    Eigen::MatrixXd rows(static_cast<Eigen::Index>(polar.rays().size()), dim);
    for (Eigen::Index j = 0; j < rows.rows(); ++j)
      rows.row(j) = polar.rays()[static_cast<std::size_t>(j)].transpose();
    PolyhedralCone k = from_halfspaces(dim, rows);
    // Keep the caller's generators: they are exact, the re-enumeration is
    // only needed for the halfspace side.
    k.rays_ = std::move(unit);
    k.lineality_dim_ = -1;
    return k;
  }

  PolyhedralCone k;
  k.dim_ = dim;
  k.rays_ = std::move(unit);
  k.lineality_dim_ = -1;  // unknown
  return k;
}

const Eigen::MatrixXd& PolyhedralCone::halfspace_rows() const {
  if (!rows_) fail(ErrorKind::Unsupported, "cone has no halfspace form (generator-only)");
  return *rows_;
}

const std::vector<Eigen::VectorXd>& PolyhedralCone::rays() const {
  if (!rays_) fail(ErrorKind::Unsupported, "cone generators unknown (dimension > 3)");
  return *rays_;
}

bool PolyhedralCone::is_full_space() const {
  if (rows_ && rows_->rows() == 0) return true;
  return false;
}

bool PolyhedralCone::is_trivial() const {
  if (rays_) return rays_->empty();
  // Probe: a cone whose projections of +/- coordinate directions all vanish
  // is {0} for practical purposes.
  for (Eigen::Index j = 0; j < dim_; ++j) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(dim_);
    e[j] = 1.0;
    if (project(e).norm() > 1e-9 || project(-e).norm() > 1e-9) return false;
  }
  DetRng rng(12345);
  for (int s = 0; s < 8; ++s)
    if (project(rng.gaussian_vector(dim_)).norm() > 1e-9) return false;
  return true;
}

bool PolyhedralCone::contains(const Eigen::VectorXd& z, double tol) const {
  if (z.size() != dim_) return false;
  if (rows_) return rows_->rows() == 0 || ((*rows_) * z).maxCoeff() <= tol;
  return (z - project(z)).norm() <= tol;
}

Eigen::VectorXd PolyhedralCone::project(const Eigen::VectorXd& z) const {
  if (z.size() != dim_) fail(ErrorKind::InvalidInput, "cone projection: wrong dimension");
  if (rows_) {
    if (rows_->rows() == 0) return z;
    return project_onto_halfspaces(*rows_, Eigen::VectorXd::Zero(rows_->rows()), z);
  }
  return project_onto_generated_cone(*rays_, z);
}

PolyhedralCone PolyhedralCone::polar() const {
  if (is_full_space()) return trivial(dim_);
  if (rays_ && rays_->empty()) return full_space(dim_);
  if (rays_) {
    // Polar of cone(R) = {z : r.z <= 0 for every generator r}; re-enumerating
    // from that halfspace form gives the polar's own generators.
    Eigen::MatrixXd rows(static_cast<Eigen::Index>(rays_->size()), dim_);
    for (Eigen::Index j = 0; j < rows.rows(); ++j)
      rows.row(j) = (*rays_)[static_cast<std::size_t>(j)].transpose();
    return from_halfspaces(dim_, rows);
  }
  // Halfspace-only cone: the polar is generated by the rows.
  std::vector<Eigen::VectorXd> gens;
  for (Eigen::Index j = 0; j < rows_->rows(); ++j) gens.push_back(rows_->row(j).transpose());
  return from_generators(dim_, gens);
}

PolyhedralCone PolyhedralCone::intersect(const PolyhedralCone& other) const {
  if (dim_ != other.dim_) fail(ErrorKind::InvalidInput, "cone intersection: dimension mismatch");
  if (!rows_ || !other.rows_)
    fail(ErrorKind::Unsupported, "cone intersection requires halfspace forms");
  Eigen::MatrixXd rows(rows_->rows() + other.rows_->rows(), dim_);
  rows.topRows(rows_->rows()) = *rows_;
  rows.bottomRows(other.rows_->rows()) = *other.rows_;
  return from_halfspaces(dim_, rows);
}

PolyhedralCone tangent_cone(const FeasibleSet& set, const Eigen::VectorXd& x) {
  if (!set.contains(x, kActiveTol))
    fail(ErrorKind::InvalidInput, "tangent cone: point is not in the set");
  const Eigen::Index d = set.dim();
  std::vector<Eigen::VectorXd> rows;
  if (set.is_box()) {
    for (Eigen::Index j = 0; j < d; ++j) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(d);
      if (x[j] <= set.lower()[j] + kActiveTol) {
        e[j] = -1.0;  // z_j >= 0
        rows.push_back(e);
        e = Eigen::VectorXd::Zero(d);
      }
      if (x[j] >= set.upper()[j] - kActiveTol) {
        e[j] = 1.0;  // z_j <= 0
        rows.push_back(e);
      }
    }
  } else {
    const Eigen::VectorXd slack = set.h() - set.G() * x;
    for (Eigen::Index j = 0; j < slack.size(); ++j)
      if (slack[j] <= kActiveTol) rows.push_back(set.G().row(j).transpose());
  }
  Eigen::MatrixXd M(static_cast<Eigen::Index>(rows.size()), d);
  for (Eigen::Index j = 0; j < M.rows(); ++j)
    M.row(j) = rows[static_cast<std::size_t>(j)].transpose();
  return PolyhedralCone::from_halfspaces(d, M);
}

PolyhedralCone normal_cone(const FeasibleSet& set, const Eigen::VectorXd& x) {
  if (!set.contains(x, kActiveTol))
    fail(ErrorKind::InvalidInput, "normal cone: point is not in the set");
  const Eigen::Index d = set.dim();
  if (set.is_box()) {
    // Direct halfspace form in any dimension: inactive coordinates are
    // pinned to zero, active bounds leave the outward sign free.
    std::vector<Eigen::VectorXd> rows;
    for (Eigen::Index j = 0; j < d; ++j) {
      const bool lo = x[j] <= set.lower()[j] + kActiveTol;
      const bool up = x[j] >= set.upper()[j] - kActiveTol;
      Eigen::VectorXd e = Eigen::VectorXd::Zero(d);
      if (lo && up) continue;  // pinched coordinate: z_j free
      if (lo) {
        e[j] = 1.0;  // z_j <= 0
        rows.push_back(e);
      } else if (up) {
        e[j] = -1.0;  // z_j >= 0
        rows.push_back(e);
      } else {
        e[j] = 1.0;
        rows.push_back(e);
        e = Eigen::VectorXd::Zero(d);
        e[j] = -1.0;
        rows.push_back(e);  // z_j == 0
      }
    }
    Eigen::MatrixXd M(static_cast<Eigen::Index>(rows.size()), d);
    for (Eigen::Index j = 0; j < M.rows(); ++j)
      M.row(j) = rows[static_cast<std::size_t>(j)].transpose();
    return PolyhedralCone::from_halfspaces(d, M);
  }
  return tangent_cone(set, x).polar();
}

ConeLinearMin min_linear_over_unit_cone(const Eigen::VectorXd& c, const PolyhedralCone& cone) {
  ConeLinearMin out;
  if (cone.is_trivial()) {
    out.value = std::numeric_limits<double>::infinity();
    out.vacuous = true;
    out.exact = cone.has_rays();
    return out;
  }
  if (c.norm() <= 1e-15) {
    out.value = 0.0;
    return out;
  }

  // Moreau split: when -c has a nonzero projection p onto the cone, the
  // infimum is exactly -|p|, attained at p/|p|.
  const Eigen::VectorXd p = cone.project(-c);
  if (p.norm() > 1e-9) {
    out.value = -p.norm();
    return out;
  }

  if (cone.has_rays()) {
    // <c, .> is nonnegative on the cone here, and for unit generators r_j
    // any unit z = sum lambda_j r_j has sum lambda_j >= 1, so the minimum
    // over the sphere slice is min_j <c, r_j>.
    double best = std::numeric_limits<double>::infinity();
    for (const auto& r : cone.rays()) best = std::min(best, c.dot(r));
    out.value = best;
    return out;
  }

  // Sampled fallback (dimension > 3, nonnegative case): projected-gradient
  // descent of <c, z> over the unit slice from 64 random cone samples.
  // Lower-confidence estimate; flagged.
  out.exact = false;
  DetRng rng(987654321u);
  double best = std::numeric_limits<double>::infinity();
  int alive = 0;
  for (int s = 0; s < 64; ++s) {
    Eigen::VectorXd z = cone.project(rng.gaussian_vector(c.size()));
    const double nrm = z.norm();
    if (nrm <= 1e-12) continue;
    ++alive;
    z /= nrm;
    const double eta = 0.25 / std::max(1.0, c.norm());
    for (int it = 0; it < 200; ++it) {
      Eigen::VectorXd step = cone.project(z - eta * c);
      const double sn = step.norm();
      if (sn <= 1e-14) break;
      step /= sn;
      if ((step - z).norm() <= 1e-12) break;
      z = step;
    }
    best = std::min(best, c.dot(z));
  }
  if (alive == 0) {
    out.value = std::numeric_limits<double>::infinity();
    out.vacuous = true;
    return out;
  }
  out.value = best;
  return out;
}

}  // namespace gnep
