#pragma once

#include <Eigen/Core>
#include <optional>
#include <vector>

#include "gnep/feasible_set.hpp"

namespace gnep {

// Polyhedral cone {z : Mz <= 0}. Carries the halfspace rows and, when the
// ambient dimension is <= 3 (or the cone is trivial/full), a unit generator
// list: extreme rays of the pointed part plus a +/- basis of the lineality
// space. Polarity swaps the two representations.
class PolyhedralCone {
 public:
  static PolyhedralCone full_space(Eigen::Index dim);
  static PolyhedralCone trivial(Eigen::Index dim);
  // Generators are enumerated eagerly when dim <= 3.
  static PolyhedralCone from_halfspaces(Eigen::Index dim, const Eigen::MatrixXd& rows);
  // Halfspace form is recovered (via the polar) when dim <= 3; otherwise the
  // cone is generator-only.
  static PolyhedralCone from_generators(Eigen::Index dim,
                                        const std::vector<Eigen::VectorXd>& gens);

  Eigen::Index dim() const { return dim_; }

  bool has_halfspaces() const { return rows_.has_value(); }
  const Eigen::MatrixXd& halfspace_rows() const;

  bool has_rays() const { return rays_.has_value(); }
  const std::vector<Eigen::VectorXd>& rays() const;
  int lineality_dim() const { return lineality_dim_; }

  bool is_full_space() const;
  // Exact when generators are known; otherwise decided by probing
  // projections of the coordinate directions.
  bool is_trivial() const;

  bool contains(const Eigen::VectorXd& z, double tol = 1e-10) const;
  Eigen::VectorXd project(const Eigen::VectorXd& z) const;

  PolyhedralCone polar() const;
  PolyhedralCone intersect(const PolyhedralCone& other) const;

 private:
  PolyhedralCone() = default;

  Eigen::Index dim_ = 0;
  std::optional<Eigen::MatrixXd> rows_;
  std::optional<std::vector<Eigen::VectorXd>> rays_;
  int lineality_dim_ = 0;
};

// Tangent cone T_X(x): halfspaces of the active constraints at x.
// Requires x in X within kActiveTol.
PolyhedralCone tangent_cone(const FeasibleSet& set, const Eigen::VectorXd& x);

// Normal cone N_X(x) = polar of T_X(x). Boxes get a direct halfspace form in
// any dimension; polytopes go through the polar (generator-only above dim 3).
PolyhedralCone normal_cone(const FeasibleSet& set, const Eigen::VectorXd& x);

struct ConeLinearMin {
  double value = 0.0;
  bool exact = true;    // false only for the sampled fallback estimate
  bool vacuous = false; // cone == {0}: the infimum over an empty sphere slice
};

// inf{ <c, z> : z in K, |z| = 1 }. Exact over the generator list when rays
// are known; exact via the Moreau projection -|P_K(-c)| whenever the infimum
// is negative; otherwise a projected-gradient estimate seeded from 64 random
// cone samples, flagged as non-exact. Vacuous cones report +infinity.
ConeLinearMin min_linear_over_unit_cone(const Eigen::VectorXd& c, const PolyhedralCone& cone);

}  // namespace gnep
