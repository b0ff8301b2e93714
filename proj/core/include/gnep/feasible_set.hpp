#pragma once

#include <Eigen/Core>
#include <utility>
#include <vector>

#include "gnep/errors.hpp"

namespace gnep {

// Activity tolerance shared by projections, cone construction and membership
// tests. Documented knob: inner solves resolve points to ~1e-10, so active
// constraints are detected one-to-two orders above that.
inline constexpr double kActiveTol = 1e-8;

// Shared closed convex strategy set X: either a coordinate box or a
// polytope {x : Gx <= h}. Nonemptiness is established at build time;
// projection and distance never fail afterwards.
class FeasibleSet {
 public:
  enum class Kind { Box, Polytope };

  static FeasibleSet box(Eigen::VectorXd lower, Eigen::VectorXd upper);
  static FeasibleSet polytope(Eigen::MatrixXd G, Eigen::VectorXd h);

  Kind kind() const { return kind_; }
  bool is_box() const { return kind_ == Kind::Box; }
  Eigen::Index dim() const { return dim_; }

  const Eigen::VectorXd& lower() const;
  const Eigen::VectorXd& upper() const;
  const Eigen::MatrixXd& G() const;
  const Eigen::VectorXd& h() const;

  // Euclidean projection. Boxes clamp coordinate-wise; polytopes run
  // Dykstra's alternating projections over the halfspaces (movement
  // tolerance 1e-12, sweep cap 1e5).
  Eigen::VectorXd project(const Eigen::VectorXd& z) const;
  double distance(const Eigen::VectorXd& z) const;
  bool contains(const Eigen::VectorXd& z, double tol = kActiveTol) const;

  // A feasible point: box midpoint, or the phase-1 point found at build time.
  const Eigen::VectorXd& reference_point() const { return reference_; }

  // Tight coordinate bounds. Exact for boxes; polytopes go through vertex
  // enumeration and are supported in dimension <= 3.
  std::pair<Eigen::VectorXd, Eigen::VectorXd> bounding_box() const;

  // Vertex list (dimension <= 3 for polytopes).
  std::vector<Eigen::VectorXd> vertices() const;

 private:
  FeasibleSet() = default;

  Kind kind_ = Kind::Box;
  Eigen::Index dim_ = 0;
  Eigen::VectorXd lower_, upper_;  // box
  Eigen::MatrixXd G_;              // polytope
  Eigen::VectorXd h_;
  Eigen::VectorXd reference_;
};

// Dykstra's algorithm over halfspaces {g_j . x <= h_j}; exposed for reuse by
// the cone projections (h = 0 there).
Eigen::VectorXd project_onto_halfspaces(const Eigen::MatrixXd& G, const Eigen::VectorXd& h,
                                        const Eigen::VectorXd& z);

// Vertices of {x : Gx <= h} in dimension <= 3 by basis enumeration.
// Throws InvalidInput when the polytope is unbounded or empty.
std::vector<Eigen::VectorXd> enumerate_polytope_vertices(const Eigen::MatrixXd& G,
                                                         const Eigen::VectorXd& h);

}  // namespace gnep
