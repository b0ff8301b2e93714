#pragma once

#include <Eigen/Core>
#include <optional>
#include <vector>

#include "gnep/cones.hpp"
#include "gnep/feasible_set.hpp"

namespace gnep {

// Description of the solution set X*: a single certified point or a
// polytope {x : G*x <= h*}. Projection and distance are exact for
// singletons and use the polytope machinery otherwise.
class SolutionSet {
 public:
  static SolutionSet singleton(Eigen::VectorXd point);
  static SolutionSet polytope(Eigen::MatrixXd G, Eigen::VectorXd h);

  bool is_singleton() const { return point_.has_value(); }
  const Eigen::VectorXd& point() const;
  const FeasibleSet& polytope_set() const;  // the wrapped {x : G*x <= h*}
  Eigen::Index dim() const;

  Eigen::VectorXd project(const Eigen::VectorXd& z) const;
  double distance(const Eigen::VectorXd& z) const;

  // Where the sharpness criterion is evaluated: the point itself, or the
  // vertices for a polytopal X* (dimension <= 3).
  std::vector<Eigen::VectorXd> evaluation_points() const;

  // N_{X*}(x): all of R^n for a singleton, polar of the tangent cone for a
  // polytope.
  PolyhedralCone normal_cone_at(const Eigen::VectorXd& x) const;

 private:
  SolutionSet() = default;

  std::optional<Eigen::VectorXd> point_;
  std::optional<FeasibleSet> poly_;
};

}  // namespace gnep
