#include "gnep/solution_set.hpp"

namespace gnep {

SolutionSet SolutionSet::singleton(Eigen::VectorXd point) {
  if (point.size() == 0) fail(ErrorKind::InvalidInput, "solution set: empty point");
  SolutionSet s;
  s.point_ = std::move(point);
  return s;
}

SolutionSet SolutionSet::polytope(Eigen::MatrixXd G, Eigen::VectorXd h) {
  SolutionSet s;
  s.poly_ = FeasibleSet::polytope(std::move(G), std::move(h));
  return s;
}

const Eigen::VectorXd& SolutionSet::point() const {
  if (!point_) fail(ErrorKind::Unsupported, "solution set is not a singleton");
  return *point_;
}

const FeasibleSet& SolutionSet::polytope_set() const {
  if (!poly_) fail(ErrorKind::Unsupported, "solution set is not a polytope");
  return *poly_;
}

Eigen::Index SolutionSet::dim() const { return point_ ? point_->size() : poly_->dim(); }

Eigen::VectorXd SolutionSet::project(const Eigen::VectorXd& z) const {
  if (point_) return *point_;
  return poly_->project(z);
}

double SolutionSet::distance(const Eigen::VectorXd& z) const { return (z - project(z)).norm(); }

std::vector<Eigen::VectorXd> SolutionSet::evaluation_points() const {
  if (point_) return {*point_};
  return poly_->vertices();
}

PolyhedralCone SolutionSet::normal_cone_at(const Eigen::VectorXd& x) const {
  if (point_) {
    // (X* - x*) = {0}, whose polar is everything.
    if ((x - *point_).norm() > kActiveTol)
      fail(ErrorKind::InvalidInput, "normal cone: point is not the singleton solution");
    return PolyhedralCone::full_space(point_->size());
  }
  return normal_cone(*poly_, x);
}

}  // namespace gnep
