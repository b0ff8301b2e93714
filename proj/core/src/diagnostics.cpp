#include "gnep/diagnostics.hpp"

#include <cmath>

#include "gnep/vi.hpp"

namespace gnep {

namespace {

constexpr double kGammaPositive = 1e-8;

// A grid indicator is degenerate when refining the grid keeps driving the
// minimum down (the infimum is 0); a bounded-away minimum is stable under
// refinement up to interpolation error.
std::string grid_verdict(double base, double refined) {
  if (!std::isfinite(base)) return "vacuous";
  if (base <= 1e-9) return "degenerate";
  if (refined <= 0.5 * base) return "degenerate";
  return "sharp";
}

std::string cone_verdict(const ConeGamma& cg) {
  if (cg.vacuous) return "vacuous";
  return cg.value > kGammaPositive ? "sharp" : "degenerate";
}

}  // namespace

ConeGamma gamma_from_cones(const Game& game, const FeasibleSet& set, const SolutionSet& xstar) {
  const auto points = xstar.evaluation_points();
  for (const auto& p : points) {
    const double r = vi_residual(game, set, p);
    if (r > 1e-6)
      fail(ErrorKind::InvalidInput,
           "solution set fails certification: natural residual " + std::to_string(r));
  }

  ConeGamma out;
  out.value = std::numeric_limits<double>::infinity();
  bool any = false;
  for (const auto& p : points) {
    const PolyhedralCone cone = tangent_cone(set, p).intersect(xstar.normal_cone_at(p));
    const ConeLinearMin m = min_linear_over_unit_cone(F_map(game, p), cone);
    if (m.vacuous) continue;
    any = true;
    out.value = std::min(out.value, m.value);
    out.exact = out.exact && m.exact;
  }
  if (!any) {
    out.vacuous = true;
    out.value = std::numeric_limits<double>::infinity();
  }
  return out;
}

RatioMin check_error_bound(const RegularizedEvaluator& ev, const FeasibleSet& set,
                           const SolutionSet& xstar, const GridSpec& grid) {
  RatioMin out;
  for_each_grid_point(grid, set, [&](const Eigen::VectorXd& x) {
    const double d = xstar.distance(x);
    if (d <= kExclusionRadius) return;
    ++out.points_used;
    out.value = std::min(out.value, ev.gap(set, x) / d);
  });
  return out;
}

RatioMin check_linear_conditioning(const RegularizedEvaluator& ev, const FeasibleSet& set,
                                   const SolutionSet& xstar, const GridSpec& grid) {
  RatioMin out;
  for_each_grid_point(grid, set, [&](const Eigen::VectorXd& x) {
    const double d = xstar.distance(x);
    if (d <= kExclusionRadius) return;
    ++out.points_used;
    out.value = std::min(out.value, ev.reg_psi(x, xstar.project(x)) / d);
  });
  return out;
}

std::string check_equivalence(const SharpnessReport& report) {
  if (!report.convexity_prerequisite) return "NOT-APPLICABLE";
  std::vector<std::string> votes;
  if (report.verdict_weak_sharpness != "vacuous") votes.push_back(report.verdict_weak_sharpness);
  if (report.verdict_error_bound != "vacuous") votes.push_back(report.verdict_error_bound);
  if (report.verdict_linear_conditioning != "vacuous")
    votes.push_back(report.verdict_linear_conditioning);
  if (votes.empty()) return "VACUOUS";
  for (const auto& v : votes)
    if (v != votes.front()) return "FAIL";
  return votes.front() == "sharp" ? "PASS-sharp" : "PASS-degenerate";
}

SharpnessReport diagnose(const RegularizedEvaluator& ev, const FeasibleSet& set,
                         const SolutionSet& xstar, int base_grid_n,
                         const std::string& instance_id) {
  if (base_grid_n < 2) fail(ErrorKind::InvalidInput, "diagnose: grid must have >= 2 points per dim");
  SharpnessReport report;
  report.instance_id = instance_id;
  report.a = ev.a();
  report.convexity_prerequisite = ev.convexity_prerequisite().value_or(true);

  const ConeGamma cg = gamma_from_cones(ev.game(), set, xstar);
  if (!cg.vacuous) report.gamma_cone = cg.value;
  report.gamma_cone_exact = cg.exact;
  report.verdict_weak_sharpness = cone_verdict(cg);

  const int refined_n = 4 * (base_grid_n - 1) + 1;
  const GridSpec base = GridSpec::over(set, base_grid_n);
  const GridSpec refined = GridSpec::over(set, refined_n);

  const RatioMin eb = check_error_bound(ev, set, xstar, base);
  const RatioMin ebr = check_error_bound(ev, set, xstar, refined);
  report.error_bound = {eb.value,
                        ebr.value,
                        eb.points_used,
                        ebr.points_used,
                        base.counts(),
                        refined.counts()};
  report.verdict_error_bound = grid_verdict(eb.value, ebr.value);

  const RatioMin lc = check_linear_conditioning(ev, set, xstar, base);
  const RatioMin lcr = check_linear_conditioning(ev, set, xstar, refined);
  report.linear_conditioning = {lc.value,
                                lcr.value,
                                lc.points_used,
                                lcr.points_used,
                                base.counts(),
                                refined.counts()};
  report.verdict_linear_conditioning = grid_verdict(lc.value, lcr.value);

  report.verdict_equivalence = check_equivalence(report);
  return report;
}

nlohmann::json SharpnessReport::to_json() const {
  nlohmann::json j;
  j["instance"] = instance_id;
  j["a"] = a;
  j["convexity_prerequisite"] = convexity_prerequisite;
  if (gamma_cone)
    j["gamma_cone"] = {{"value", *gamma_cone}, {"exact", gamma_cone_exact}, {"vacuous", false}};
  else
    j["gamma_cone"] = {{"value", "vacuous (cone trivial)"},
                       {"exact", gamma_cone_exact},
                       {"vacuous", true}};
  auto indicator = [](const GridIndicator& g) {
    nlohmann::json out;
    out["value"] = std::isfinite(g.value) ? nlohmann::json(g.value) : nlohmann::json("vacuous");
    out["refined_value"] =
        std::isfinite(g.refined_value) ? nlohmann::json(g.refined_value) : nlohmann::json("vacuous");
    out["grid"] = g.grid;
    out["refined_grid"] = g.refined_grid;
    out["points_used"] = g.points_used;
    out["refined_points_used"] = g.refined_points_used;
    return out;
  };
  j["gamma_grid_errorbound"] = indicator(error_bound);
  j["gamma_grid_lincond"] = indicator(linear_conditioning);
  j["verdicts"] = {{"weak_sharpness", verdict_weak_sharpness},
                   {"error_bound", verdict_error_bound},
                   {"linear_conditioning", verdict_linear_conditioning},
                   {"equivalence", verdict_equivalence}};
  j["exclusion_radius"] = exclusion_radius;
  return j;
}

}  // namespace gnep
