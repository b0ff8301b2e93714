#include "gnep/fixtures.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>

#include "gnep/diagnostics.hpp"
#include "gnep/oracle.hpp"
#include "gnep/rng.hpp"
#include "gnep/vi.hpp"

namespace gnep {

namespace {

using nlohmann::json;

[[noreturn]] void fact_fail(const std::string& name, const std::string& what) {
  fail(ErrorKind::InvalidInput, "fixture fact '" + name + "' failed validation: " + what);
}

Eigen::VectorXd json_vector(const json& j) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) v[static_cast<Eigen::Index>(k)] = j[k].get<double>();
  return v;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::InvalidInput, "cannot open '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    fail(ErrorKind::InvalidInput, path + ": JSON parse error: " + e.what());
  }
  return doc;
}

// Sharp construction: positive couplings and a box away from the origin make
// the lower corner the unique solution with F strictly positive there, so
// the cone criterion is positive by construction.
Instance construct_random_sharp(int k) {
  DetRng rng(7000u + static_cast<std::uint64_t>(k));
  const int N = 2 + (k % 2);
  const Dims dims(std::vector<int>(static_cast<std::size_t>(N), 1));
  BlockMap blocks;
  for (int l = 0; l < N; ++l)
    for (int i = 0; i < N; ++i) {
      Eigen::MatrixXd b(1, 1);
      b(0, 0) = (l == i) ? rng.uniform(1.0, 1.5) : rng.uniform(0.05, 0.12);
      blocks[{l, i}] = b;
    }
  QuadraticGame game = build_quadratic_game(dims, blocks);
  const Eigen::Index n = dims.total();
  FeasibleSet set = FeasibleSet::box(Eigen::VectorXd::Constant(n, 1.0),
                                     Eigen::VectorXd::Constant(n, 2.0));
  Instance inst{"random-sharp-" + std::to_string(k), std::move(game), std::move(set),
                SolutionSet::singleton(Eigen::VectorXd::Constant(n, 1.0)), {}, {}};
  inst.defaults.a = inst.game.delta() / 2.0;
  inst.defaults.r = 1.0;
  return inst;
}

// Degenerate construction: same matrix class, box straddling the origin, so
// the unique solution is the interior point 0 with F(0) = 0.
Instance construct_random_degenerate(int k) {
  DetRng rng(8000u + static_cast<std::uint64_t>(k));
  const int N = 2 + (k % 2);
  const Dims dims(std::vector<int>(static_cast<std::size_t>(N), 1));
  BlockMap blocks;
  for (int l = 0; l < N; ++l)
    for (int i = 0; i < N; ++i) {
      Eigen::MatrixXd b(1, 1);
      b(0, 0) = (l == i) ? rng.uniform(1.0, 1.5) : rng.uniform(0.05, 0.12);
      blocks[{l, i}] = b;
    }
  QuadraticGame game = build_quadratic_game(dims, blocks);
  const Eigen::Index n = dims.total();
  FeasibleSet set = FeasibleSet::box(Eigen::VectorXd::Constant(n, -1.0),
                                     Eigen::VectorXd::Constant(n, 1.0));
  Instance inst{"random-degenerate-" + std::to_string(k), std::move(game), std::move(set),
                SolutionSet::singleton(Eigen::VectorXd::Zero(n)), {}, {}};
  inst.defaults.a = inst.game.delta() / 2.0;
  inst.defaults.r = 1.0;
  return inst;
}

json synthetic_facts(const Instance& inst, bool sharp) {
  json facts;
  facts["instance"] = inst.id;
  facts["facts"]["delta"] = {{"value", inst.game.delta()},
                             {"checked_by", "smallest eigenvalue of C + C^T, recomputed on load"}};
  json xs = json::array();
  const Eigen::VectorXd p = inst.solution->point();
  for (Eigen::Index j = 0; j < p.size(); ++j) xs.push_back(p[j]);
  facts["facts"]["x_star"] = {
      {"value", xs},
      {"checked_by", "natural-map residual at the point and a residual grid scan"}};
  facts["facts"]["gamma_sign"] = {
      {"value", sharp ? "positive" : "zero"},
      {"checked_by", "extreme-ray minimization over the tangent/normal intersection"}};
  return facts;
}

}  // namespace

void validate_fixture_facts(const Instance& inst, const json& facts) {
  if (!facts.contains("facts")) fail(ErrorKind::InvalidInput, "facts sidecar has no 'facts' object");
  const json& f = facts.at("facts");

  SolutionSet xstar = inst.solution ? *inst.solution
                      : f.contains("x_star")
                          ? SolutionSet::singleton(json_vector(f.at("x_star").at("value")))
                          : SolutionSet::singleton(inst.set.reference_point());

  if (f.contains("delta")) {
    const double expected = f.at("delta").at("value").get<double>();
    if (std::abs(inst.game.delta() - expected) > 1e-10)
      fact_fail("delta", "recomputed " + std::to_string(inst.game.delta()) + " vs recorded " +
                             std::to_string(expected));
  }

  if (f.contains("x_star")) {
    const Eigen::VectorXd p = json_vector(f.at("x_star").at("value"));
    const double residual = vi_residual(inst.game, inst.set, p);
    if (residual > 1e-6) fact_fail("x_star", "natural residual " + std::to_string(residual));
    const double a = inst.defaults.a.value_or(inst.game.delta() / 2.0);
    RegularizedEvaluator ev(std::make_shared<QuadraticGame>(inst.game), a);
    const double gap = ev.gap(inst.set, p);
    if (gap > 1e-8) fact_fail("x_star", "gap " + std::to_string(gap) + " above 1e-8");
    if (inst.game.n() <= 3) {
      const auto scan = grid_scan_nne(inst.game, inst.set, GridSpec::over(inst.set, 41));
      if (!scan.contains_within_cell(p))
        fact_fail("x_star", "residual grid scan has no cell near the point");
    }
  }

  if (f.contains("gamma_cone")) {
    const double expected = f.at("gamma_cone").at("value").get<double>();
    const ConeGamma cg = gamma_from_cones(inst.game, inst.set, xstar);
    if (cg.vacuous) fact_fail("gamma_cone", "recomputed cone is vacuous");
    if (std::abs(cg.value - expected) > 1e-8)
      fact_fail("gamma_cone", "recomputed " + std::to_string(cg.value) + " vs recorded " +
                                  std::to_string(expected));
  }

  if (f.contains("gamma_sign")) {
    const std::string expected = f.at("gamma_sign").at("value").get<std::string>();
    const ConeGamma cg = gamma_from_cones(inst.game, inst.set, xstar);
    const std::string got = cg.vacuous ? "vacuous" : (cg.value > 1e-8 ? "positive" : "zero");
    if (got != expected) fact_fail("gamma_sign", "recomputed " + got + " vs recorded " + expected);
  }

  if (f.contains("spot")) {
    const json& s = f.at("spot");
    const double a = s.at("a").get<double>();
    const Eigen::VectorXd x = json_vector(s.at("x"));
    RegularizedEvaluator ev(std::make_shared<QuadraticGame>(inst.game), a);
    if (s.contains("V_a")) {
      const double got = ev.gap(inst.set, x);
      if (std::abs(got - s.at("V_a").get<double>()) > 1e-9)
        fact_fail("spot.V_a", "recomputed " + std::to_string(got));
    }
    if (s.contains("psi_a_at_projection")) {
      const double got = ev.reg_psi(x, xstar.project(x));
      if (std::abs(got - s.at("psi_a_at_projection").get<double>()) > 1e-9)
        fact_fail("spot.psi_a_at_projection", "recomputed " + std::to_string(got));
    }
    if (s.contains("ni_psi_at_projection")) {
      const double got = ev.ni_psi(x, xstar.project(x));
      if (std::abs(got - s.at("ni_psi_at_projection").get<double>()) > 1e-9)
        fact_fail("spot.ni_psi_at_projection", "recomputed " + std::to_string(got));
    }
  }
}

Fixture load_fixture(const std::string& name, const std::string& dir) {
  if (name == "E1" || name == "E0") {
    const std::filesystem::path base(dir);
    Fixture fx{name, load_instance_file((base / (name + ".json")).string()),
               read_json_file((base / (name + ".facts.json")).string())};
    fx.instance.id = name;
    validate_fixture_facts(fx.instance, fx.facts);
    return fx;
  }

  auto parse_index = [&](const std::string& prefix) -> int {
    const std::string tail = name.substr(prefix.size());
    try {
      const int k = std::stoi(tail);
      if (k >= 1 && k <= 5) return k;
    } catch (const std::exception&) {
    }
    fail(ErrorKind::InvalidInput, "fixture index out of range in '" + name + "' (1..5)");
  };

  if (name.rfind("random-sharp-", 0) == 0) {
    const int k = parse_index("random-sharp-");
    Fixture fx{name, construct_random_sharp(k), {}};
    fx.facts = synthetic_facts(fx.instance, true);
    validate_fixture_facts(fx.instance, fx.facts);
    return fx;
  }
  if (name.rfind("random-degenerate-", 0) == 0) {
    const int k = parse_index("random-degenerate-");
    Fixture fx{name, construct_random_degenerate(k), {}};
    fx.facts = synthetic_facts(fx.instance, false);
    validate_fixture_facts(fx.instance, fx.facts);
    return fx;
  }

  fail(ErrorKind::InvalidInput, "unknown fixture '" + name + "'");
}

}  // namespace gnep
