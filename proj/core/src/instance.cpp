#include "gnep/instance.hpp"

#include <Eigen/Eigenvalues>
#include <fstream>
#include <sstream>

#include "gnep/rng.hpp"
#include "gnep/vi.hpp"

namespace gnep {

namespace {

using nlohmann::json;

[[noreturn]] void input_error(const std::string& where, const std::string& what) {
  fail(ErrorKind::InvalidInput, where + ": " + what);
}

const json& field(const json& j, const std::string& where, const std::string& key) {
  if (!j.contains(key)) input_error(where, "missing field '" + key + "'");
  return j.at(key);
}

double as_number(const json& j, const std::string& where) {
  if (!j.is_number()) input_error(where, "expected a number");
  return j.get<double>();
}

std::vector<double> as_number_array(const json& j, const std::string& where) {
  if (!j.is_array()) input_error(where, "expected an array of numbers");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) input_error(where, "expected an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

Eigen::VectorXd as_vector(const json& j, const std::string& where) {
  const auto vals = as_number_array(j, where);
  Eigen::VectorXd v(static_cast<Eigen::Index>(vals.size()));
  for (std::size_t k = 0; k < vals.size(); ++k) v[static_cast<Eigen::Index>(k)] = vals[k];
  return v;
}

// Row-major array of arrays of decimals.
Eigen::MatrixXd as_matrix(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) input_error(where, "expected a non-empty array of rows");
  const std::size_t cols = j.front().is_array() ? j.front().size() : 0;
  if (cols == 0) input_error(where, "expected rows to be non-empty arrays");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    const auto row = as_number_array(j[r], where + " row " + std::to_string(r));
    if (row.size() != cols) input_error(where, "ragged rows");
    for (std::size_t c = 0; c < cols; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row[c];
  }
  return m;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index j = 0; j < v.size(); ++j) out.push_back(v[j]);
  return out;
}

BlockKey parse_block_key(const std::string& key, int players) {
  const auto comma = key.find(',');
  if (comma == std::string::npos) input_error("A", "block key '" + key + "' is not 'l,i'");
  int l = 0, i = 0;
  try {
    l = std::stoi(key.substr(0, comma));
    i = std::stoi(key.substr(comma + 1));
  } catch (const std::exception&) {
    input_error("A", "block key '" + key + "' is not 'l,i'");
  }
  if (l < 1 || l > players || i < 1 || i > players)
    input_error("A", "block key '" + key + "' out of the 1.." + std::to_string(players) + " range");
  return {l - 1, i - 1};
}

}  // namespace

Instance parse_instance(const json& doc, const std::string& id) {
  if (!doc.is_object()) input_error(id, "instance file must be a JSON object");

  const json& jn = field(doc, id, "n_players");
  if (!jn.is_number_integer() || jn.get<int>() < 1)
    input_error(id + ".n_players", "expected a positive integer");
  const int players = jn.get<int>();

  const json& jd = field(doc, id, "dims");
  if (!jd.is_array() || static_cast<int>(jd.size()) != players)
    input_error(id + ".dims", "expected an array of length n_players");
  std::vector<int> sizes;
  for (const auto& v : jd) {
    if (!v.is_number_integer() || v.get<int>() < 1)
      input_error(id + ".dims", "expected positive integers");
    sizes.push_back(v.get<int>());
  }
  const Dims dims(sizes);

  BlockMap blocks;
  const json& ja = field(doc, id, "A");
  if (!ja.is_object()) input_error(id + ".A", "expected an object keyed by 'l,i'");
  for (const auto& [key, value] : ja.items())
    blocks[parse_block_key(key, players)] = as_matrix(value, id + ".A['" + key + "']");

  QuadraticGame game = build_quadratic_game(dims, blocks);

  const json& jf = field(doc, id, "feasible_set");
  const std::string ftype = field(jf, id + ".feasible_set", "type").get<std::string>();
  FeasibleSet set = [&]() {
    if (ftype == "box") {
      Eigen::VectorXd lo = as_vector(field(jf, id, "lower"), id + ".feasible_set.lower");
      Eigen::VectorXd up = as_vector(field(jf, id, "upper"), id + ".feasible_set.upper");
      if (lo.size() != dims.total())
        input_error(id + ".feasible_set", "box bounds must have total dimension");
      return FeasibleSet::box(std::move(lo), std::move(up));
    }
    if (ftype == "polytope") {
      Eigen::MatrixXd G = as_matrix(field(jf, id, "G"), id + ".feasible_set.G");
      Eigen::VectorXd h = as_vector(field(jf, id, "h"), id + ".feasible_set.h");
      if (G.cols() != dims.total())
        input_error(id + ".feasible_set", "G must have total-dimension columns");
      return FeasibleSet::polytope(std::move(G), std::move(h));
    }
    input_error(id + ".feasible_set.type", "expected 'box' or 'polytope'");
  }();

  Instance inst{id, std::move(game), std::move(set), std::nullopt, {}, {}};
  inst.warnings = inst.game.build_warnings();

  if (doc.contains("solution_set") && !doc.at("solution_set").is_null()) {
    const json& js = doc.at("solution_set");
    const std::string stype = field(js, id + ".solution_set", "type").get<std::string>();
    if (stype == "singleton") {
      inst.solution = SolutionSet::singleton(
          as_vector(field(js, id, "point"), id + ".solution_set.point"));
    } else if (stype == "polytope") {
      inst.solution =
          SolutionSet::polytope(as_matrix(field(js, id, "G"), id + ".solution_set.G"),
                                as_vector(field(js, id, "h"), id + ".solution_set.h"));
    } else {
      input_error(id + ".solution_set.type", "expected 'singleton' or 'polytope'");
    }
    // A declared solution set must certify, or the file is rejected.
    for (const auto& p : inst.solution->evaluation_points()) {
      if (!inst.set.contains(p, kActiveTol))
        input_error(id + ".solution_set", "declared point lies outside the feasible set");
      const double r = vi_residual(inst.game, inst.set, p);
      if (r > 1e-6)
        input_error(id + ".solution_set",
                    "declared point fails certification (natural residual " + std::to_string(r) +
                        " > 1e-6)");
    }
  }

  if (doc.contains("defaults") && !doc.at("defaults").is_null()) {
    const json& jdef = doc.at("defaults");
    if (!jdef.is_object()) input_error(id + ".defaults", "expected an object");
    if (jdef.contains("a")) inst.defaults.a = as_number(jdef.at("a"), id + ".defaults.a");
    if (jdef.contains("r")) inst.defaults.r = as_number(jdef.at("r"), id + ".defaults.r");
    if (jdef.contains("tol_sub"))
      inst.defaults.tol_sub = as_number(jdef.at("tol_sub"), id + ".defaults.tol_sub");
    if (jdef.contains("tol_term"))
      inst.defaults.tol_term = as_number(jdef.at("tol_term"), id + ".defaults.tol_term");
    if (jdef.contains("max_iterations"))
      inst.defaults.max_iterations = jdef.at("max_iterations").get<long>();
  }

  return inst;
}

Instance load_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::InvalidInput, "cannot open instance file '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    fail(ErrorKind::InvalidInput, path + ": JSON parse error: " + e.what());
  }
  std::string id = path;
  const auto slash = id.find_last_of('/');
  if (slash != std::string::npos) id = id.substr(slash + 1);
  const auto dot = id.rfind(".json");
  if (dot != std::string::npos) id = id.substr(0, dot);
  return parse_instance(doc, id);
}

json instance_to_json(const Instance& inst) {
  const Dims& dims = inst.game.dims();
  json doc;
  doc["n_players"] = inst.game.players();
  doc["dims"] = dims.sizes();
  json blocks = json::object();
  for (int l = 0; l < inst.game.players(); ++l)
    for (int i = 0; i < inst.game.players(); ++i) {
      std::ostringstream key;
      key << (l + 1) << ',' << (i + 1);
      blocks[key.str()] = matrix_to_json(inst.game.block(l, i));
    }
  doc["A"] = blocks;
  if (inst.set.is_box()) {
    doc["feasible_set"] = {{"type", "box"},
                           {"lower", vector_to_json(inst.set.lower())},
                           {"upper", vector_to_json(inst.set.upper())}};
  } else {
    doc["feasible_set"] = {{"type", "polytope"},
                           {"G", matrix_to_json(inst.set.G())},
                           {"h", vector_to_json(inst.set.h())}};
  }
  if (inst.solution) {
    if (inst.solution->is_singleton())
      doc["solution_set"] = {{"type", "singleton"},
                             {"point", vector_to_json(inst.solution->point())}};
    else
      doc["solution_set"] = {{"type", "polytope"},
                             {"G", matrix_to_json(inst.solution->polytope_set().G())},
                             {"h", vector_to_json(inst.solution->polytope_set().h())}};
  }
  json defs = json::object();
  if (inst.defaults.a) defs["a"] = *inst.defaults.a;
  if (inst.defaults.r) defs["r"] = *inst.defaults.r;
  if (inst.defaults.tol_sub) defs["tol_sub"] = *inst.defaults.tol_sub;
  if (inst.defaults.tol_term) defs["tol_term"] = *inst.defaults.tol_term;
  if (inst.defaults.max_iterations) defs["max_iterations"] = *inst.defaults.max_iterations;
  if (!defs.empty()) doc["defaults"] = defs;
  return doc;
}

std::string canonical_instance_text(const Instance& inst) {
  return instance_to_json(inst).dump(2) + "\n";
}

void write_instance_file(const std::string& path, const Instance& inst) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::InvalidInput, "cannot write instance file '" + path + "'");
  out << canonical_instance_text(inst);
}

Instance generate_instance(const GenerateOptions& opts) {
  if (opts.players < 1) fail(ErrorKind::InvalidInput, "generate: players must be >= 1");
  if (opts.dim_per_player < 1) fail(ErrorKind::InvalidInput, "generate: dim must be >= 1");
  if (opts.delta_floor < 0.0) fail(ErrorKind::InvalidInput, "generate: delta_floor must be >= 0");

  DetRng rng(opts.seed);
  const int N = opts.players;
  const int d = opts.dim_per_player;
  const Dims dims(std::vector<int>(static_cast<std::size_t>(N), d));

  // Mild couplings, then shift the diagonal blocks so lambda_min(C + C')
  // lands exactly on the requested floor plus sampled slack. The shift keeps
  // every A_ii positive semidefinite: lambda_min(C + C') never exceeds the
  // smallest diagonal-block eigenvalue.
  const double coupling = 0.3 / std::max(1, N - 1);
  BlockMap blocks;
  for (int l = 0; l < N; ++l) {
    for (int i = 0; i < N; ++i) {
      if (l == i) {
        Eigen::MatrixXd U(d, d);
        for (int r = 0; r < d; ++r)
          for (int c = 0; c < d; ++c) U(r, c) = rng.uniform(-0.2, 0.2);
        blocks[{l, i}] =
            0.5 * (U + U.transpose()) + Eigen::MatrixXd::Identity(d, d);
      } else {
        Eigen::MatrixXd B(d, d);
        for (int r = 0; r < d; ++r)
          for (int c = 0; c < d; ++c) B(r, c) = rng.uniform(-coupling, coupling);
        blocks[{l, i}] = B;
      }
    }
  }

  const double slack = rng.uniform(0.05, 0.3);
  const double target = opts.delta_floor + slack;
  {
    QuadraticGame probe = build_quadratic_game(dims, blocks);
    const double shift = target - probe.delta();
    for (int i = 0; i < N; ++i)
      blocks[{i, i}] += shift * Eigen::MatrixXd::Identity(d, d);
  }
  QuadraticGame game = build_quadratic_game(dims, blocks);

  const Eigen::Index n = dims.total();
  FeasibleSet set = opts.delta_floor > 0.0
                        ? FeasibleSet::box(Eigen::VectorXd::Constant(n, 1.0),
                                           Eigen::VectorXd::Constant(n, 2.0))
                        : FeasibleSet::box(Eigen::VectorXd::Constant(n, -1.0),
                                           Eigen::VectorXd::Constant(n, 1.0));

  std::ostringstream id;
  id << "gen-p" << N << "d" << d << "s" << opts.seed;
  Instance inst{id.str(), std::move(game), std::move(set), std::nullopt, {}, {}};
  inst.defaults.a = inst.game.delta() / 2.0;
  inst.defaults.r = 1.0;
  return inst;
}

}  // namespace gnep
