#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gnep/game.hpp"
#include "gnep/feasible_set.hpp"
#include "gnep/solution_set.hpp"

namespace gnep {

struct InstanceDefaults {
  std::optional<double> a;
  std::optional<double> r;
  std::optional<double> tol_sub;
  std::optional<double> tol_term;
  std::optional<long> max_iterations;
};

// A parsed and validated instance file: the quadratic game, the shared set,
// an optional declared solution set (certified on load: natural residual
// <= 1e-6 at every evaluation point, or loading fails), and defaults.
struct Instance {
  std::string id;
  QuadraticGame game;
  FeasibleSet set;
  std::optional<SolutionSet> solution;
  InstanceDefaults defaults;
  std::vector<std::string> warnings;  // zero-defaulted blocks, symmetrization
};

// Throws InvalidInput with a field diagnostic on malformed content.
Instance parse_instance(const nlohmann::json& doc, const std::string& id);
Instance load_instance_file(const std::string& path);

// Canonical form: all blocks written out (zeros included), keys sorted,
// shortest round-trip number formatting. write(parse(f)) is byte-identical
// for canonical files.
nlohmann::json instance_to_json(const Instance& inst);
std::string canonical_instance_text(const Instance& inst);
void write_instance_file(const std::string& path, const Instance& inst);

struct GenerateOptions {
  int players = 2;
  int dim_per_player = 1;
  std::uint64_t seed = 0;
  double delta_floor = 0.5;
};

// Deterministic generator: random coupling blocks, diagonal blocks shifted so
// the smallest eigenvalue of C + C' lands exactly at delta_floor + |slack|.
// The box excludes the origin when delta_floor > 0 so F need not vanish at
// the solution; a floor of 0 yields degenerate negative controls.
Instance generate_instance(const GenerateOptions& opts);

}  // namespace gnep
