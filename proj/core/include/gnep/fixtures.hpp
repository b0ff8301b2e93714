#pragma once

#include <string>

#include <json.hpp>

#include "gnep/instance.hpp"

namespace gnep {

// A canonical test instance plus its certified facts. Facts live in a JSON
// sidecar (instance files and fact files, not code constants) and every fact
// is re-validated on load; a mismatch aborts loading loudly.
struct Fixture {
  std::string name;
  Instance instance;
  nlohmann::json facts;
};

// Names: "E1" (sharp), "E0" (degenerate) read from `dir`;
// "random-sharp-k" / "random-degenerate-k" (k = 1..5) are synthesized
// deterministically and certified on the fly.
Fixture load_fixture(const std::string& name, const std::string& dir);

// Re-validates a facts sidecar against the instance; throws InvalidInput on
// the first mismatch. Recognized facts: delta, x_star, gamma_cone, and spot
// values of the regularized machinery at a probe point.
void validate_fixture_facts(const Instance& instance, const nlohmann::json& facts);

}  // namespace gnep
