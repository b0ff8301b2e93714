#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "gnep/instance.hpp"

namespace gnep {

// Exit codes shared by every command: 0 success, 1 malformed input,
// 2 iteration cap, 3 precondition absent.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitCap = 2;
inline constexpr int kExitPrecondition = 3;

struct GenerateCmdOptions {
  GenerateOptions gen;
  std::string out = "instance.json";
};
int cmd_generate(const GenerateCmdOptions& opts, std::ostream& log);

struct SolveCmdOptions {
  std::vector<std::string> instances;
  std::string method = "ppa";  // "ppa" | "extragradient"
  std::optional<double> a;
  std::optional<double> r;
  std::optional<double> epsilon;
  std::optional<double> tol;         // tol_term (ppa) or residual tol (extragradient)
  std::optional<long> max_iterations;
  std::optional<std::vector<double>> x0;
  std::string out_dir = ".";
  int jobs = 1;
};
// Writes <id>.trace.csv and <id>.report.json per instance.
int cmd_solve(const SolveCmdOptions& opts, std::ostream& log);

struct DiagnoseCmdOptions {
  std::vector<std::string> instances;
  std::optional<double> a;
  int grid_n = 41;
  std::string out_dir = ".";
  int jobs = 1;
};
// Writes <id>.sharpness.json per instance. a > delta is informative
// (NOT-APPLICABLE verdict), not fatal.
int cmd_diagnose(const DiagnoseCmdOptions& opts, std::ostream& log);

struct BoundCmdOptions {
  std::string instance;
  std::optional<double> a;
  std::optional<double> r;
  std::optional<double> epsilon;
  std::optional<std::vector<double>> x0;
  std::optional<std::string> trace_csv;  // measured k0 cross-check
  std::string out_dir = ".";
};
// Prints d0, epsilon, gamma and the step bound; exit 3 when gamma <= 0.
int cmd_bound(const BoundCmdOptions& opts, std::ostream& log);

struct VerifyCmdOptions {
  std::string instance;
  std::optional<std::string> facts;  // optional facts sidecar to re-validate
};
int cmd_verify(const VerifyCmdOptions& opts, std::ostream& log);

// Measured termination index from a trace CSV: the last row's k if its gap
// column is at or below tol_term.
std::optional<long> measured_k0_from_trace(const std::string& csv_path, double tol_term);

}  // namespace gnep
