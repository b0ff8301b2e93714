#include "gnep/commands.hpp"

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "gnep/diagnostics.hpp"
#include "gnep/fixtures.hpp"
#include "gnep/nikaido.hpp"
#include "gnep/ppa.hpp"
#include "gnep/version.hpp"
#include "gnep/vi.hpp"

namespace gnep {

namespace {

using nlohmann::json;

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::InvalidInput:
      return kExitInput;
    case ErrorKind::IterationCap:
      return kExitCap;
    case ErrorKind::PreconditionMissing:
      return kExitPrecondition;
    case ErrorKind::Unsupported:
      return kExitInput;
  }
  return kExitInput;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index j = 0; j < v.size(); ++j) out.push_back(v[j]);
  return out;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::InvalidInput, "cannot write '" + path + "'");
  out << text;
}

// Run reports carry the command echo and wall time; everything reproducible
// (traces, instances, verdicts) lives in its own byte-stable file.
json run_report(const std::string& command, json config, json outcome, double wall_seconds) {
  json report;
  report["command"] = command;
  report["config"] = std::move(config);
  report["outcome"] = std::move(outcome);
  report["wall_time_s"] = wall_seconds;
  report["version"] = kVersion;
  return report;
}

Eigen::VectorXd default_start(const Instance& inst) { return inst.set.reference_point(); }

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t k = 0; k < v.size(); ++k) out[static_cast<Eigen::Index>(k)] = v[k];
  return out;
}

double pick_a(const Instance& inst, const std::optional<double>& flag) {
  if (flag) return *flag;
  if (inst.defaults.a) return *inst.defaults.a;
  return inst.game.delta() / 2.0;
}

// The declared solution set when present, otherwise the extragradient
// singleton validated by multi-start agreement.
SolutionSet resolve_solution_set(const Instance& inst) {
  if (inst.solution) return *inst.solution;
  const VIResult first = solve_vi_extragradient(inst.game, inst.set, inst.set.reference_point());
  if (!first.converged)
    fail(ErrorKind::IterationCap, inst.id + ": extragradient did not certify a solution");
  auto [lo, up] = inst.set.bounding_box();
  const VIResult second = solve_vi_extragradient(inst.game, inst.set, inst.set.project(up));
  if (!second.converged || (first.x - second.x).norm() > 1e-6)
    fail(ErrorKind::PreconditionMissing,
         inst.id + ": multi-start extragradient runs disagree, no singleton solution set");
  return SolutionSet::singleton(first.x);
}

// Deterministic per-instance work fanned out over a small pool; outputs are
// per-instance files, so ordering does not matter.
int run_batch(const std::vector<std::string>& paths, int jobs,
              const std::function<int(const std::string&)>& work, std::ostream& log) {
  std::atomic<std::size_t> next{0};
  std::atomic<int> worst{kExitOk};
  std::mutex log_mutex;
  auto body = [&]() {
    for (;;) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= paths.size()) return;
      int code = kExitOk;
      try {
        code = work(paths[idx]);
      } catch (const Error& e) {
        std::lock_guard<std::mutex> lock(log_mutex);
        log << paths[idx] << ": " << e.what() << "\n";
        code = exit_code_for(e);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(log_mutex);
        log << paths[idx] << ": " << e.what() << "\n";
        code = kExitInput;
      }
      int cur = worst.load();
      while (code > cur && !worst.compare_exchange_weak(cur, code)) {
      }
    }
  };
  const int pool = std::max(1, std::min<int>(jobs, static_cast<int>(paths.size())));
  if (pool == 1) {
    body();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(pool));
    for (int t = 0; t < pool; ++t) threads.emplace_back(body);
    for (auto& t : threads) t.join();
  }
  return worst.load();
}

}  // namespace

int cmd_generate(const GenerateCmdOptions& opts, std::ostream& log) {
  try {
    const Instance inst = generate_instance(opts.gen);
    write_instance_file(opts.out, inst);
    log << "wrote " << opts.out << " (id " << inst.id << ", delta " << inst.game.delta() << ")\n";
    return kExitOk;
  } catch (const Error& e) {
    log << "generate: " << e.what() << "\n";
    return exit_code_for(e);
  }
}

int cmd_solve(const SolveCmdOptions& opts, std::ostream& log) {
  if (opts.instances.empty()) {
    log << "solve: no instance files given\n";
    return kExitInput;
  }
  if (opts.method != "ppa" && opts.method != "extragradient") {
    log << "solve: unknown method '" << opts.method << "'\n";
    return kExitInput;
  }

  auto work = [&](const std::string& path) -> int {
    const auto started = std::chrono::steady_clock::now();
    const Instance inst = load_instance_file(path);
    const double a = pick_a(inst, opts.a);
    const Eigen::VectorXd x0 = opts.x0 ? to_eigen(*opts.x0) : default_start(inst);
    auto ev = RegularizedEvaluator(std::make_shared<QuadraticGame>(inst.game), a);

    const std::filesystem::path dir(opts.out_dir);
    std::filesystem::create_directories(dir);
    const std::string trace_path = (dir / (inst.id + ".trace.csv")).string();
    const std::string report_path = (dir / (inst.id + ".report.json")).string();

    json config = {{"instance", path},
                   {"method", opts.method},
                   {"a", a},
                   {"x0", vector_to_json(x0)}};
    json outcome;
    outcome["warnings"] = inst.warnings;
    int code = kExitOk;

    if (opts.method == "ppa") {
      PPAConfig config_ppa;
      config_ppa.r_schedule = {opts.r.value_or(inst.defaults.r.value_or(1.0))};
      config_ppa.epsilon = opts.epsilon;
      if (opts.tol) config_ppa.tol_term = *opts.tol;
      else if (inst.defaults.tol_term) config_ppa.tol_term = *inst.defaults.tol_term;
      if (inst.defaults.tol_sub) config_ppa.tol_sub = *inst.defaults.tol_sub;
      if (opts.max_iterations) config_ppa.max_iterations = *opts.max_iterations;
      else if (inst.defaults.max_iterations) config_ppa.max_iterations = *inst.defaults.max_iterations;

      config["r"] = config_ppa.r_at(0);
      config["epsilon"] = config_ppa.effective_epsilon();
      config["tol_term"] = config_ppa.tol_term;
      config["tol_sub"] = config_ppa.tol_sub;
      config["max_iterations"] = config_ppa.max_iterations;

      const PPATrace trace = ppa_run(ev, inst.set, x0, config_ppa);
      std::ostringstream csv;
      trace.write_csv(csv);
      write_text_file(trace_path, csv.str());

      outcome["iterations"] = trace.iterations();
      outcome["terminated"] = trace.termination_index.has_value();
      if (trace.termination_index) outcome["k0"] = *trace.termination_index;
      outcome["final_gap"] = trace.steps.back().gap;
      outcome["final_vi_residual"] = trace.steps.back().vi_residual;
      if (trace.convexity_prerequisite)
        outcome["convexity_prerequisite"] = *trace.convexity_prerequisite;
      outcome["notes"] = trace.notes;
      outcome["trace"] = trace_path;
      if (!trace.termination_index) code = kExitCap;
    } else {
      ExtragradientOptions eopts;
      if (opts.tol) eopts.tol = *opts.tol;
      if (opts.max_iterations) eopts.max_iterations = *opts.max_iterations;
      config["tol"] = eopts.tol;

      // Same trace layout as the proximal runs so downstream tooling reads
      // one schema; the solver itself is re-run per recorded iterate count.
      const VIResult result = solve_vi_extragradient(inst.game, inst.set, x0, eopts);
      PPATrace trace;
      {
        Eigen::VectorXd x = inst.set.project(x0);
        Eigen::VectorXd prev = x;
        const double step = result.step_used;
        for (long k = 0; k <= result.iterations; ++k) {
          PPAStepRecord rec;
          rec.x = x;
          rec.gap = ev.gap(inst.set, x);
          rec.vi_residual = vi_residual(inst.game, inst.set, x);
          rec.step_norm = k == 0 ? 0.0 : (x - prev).norm();
          rec.sub_residual = 0.0;
          trace.steps.push_back(rec);
          prev = x;
          const Eigen::VectorXd y = inst.set.project(x - step * F_map(inst.game, x));
          x = inst.set.project(x - step * F_map(inst.game, y));
        }
      }
      std::ostringstream csv;
      trace.write_csv(csv);
      write_text_file(trace_path, csv.str());

      outcome["iterations"] = result.iterations;
      outcome["converged"] = result.converged;
      outcome["residual"] = result.residual;
      outcome["x"] = vector_to_json(result.x);
      outcome["gap_at_solution"] = ev.gap(inst.set, result.x);
      outcome["step"] = result.step_used;
      outcome["trace"] = trace_path;
      if (!result.converged) code = kExitCap;
    }

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    write_text_file(report_path,
                    run_report("solve", config, outcome, wall).dump(2) + "\n");
    log << inst.id << ": " << (code == kExitOk ? "done" : "iteration cap") << ", report "
        << report_path << "\n";
    return code;
  };

  return run_batch(opts.instances, opts.jobs, work, log);
}

int cmd_diagnose(const DiagnoseCmdOptions& opts, std::ostream& log) {
  if (opts.instances.empty()) {
    log << "diagnose: no instance files given\n";
    return kExitInput;
  }

  auto work = [&](const std::string& path) -> int {
    const auto started = std::chrono::steady_clock::now();
    const Instance inst = load_instance_file(path);
    const double a = pick_a(inst, opts.a);
    auto ev = RegularizedEvaluator(std::make_shared<QuadraticGame>(inst.game), a);
    const SolutionSet xstar = resolve_solution_set(inst);

    const SharpnessReport report = diagnose(ev, inst.set, xstar, opts.grid_n, inst.id);

    const std::filesystem::path dir(opts.out_dir);
    std::filesystem::create_directories(dir);
    const std::string report_path = (dir / (inst.id + ".sharpness.json")).string();
    json config = {{"instance", path}, {"a", a}, {"grid", opts.grid_n}};
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    write_text_file(report_path,
                    run_report("diagnose", config, report.to_json(), wall).dump(2) + "\n");
    log << inst.id << ": " << report.verdict_equivalence << ", report " << report_path << "\n";
    return kExitOk;  // NOT-APPLICABLE is informative, not fatal
  };

  return run_batch(opts.instances, opts.jobs, work, log);
}

int cmd_bound(const BoundCmdOptions& opts, std::ostream& log) {
  try {
    const auto started = std::chrono::steady_clock::now();
    const Instance inst = load_instance_file(opts.instance);
    const SolutionSet xstar = resolve_solution_set(inst);
    const ConeGamma cg = gamma_from_cones(inst.game, inst.set, xstar);
    if (cg.vacuous || !(cg.value > 0.0)) {
      log << "bound not applicable: X* not weakly sharp (gamma "
          << (cg.vacuous ? std::string("vacuous") : std::to_string(cg.value)) << ")\n";
      return kExitPrecondition;
    }

    const Eigen::VectorXd x0 = opts.x0 ? to_eigen(*opts.x0) : default_start(inst);
    const double r = opts.r.value_or(inst.defaults.r.value_or(1.0));
    PPAConfig ppa;
    ppa.r_schedule = {r};
    ppa.epsilon = opts.epsilon;
    ppa.validate();
    const double eps = ppa.effective_epsilon();
    const double d0 = xstar.distance(x0);
    const double bound = iteration_bound(d0, eps, cg.value);

    json outcome = {{"d0", d0},
                    {"epsilon", eps},
                    {"gamma", cg.value},
                    {"gamma_exact", cg.exact},
                    {"bound", bound},
                    {"k0_limit", static_cast<long>(std::floor(bound))}};
    log << "d0 " << d0 << ", epsilon " << eps << ", gamma " << cg.value << ": k0 <= "
        << static_cast<long>(std::floor(bound)) << " (bound " << bound << ")\n";

    if (opts.trace_csv) {
      const auto k0 = measured_k0_from_trace(*opts.trace_csv, 1e-7);
      if (k0) {
        outcome["measured_k0"] = *k0;
        outcome["within_bound"] = static_cast<double>(*k0) <= bound;
        log << "measured k0 " << *k0 << (static_cast<double>(*k0) <= bound ? " <=" : " >")
            << " bound\n";
      } else {
        outcome["measured_k0"] = nullptr;
        log << "trace did not terminate; no measured k0\n";
      }
    }

    const std::filesystem::path dir(opts.out_dir);
    std::filesystem::create_directories(dir);
    const std::string report_path = (dir / (inst.id + ".bound.json")).string();
    json config = {{"instance", opts.instance}, {"r", r}, {"epsilon", eps},
                   {"x0", vector_to_json(x0)}};
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    write_text_file(report_path,
                    run_report("bound", config, outcome, wall).dump(2) + "\n");
    return kExitOk;
  } catch (const Error& e) {
    log << "bound: " << e.what() << "\n";
    return exit_code_for(e);
  }
}

int cmd_verify(const VerifyCmdOptions& opts, std::ostream& log) {
  try {
    const Instance inst = load_instance_file(opts.instance);  // certifies solution_set
    log << inst.id << ": loads and certifies (delta " << inst.game.delta() << ")\n";
    for (const auto& w : inst.warnings) log << "  warning: " << w << "\n";
    if (opts.facts) {
      // Reuse the fixture validation path on an explicit sidecar.
      std::ifstream in(*opts.facts);
      if (!in) fail(ErrorKind::InvalidInput, "cannot open facts file '" + *opts.facts + "'");
      json facts;
      in >> facts;
      validate_fixture_facts(inst, facts);
      log << "facts sidecar re-validates\n";
    }
    return kExitOk;
  } catch (const Error& e) {
    log << "verify: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    log << "verify: " << e.what() << "\n";
    return kExitInput;
  }
}

std::optional<long> measured_k0_from_trace(const std::string& csv_path, double tol_term) {
  std::ifstream in(csv_path);
  if (!in) fail(ErrorKind::InvalidInput, "cannot open trace '" + csv_path + "'");
  std::string header;
  std::getline(in, header);
  // Locate the gap column from the header.
  long gap_col = -1;
  {
    std::stringstream hs(header);
    std::string cell;
    long idx = 0;
    while (std::getline(hs, cell, ',')) {
      if (cell == "gap_Va") gap_col = idx;
      ++idx;
    }
  }
  if (gap_col < 0) fail(ErrorKind::InvalidInput, csv_path + ": no gap_Va column");

  long last_k = -1;
  double last_gap = std::numeric_limits<double>::infinity();
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ls(line);
    std::string cell;
    long idx = 0;
    long k = -1;
    double gap = std::numeric_limits<double>::infinity();
    while (std::getline(ls, cell, ',')) {
      if (idx == 0) k = std::stol(cell);
      if (idx == gap_col) gap = std::stod(cell);
      ++idx;
    }
    last_k = k;
    last_gap = gap;
  }
  if (last_k >= 0 && last_gap <= tol_term) return last_k;
  return std::nullopt;
}

}  // namespace gnep
