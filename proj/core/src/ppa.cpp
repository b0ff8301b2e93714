#include "gnep/ppa.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace gnep {

namespace {

void write_number(std::ostream& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out << buf;
}

// Phi_k(u): maximal violation of the proximal step inequality at u.
double phi_certificate(const RegularizedEvaluator& ev, const FeasibleSet& set,
                       const Eigen::VectorXd& u, const Eigen::VectorXd& x_k, double r_k,
                       bool* converged) {
  const Eigen::VectorXd g = -(u - x_k) / r_k;
  const BestResponse inner = ev.maximize_anchored(set, u, g, 0.0, u);
  if (converged) *converged = inner.converged;
  return ev.reg_psi(u, inner.y) - (inner.y - u).dot(u - x_k) / r_k;
}

}  // namespace

double PPAConfig::r_at(long k) const {
  if (r_schedule.empty()) fail(ErrorKind::InvalidInput, "ppa: empty r schedule");
  const std::size_t idx =
      std::min(static_cast<std::size_t>(k), r_schedule.size() - 1);
  return r_schedule[idx];
}

double PPAConfig::sup_inverse_r() const {
  double sup = 0.0;
  for (double r : r_schedule) sup = std::max(sup, 1.0 / r);
  return sup;
}

double PPAConfig::effective_epsilon() const {
  if (epsilon) return *epsilon;
  return sup_inverse_r() * (1.0 + 1e-12);
}

void PPAConfig::validate() const {
  if (r_schedule.empty()) fail(ErrorKind::InvalidInput, "ppa: empty r schedule");
  for (double r : r_schedule)
    if (!(r > 0.0)) fail(ErrorKind::InvalidInput, "ppa: every r_k must be positive");
  if (epsilon && !(*epsilon > sup_inverse_r()))
    fail(ErrorKind::InvalidInput, "ppa: epsilon must exceed sup_k 1/r_k");
  if (!(tol_sub > 0.0) || !(tol_term > 0.0))
    fail(ErrorKind::InvalidInput, "ppa: tolerances must be positive");
  if (max_iterations < 0) fail(ErrorKind::InvalidInput, "ppa: negative iteration cap");
}

SubproblemResult ppa_subproblem(const RegularizedEvaluator& ev, const FeasibleSet& set,
                                const Eigen::VectorXd& x_k, double r_k, double tol_sub) {
  if (!(r_k > 0.0)) fail(ErrorKind::InvalidInput, "ppa subproblem: r_k must be positive");
  if (!set.contains(x_k, kActiveTol))
    fail(ErrorKind::InvalidInput, "ppa subproblem: x_k is not in the set");

  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(x_k.size());
  SubproblemResult out;
  Eigen::VectorXd u = set.project(x_k);
  double phi = phi_certificate(ev, set, u, x_k, r_k, nullptr);
  out.u = u;
  out.certificate = phi;

  // Damped fixed-point iteration on the prox-anchored best response. The
  // path is heuristic; only the certificate decides acceptance, so iterate
  // well below tol_sub before stopping.
  const double stop_target = 0.01 * tol_sub;
  double tau = 1.0;
  int pass = 0;
  const int pass_cap = 500;
  while (phi > stop_target && pass < pass_cap && tau >= 1e-7) {
    ++pass;
    const BestResponse prox = ev.maximize_anchored(set, u, zero, 1.0 / r_k, x_k);
    const Eigen::VectorXd trial = u + tau * (prox.y - u);
    const double trial_phi = phi_certificate(ev, set, trial, x_k, r_k, nullptr);
    if (trial_phi > phi) {
      tau *= 0.5;
      continue;
    }
    const double movement = (trial - u).norm();
    u = trial;
    phi = trial_phi;
    if (phi < out.certificate) {
      out.u = u;
      out.certificate = phi;
    }
    if (movement <= 1e-14 * (1.0 + u.norm())) break;
  }

  out.passes = pass;
  out.accepted = out.certificate <= tol_sub;
  return out;
}

PPATrace ppa_run(const RegularizedEvaluator& ev, const FeasibleSet& set,
                 const Eigen::VectorXd& x0, const PPAConfig& config) {
  config.validate();
  if (!set.contains(x0, kActiveTol)) fail(ErrorKind::InvalidInput, "ppa: x0 is not in the set");

  PPATrace trace;
  trace.convexity_prerequisite = ev.convexity_prerequisite();
  if (trace.convexity_prerequisite.has_value() && !*trace.convexity_prerequisite)
    trace.notes.push_back("convexity prerequisite fails: a exceeds delta");

  Eigen::VectorXd x = set.project(x0);
  double last_step_norm = 0.0;
  double last_sub_residual = 0.0;

  for (long k = 0;; ++k) {
    PPAStepRecord rec;
    rec.x = x;
    rec.gap = ev.gap(set, x);
    rec.vi_residual = gnep::vi_residual(ev.game(), set, x);
    rec.step_norm = last_step_norm;
    rec.sub_residual = last_sub_residual;
    trace.steps.push_back(rec);

    if (rec.gap <= config.tol_term) {
      trace.termination_index = k;
      break;
    }
    if (k >= config.max_iterations) {
      trace.hit_cap = true;
      trace.notes.push_back("iteration cap reached before termination");
      break;
    }

    const SubproblemResult sub = ppa_subproblem(ev, set, x, config.r_at(k), config.tol_sub);
    if (!sub.accepted)
      trace.notes.push_back("step " + std::to_string(k) + ": subproblem certificate " +
                            std::to_string(sub.certificate) + " above tol_sub");
    last_step_norm = (sub.u - x).norm();
    last_sub_residual = sub.certificate;
    x = sub.u;
  }

  return trace;
}

void PPATrace::write_csv(std::ostream& out) const {
  const Eigen::Index n = steps.empty() ? 0 : steps.front().x.size();
  out << "k";
  for (Eigen::Index j = 0; j < n; ++j) out << ",x" << j;
  out << ",gap_Va,vi_residual,step_norm,sub_residual\n";
  for (std::size_t k = 0; k < steps.size(); ++k) {
    const auto& rec = steps[k];
    out << k;
    for (Eigen::Index j = 0; j < n; ++j) {
      out << ',';
      write_number(out, rec.x[j]);
    }
    out << ',';
    write_number(out, rec.gap);
    out << ',';
    write_number(out, rec.vi_residual);
    out << ',';
    write_number(out, rec.step_norm);
    out << ',';
    write_number(out, rec.sub_residual);
    out << '\n';
  }
}

double iteration_bound(double d0, double epsilon, double gamma) {
  if (d0 < 0.0) fail(ErrorKind::InvalidInput, "iteration bound: negative distance");
  if (!(epsilon > 0.0)) fail(ErrorKind::InvalidInput, "iteration bound: epsilon must be positive");
  if (!(gamma > 0.0))
    fail(ErrorKind::PreconditionMissing,
         "iteration bound: gamma <= 0, the solution set is not weakly sharp");
  return d0 * d0 * epsilon * epsilon / (gamma * gamma);
}

FejerReport fejer_check(const PPATrace& trace, const Eigen::VectorXd& x_star, const Game& game,
                        const FeasibleSet& set) {
  if (vi_residual(game, set, x_star) > 1e-6)
    fail(ErrorKind::PreconditionMissing, "fejer check: x_star fails the residual certification");

  constexpr double kSlack = 1e-6;
  FejerReport report;
  report.prerequisite_ok = trace.convexity_prerequisite.value_or(true);
  for (std::size_t k = 0; k + 1 < trace.steps.size(); ++k) {
    const auto& xa = trace.steps[k].x;
    const auto& xb = trace.steps[k + 1].x;
    const double lhs = (xb - xa).squaredNorm();
    const double rhs = (x_star - xa).squaredNorm() - (x_star - xb).squaredNorm();
    report.slack.push_back(rhs - lhs);
    const double violation = lhs - rhs;
    if (violation > report.worst_violation) {
      report.worst_violation = violation;
      report.worst_index = static_cast<long>(k);
    }
    if (violation > kSlack) report.all_hold = false;
  }
  return report;
}

}  // namespace gnep
