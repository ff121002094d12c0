#include "bellnl/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "bellnl/errors.hpp"
#include "bellnl/nl_programs.hpp"

namespace bellnl {

namespace {

void require_same(const Scenario& a, const Scenario& b, const char* what) {
  if (!(a == b)) throw DimensionError(std::string(what) + ": scenarios do not match");
}

LPSolution<double> solve_optimal(const LinearProgram<double>& lp, const char* what) {
  LPSolution<double> sol = solve(lp);
  if (!sol.optimal()) throw SolverError(std::string(what) + " program ended " + to_string(sol.status));
  return sol;
}

}  // namespace

Eigen::VectorXd joint(const Behavior& q, const InputDistribution& pi) {
  require_same(q.scenario(), pi.scenario(), "joint");
  return pi.entry_weights().cwiseProduct(q.values());
}

double trace_distance(const Eigen::VectorXd& q, const Eigen::VectorXd& p) {
  if (q.size() != p.size()) throw DimensionError("trace_distance: lengths differ");
  return 0.5 * (q - p).cwiseAbs().sum();
}

NlResult nl(const Behavior& q, const InputDistribution& pi, const StrategyMatrix& strategies) {
  const NlProgram prog = assemble_nl_program(q, strategies, pi);
  const LPSolution<double> sol = solve_optimal(prog.lp, "NL");
  Eigen::VectorXd lambda = sol.primal.segment(prog.lambda_offset, prog.strategies).cwiseMax(0.0);
  lambda /= lambda.sum();
  Behavior p(q.scenario(), strategies.matrix() * lambda);
  return {std::clamp(sol.objective, 0.0, 1.0), std::move(p), std::move(lambda)};
}

NlGivenValueResult nl_given_value(const BellFunctional& f, double value, const InputDistribution& pi,
                                  const StrategyMatrix& strategies) {
  const NlProgram prog = assemble_constrained_nl_program(f, value, strategies, pi);
  const LPSolution<double> sol = solve(prog.lp);
  NlGivenValueResult result;
  result.status = sol.status;
  if (!sol.optimal()) {
    result.value = std::numeric_limits<double>::quiet_NaN();
    return result;
  }
  result.value = std::max(0.0, sol.objective);
  const Eigen::VectorXd lambda = sol.primal.segment(prog.lambda_offset, prog.strategies);
  result.behavior.emplace(f.scenario(), sol.primal.segment(prog.q_offset, prog.entries));
  result.closest_local.emplace(f.scenario(), strategies.matrix() * lambda);
  return result;
}

double chsh_closed_form(const Behavior& q) {
  static const std::vector<BellFunctional> orbit = chsh_symmetry_orbit(make_chsh());
  if (!(q.scenario() == orbit.front().scenario())) throw DimensionError("chsh_closed_form needs the (2,2,2,2) scenario");
  require_valid(q, "chsh_closed_form");
  if (!is_nonsignaling(q)) throw DomainError("chsh_closed_form: behavior is signaling");
  double best = 0.0;
  for (const BellFunctional& f : orbit) best = std::max(best, evaluate(f, q));
  return 0.5 * best;
}

Certificate dual_certificate(const Behavior& q, const InputDistribution& pi, const StrategyMatrix& strategies) {
  const NlProgram prog = assemble_nl_program(q, strategies, pi);
  const LPSolution<double> sol = solve_optimal(prog.lp, "NL");
  const Index n = prog.entries;
  // u = w o v from the two l1 rows; the inequality duals are nonpositive.
  const Eigen::VectorXd u = sol.ineq_duals.tail(n) - sol.ineq_duals.head(n);
  Certificate c;
  c.weights = prog.weights;
  c.v = Eigen::VectorXd::Zero(n);
  for (Index j = 0; j < n; ++j) {
    if (c.weights(j) > 0.0) c.v(j) = std::clamp(u(j) / c.weights(j), -1.0, 1.0);
  }
  const Eigen::VectorXd wv = c.weights.cwiseProduct(c.v);
  c.strategy_max = (strategies.matrix().transpose() * wv).maxCoeff();
  c.value = wv.dot(q.values()) - c.strategy_max;
  if (std::abs(c.value - sol.objective) > 1e-7) {
    throw SolverError("certificate value " + std::to_string(c.value) + " does not match NL " +
                      std::to_string(sol.objective));
  }
  return c;
}

double certificate_bound(const Certificate& c, const Behavior& q) {
  if (q.values().size() != c.v.size()) throw DimensionError("certificate_bound: length mismatch");
  return c.weights.cwiseProduct(c.v).dot(q.values()) - c.strategy_max;
}

double nonlocal_content(const Behavior& q, const StrategyMatrix& strategies) {
  require_same(q.scenario(), strategies.scenario(), "nonlocal_content");
  require_valid(q, "nonlocal_content");
  if (!is_nonsignaling(q)) throw DomainError("nonlocal_content: behavior is signaling");
  const Index m = strategies.columns();
  LinearProgram<double> lp(m);
  lp.objective.setConstant(-1.0);
  lp.ineq_matrix = strategies.matrix();
  lp.ineq_rhs = q.values();
  const LPSolution<double> sol = solve_optimal(lp, "non-local content");
  return std::clamp(1.0 + sol.objective, 0.0, 1.0);
}

double bell_lower_bound_content(const BellFunctional& f, const Behavior& q, const StrategyMatrix& strategies) {
  const double lo = local_bound(f, strategies);
  const double hi = ns_bound(f);
  if (hi - lo <= 1e-12) throw DomainError("bell_lower_bound_content: functional is not violated by any NS behavior");
  return std::max(0.0, (evaluate(f, q) - lo) / (hi - lo));
}

double kl_divergence(const Eigen::VectorXd& q, const Eigen::VectorXd& p) {
  if (q.size() != p.size()) throw DimensionError("kl_divergence: lengths differ");
  double sum = 0.0;
  for (Index j = 0; j < q.size(); ++j) {
    if (q(j) <= 0.0) continue;
    if (p(j) <= 0.0) return std::numeric_limits<double>::infinity();
    sum += q(j) * std::log2(q(j) / p(j));
  }
  return sum;
}

NlKlResult nl_kl(const Behavior& q, const InputDistribution& pi, const StrategyMatrix& strategies,
                 const KlOptions& options) {
  require_same(q.scenario(), strategies.scenario(), "nl_kl");
  require_valid(q, "nl_kl");
  const Eigen::MatrixXd& a = strategies.matrix();
  const Index n = a.rows();
  const Index m = a.cols();
  const Eigen::VectorXd target = joint(q, pi);
  const Eigen::VectorXd w = pi.entry_weights();
  const double inv_ln2 = 1.0 / std::numbers::ln2;

  Eigen::VectorXd lambda = Eigen::VectorXd::Constant(m, 1.0 / static_cast<double>(m));
  Eigen::VectorXd p = a * lambda;
  Eigen::VectorXd r(n);

  // d/dgamma KL along p + gamma * dp.
  auto slope = [&](const Eigen::VectorXd& dp, double gamma) {
    double s = 0.0;
    for (Index j = 0; j < n; ++j) {
      if (target(j) > 0.0) s -= target(j) * dp(j) / (p(j) + gamma * dp(j));
    }
    return s * inv_ln2;
  };

  double gap = std::numeric_limits<double>::infinity();
  long it = 0;
  for (; it < options.max_iterations; ++it) {
    for (Index j = 0; j < n; ++j) r(j) = target(j) > 0.0 ? target(j) / p(j) : 0.0;
    const Eigen::VectorXd grad = -inv_ln2 * (a.transpose() * r);
    Index toward = 0;
    grad.minCoeff(&toward);
    Index away = -1;
    for (Index i = 0; i < m; ++i) {
      if (lambda(i) > 0.0 && (away < 0 || grad(i) > grad(away))) away = i;
    }
    const double g_dot = grad.dot(lambda);
    gap = g_dot - grad(toward);
    if (gap <= options.gap_tol) break;

    Eigen::VectorXd dlambda;
    double gamma_max;
    bool away_step = false;
    if (gap >= grad(away) - g_dot || lambda(away) >= 1.0) {
      dlambda = -lambda;
      dlambda(toward) += 1.0;
      gamma_max = 1.0;
    } else {
      dlambda = lambda;
      dlambda(away) -= 1.0;
      gamma_max = lambda(away) / (1.0 - lambda(away));
      away_step = true;
    }
    const Eigen::VectorXd dp = a * dlambda;
    double gamma;
    if (slope(dp, gamma_max) <= 0.0) {
      gamma = gamma_max;
    } else {
      double lo = 0.0;
      double hi = gamma_max;
      for (int b = 0; b < 100 && hi - lo > 1e-16 * gamma_max; ++b) {
        const double mid = 0.5 * (lo + hi);
        (slope(dp, mid) > 0.0 ? hi : lo) = mid;
      }
      gamma = lo;
    }
    // Rounding in the update can zero an entry the target still needs when
    // that entry is tiny; back off until the support survives.
    Eigen::VectorXd next_lambda;
    Eigen::VectorXd next_p;
    for (int halvings = 0;; ++halvings) {
      next_lambda = lambda + gamma * dlambda;
      if (away_step && gamma == gamma_max) next_lambda(away) = 0.0;
      next_lambda = next_lambda.cwiseMax(0.0);
      next_lambda /= next_lambda.sum();
      next_p = a * next_lambda;
      bool supported = true;
      for (Index j = 0; j < n && supported; ++j) supported = target(j) <= 0.0 || next_p(j) > 0.0;
      if (supported) break;
      if (halvings == 60) {
        next_lambda = lambda;
        next_p = p;
        break;
      }
      gamma *= 0.5;
    }
    if (next_lambda == lambda) break;
    lambda = std::move(next_lambda);
    p = std::move(next_p);
  }

  const double value = std::max(0.0, kl_divergence(target, w.cwiseProduct(p)));
  return {value,
          value * static_cast<double>(q.scenario().input_tuples()),
          std::max(0.0, gap),
          it,
          Behavior(q.scenario(), p),
          lambda};
}

double pinsker_bound(double nl_value) {
  if (!(nl_value >= 0.0 && nl_value <= 1.0)) throw DomainError("pinsker_bound needs a value in [0, 1]");
  return 2.0 * std::numbers::log2e * nl_value * nl_value;
}

double mermin_nl_analytic(int parties, double v) {
  if (parties % 2 != 0 || parties < 2 || parties > 8) throw DomainError("mermin_nl_analytic needs even N in [2, 8]");
  if (!(v >= 0.0 && v <= 1.0)) throw DomainError("mermin_nl_analytic needs v in [0, 1]");
  return v * count_negative_settings(parties) / std::ldexp(1.0, parties);
}

}  // namespace bellnl
