#pragma once

#include <Eigen/Dense>

#include "bellnl/inequalities.hpp"
#include "bellnl/lp.hpp"
#include "bellnl/scenario.hpp"

namespace bellnl {

/// An assembled NL program together with its variable layout.
///
/// Variables are t (one per behavior entry), lambda (one per strategy) and,
/// for the constrained program, q. The first `entries` inequality rows are
/// q - A lambda - t <= 0, the next `entries` rows are A lambda - q - t <= 0.
struct NlProgram {
  LinearProgram<double> lp;
  Index entries = 0;
  Index strategies = 0;
  Index t_offset = 0;
  Index lambda_offset = 0;
  /// -1 when q is data rather than a variable.
  Index q_offset = -1;
  /// w_j = pi(x(j)) / 2.
  Eigen::VectorXd weights;
};

/// Normalization of every conditional plus all single-party non-signaling
/// equalities: summing out party k gives the same marginal for every x_k.
struct LinearConstraints {
  Eigen::MatrixXd matrix;
  Eigen::VectorXd rhs;
};
LinearConstraints ns_constraints(const Scenario& s);

/// min sum_j w_j t_j  s.t.  -t <= q - A lambda <= t,  sum lambda = 1,  lambda >= 0.
NlProgram assemble_nl_program(const Behavior& q, const StrategyMatrix& strategies, const InputDistribution& pi);

/// As above with q free, subject to f.q = c, normalization, non-signaling and q >= 0.
NlProgram assemble_constrained_nl_program(const BellFunctional& f, double value, const StrategyMatrix& strategies,
                                          const InputDistribution& pi);

struct LocalityResult {
  bool local = false;
  /// A convex decomposition over the strategy columns (best fit when not local).
  Eigen::VectorXd weights;
  /// min over lambda of max_j |q_j - (A lambda)_j|.
  double residual = 0.0;
};

/// q is local iff some convex combination of strategies matches it within tol.
LocalityResult is_local(const Behavior& q, const StrategyMatrix& strategies, double tol = kFeasibilityTol);

}  // namespace bellnl
