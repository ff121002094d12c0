#pragma once

#include <optional>

#include <Eigen/Dense>

#include "bellnl/inequalities.hpp"
#include "bellnl/lp.hpp"
#include "bellnl/scenario.hpp"

namespace bellnl {

/// pi(x) q(a|x) over the flat index.
Eigen::VectorXd joint(const Behavior& q, const InputDistribution& pi);

/// Half the l1 distance between two joint distributions.
double trace_distance(const Eigen::VectorXd& q, const Eigen::VectorXd& p);

struct NlResult {
  double value;
  /// p* = A lambda*.
  Behavior closest_local;
  Eigen::VectorXd weights;
};

/// Minimum pi-weighted trace distance from q to the local polytope.
NlResult nl(const Behavior& q, const InputDistribution& pi, const StrategyMatrix& strategies);

struct NlGivenValueResult {
  LPStatus status = LPStatus::infeasible;
  double value = 0.0;
  std::optional<Behavior> behavior;
  std::optional<Behavior> closest_local;
};

/// Minimum NL over non-signaling q with f.q = value. An infeasible value is
/// reported through status, not thrown.
NlGivenValueResult nl_given_value(const BellFunctional& f, double value, const InputDistribution& pi,
                                  const StrategyMatrix& strategies);

/// (1/2) max(0, max over the CHSH orbit of f.q); q must be non-signaling.
double chsh_closed_form(const Behavior& q);

/// Lower-bound witness read off the NL program's duals.
struct Certificate {
  /// |v_j| <= 1.
  Eigen::VectorXd v;
  /// w_j = pi(x(j)) / 2.
  Eigen::VectorXd weights;
  /// max_i sum_j w_j v_j A_ji.
  double strategy_max = 0.0;
  /// sum_j w_j v_j q_j - strategy_max at the certified behavior.
  double value = 0.0;
};

Certificate dual_certificate(const Behavior& q, const InputDistribution& pi, const StrategyMatrix& strategies);

/// The certificate's affine form at another behavior; a lower bound on its NL
/// under the same input distribution.
double certificate_bound(const Certificate& c, const Behavior& q);

/// 1 - max { sum lambda : A lambda <= q, lambda >= 0 }.
double nonlocal_content(const Behavior& q, const StrategyMatrix& strategies);

/// max(0, (f.q - I_L) / (I_NS - I_L)).
double bell_lower_bound_content(const BellFunctional& f, const Behavior& q, const StrategyMatrix& strategies);

/// sum q log2(q / p); +infinity when q_j > 0 = p_j.
double kl_divergence(const Eigen::VectorXd& q, const Eigen::VectorXd& p);

struct KlOptions {
  double gap_tol = 1e-7;
  long max_iterations = 100'000;
};

struct NlKlResult {
  /// min over lambda of KL(pi q || pi A lambda), bits.
  double value;
  /// value times the number of input tuples (the unweighted sum over inputs for uniform pi).
  double raw_value;
  /// Frank-Wolfe duality gap at the returned point.
  double gap;
  long iterations;
  Behavior minimizer;
  Eigen::VectorXd weights;
};

/// Away-step Frank-Wolfe from the barycenter of the strategy columns.
NlKlResult nl_kl(const Behavior& q, const InputDistribution& pi, const StrategyMatrix& strategies,
                 const KlOptions& options = {});

/// 2 log2(e) nl^2, the Pinsker lower bound on KL for trace distance nl.
double pinsker_bound(double nl_value);

/// v alpha_N / 2^N for even N.
double mermin_nl_analytic(int parties, double v);

}  // namespace bellnl
