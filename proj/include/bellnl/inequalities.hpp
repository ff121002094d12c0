#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bellnl/scenario.hpp"

namespace bellnl {

/// A linear functional I.q over the flat behavior space, with its local bound.
class BellFunctional {
 public:
  BellFunctional(Scenario scenario, Eigen::VectorXd coefficients, double local_bound, std::string label);

  const Scenario& scenario() const noexcept { return scenario_; }
  const Eigen::VectorXd& coefficients() const noexcept { return coefficients_; }
  double local_bound() const noexcept { return local_bound_; }
  const std::string& label() const noexcept { return label_; }

 private:
  Scenario scenario_;
  Eigen::VectorXd coefficients_;
  double local_bound_;
  std::string label_;
};

double evaluate(const BellFunctional& f, const Behavior& q);

/// Exact maximum of f over the strategy columns.
double local_bound(const BellFunctional& f, const StrategyMatrix& strategies);

/// Maximum of f over normalized, nonnegative, non-signaling behaviors (LP).
double ns_bound(const BellFunctional& f);

/// Collins-Gisin CHSH, local bound 0. Marginal terms sit at the other party's input 0.
BellFunctional make_chsh();

/// The 24 vertices of the (2,2,2,2) non-signaling polytope: 16 deterministic
/// strategies followed by the 8 PR-type boxes a xor b = xy + alpha x + beta y + gamma.
std::vector<Behavior> chsh_ns_vertices();

/// The 8 distinct images of CHSH under party, input and output relabelings.
/// Images are compared by their values on the non-signaling polytope.
std::vector<BellFunctional> chsh_symmetry_orbit(const BellFunctional& chsh);

/// CGLMP for d outcomes, normalized to local bound 0 and NS maximum 1/2.
BellFunctional make_cglmp(int d);

/// I_nn22 in Collins-Gisin form for n = 2..7 settings per party; n = 2 is CHSH.
BellFunctional make_inn22(int n);

struct MerminInequality {
  /// c(x) for every input tuple x in flat input order (0 where absent).
  std::vector<double> correlators;
  /// sum_x c(x) sum_a (-1)^{a_1 + ... + a_N} p(a|x).
  BellFunctional functional;
};

/// M_N from M_i = M_{i-1}(A_i + A'_i)/2 + M'_{i-1}(A_i - A'_i)/2, N = 2..8.
MerminInequality make_mermin(int parties);

/// Parity-uniform behavior saturating the NS maximum of M_N; maximally mixed
/// on settings absent from M_N.
Behavior mermin_max_ns_behavior(int parties);

/// Number of settings with a negative correlator in M_N (N even), counted directly.
int count_negative_settings(int parties);

/// Uniform input weights over the settings on which f has a nonzero coefficient.
InputDistribution support_distribution(const BellFunctional& f);

}  // namespace bellnl
