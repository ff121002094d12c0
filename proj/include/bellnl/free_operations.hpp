#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "bellnl/scenario.hpp"

namespace bellnl {

/// Permutation of parties, of each party's inputs and of each party's
/// outputs (independently per input).
struct Relabeling {
  /// New party k is old party party_order[k].
  std::vector<int> party_order;
  /// input_maps[k][x] is the new label of old input x of old party k.
  std::vector<std::vector<int>> input_maps;
  /// output_maps[k][x][a] is the new label of output a of old party k at old input x.
  std::vector<std::vector<std::vector<int>>> output_maps;

  static Relabeling identity(const Scenario& s);
};

/// Throws DomainError unless every map is a permutation of the right size.
void check_relabeling(const Scenario& s, const Relabeling& r);
Scenario relabeled_scenario(const Scenario& s, const Relabeling& r);
Relabeling inverse(const Scenario& s, const Relabeling& r);

/// Moves entry (x, a) to its relabeled position; valid for behaviors and
/// functional coefficients alike since f'.R(q) = f.q.
Eigen::VectorXd permute_entries(const Scenario& s, const Relabeling& r, const Eigen::VectorXd& values);

Behavior relabel(const Behavior& q, const Relabeling& r);

Behavior convex_mix(const std::vector<std::pair<double, Behavior>>& items);

/// One shared-randomness branch of a local output channel: for each party
/// and input, a column-stochastic matrix T(alpha|a).
struct LocalChannelBranch {
  double weight = 1.0;
  std::vector<std::vector<Eigen::MatrixXd>> maps;
};

struct LocalChannel {
  std::vector<int> new_outputs;
  std::vector<LocalChannelBranch> branches;
};

/// Deterministic branch from per-party output functions f[k][x][a] = alpha.
LocalChannelBranch deterministic_branch(const Scenario& s, const std::vector<int>& new_outputs,
                                        const std::vector<std::vector<std::vector<int>>>& functions,
                                        double weight);

/// O(q)(alpha|x) = sum_a O(alpha|a,x) q(a|x).
Behavior post_process(const Behavior& q, const LocalChannel& channel);

/// One shared-randomness branch of an input channel: maps[k][chi] = x.
struct InputChannelBranch {
  double weight = 1.0;
  std::vector<std::vector<int>> maps;
};

struct InputChannel {
  std::vector<InputChannelBranch> branches;
};

/// I(x|chi) as a matrix, rows indexed by old input tuples, columns by new.
Eigen::MatrixXd input_channel_matrix(const Scenario& s, const InputChannel& channel);

/// I(q)(a|chi) = sum_x q(a|x) I(x|chi). Requires sum_chi I(x|chi) <= 1 for every x.
Behavior pre_process(const Behavior& q, const InputChannel& channel);

/// Adds an input to `party` on which it deterministically answers
/// `fixed_output`; the other parties keep their marginal (taken at the
/// party's input 0).
Behavior input_enlarge(const Behavior& q, int party, int fixed_output);

}  // namespace bellnl
