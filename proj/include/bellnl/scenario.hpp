#pragma once

#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace bellnl {

using Index = Eigen::Index;

/// Entrywise tolerance for validity, normalization and LP feasibility.
inline constexpr double kFeasibilityTol = 1e-9;
/// Largest behavior dimension or strategy count we agree to build.
inline constexpr Index kMaxDimension = 10'000'000;
/// Largest dense strategy table (rows times columns).
inline constexpr Index kMaxStrategyEntries = 100'000'000;

/// Parties, inputs per party and outputs per party of a Bell experiment.
///
/// Every behavior over a scenario is stored as a flat vector of length
/// dimension() ordered input tuple major, output tuple minor, party 0 the
/// most significant digit within each tuple (see flat_index).
class Scenario {
 public:
  Scenario(std::vector<int> inputs, std::vector<int> outputs);

  /// N parties sharing the same input and output counts.
  static Scenario symmetric(int parties, int inputs, int outputs);

  int parties() const noexcept { return static_cast<int>(inputs_.size()); }
  const std::vector<int>& inputs() const noexcept { return inputs_; }
  const std::vector<int>& outputs() const noexcept { return outputs_; }
  int inputs(int party) const { return inputs_.at(party); }
  int outputs(int party) const { return outputs_.at(party); }

  Index input_tuples() const noexcept { return input_tuples_; }
  Index output_tuples() const noexcept { return output_tuples_; }
  Index dimension() const noexcept { return input_tuples_ * output_tuples_; }

  /// Product over parties of outputs^inputs; throws CapacityError past kMaxDimension.
  Index strategy_count() const;

  friend bool operator==(const Scenario&, const Scenario&) = default;

 private:
  std::vector<int> inputs_;
  std::vector<int> outputs_;
  Index input_tuples_ = 1;
  Index output_tuples_ = 1;
};

Index input_tuple_index(const Scenario& s, std::span<const int> inputs);
Index output_tuple_index(const Scenario& s, std::span<const int> outputs);
std::vector<int> decode_inputs(const Scenario& s, Index input_tuple);
std::vector<int> decode_outputs(const Scenario& s, Index output_tuple);

/// Position of p(outputs|inputs) in the flat behavior vector.
Index flat_index(const Scenario& s, std::span<const int> inputs, std::span<const int> outputs);

struct FlatEntry {
  std::vector<int> inputs;
  std::vector<int> outputs;
};
FlatEntry decode_index(const Scenario& s, Index j);

/// A conditional distribution p(a|x) laid out by flat_index.
class Behavior {
 public:
  Behavior(Scenario scenario, Eigen::VectorXd values);

  const Scenario& scenario() const noexcept { return scenario_; }
  const Eigen::VectorXd& values() const noexcept { return values_; }

  double operator()(std::span<const int> inputs, std::span<const int> outputs) const {
    return values_(flat_index(scenario_, inputs, outputs));
  }

  /// The conditional p(.|x) for one input tuple.
  auto conditional(Index input_tuple) const {
    return values_.segment(input_tuple * scenario_.output_tuples(), scenario_.output_tuples());
  }

 private:
  Scenario scenario_;
  Eigen::VectorXd values_;
};

struct ValidityReport {
  bool valid = false;
  double max_violation = 0.0;
};

/// Nonnegativity and per-input normalization, both at `tol`.
ValidityReport validate_behavior(const Behavior& q, double tol = kFeasibilityTol);

/// Throws DomainError when q fails validate_behavior.
void require_valid(const Behavior& q, std::string_view context);

/// Probability pi(x) of each input tuple.
class InputDistribution {
 public:
  InputDistribution(Scenario scenario, Eigen::VectorXd weights);

  static InputDistribution uniform(const Scenario& s);

  const Scenario& scenario() const noexcept { return scenario_; }
  const Eigen::VectorXd& weights() const noexcept { return weights_; }

  /// pi(x(j)) repeated over the outputs of each input tuple (length dimension()).
  Eigen::VectorXd entry_weights() const;

 private:
  Scenario scenario_;
  Eigen::VectorXd weights_;
};

/// Columns are the local deterministic behaviors of a scenario.
class StrategyMatrix {
 public:
  StrategyMatrix(Scenario scenario, Eigen::MatrixXd matrix);

  const Scenario& scenario() const noexcept { return scenario_; }
  const Eigen::MatrixXd& matrix() const noexcept { return matrix_; }
  Index columns() const noexcept { return matrix_.cols(); }
  Behavior column(Index i) const { return {scenario_, matrix_.col(i)}; }

 private:
  Scenario scenario_;
  Eigen::MatrixXd matrix_;
};

/// Per-party response functions f_k(x_k) encoded by strategy column i.
std::vector<std::vector<int>> strategy_responses(const Scenario& s, Index i);

/// The deterministic behavior p(a|x) = prod_k [a_k == f_k(x_k)].
Behavior deterministic_behavior(const Scenario& s, const std::vector<std::vector<int>>& responses);

/// All deterministic strategies, columns ordered lexicographically by the
/// per-party response tables (party 0 most significant, f_k(0) most
/// significant within a party).
StrategyMatrix enumerate_strategies(const Scenario& s);

/// Every subset marginal independent of the complementary parties' inputs.
bool is_nonsignaling(const Behavior& q, double tol = kFeasibilityTol);

Behavior maximally_mixed(const Scenario& s);

/// v * q + (1 - v) * maximally_mixed.
Behavior mix_with_uniform(const Behavior& q, double v);

/// p(a,b|x,y) = 1/2 iff a xor b = x*y on the (2,2,2,2) scenario.
Behavior make_pr_box();

}  // namespace bellnl
