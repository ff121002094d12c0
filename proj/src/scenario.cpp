#include "bellnl/scenario.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "bellnl/errors.hpp"

namespace bellnl {

namespace {

// Multiplies while staying under kMaxDimension; returns -1 on overflow of the cap.
Index capped_product(Index a, Index b) {
  if (a < 0 || b < 0) return -1;
  if (b != 0 && a > kMaxDimension / b) return -1;
  return a * b;
}

}  // namespace

Scenario::Scenario(std::vector<int> inputs, std::vector<int> outputs)
    : inputs_(std::move(inputs)), outputs_(std::move(outputs)) {
  if (inputs_.empty()) throw DomainError("scenario needs at least one party");
  if (inputs_.size() != outputs_.size()) {
    throw DimensionError("scenario input and output lists differ in length");
  }
  for (std::size_t k = 0; k < inputs_.size(); ++k) {
    if (inputs_[k] < 1 || outputs_[k] < 1) {
      throw DomainError("party " + std::to_string(k) + " needs at least one input and one output");
    }
    input_tuples_ = capped_product(input_tuples_, inputs_[k]);
    output_tuples_ = capped_product(output_tuples_, outputs_[k]);
    if (input_tuples_ < 0 || output_tuples_ < 0) break;
  }
  if (input_tuples_ < 0 || output_tuples_ < 0 || capped_product(input_tuples_, output_tuples_) < 0) {
    throw CapacityError("behavior dimension exceeds " + std::to_string(kMaxDimension));
  }
}

Scenario Scenario::symmetric(int parties, int inputs, int outputs) {
  if (parties < 1) throw DomainError("scenario needs at least one party");
  return Scenario(std::vector<int>(parties, inputs), std::vector<int>(parties, outputs));
}

Index Scenario::strategy_count() const {
  Index count = 1;
  for (int k = 0; k < parties(); ++k) {
    for (int x = 0; x < inputs_[k]; ++x) {
      count = capped_product(count, outputs_[k]);
      if (count < 0) throw CapacityError("strategy count exceeds " + std::to_string(kMaxDimension));
    }
  }
  return count;
}

namespace {

Index mixed_radix(std::span<const int> digits, const std::vector<int>& radix, const char* what) {
  if (digits.size() != radix.size()) {
    throw IndexError(std::string(what) + " tuple has " + std::to_string(digits.size()) +
                     " entries, scenario has " + std::to_string(radix.size()) + " parties");
  }
  Index index = 0;
  for (std::size_t k = 0; k < radix.size(); ++k) {
    if (digits[k] < 0 || digits[k] >= radix[k]) {
      throw IndexError(std::string(what) + " " + std::to_string(digits[k]) + " out of range for party " +
                       std::to_string(k));
    }
    index = index * radix[k] + digits[k];
  }
  return index;
}

std::vector<int> decode_radix(Index index, const std::vector<int>& radix, Index bound) {
  if (index < 0 || index >= bound) throw IndexError("tuple index " + std::to_string(index) + " out of range");
  std::vector<int> digits(radix.size());
  for (std::size_t k = radix.size(); k-- > 0;) {
    digits[k] = static_cast<int>(index % radix[k]);
    index /= radix[k];
  }
  return digits;
}

}  // namespace

Index input_tuple_index(const Scenario& s, std::span<const int> inputs) {
  return mixed_radix(inputs, s.inputs(), "input");
}

Index output_tuple_index(const Scenario& s, std::span<const int> outputs) {
  return mixed_radix(outputs, s.outputs(), "output");
}

std::vector<int> decode_inputs(const Scenario& s, Index input_tuple) {
  return decode_radix(input_tuple, s.inputs(), s.input_tuples());
}

std::vector<int> decode_outputs(const Scenario& s, Index output_tuple) {
  return decode_radix(output_tuple, s.outputs(), s.output_tuples());
}

Index flat_index(const Scenario& s, std::span<const int> inputs, std::span<const int> outputs) {
  return input_tuple_index(s, inputs) * s.output_tuples() + output_tuple_index(s, outputs);
}

FlatEntry decode_index(const Scenario& s, Index j) {
  if (j < 0 || j >= s.dimension()) throw IndexError("flat index " + std::to_string(j) + " out of range");
  return {decode_inputs(s, j / s.output_tuples()), decode_outputs(s, j % s.output_tuples())};
}

Behavior::Behavior(Scenario scenario, Eigen::VectorXd values)
    : scenario_(std::move(scenario)), values_(std::move(values)) {
  if (values_.size() != scenario_.dimension()) {
    throw DimensionError("behavior has " + std::to_string(values_.size()) + " entries, scenario expects " +
                         std::to_string(scenario_.dimension()));
  }
}

ValidityReport validate_behavior(const Behavior& q, double tol) {
  const Scenario& s = q.scenario();
  double worst = 0.0;
  for (Index x = 0; x < s.input_tuples(); ++x) {
    const auto block = q.conditional(x);
    if (!block.allFinite()) return {false, std::numeric_limits<double>::infinity()};
    worst = std::max(worst, -block.minCoeff());
    worst = std::max(worst, std::abs(block.sum() - 1.0));
  }
  return {worst <= tol, worst};
}

void require_valid(const Behavior& q, std::string_view context) {
  const ValidityReport report = validate_behavior(q);
  if (!report.valid) {
    throw DomainError(std::string(context) + ": behavior is not a valid conditional distribution (violation " +
                      std::to_string(report.max_violation) + ")");
  }
}

InputDistribution::InputDistribution(Scenario scenario, Eigen::VectorXd weights)
    : scenario_(std::move(scenario)), weights_(std::move(weights)) {
  if (weights_.size() != scenario_.input_tuples()) {
    throw DimensionError("input distribution has " + std::to_string(weights_.size()) + " weights, scenario has " +
                         std::to_string(scenario_.input_tuples()) + " input tuples");
  }
  if (!weights_.allFinite() || weights_.minCoeff() < 0.0) {
    throw DomainError("input weights must be finite and nonnegative");
  }
  if (std::abs(weights_.sum() - 1.0) > 1e-12) throw DomainError("input weights must sum to 1");
}

InputDistribution InputDistribution::uniform(const Scenario& s) {
  return {s, Eigen::VectorXd::Constant(s.input_tuples(), 1.0 / static_cast<double>(s.input_tuples()))};
}

Eigen::VectorXd InputDistribution::entry_weights() const {
  const Index outs = scenario_.output_tuples();
  Eigen::VectorXd w(scenario_.dimension());
  for (Index x = 0; x < scenario_.input_tuples(); ++x) w.segment(x * outs, outs).setConstant(weights_(x));
  return w;
}

StrategyMatrix::StrategyMatrix(Scenario scenario, Eigen::MatrixXd matrix)
    : scenario_(std::move(scenario)), matrix_(std::move(matrix)) {
  if (matrix_.rows() != scenario_.dimension()) throw DimensionError("strategy matrix row count mismatch");
}

std::vector<std::vector<int>> strategy_responses(const Scenario& s, Index i) {
  const Index count = s.strategy_count();
  if (i < 0 || i >= count) throw IndexError("strategy index " + std::to_string(i) + " out of range");
  std::vector<std::vector<int>> responses(s.parties());
  for (int k = 0; k < s.parties(); ++k) responses[k].resize(s.inputs(k));
  // Least significant digit is the last input of the last party.
  for (int k = s.parties(); k-- > 0;) {
    for (int x = s.inputs(k); x-- > 0;) {
      responses[k][x] = static_cast<int>(i % s.outputs(k));
      i /= s.outputs(k);
    }
  }
  return responses;
}

Behavior deterministic_behavior(const Scenario& s, const std::vector<std::vector<int>>& responses) {
  if (static_cast<int>(responses.size()) != s.parties()) throw DimensionError("one response table per party");
  Eigen::VectorXd values = Eigen::VectorXd::Zero(s.dimension());
  std::vector<int> outputs(s.parties());
  for (Index x = 0; x < s.input_tuples(); ++x) {
    const std::vector<int> inputs = decode_inputs(s, x);
    for (int k = 0; k < s.parties(); ++k) outputs[k] = responses[k].at(inputs[k]);
    values(x * s.output_tuples() + output_tuple_index(s, outputs)) = 1.0;
  }
  return {s, std::move(values)};
}

StrategyMatrix enumerate_strategies(const Scenario& s) {
  const Index count = s.strategy_count();
  if (count > kMaxStrategyEntries / s.dimension()) {
    throw CapacityError("strategy matrix with " + std::to_string(count) + " columns of dimension " +
                        std::to_string(s.dimension()) + " is too large");
  }
  Eigen::MatrixXd matrix = Eigen::MatrixXd::Zero(s.dimension(), count);
  // Per-party digits of the strategy counter, advanced like an odometer.
  std::vector<std::vector<int>> responses(s.parties());
  for (int k = 0; k < s.parties(); ++k) responses[k].assign(s.inputs(k), 0);
  std::vector<std::vector<int>> input_digits(s.input_tuples());
  for (Index x = 0; x < s.input_tuples(); ++x) input_digits[x] = decode_inputs(s, x);
  std::vector<int> outputs(s.parties());
  for (Index i = 0; i < count; ++i) {
    for (Index x = 0; x < s.input_tuples(); ++x) {
      for (int k = 0; k < s.parties(); ++k) outputs[k] = responses[k][input_digits[x][k]];
      matrix(x * s.output_tuples() + output_tuple_index(s, outputs), i) = 1.0;
    }
    for (int k = s.parties(); k-- > 0;) {
      bool carry = true;
      for (int x = s.inputs(k); x-- > 0 && carry;) {
        if (++responses[k][x] < s.outputs(k)) {
          carry = false;
        } else {
          responses[k][x] = 0;
        }
      }
      if (!carry) break;
    }
  }
  return {s, std::move(matrix)};
}

bool is_nonsignaling(const Behavior& q, double tol) {
  const Scenario& s = q.scenario();
  for (int k = 0; k < s.parties(); ++k) {
    if (s.inputs(k) == 1) continue;
    // Marginal over everyone but k, compared between x_k and the reference x_k = 0.
    for (Index x = 0; x < s.input_tuples(); ++x) {
      std::vector<int> inputs = decode_inputs(s, x);
      if (inputs[k] == 0) continue;
      std::vector<int> reference = inputs;
      reference[k] = 0;
      const Index ref = input_tuple_index(s, reference);
      for (Index a = 0; a < s.output_tuples(); ++a) {
        std::vector<int> outputs = decode_outputs(s, a);
        if (outputs[k] != 0) continue;
        double here = 0.0;
        double there = 0.0;
        for (int ak = 0; ak < s.outputs(k); ++ak) {
          outputs[k] = ak;
          const Index b = output_tuple_index(s, outputs);
          here += q.values()(x * s.output_tuples() + b);
          there += q.values()(ref * s.output_tuples() + b);
        }
        if (std::abs(here - there) > tol) return false;
      }
    }
  }
  return true;
}

Behavior maximally_mixed(const Scenario& s) {
  return {s, Eigen::VectorXd::Constant(s.dimension(), 1.0 / static_cast<double>(s.output_tuples()))};
}

Behavior mix_with_uniform(const Behavior& q, double v) {
  if (!(v >= 0.0 && v <= 1.0)) throw DomainError("mixing weight must lie in [0, 1]");
  require_valid(q, "mix_with_uniform");
  const Behavior u = maximally_mixed(q.scenario());
  return {q.scenario(), v * q.values() + (1.0 - v) * u.values()};
}

Behavior make_pr_box() {
  const Scenario s = Scenario::symmetric(2, 2, 2);
  Eigen::VectorXd values(s.dimension());
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          const int in[] = {x, y};
          const int out[] = {a, b};
          values(flat_index(s, in, out)) = ((a ^ b) == (x & y)) ? 0.5 : 0.0;
        }
      }
    }
  }
  return {s, std::move(values)};
}

}  // namespace bellnl
