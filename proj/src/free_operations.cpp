#include "bellnl/free_operations.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "bellnl/errors.hpp"

namespace bellnl {

namespace {

bool is_permutation_of(const std::vector<int>& p, int size) {
  if (static_cast<int>(p.size()) != size) return false;
  std::vector<bool> seen(size, false);
  for (int v : p) {
    if (v < 0 || v >= size || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

std::vector<int> identity_permutation(int size) {
  std::vector<int> p(size);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

// Applies t (rows: new outputs, cols: old outputs) along axis k of a tensor
// with extents dims (axis 0 most significant).
Eigen::VectorXd apply_along(const Eigen::VectorXd& in, const std::vector<int>& dims, int k, const Eigen::MatrixXd& t) {
  Index stride = 1;
  for (std::size_t l = k + 1; l < dims.size(); ++l) stride *= dims[l];
  Index outer = 1;
  for (int l = 0; l < k; ++l) outer *= dims[l];
  const Index old_k = dims[k];
  const Index new_k = t.rows();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(outer * new_k * stride);
  for (Index o = 0; o < outer; ++o) {
    for (Index a = 0; a < old_k; ++a) {
      const auto src = in.segment((o * old_k + a) * stride, stride);
      for (Index alpha = 0; alpha < new_k; ++alpha) {
        const double c = t(alpha, a);
        if (c != 0.0) out.segment((o * new_k + alpha) * stride, stride) += c * src;
      }
    }
  }
  return out;
}

void check_distribution(const std::vector<double>& weights, const char* what) {
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw DomainError(std::string(what) + ": weights must be nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) throw DomainError(std::string(what) + ": weights must sum to 1");
}

}  // namespace

Relabeling Relabeling::identity(const Scenario& s) {
  Relabeling r;
  r.party_order = identity_permutation(s.parties());
  for (int k = 0; k < s.parties(); ++k) {
    r.input_maps.push_back(identity_permutation(s.inputs(k)));
    r.output_maps.emplace_back(s.inputs(k), identity_permutation(s.outputs(k)));
  }
  return r;
}

void check_relabeling(const Scenario& s, const Relabeling& r) {
  if (!is_permutation_of(r.party_order, s.parties())) throw DomainError("party order is not a permutation");
  if (static_cast<int>(r.input_maps.size()) != s.parties() || static_cast<int>(r.output_maps.size()) != s.parties()) {
    throw DomainError("relabeling needs one input and one output map per party");
  }
  for (int k = 0; k < s.parties(); ++k) {
    if (!is_permutation_of(r.input_maps[k], s.inputs(k))) {
      throw DomainError("input map of party " + std::to_string(k) + " is not a permutation");
    }
    if (static_cast<int>(r.output_maps[k].size()) != s.inputs(k)) {
      throw DomainError("party " + std::to_string(k) + " needs one output map per input");
    }
    for (const auto& m : r.output_maps[k]) {
      if (!is_permutation_of(m, s.outputs(k))) {
        throw DomainError("output map of party " + std::to_string(k) + " is not a permutation");
      }
    }
  }
}

Scenario relabeled_scenario(const Scenario& s, const Relabeling& r) {
  std::vector<int> inputs(s.parties());
  std::vector<int> outputs(s.parties());
  for (int k = 0; k < s.parties(); ++k) {
    inputs[k] = s.inputs(r.party_order[k]);
    outputs[k] = s.outputs(r.party_order[k]);
  }
  return {inputs, outputs};
}

Relabeling inverse(const Scenario& s, const Relabeling& r) {
  check_relabeling(s, r);
  const Scenario target = relabeled_scenario(s, r);
  Relabeling inv;
  inv.party_order.assign(s.parties(), 0);
  for (int k = 0; k < s.parties(); ++k) inv.party_order[r.party_order[k]] = k;
  // Maps are indexed by the party's position in `target`.
  inv.input_maps.resize(s.parties());
  inv.output_maps.resize(s.parties());
  for (int knew = 0; knew < s.parties(); ++knew) {
    const int kold = r.party_order[knew];
    std::vector<int> in(target.inputs(knew));
    for (int x = 0; x < s.inputs(kold); ++x) in[r.input_maps[kold][x]] = x;
    std::vector<std::vector<int>> out(target.inputs(knew), std::vector<int>(target.outputs(knew)));
    for (int x = 0; x < s.inputs(kold); ++x) {
      for (int a = 0; a < s.outputs(kold); ++a) out[r.input_maps[kold][x]][r.output_maps[kold][x][a]] = a;
    }
    inv.input_maps[knew] = std::move(in);
    inv.output_maps[knew] = std::move(out);
  }
  return inv;
}

Eigen::VectorXd permute_entries(const Scenario& s, const Relabeling& r, const Eigen::VectorXd& values) {
  check_relabeling(s, r);
  if (values.size() != s.dimension()) throw DimensionError("permute_entries: vector does not match scenario");
  const Scenario target = relabeled_scenario(s, r);
  Eigen::VectorXd out(values.size());
  std::vector<int> new_inputs(s.parties());
  std::vector<int> new_outputs(s.parties());
  for (Index j = 0; j < s.dimension(); ++j) {
    const FlatEntry e = decode_index(s, j);
    for (int knew = 0; knew < s.parties(); ++knew) {
      const int kold = r.party_order[knew];
      new_inputs[knew] = r.input_maps[kold][e.inputs[kold]];
      new_outputs[knew] = r.output_maps[kold][e.inputs[kold]][e.outputs[kold]];
    }
    out(flat_index(target, new_inputs, new_outputs)) = values(j);
  }
  return out;
}

Behavior relabel(const Behavior& q, const Relabeling& r) {
  return {relabeled_scenario(q.scenario(), r), permute_entries(q.scenario(), r, q.values())};
}

Behavior convex_mix(const std::vector<std::pair<double, Behavior>>& items) {
  if (items.empty()) throw DomainError("convex_mix needs at least one behavior");
  std::vector<double> weights;
  for (const auto& [w, q] : items) {
    weights.push_back(w);
    if (!(q.scenario() == items.front().second.scenario())) {
      throw DimensionError("convex_mix: behaviors live on different scenarios");
    }
  }
  check_distribution(weights, "convex_mix");
  Eigen::VectorXd values = Eigen::VectorXd::Zero(items.front().second.values().size());
  for (const auto& [w, q] : items) values += w * q.values();
  return {items.front().second.scenario(), std::move(values)};
}

LocalChannelBranch deterministic_branch(const Scenario& s, const std::vector<int>& new_outputs,
                                        const std::vector<std::vector<std::vector<int>>>& functions,
                                        double weight) {
  if (static_cast<int>(functions.size()) != s.parties() || static_cast<int>(new_outputs.size()) != s.parties()) {
    throw DimensionError("deterministic_branch: one output function per party");
  }
  LocalChannelBranch branch;
  branch.weight = weight;
  branch.maps.resize(s.parties());
  for (int k = 0; k < s.parties(); ++k) {
    if (static_cast<int>(functions[k].size()) != s.inputs(k)) {
      throw DimensionError("deterministic_branch: one output function per input");
    }
    for (int x = 0; x < s.inputs(k); ++x) {
      Eigen::MatrixXd t = Eigen::MatrixXd::Zero(new_outputs[k], s.outputs(k));
      for (int a = 0; a < s.outputs(k); ++a) {
        const int alpha = functions[k][x].at(a);
        if (alpha < 0 || alpha >= new_outputs[k]) throw IndexError("deterministic_branch: output label out of range");
        t(alpha, a) = 1.0;
      }
      branch.maps[k].push_back(std::move(t));
    }
  }
  return branch;
}

Behavior post_process(const Behavior& q, const LocalChannel& channel) {
  const Scenario& s = q.scenario();
  if (static_cast<int>(channel.new_outputs.size()) != s.parties()) {
    throw DimensionError("post_process: channel arity does not match the scenario");
  }
  if (channel.branches.empty()) throw DomainError("post_process: channel has no branches");
  std::vector<double> weights;
  for (const auto& branch : channel.branches) {
    weights.push_back(branch.weight);
    if (static_cast<int>(branch.maps.size()) != s.parties()) throw DimensionError("post_process: branch arity");
    for (int k = 0; k < s.parties(); ++k) {
      if (static_cast<int>(branch.maps[k].size()) != s.inputs(k)) throw DimensionError("post_process: input arity");
      for (const Eigen::MatrixXd& t : branch.maps[k]) {
        if (t.rows() != channel.new_outputs[k] || t.cols() != s.outputs(k)) {
          throw DimensionError("post_process: output map has the wrong shape");
        }
        if (t.minCoeff() < 0.0 || (t.colwise().sum().array() - 1.0).abs().maxCoeff() > 1e-9) {
          throw DomainError("post_process: output maps must be column stochastic");
        }
      }
    }
  }
  check_distribution(weights, "post_process");

  const Scenario target(s.inputs(), channel.new_outputs);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(target.dimension());
  std::vector<int> dims = s.outputs();
  for (Index x = 0; x < s.input_tuples(); ++x) {
    const std::vector<int> inputs = decode_inputs(s, x);
    Eigen::VectorXd mixed = Eigen::VectorXd::Zero(target.output_tuples());
    for (const auto& branch : channel.branches) {
      Eigen::VectorXd block = q.conditional(x);
      dims = s.outputs();
      for (int k = 0; k < s.parties(); ++k) {
        block = apply_along(block, dims, k, branch.maps[k][inputs[k]]);
        dims[k] = channel.new_outputs[k];
      }
      mixed += branch.weight * block;
    }
    out.segment(x * target.output_tuples(), target.output_tuples()) = mixed;
  }
  return {target, std::move(out)};
}

Eigen::MatrixXd input_channel_matrix(const Scenario& s, const InputChannel& channel) {
  if (channel.branches.empty()) throw DomainError("input channel has no branches");
  std::vector<double> weights;
  for (const auto& branch : channel.branches) {
    weights.push_back(branch.weight);
    if (static_cast<int>(branch.maps.size()) != s.parties()) throw DimensionError("input channel: branch arity");
    for (int k = 0; k < s.parties(); ++k) {
      // Same number of new inputs as old ones.
      if (static_cast<int>(branch.maps[k].size()) != s.inputs(k)) {
        throw DomainError("input channel must keep the input count of party " + std::to_string(k));
      }
      for (int x : branch.maps[k]) {
        if (x < 0 || x >= s.inputs(k)) throw IndexError("input channel maps outside the input range");
      }
    }
  }
  check_distribution(weights, "input channel");

  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(s.input_tuples(), s.input_tuples());
  std::vector<int> old_inputs(s.parties());
  for (const auto& branch : channel.branches) {
    for (Index chi = 0; chi < s.input_tuples(); ++chi) {
      const std::vector<int> new_inputs = decode_inputs(s, chi);
      for (int k = 0; k < s.parties(); ++k) old_inputs[k] = branch.maps[k][new_inputs[k]];
      m(input_tuple_index(s, old_inputs), chi) += branch.weight;
    }
  }
  return m;
}

Behavior pre_process(const Behavior& q, const InputChannel& channel) {
  const Scenario& s = q.scenario();
  const Eigen::MatrixXd m = input_channel_matrix(s, channel);
  const double worst = m.rowwise().sum().maxCoeff();
  if (worst > 1.0 + 1e-9) {
    throw DomainError("input channel sends total weight " + std::to_string(worst) +
                      " > 1 to one input tuple (restricted pre-processing)");
  }
  const Index outs = s.output_tuples();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(s.dimension());
  for (Index chi = 0; chi < s.input_tuples(); ++chi) {
    for (Index x = 0; x < s.input_tuples(); ++x) {
      if (m(x, chi) != 0.0) out.segment(chi * outs, outs) += m(x, chi) * q.conditional(x);
    }
  }
  return {s, std::move(out)};
}

Behavior input_enlarge(const Behavior& q, int party, int fixed_output) {
  const Scenario& s = q.scenario();
  if (party < 0 || party >= s.parties()) throw IndexError("input_enlarge: party out of range");
  if (fixed_output < 0 || fixed_output >= s.outputs(party)) throw IndexError("input_enlarge: output out of range");
  std::vector<int> inputs = s.inputs();
  ++inputs[party];
  const Scenario target(inputs, s.outputs());

  Eigen::VectorXd out = Eigen::VectorXd::Zero(target.dimension());
  std::vector<int> old_inputs(s.parties());
  std::vector<int> outputs;
  for (Index x = 0; x < target.input_tuples(); ++x) {
    const std::vector<int> new_inputs = decode_inputs(target, x);
    const bool added = new_inputs[party] == s.inputs(party);
    old_inputs = new_inputs;
    if (added) old_inputs[party] = 0;
    const Index src = input_tuple_index(s, old_inputs);
    for (Index a = 0; a < s.output_tuples(); ++a) {
      outputs = decode_outputs(s, a);
      const double p = q.values()(src * s.output_tuples() + a);
      if (added) {
        // Marginal of the other parties, placed on the fixed output.
        outputs[party] = fixed_output;
      }
      out(x * target.output_tuples() + output_tuple_index(target, outputs)) += p;
    }
  }
  return {target, std::move(out)};
}

}  // namespace bellnl
