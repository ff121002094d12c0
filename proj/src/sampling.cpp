#include "bellnl/sampling.hpp"

#include <algorithm>
#include <numeric>

#include "bellnl/inequalities.hpp"

namespace bellnl {

namespace {

constexpr int kBranches = 5;

int uniform_int(int n, Rng& rng) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

std::vector<int> random_permutation(int n, Rng& rng) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

}  // namespace

Eigen::VectorXd dirichlet(Index k, double concentration, Rng& rng) {
  std::gamma_distribution<double> gamma(concentration, 1.0);
  Eigen::VectorXd w(k);
  do {
    for (Index i = 0; i < k; ++i) w(i) = gamma(rng);
  } while (w.sum() <= 0.0);
  return w / w.sum();
}

Behavior random_behavior(const Scenario& s, Rng& rng) {
  Eigen::VectorXd v(s.dimension());
  for (Index x = 0; x < s.input_tuples(); ++x) v.segment(x * s.output_tuples(), s.output_tuples()) = dirichlet(s.output_tuples(), 1.0, rng);
  return {s, std::move(v)};
}

Behavior random_local_behavior(const StrategyMatrix& strategies, Rng& rng) {
  return {strategies.scenario(), strategies.matrix() * dirichlet(strategies.columns(), 0.5, rng)};
}

Behavior random_chsh_ns_behavior(Rng& rng) {
  static const std::vector<Behavior> vertices = chsh_ns_vertices();
  const Eigen::VectorXd w = dirichlet(static_cast<Index>(vertices.size()), 0.5, rng);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(vertices.front().values().size());
  for (std::size_t i = 0; i < vertices.size(); ++i) v += w(static_cast<Index>(i)) * vertices[i].values();
  return {vertices.front().scenario(), std::move(v)};
}

Relabeling random_relabeling(const Scenario& s, Rng& rng) {
  Relabeling r = Relabeling::identity(s);
  // Parties may only trade places with parties of identical arity.
  std::vector<int> order = random_permutation(s.parties(), rng);
  bool compatible = true;
  for (int k = 0; k < s.parties(); ++k) {
    compatible = compatible && s.inputs(order[k]) == s.inputs(k) && s.outputs(order[k]) == s.outputs(k);
  }
  if (compatible) r.party_order = order;
  for (int k = 0; k < s.parties(); ++k) {
    r.input_maps[k] = random_permutation(s.inputs(k), rng);
    for (int x = 0; x < s.inputs(k); ++x) r.output_maps[k][x] = random_permutation(s.outputs(k), rng);
  }
  return r;
}

LocalChannel random_local_channel(const Scenario& s, Rng& rng) {
  LocalChannel channel;
  for (int k = 0; k < s.parties(); ++k) channel.new_outputs.push_back(1 + uniform_int(s.outputs(k), rng));
  const Eigen::VectorXd w = dirichlet(kBranches, 1.0, rng);
  for (int b = 0; b < kBranches; ++b) {
    std::vector<std::vector<std::vector<int>>> functions(s.parties());
    for (int k = 0; k < s.parties(); ++k) {
      functions[k].resize(s.inputs(k));
      for (int x = 0; x < s.inputs(k); ++x) {
        for (int a = 0; a < s.outputs(k); ++a) functions[k][x].push_back(uniform_int(channel.new_outputs[k], rng));
      }
    }
    channel.branches.push_back(deterministic_branch(s, channel.new_outputs, functions, w(b)));
  }
  return channel;
}

InputChannel random_input_channel(const Scenario& s, Rng& rng) {
  std::bernoulli_distribution use_permutation(0.7);
  for (int attempt = 0; attempt < 10'000; ++attempt) {
    InputChannel channel;
    const Eigen::VectorXd w = dirichlet(kBranches, 1.0, rng);
    for (int b = 0; b < kBranches; ++b) {
      InputChannelBranch branch;
      branch.weight = w(b);
      for (int k = 0; k < s.parties(); ++k) {
        if (use_permutation(rng)) {
          branch.maps.push_back(random_permutation(s.inputs(k), rng));
        } else {
          std::vector<int> map(s.inputs(k));
          for (int& x : map) x = uniform_int(s.inputs(k), rng);
          branch.maps.push_back(std::move(map));
        }
      }
      channel.branches.push_back(std::move(branch));
    }
    const Eigen::MatrixXd m = input_channel_matrix(s, channel);
    if (m.rowwise().sum().maxCoeff() <= 1.0 + 1e-12) return channel;
  }
  // Fall back to a pure mixture of permutations, which always qualifies.
  InputChannel channel;
  const Eigen::VectorXd w = dirichlet(kBranches, 1.0, rng);
  for (int b = 0; b < kBranches; ++b) {
    InputChannelBranch branch;
    branch.weight = w(b);
    for (int k = 0; k < s.parties(); ++k) branch.maps.push_back(random_permutation(s.inputs(k), rng));
    channel.branches.push_back(std::move(branch));
  }
  return channel;
}

}  // namespace bellnl
