#pragma once

#include <random>

#include <Eigen/Dense>

#include "bellnl/free_operations.hpp"
#include "bellnl/scenario.hpp"

namespace bellnl {

// Seeded generators for randomized checks. All draws go through one
// mt19937_64 so a seed fixes the whole sequence.
using Rng = std::mt19937_64;

Eigen::VectorXd dirichlet(Index k, double concentration, Rng& rng);

/// Independent Dirichlet(1) conditionals; generally signaling.
Behavior random_behavior(const Scenario& s, Rng& rng);

/// Dirichlet(1/2) mixture of strategy columns.
Behavior random_local_behavior(const StrategyMatrix& strategies, Rng& rng);

/// Dirichlet(1/2) mixture of the 24 non-signaling vertices of the CHSH scenario.
Behavior random_chsh_ns_behavior(Rng& rng);

/// Uniform party, input and output permutations.
Relabeling random_relabeling(const Scenario& s, Rng& rng);

/// Dirichlet(1) weights over 5 deterministic branches with random output
/// functions; the new output count of each party is drawn from 1..d_k.
LocalChannel random_local_channel(const Scenario& s, Rng& rng);

/// Dirichlet(1) weights over 5 deterministic input-map branches, each map a
/// permutation with probability 0.7 and arbitrary otherwise; redrawn until
/// the channel satisfies the input restriction.
InputChannel random_input_channel(const Scenario& s, Rng& rng);

}  // namespace bellnl
