#include <gtest/gtest.h>

#include <random>

#include "bellnl/errors.hpp"
#include "bellnl/nl_programs.hpp"
#include "bellnl/quantum.hpp"
#include "bellnl/sampling.hpp"
#include "bellnl/scenario.hpp"

using namespace bellnl;

namespace {

// Independent locality oracle for NS points of the CHSH scenario: positivity
// plus the eight CHSH facets |E00 + E01 + E10 - E11| <= 2 up to sign placement.
bool chsh_local_oracle(const Eigen::VectorXd& q, double tol) {
  auto p = [&](int x, int y, int a, int b) { return q(((x * 2 + y) * 2 + a) * 2 + b); };
  for (int j = 0; j < 16; ++j) {
    if (q(j) < -tol) return false;
  }
  double e[2][2];
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) e[x][y] = p(x, y, 0, 0) + p(x, y, 1, 1) - p(x, y, 0, 1) - p(x, y, 1, 0);
  }
  // All sign patterns with an odd number of minus signs.
  for (int mask = 0; mask < 16; ++mask) {
    if (__builtin_popcount(mask) % 2 == 0) continue;
    double s = 0.0;
    for (int k = 0; k < 4; ++k) s += ((mask >> k) & 1 ? -1.0 : 1.0) * e[k / 2][k % 2];
    if (std::abs(s) > 2.0 + tol) return false;
  }
  return true;
}

}  // namespace

TEST(Scenario, FlatIndexExamples) {
  const Scenario s = Scenario::symmetric(2, 2, 2);
  EXPECT_EQ(flat_index(s, std::vector<int>{0, 0}, std::vector<int>{0, 0}), 0);
  EXPECT_EQ(flat_index(s, std::vector<int>{1, 1}, std::vector<int>{1, 1}), 15);
  EXPECT_EQ(flat_index(s, std::vector<int>{0, 1}, std::vector<int>{1, 0}), 6);
}

TEST(Scenario, FlatIndexIsABijection) {
  for (const Scenario& s : {Scenario({2, 3}, {3, 2}), Scenario::symmetric(3, 2, 2), Scenario({1, 4, 2}, {2, 1, 3})}) {
    for (Index j = 0; j < s.dimension(); ++j) {
      const FlatEntry e = decode_index(s, j);
      ASSERT_EQ(flat_index(s, e.inputs, e.outputs), j);
    }
  }
}

TEST(Scenario, RejectsBadArguments) {
  const Scenario s = Scenario::symmetric(2, 2, 2);
  EXPECT_THROW(flat_index(s, std::vector<int>{2, 0}, std::vector<int>{0, 0}), IndexError);
  EXPECT_THROW(Scenario({2, 0}, {2, 2}), DomainError);
  EXPECT_THROW(Scenario::symmetric(12, 4, 4), CapacityError);
}

TEST(Scenario, StrategyCounts) {
  EXPECT_EQ(enumerate_strategies(Scenario::symmetric(2, 2, 2)).columns(), 16);
  EXPECT_EQ(enumerate_strategies(Scenario({1}, {5})).columns(), 5);
  const StrategyMatrix tri = enumerate_strategies(Scenario::symmetric(3, 2, 2));
  EXPECT_EQ(tri.columns(), 64);
  EXPECT_EQ(tri.matrix().rows(), 64);
}

TEST(Scenario, StrategyColumnsAreDeterministicAndNonSignaling) {
  const Scenario s({2, 3}, {3, 2});
  const StrategyMatrix a = enumerate_strategies(s);
  for (Index i = 0; i < a.columns(); ++i) {
    const Behavior c = a.column(i);
    ASSERT_TRUE(validate_behavior(c).valid);
    ASSERT_TRUE(is_nonsignaling(c));
    ASSERT_EQ(c.values().sum(), static_cast<double>(s.input_tuples()));
    ASSERT_EQ(deterministic_behavior(s, strategy_responses(s, i)).values(), c.values());
  }
}

TEST(Scenario, StrategyOrderIsLexicographic) {
  const Scenario s = Scenario::symmetric(2, 2, 2);
  // Column 1: Alice answers 0 on both inputs, Bob answers (0, 1).
  const auto r = strategy_responses(s, 1);
  EXPECT_EQ(r[0], (std::vector<int>{0, 0}));
  EXPECT_EQ(r[1], (std::vector<int>{0, 1}));
  const auto last = strategy_responses(s, 15);
  EXPECT_EQ(last[0], (std::vector<int>{1, 1}));
  EXPECT_EQ(last[1], (std::vector<int>{1, 1}));
}

TEST(Scenario, Validation) {
  const Scenario s = Scenario::symmetric(2, 2, 2);
  EXPECT_TRUE(validate_behavior(maximally_mixed(s)).valid);
  const ValidityReport zero = validate_behavior(Behavior(s, Eigen::VectorXd::Zero(16)));
  EXPECT_FALSE(zero.valid);
  EXPECT_DOUBLE_EQ(zero.max_violation, 1.0);
  EXPECT_TRUE(validate_behavior(make_pr_box()).valid);
}

TEST(Scenario, NonSignaling) {
  EXPECT_TRUE(is_nonsignaling(make_pr_box()));
  const Scenario s = Scenario::symmetric(2, 2, 2);
  // Alice copies Bob's input.
  Eigen::VectorXd v = Eigen::VectorXd::Zero(16);
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) v(flat_index(s, std::vector<int>{x, y}, std::vector<int>{y, 0})) = 1.0;
  }
  EXPECT_FALSE(is_nonsignaling(Behavior(s, v)));
}

TEST(Scenario, TripartiteSignalingThroughPairMarginal) {
  // Party 2 outputs b xor x_0: every single-party marginal is uniform but the
  // joint of parties 1 and 2 depends on x_0.
  const Scenario s = Scenario::symmetric(3, 2, 2);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(s.dimension());
  for (Index x = 0; x < s.input_tuples(); ++x) {
    const auto in = decode_inputs(s, x);
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        v(flat_index(s, in, std::vector<int>{a, b, b ^ in[0]})) = 0.25;
      }
    }
  }
  EXPECT_FALSE(is_nonsignaling(Behavior(s, v)));
}

TEST(Scenario, MixWithUniform) {
  const Behavior pr = make_pr_box();
  EXPECT_EQ(mix_with_uniform(pr, 1.0).values(), pr.values());
  EXPECT_TRUE(mix_with_uniform(pr, 0.0).values().isApprox(maximally_mixed(pr.scenario()).values()));
  EXPECT_THROW(mix_with_uniform(pr, 1.5), DomainError);
  for (double v : {0.1, 0.5, 0.9}) {
    const Behavior m = mix_with_uniform(pr, v);
    EXPECT_TRUE(validate_behavior(m).valid);
    EXPECT_TRUE(is_nonsignaling(m));
  }
}

TEST(Scenario, InputDistribution) {
  const Scenario s = Scenario::symmetric(2, 2, 2);
  EXPECT_THROW(InputDistribution(s, Eigen::Vector4d(0.5, 0.5, 0.5, -0.5)), DomainError);
  EXPECT_THROW(InputDistribution(s, Eigen::Vector4d(0.5, 0.5, 0.5, 0.5)), DomainError);
  const Eigen::VectorXd w = InputDistribution::uniform(s).entry_weights();
  EXPECT_EQ(w.size(), 16);
  EXPECT_DOUBLE_EQ(w.sum(), 4.0);
}

TEST(Locality, StrategyColumnsAndMixturesAreLocal) {
  const Scenario s = Scenario::symmetric(2, 2, 2);
  const StrategyMatrix a = enumerate_strategies(s);
  for (Index i = 0; i < a.columns(); ++i) EXPECT_TRUE(is_local(a.column(i), a).local);
  Rng rng(7);
  const Behavior mix = random_local_behavior(a, rng);
  const LocalityResult r = is_local(mix, a);
  ASSERT_TRUE(r.local);
  EXPECT_LE((a.matrix() * r.weights - mix.values()).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_NEAR(r.weights.sum(), 1.0, 1e-9);
}

TEST(Locality, NonlocalPoints) {
  const StrategyMatrix a = enumerate_strategies(Scenario::symmetric(2, 2, 2));
  EXPECT_FALSE(is_local(make_pr_box(), a).local);
  const auto setup = chsh_tsirelson_setup();
  EXPECT_FALSE(is_local(born_behavior(setup.state, setup.measurements), a).local);
}

TEST(Locality, AgreesWithFacetOracle) {
  const StrategyMatrix a = enumerate_strategies(Scenario::symmetric(2, 2, 2));
  Rng rng(2024);
  int local_count = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const Behavior q = random_chsh_ns_behavior(rng);
    const bool oracle = chsh_local_oracle(q.values(), 1e-9);
    ASSERT_EQ(is_local(q, a).local, oracle) << "trial " << trial;
    local_count += oracle ? 1 : 0;
  }
  // Both branches of the comparison must actually be exercised.
  EXPECT_GT(local_count, 0);
  EXPECT_LT(local_count, 100);
}
