#include <gtest/gtest.h>

#include "bellnl/errors.hpp"
#include "bellnl/free_operations.hpp"
#include "bellnl/measures.hpp"
#include "bellnl/sampling.hpp"

using namespace bellnl;

namespace {

const StrategyMatrix& chsh_strategies() {
  static const StrategyMatrix a = enumerate_strategies(Scenario::symmetric(2, 2, 2));
  return a;
}

double nl_uniform(const Behavior& q) {
  return nl(q, InputDistribution::uniform(q.scenario()), enumerate_strategies(q.scenario())).value;
}

std::vector<std::vector<std::vector<int>>> identity_functions(const Scenario& s) {
  std::vector<std::vector<std::vector<int>>> f(s.parties());
  for (int k = 0; k < s.parties(); ++k) {
    for (int x = 0; x < s.inputs(k); ++x) {
      std::vector<int> id(s.outputs(k));
      for (int a = 0; a < s.outputs(k); ++a) id[a] = a;
      f[k].push_back(id);
    }
  }
  return f;
}

}  // namespace

TEST(Relabel, IdentityAndInverse) {
  Rng rng(1);
  const Scenario s({2, 3}, {3, 2});
  const Behavior q = random_behavior(s, rng);
  EXPECT_EQ(relabel(q, Relabeling::identity(s)).values(), q.values());
  for (int trial = 0; trial < 20; ++trial) {
    const Relabeling r = random_relabeling(s, rng);
    const Behavior moved = relabel(q, r);
    EXPECT_EQ(relabel(moved, inverse(s, r)).values(), q.values());
  }
}

TEST(Relabel, OutputFlipOfPrBox) {
  const Behavior pr = make_pr_box();
  Relabeling r = Relabeling::identity(pr.scenario());
  r.output_maps[0] = {{1, 0}, {1, 0}};
  const Behavior flipped = relabel(pr, r);
  // a xor b = xy xor 1.
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          EXPECT_EQ(flipped(std::vector<int>{x, y}, std::vector<int>{a, b}), ((a ^ b) == ((x * y) ^ 1)) ? 0.5 : 0.0);
        }
      }
    }
  }
  EXPECT_NEAR(nl_uniform(flipped), 0.25, 1e-12);
}

TEST(Relabel, PartySwapMovesEntries) {
  const Scenario s({2, 3}, {3, 2});
  Rng rng(2);
  const Behavior q = random_behavior(s, rng);
  Relabeling r = Relabeling::identity(s);
  r.party_order = {1, 0};
  const Behavior swapped = relabel(q, r);
  EXPECT_EQ(swapped.scenario(), Scenario({3, 2}, {2, 3}));
  EXPECT_EQ(swapped(std::vector<int>{2, 1}, std::vector<int>{1, 2}), q(std::vector<int>{1, 2}, std::vector<int>{2, 1}));
}

TEST(Relabel, RejectsNonPermutations) {
  const Scenario s = Scenario::symmetric(2, 2, 2);
  Relabeling r = Relabeling::identity(s);
  r.input_maps[1] = {0, 0};
  EXPECT_THROW(check_relabeling(s, r), DomainError);
}

TEST(Mixing, PrAndAntiPrIsLocal) {
  const Behavior pr = make_pr_box();
  Relabeling r = Relabeling::identity(pr.scenario());
  r.output_maps[0] = {{1, 0}, {1, 0}};
  const Behavior mix = convex_mix({{0.5, pr}, {0.5, relabel(pr, r)}});
  EXPECT_TRUE(mix.values().isApprox(maximally_mixed(pr.scenario()).values()));
  EXPECT_NEAR(nl_uniform(mix), 0.0, 1e-12);
  EXPECT_THROW(convex_mix({{0.7, pr}, {0.7, pr}}), DomainError);
}

TEST(PostProcess, IdentityAndCoarseGraining) {
  Rng rng(3);
  const Scenario s = Scenario::symmetric(2, 2, 3);
  const Behavior q = random_behavior(s, rng);
  const LocalChannel id{s.outputs(), {deterministic_branch(s, s.outputs(), identity_functions(s), 1.0)}};
  EXPECT_LE((post_process(q, id).values() - q.values()).cwiseAbs().maxCoeff(), 1e-15);

  // Everything to one outcome on both sides.
  std::vector<std::vector<std::vector<int>>> collapse(2, std::vector<std::vector<int>>(2, std::vector<int>(3, 0)));
  const LocalChannel trivial{{1, 1}, {deterministic_branch(s, {1, 1}, collapse, 1.0)}};
  const Behavior c = post_process(q, trivial);
  EXPECT_EQ(c.scenario(), Scenario::symmetric(2, 2, 1));
  EXPECT_LE((c.values().array() - 1.0).abs().maxCoeff(), 1e-12);
}

TEST(PostProcess, MergingOutcomesAddsProbabilities) {
  Rng rng(4);
  const Scenario s = Scenario::symmetric(2, 2, 3);
  const Behavior q = random_behavior(s, rng);
  auto f = identity_functions(s);
  f[0][0] = {0, 1, 1};
  f[0][1] = {0, 1, 1};
  const LocalChannel merge{{2, 3}, {deterministic_branch(s, {2, 3}, f, 1.0)}};
  const Behavior m = post_process(q, merge);
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      for (int b = 0; b < 3; ++b) {
        const double expect = q(std::vector<int>{x, y}, std::vector<int>{1, b}) + q(std::vector<int>{x, y}, std::vector<int>{2, b});
        EXPECT_NEAR(m(std::vector<int>{x, y}, std::vector<int>{1, b}), expect, 1e-15);
      }
    }
  }
}

TEST(PreProcess, IdentityAndPermutation) {
  Rng rng(5);
  const Scenario s({3, 2}, {2, 2});
  const Behavior q = random_behavior(s, rng);
  const InputChannel id{{{1.0, {{0, 1, 2}, {0, 1}}}}};
  EXPECT_EQ(pre_process(q, id).values(), q.values());

  // New input chi of party 0 reads old input sigma(chi).
  const std::vector<int> sigma{2, 0, 1};
  const InputChannel perm{{{1.0, {sigma, {1, 0}}}}};
  Relabeling r = Relabeling::identity(s);
  for (int chi = 0; chi < 3; ++chi) r.input_maps[0][sigma[chi]] = chi;
  r.input_maps[1] = {1, 0};
  EXPECT_LE((pre_process(q, perm).values() - relabel(q, r).values()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(PreProcess, RejectsOverusedInputs) {
  const Behavior pr = make_pr_box();
  const InputChannel both_to_zero{{{1.0, {{0, 0}, {0, 1}}}}};
  EXPECT_THROW(pre_process(pr, both_to_zero), DomainError);
  EXPECT_THROW(input_channel_matrix(pr.scenario(), InputChannel{{{1.0, {{0, 2}, {0, 1}}}}}), IndexError);
}

TEST(InputEnlarge, PrBox) {
  const Behavior pr = make_pr_box();
  const Behavior big = input_enlarge(pr, 0, 0);
  EXPECT_EQ(big.scenario(), Scenario({3, 2}, {2, 2}));
  EXPECT_TRUE(validate_behavior(big).valid);
  EXPECT_TRUE(is_nonsignaling(big));
  // The old four input tuples keep a total distance of 1; the two new ones are
  // reproduced exactly, so the uniform weight 1/6 gives 1/6.
  EXPECT_NEAR(nl_uniform(big), 1.0 / 6, 1e-12);
  EXPECT_THROW(input_enlarge(pr, 2, 0), IndexError);
  EXPECT_THROW(input_enlarge(pr, 0, 2), IndexError);
}

TEST(InputEnlarge, CommutesAcrossParties) {
  Rng rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    const Behavior q = random_chsh_ns_behavior(rng);
    const Behavior ab = input_enlarge(input_enlarge(q, 0, 1), 1, 0);
    const Behavior ba = input_enlarge(input_enlarge(q, 1, 0), 0, 1);
    EXPECT_LE((ab.values() - ba.values()).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(Monotonicity, SmallRandomSample) {
  Rng rng(7);
  const InputDistribution u = InputDistribution::uniform(chsh_strategies().scenario());
  for (int trial = 0; trial < 20; ++trial) {
    const Behavior q = random_chsh_ns_behavior(rng);
    const double base = nl(q, u, chsh_strategies()).value;
    EXPECT_NEAR(nl_uniform(relabel(q, random_relabeling(q.scenario(), rng))), base, 1e-9);
    EXPECT_LE(nl_uniform(post_process(q, random_local_channel(q.scenario(), rng))), base + 1e-9);
    EXPECT_LE(nl_uniform(pre_process(q, random_input_channel(q.scenario(), rng))), base + 1e-9);
  }
}
