#include <gtest/gtest.h>

#include <sstream>

#include "bellnl/errors.hpp"
#include "bellnl/io.hpp"
#include "bellnl/quantum.hpp"
#include "bellnl/sampling.hpp"

using namespace bellnl;

namespace {

int parse_error_line(const std::string& text, bool functional = false) {
  std::istringstream in(text);
  try {
    if (functional) {
      read_functional(in, "t");
    } else {
      read_behavior(in, "t");
    }
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST(Io, BehaviorRoundTrip) {
  Rng rng(1);
  for (const Scenario& s : {Scenario::symmetric(2, 2, 2), Scenario({2, 3, 1}, {3, 2, 2})}) {
    const Behavior q = random_behavior(s, rng);
    std::stringstream buffer;
    write_behavior(buffer, q);
    const Behavior back = read_behavior(buffer);
    EXPECT_EQ(back.scenario(), s);
    EXPECT_EQ(back.values(), q.values());
  }
  const auto setup = cglmp_setup(0.5);
  const Behavior q = born_behavior(setup.state, setup.measurements);
  std::stringstream buffer;
  write_behavior(buffer, q);
  EXPECT_EQ(read_behavior(buffer).values(), q.values());
}

TEST(Io, FunctionalRoundTrip) {
  for (const BellFunctional& f : {make_chsh(), make_cglmp(3), make_mermin(3).functional}) {
    std::stringstream buffer;
    write_functional(buffer, f);
    const BellFunctional back = read_functional(buffer);
    EXPECT_EQ(back.scenario(), f.scenario());
    EXPECT_EQ(back.coefficients(), f.coefficients());
    EXPECT_NEAR(back.local_bound(), f.local_bound(), 1e-12);
  }
}

TEST(Io, DistributionRoundTrip) {
  const Scenario s({2, 3}, {2, 2});
  const InputDistribution pi(s, (Eigen::VectorXd(6) << 0.1, 0.2, 0.0, 0.3, 0.25, 0.15).finished());
  std::stringstream buffer;
  write_input_distribution(buffer, pi);
  const InputDistribution back = read_input_distribution(buffer);
  EXPECT_LE((back.weights() - pi.weights()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Io, CommentsAndMissingEntries) {
  std::istringstream in(
      "# PR box\n"
      "scenario 2; 2 2; 2 2\n"
      "\n"
      "0 0 0 0 0.5   # x y a b\n0 0 1 1 0.5\n0 1 0 0 0.5\n0 1 1 1 0.5\n"
      "1 0 0 0 0.5\n1 0 1 1 0.5\n1 1 0 1 0.5\n1 1 1 0 0.5\n");
  EXPECT_EQ(read_behavior(in).values(), make_pr_box().values());
}

TEST(Io, ParseErrorsCarryLineNumbers) {
  EXPECT_EQ(parse_error_line("scenario 2; 2 2; 2 2\n0 0 0 0 1\n0 0 0 0 1\n"), 3);
  EXPECT_EQ(parse_error_line("scenario 2; 2 2; 2 2\n0 0 0 0 1\n# note\n0 2 0 0 1\n"), 4);
  EXPECT_EQ(parse_error_line("scenario 2; 2 2; 2 2\n0 0 0 0 x\n"), 2);
  EXPECT_EQ(parse_error_line("scenario 2; 2 2; 2 2\n0 0 0 1\n"), 2);
  EXPECT_EQ(parse_error_line("scenario 3; 2 2; 2 2\n"), 1);
  EXPECT_EQ(parse_error_line("behavior\n"), 1);
  // Valid syntax but not normalized.
  EXPECT_GT(parse_error_line("scenario 1; 1; 2\n0 0 0.4\n"), 0);
}

TEST(Io, FunctionalLocalBoundIsChecked) {
  // Line 8 repeats the (0 0 0 0) entry.
  const std::string duplicated = "0 0 0 0 1\n0 1 0 0 1\n1 0 0 0 1\n1 1 0 0 -1\n0 0 0 1 -1\n0 0 0 0 -1\n";
  const std::string chsh =
      "0 0 0 0 -1\n0 1 0 0 1\n1 0 0 0 1\n1 1 0 0 -1\n0 0 0 1 -1\n0 0 1 0 -1\n";
  EXPECT_EQ(parse_error_line("scenario 2; 2 2; 2 2\nlocal_bound 0\n" + duplicated, true), 8);
  std::istringstream ok("scenario 2; 2 2; 2 2\nlocal_bound 0\n" + chsh);
  const BellFunctional f = read_functional(ok);
  EXPECT_EQ(f.coefficients(), make_chsh().coefficients());
  EXPECT_EQ(parse_error_line("scenario 2; 2 2; 2 2\nlocal_bound 0.5\n" + chsh, true), 2);
  std::istringstream autobound("scenario 2; 2 2; 2 2\nlocal_bound auto\n" + chsh);
  EXPECT_EQ(read_functional(autobound).local_bound(), 0.0);
}

TEST(Io, DistributionMustSumToOne) {
  std::istringstream in("scenario 2; 2 2; 2 2\n0 0 0.5\n1 1 0.6\n");
  EXPECT_THROW(read_input_distribution(in), ParseError);
}

TEST(Io, MissingFile) { EXPECT_THROW(load_behavior("/nonexistent/q.txt"), ParseError); }
