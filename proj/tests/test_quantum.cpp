#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "bellnl/errors.hpp"
#include "bellnl/inequalities.hpp"
#include "bellnl/nl_programs.hpp"
#include "bellnl/quantum.hpp"

using namespace bellnl;

namespace {

using C = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

// p(k, l | x, y) for the CGLMP state and bases, summed amplitude by amplitude.
double cglmp_probability(double gamma, int x, int y, int k, int l) {
  const double pi = std::numbers::pi;
  const double alpha[2] = {0.0, 0.5};
  const double beta[2] = {-0.25, 0.25};
  const double c[3] = {gamma, std::sqrt(1 - 2 * gamma * gamma), gamma};
  C amp = 0.0;
  for (int j = 0; j < 3; ++j) {
    amp += c[j] * std::exp(C(0, -2 * pi * j * (k + alpha[x]) / 3)) * std::exp(C(0, 2 * pi * j * (l + beta[y]) / 3));
  }
  return std::norm(amp) / 9.0;
}

MeasurementFamily<double> computational_basis(int parties) {
  Mat p0 = Mat::Zero(2, 2);
  Mat p1 = Mat::Zero(2, 2);
  p0(0, 0) = 1;
  p1(1, 1) = 1;
  return MeasurementFamily<double>(
      typename MeasurementFamily<double>::Projectors(parties, std::vector<std::vector<Mat>>{{p0, p1}}));
}

}  // namespace

TEST(Born, OutputsAreValidAndNonSignaling) {
  for (double gamma : {0.3, 1 / std::sqrt(3.0), 0.7}) {
    const auto setup = cglmp_setup(gamma);
    const Behavior q = born_behavior(setup.state, setup.measurements);
    EXPECT_TRUE(validate_behavior(q, 1e-12).valid);
    EXPECT_TRUE(is_nonsignaling(q, 1e-12));
  }
  for (int n = 2; n <= 4; ++n) {
    const auto setup = ghz_mermin_setup(n);
    const Behavior q = born_behavior(setup.state, setup.measurements);
    EXPECT_TRUE(validate_behavior(q, 1e-12).valid);
    EXPECT_TRUE(is_nonsignaling(q, 1e-12));
  }
}

TEST(Born, ProductStateIsLocal) {
  // |+>|0>.
  Vec amps(4);
  amps << 1 / std::sqrt(2.0), 0, 1 / std::sqrt(2.0), 0;
  const StateVector<double> psi({2, 2}, amps);
  const auto tsirelson = chsh_tsirelson_setup();
  const Behavior q = born_behavior(psi, tsirelson.measurements);
  EXPECT_TRUE(is_local(q, enumerate_strategies(q.scenario())).local);
}

TEST(Born, GlobalPhaseDoesNotMatter) {
  const auto setup = chsh_tsirelson_setup();
  const StateVector<double> rotated(setup.state.local_dims(), setup.state.amplitudes() * std::polar(1.0, 0.77));
  const Behavior a = born_behavior(setup.state, setup.measurements);
  const Behavior b = born_behavior(rotated, setup.measurements);
  EXPECT_LE((a.values() - b.values()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Born, ComputationalBasisReadsAmplitudes) {
  Vec amps(8);
  amps << 0.1, 0.2, 0.3, 0.4, 0.5, 0.1, 0.2, 0.0;
  amps /= amps.norm();
  const StateVector<double> psi({2, 2, 2}, amps);
  const Behavior q = born_behavior(psi, computational_basis(3));
  for (int j = 0; j < 8; ++j) EXPECT_NEAR(q.values()(j), std::norm(amps(j)), 1e-15);
}

TEST(Born, LongDoubleAgrees) {
  const auto setup = chsh_tsirelson_setup();
  Eigen::Matrix<std::complex<long double>, Eigen::Dynamic, 1> amps = setup.state.amplitudes().cast<std::complex<long double>>();
  MeasurementFamily<long double>::Projectors proj;
  for (const auto& party : setup.measurements.projectors()) {
    auto& out = proj.emplace_back();
    for (const auto& family : party) {
      auto& f = out.emplace_back();
      for (const Mat& p : family) f.push_back(p.cast<std::complex<long double>>());
    }
  }
  const Behavior q = born_behavior(StateVector<long double>({2, 2}, amps), MeasurementFamily<long double>(proj));
  EXPECT_LE((q.values() - born_behavior(setup.state, setup.measurements).values()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Tsirelson, ChshValue) {
  const auto setup = chsh_tsirelson_setup();
  const Behavior q = born_behavior(setup.state, setup.measurements);
  EXPECT_NEAR(evaluate(make_chsh(), q), (std::sqrt(2.0) - 1) / 2, 1e-14);
}

TEST(Ghz, MerminValues) {
  for (int n = 2; n <= 5; ++n) {
    const auto setup = ghz_mermin_setup(n);
    const Behavior q = born_behavior(setup.state, setup.measurements);
    EXPECT_NEAR(evaluate(make_mermin(n).functional, q), std::pow(2.0, (n - 1) / 2.0), 1e-9) << "N=" << n;
  }
  EXPECT_THROW(ghz_mermin_setup(1), DomainError);
}

TEST(Cglmp, BehaviorMatchesAmplitudeOracle) {
  for (double gamma : {0.2, 0.5, 0.617}) {
    const auto setup = cglmp_setup(gamma);
    const Behavior q = born_behavior(setup.state, setup.measurements);
    for (int x = 0; x < 2; ++x) {
      for (int y = 0; y < 2; ++y) {
        for (int k = 0; k < 3; ++k) {
          for (int l = 0; l < 3; ++l) {
            ASSERT_NEAR(q(std::vector<int>{x, y}, std::vector<int>{k, l}), cglmp_probability(gamma, x, y, k, l), 1e-14);
          }
        }
      }
    }
  }
}

TEST(Cglmp, KnownViolations) {
  const BellFunctional f = make_cglmp(3);
  auto value = [&](double gamma) {
    const auto setup = cglmp_setup(gamma);
    return evaluate(f, born_behavior(setup.state, setup.measurements));
  };
  // Maximally entangled state: I_3 = 4 (2 sqrt3 + 3) / 9 in the unnormalized form.
  EXPECT_NEAR(value(1 / std::sqrt(3.0)), (4 * (2 * std::sqrt(3.0) + 3) / 9 - 2) / 4, 1e-12);
  // Optimal state: I_3 = 1 + sqrt(11/3).
  EXPECT_NEAR(value(0.617), (1 + std::sqrt(11.0 / 3.0) - 2) / 4, 1e-4);
  EXPECT_LT(value(0.369), 0.0);
  EXPECT_GT(value(0.370), 0.0);
}

TEST(Cglmp, SingleMaximumOnGrid) {
  const BellFunctional f = make_cglmp(3);
  const double top = 1 / std::sqrt(2.0);
  std::vector<double> values;
  for (int i = 0; i <= 200; ++i) {
    const auto setup = cglmp_setup(top * i / 200);
    values.push_back(evaluate(f, born_behavior(setup.state, setup.measurements)));
  }
  const auto best = std::max_element(values.begin(), values.end()) - values.begin();
  EXPECT_NEAR(top * best / 200, 0.617, 0.005);
  int rises = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if ((values[i] > values[i - 1]) != (i <= static_cast<std::size_t>(best))) ++rises;
  }
  EXPECT_EQ(rises, 0);
}

TEST(Cglmp, RejectsOutOfRangeGamma) {
  EXPECT_THROW(cglmp_setup(0.8), DomainError);
  EXPECT_THROW(cglmp_setup(-0.1), DomainError);
}

TEST(Measurements, ValidationErrors) {
  Mat p0 = Mat::Zero(2, 2);
  p0(0, 0) = 1;
  Mat p1 = Mat::Zero(2, 2);
  p1(1, 1) = 1;
  using P = MeasurementFamily<double>::Projectors;
  EXPECT_THROW(MeasurementFamily<double>(P{{{p0, p0}}}), DomainError);
  Mat skew = p0;
  skew(0, 1) = 0.5;
  EXPECT_THROW(MeasurementFamily<double>(P{{{skew, Mat::Identity(2, 2) - skew}}}), DomainError);
  EXPECT_THROW(MeasurementFamily<double>(P{{{p0, p1}, {Mat::Identity(2, 2)}}}), DimensionError);
  EXPECT_THROW(MeasurementFamily<double>(P{}), DimensionError);
  Vec v(2);
  v << 1, 1;
  EXPECT_THROW(StateVector<double>({2, 2}, v), DimensionError);
  EXPECT_THROW(StateVector<double>({2}, v), DomainError);
}

TEST(Measurements, RankOneProjector) {
  Vec v(2);
  v << C(1, 1), 2;
  const Mat p = rank_one_projector<double>(v);
  EXPECT_LE((p * p - p).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_NEAR(p.trace().real(), 1.0, 1e-15);
}
