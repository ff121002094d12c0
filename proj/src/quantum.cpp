#include "bellnl/quantum.hpp"

#include <cmath>
#include <numbers>

#include "bellnl/inequalities.hpp"

namespace bellnl {

namespace {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

// Projectors (I + O)/2 and (I - O)/2 of a +-1 valued observable.
std::vector<CMatrix> dichotomic(const CMatrix& observable) {
  const CMatrix id = CMatrix::Identity(observable.rows(), observable.cols());
  return {(id + observable) / 2.0, (id - observable) / 2.0};
}

CMatrix pauli_x() {
  CMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

CMatrix pauli_y() {
  CMatrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

CMatrix pauli_z() {
  CMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

CMatrix xy_observable(double phi) { return std::cos(phi) * pauli_x() + std::sin(phi) * pauli_y(); }

// Mermin value of the XY-plane family at shared angle theta; <tensor A> = cos(sum phi) on GHZ.
double mermin_value_at(const MerminInequality& m, int parties, double theta) {
  const Scenario& s = m.functional.scenario();
  double value = 0.0;
  for (Index x = 0; x < s.input_tuples(); ++x) {
    const double c = m.correlators[x];
    if (c == 0.0) continue;
    double phase = parties * theta;
    for (int bit : decode_inputs(s, x)) phase += bit * std::numbers::pi / 2.0;
    value += c * std::cos(phase);
  }
  return value;
}

}  // namespace

QuantumSetup<double> chsh_tsirelson_setup() {
  CVector psi = CVector::Zero(4);
  psi(0) = psi(3) = 1.0 / std::numbers::sqrt2;
  const CMatrix z = pauli_z();
  const CMatrix x = pauli_x();
  MeasurementFamily<double>::Projectors p(2);
  p[0] = {dichotomic(z), dichotomic(x)};
  p[1] = {dichotomic((z + x) / std::numbers::sqrt2), dichotomic((z - x) / std::numbers::sqrt2)};
  return {StateVector<double>({2, 2}, psi), MeasurementFamily<double>(std::move(p))};
}

QuantumSetup<double> cglmp_setup(double gamma) {
  if (!(gamma >= 0.0) || 2.0 * gamma * gamma > 1.0 + 1e-15) {
    throw DomainError("cglmp_setup needs 0 <= gamma <= 1/sqrt(2)");
  }
  static constexpr int d = 3;
  CVector psi = CVector::Zero(d * d);
  psi(0) = gamma;
  psi(d + 1) = std::sqrt(std::max(0.0, 1.0 - 2.0 * gamma * gamma));
  psi(2 * d + 2) = gamma;

  const double alpha[] = {0.0, 0.5};
  const double beta[] = {-0.25, 0.25};
  auto basis = [](int k, double offset, double sign) {
    CVector v(d);
    for (int j = 0; j < d; ++j) {
      v(j) = std::polar(1.0 / std::sqrt(double(d)), sign * 2.0 * std::numbers::pi / d * j * (k + offset));
    }
    return v;
  };
  MeasurementFamily<double>::Projectors p(2, std::vector<std::vector<CMatrix>>(2));
  for (int x = 0; x < 2; ++x) {
    for (int k = 0; k < d; ++k) {
      p[0][x].push_back(rank_one_projector<double>(basis(k, alpha[x], +1.0)));
      p[1][x].push_back(rank_one_projector<double>(basis(k, beta[x], -1.0)));
    }
  }
  return {StateVector<double>({d, d}, psi), MeasurementFamily<double>(std::move(p))};
}

double ghz_mermin_angle(int parties) {
  const MerminInequality m = make_mermin(parties);
  auto f = [&](double theta) { return std::abs(mermin_value_at(m, parties, theta)); };
  constexpr int grid = 720;
  const double step = 2.0 * std::numbers::pi / grid;
  int best = 0;
  for (int i = 1; i < grid; ++i) {
    if (f(i * step) > f(best * step)) best = i;
  }
  // Golden-section polish on the bracketing cell pair.
  double lo = (best - 1) * step;
  double hi = (best + 1) * step;
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - r * (hi - lo);
  double e = lo + r * (hi - lo);
  for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
    if (f(c) > f(e)) {
      hi = e;
    } else {
      lo = c;
    }
    c = hi - r * (hi - lo);
    e = lo + r * (hi - lo);
  }
  const double theta = (lo + hi) / 2.0;
  // Prefer the sign that makes the value positive.
  if (mermin_value_at(m, parties, theta) < 0.0) return theta + std::numbers::pi / parties;
  return theta;
}

QuantumSetup<double> ghz_mermin_setup(int parties) {
  if (parties < 2 || parties > 8) throw DomainError("ghz_mermin_setup needs 2 <= N <= 8");
  const double theta = ghz_mermin_angle(parties);
  const Index dim = Index(1) << parties;
  CVector psi = CVector::Zero(dim);
  psi(0) = psi(dim - 1) = 1.0 / std::numbers::sqrt2;
  MeasurementFamily<double>::Projectors p(parties);
  for (int k = 0; k < parties; ++k) {
    p[k] = {dichotomic(xy_observable(theta)), dichotomic(xy_observable(theta + std::numbers::pi / 2.0))};
  }
  return {StateVector<double>(std::vector<int>(parties, 2), psi), MeasurementFamily<double>(std::move(p))};
}

}  // namespace bellnl
