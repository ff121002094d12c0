#pragma once

#include <complex>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bellnl/errors.hpp"
#include "bellnl/scenario.hpp"

namespace bellnl {

/// A pure state on a tensor product of local spaces, party 0 most significant.
template <typename Scalar>
class StateVector {
 public:
  using Complex = std::complex<Scalar>;
  using Vector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;

  StateVector(std::vector<int> local_dims, Vector amplitudes)
      : local_dims_(std::move(local_dims)), amplitudes_(std::move(amplitudes)) {
    Index total = 1;
    for (int d : local_dims_) {
      if (d < 1) throw DomainError("local dimension must be positive");
      total *= d;
    }
    if (total != amplitudes_.size()) {
      throw DimensionError("state has " + std::to_string(amplitudes_.size()) + " amplitudes, local dimensions give " +
                           std::to_string(total));
    }
    using std::abs;
    if (abs(amplitudes_.norm() - Scalar(1)) > Scalar(1e-12)) throw DomainError("state vector is not normalized");
  }

  const std::vector<int>& local_dims() const noexcept { return local_dims_; }
  const Vector& amplitudes() const noexcept { return amplitudes_; }
  Index dimension() const noexcept { return amplitudes_.size(); }

 private:
  std::vector<int> local_dims_;
  Vector amplitudes_;
};

/// projectors[k][x][a]: orthogonal projector of party k for outcome a of input x.
template <typename Scalar>
class MeasurementFamily {
 public:
  using Matrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
  using Projectors = std::vector<std::vector<std::vector<Matrix>>>;

  explicit MeasurementFamily(Projectors projectors, Scalar tol = Scalar(1e-10)) : projectors_(std::move(projectors)) {
    if (projectors_.empty()) throw DimensionError("measurement family has no parties");
    for (std::size_t k = 0; k < projectors_.size(); ++k) {
      if (projectors_[k].empty()) throw DimensionError("party without inputs");
      const std::size_t outcomes = projectors_[k][0].size();
      const Index dim = outcomes ? projectors_[k][0][0].rows() : 0;
      for (const auto& family : projectors_[k]) {
        if (family.size() != outcomes || outcomes == 0) throw DimensionError("inputs of one party differ in outcome count");
        Matrix sum = Matrix::Zero(dim, dim);
        for (const Matrix& p : family) {
          if (p.rows() != dim || p.cols() != dim) throw DimensionError("projector has the wrong size");
          if ((p - p.adjoint()).cwiseAbs().maxCoeff() > tol) throw DomainError("projector is not Hermitian");
          if ((p * p - p).cwiseAbs().maxCoeff() > tol) throw DomainError("projector is not idempotent");
          sum += p;
        }
        if ((sum - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff() > tol) {
          throw DomainError("projectors do not sum to the identity");
        }
      }
    }
  }

  int parties() const noexcept { return static_cast<int>(projectors_.size()); }
  int local_dim(int k) const { return static_cast<int>(projectors_.at(k)[0][0].rows()); }
  const Projectors& projectors() const noexcept { return projectors_; }

  Scenario scenario() const {
    std::vector<int> inputs;
    std::vector<int> outputs;
    for (const auto& party : projectors_) {
      inputs.push_back(static_cast<int>(party.size()));
      outputs.push_back(static_cast<int>(party[0].size()));
    }
    return {inputs, outputs};
  }

 private:
  Projectors projectors_;
};

/// Rank-one projector onto the normalized direction of v.
template <typename Scalar>
typename MeasurementFamily<Scalar>::Matrix rank_one_projector(
    const Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>& v) {
  const auto u = v / v.norm();
  return u * u.adjoint();
}

namespace detail {

// v'[l, i, r] = sum_j m[i, j] v[l, j, r] where the middle factor has size d.
template <typename Scalar>
Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1> apply_local(
    const typename MeasurementFamily<Scalar>::Matrix& m, const Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>& v,
    Index left, Index d, Index right) {
  Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1> out =
      Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>::Zero(v.size());
  for (Index l = 0; l < left; ++l) {
    for (Index i = 0; i < d; ++i) {
      for (Index j = 0; j < d; ++j) {
        const std::complex<Scalar> c = m(i, j);
        if (c == std::complex<Scalar>(0)) continue;
        for (Index r = 0; r < right; ++r) out((l * d + i) * right + r) += c * v((l * d + j) * right + r);
      }
    }
  }
  return out;
}

}  // namespace detail

/// p(a|x) = || (tensor_k M^{x_k}_{a_k}) psi ||^2.
template <typename Scalar>
Behavior born_behavior(const StateVector<Scalar>& state, const MeasurementFamily<Scalar>& meas) {
  using Vector = typename StateVector<Scalar>::Vector;
  const int n = meas.parties();
  if (static_cast<int>(state.local_dims().size()) != n) throw DimensionError("state and measurements differ in parties");
  for (int k = 0; k < n; ++k) {
    if (state.local_dims()[k] != meas.local_dim(k)) throw DimensionError("local dimension mismatch at party " + std::to_string(k));
  }
  const Scenario s = meas.scenario();
  std::vector<Index> right(n, 1);
  for (int k = n - 2; k >= 0; --k) right[k] = right[k + 1] * state.local_dims()[k + 1];

  Eigen::VectorXd values(s.dimension());
  std::vector<int> inputs(n);
  std::vector<int> outputs(n);
  // Depth-first over parties so partial products are shared between outcome strings.
  std::function<void(int, const Vector&)> descend = [&](int k, const Vector& v) {
    if (k == n) {
      values(flat_index(s, inputs, outputs)) = static_cast<double>(v.squaredNorm());
      return;
    }
    const Index d = state.local_dims()[k];
    const Index left = state.dimension() / (d * right[k]);
    const auto& family = meas.projectors()[k][inputs[k]];
    for (std::size_t a = 0; a < family.size(); ++a) {
      outputs[k] = static_cast<int>(a);
      descend(k + 1, detail::apply_local<Scalar>(family[a], v, left, d, right[k]));
    }
  };
  for (Index x = 0; x < s.input_tuples(); ++x) {
    inputs = decode_inputs(s, x);
    descend(0, state.amplitudes());
  }
  return {s, std::move(values)};
}

template <typename Scalar>
struct QuantumSetup {
  StateVector<Scalar> state;
  MeasurementFamily<Scalar> measurements;
};

/// Phi+ with A0 = Z, A1 = X, B0 = (Z + X)/sqrt2, B1 = (Z - X)/sqrt2;
/// outcome 0 is the +1 eigenvalue.
QuantumSetup<double> chsh_tsirelson_setup();

/// gamma|00> + sqrt(1 - 2 gamma^2)|11> + gamma|22> with Fourier bases:
/// Alice |k>_x ~ sum_j exp(+2 pi i j (k + alpha_x)/3) |j>, alpha = (0, 1/2);
/// Bob   |l>_y ~ sum_j exp(-2 pi i j (l + beta_y)/3) |j>,  beta = (-1/4, 1/4).
QuantumSetup<double> cglmp_setup(double gamma);

/// GHZ_N with observables cos(phi) X + sin(phi) Y, phi = theta for input 0
/// and theta + pi/2 for input 1, theta shared by all parties and chosen to
/// maximize the Mermin value.
QuantumSetup<double> ghz_mermin_setup(int parties);

/// The shared angle used by ghz_mermin_setup.
double ghz_mermin_angle(int parties);

}  // namespace bellnl
