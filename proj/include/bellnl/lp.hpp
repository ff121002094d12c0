#pragma once

#include <iosfwd>
#include <limits>
#include <string>

#include <Eigen/Dense>

namespace bellnl {

/// min c.z  subject to  E z = e,  G z <= g,  z >= lower.
///
/// Entries of `lower` may be -infinity (free variables); every other entry
/// must be finite.
template <typename Scalar>
struct LinearProgram {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Vector objective;
  Matrix eq_matrix;
  Vector eq_rhs;
  Matrix ineq_matrix;
  Vector ineq_rhs;
  Vector lower;

  LinearProgram() = default;
  explicit LinearProgram(Eigen::Index variables)
      : objective(Vector::Zero(variables)),
        eq_matrix(0, variables),
        eq_rhs(0),
        ineq_matrix(0, variables),
        ineq_rhs(0),
        lower(Vector::Zero(variables)) {}

  Eigen::Index variables() const { return objective.size(); }

  /// Throws DimensionError / DomainError when the data is inconsistent.
  void check() const;
};

enum class LPStatus { optimal, infeasible, unbounded };

std::string to_string(LPStatus status);

/// Duals follow the Lagrangian convention c = E^T y_eq + G^T y_ineq + r with
/// y_ineq <= 0 and reduced costs r >= 0 (r = 0 on free variables).
template <typename Scalar>
struct LPSolution {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  LPStatus status = LPStatus::infeasible;
  Vector primal;
  Scalar objective = std::numeric_limits<Scalar>::quiet_NaN();
  Vector eq_duals;
  Vector ineq_duals;
  Vector reduced_costs;
  Scalar dual_objective = std::numeric_limits<Scalar>::quiet_NaN();
  long iterations = 0;

  Scalar primal_residual = 0;
  Scalar complementarity = 0;
  /// |primal - dual| / max(1, |primal|).
  Scalar duality_gap = 0;

  bool optimal() const { return status == LPStatus::optimal; }
};

struct SolverOptions {
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-9;
  double pivot_tol = 1e-9;
  long max_iterations = 2'000'000;
  /// Consecutive degenerate pivots before switching to Bland's rule.
  int bland_after = 2000;
  /// Pivots between fresh basis factorizations.
  int refactor_every = 100;
};

/// Two-phase revised simplex. Deterministic: ties are broken toward the
/// lowest variable index. Throws SolverError on numerical breakdown or when
/// the iteration cap is reached.
template <typename Scalar>
LPSolution<Scalar> solve(const LinearProgram<Scalar>& lp, const SolverOptions& options = {});

extern template LPSolution<double> solve(const LinearProgram<double>&, const SolverOptions&);
extern template LPSolution<long double> solve(const LinearProgram<long double>&, const SolverOptions&);

/// Plain-text dump for cross-checking against other solvers.
void write_lp(std::ostream& out, const LinearProgram<double>& lp);

}  // namespace bellnl
