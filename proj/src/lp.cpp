#include "bellnl/lp.hpp"

#include <iomanip>
#include <ostream>

#include "bellnl/detail/revised_simplex.hpp"
#include "bellnl/errors.hpp"

namespace bellnl {

template <typename Scalar>
void LinearProgram<Scalar>::check() const {
  const Eigen::Index n = objective.size();
  if (lower.size() != n) throw DimensionError("lower bounds do not match the variable count");
  if (eq_matrix.cols() != n || ineq_matrix.cols() != n) {
    throw DimensionError("constraint matrices do not match the variable count");
  }
  if (eq_matrix.rows() != eq_rhs.size()) throw DimensionError("equality rows and right-hand side differ");
  if (ineq_matrix.rows() != ineq_rhs.size()) throw DimensionError("inequality rows and right-hand side differ");
  if (!objective.allFinite() || !eq_matrix.allFinite() || !eq_rhs.allFinite() || !ineq_matrix.allFinite() ||
      !ineq_rhs.allFinite()) {
    throw DomainError("linear program data must be finite");
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    if (std::isnan(lower(j)) || lower(j) == std::numeric_limits<Scalar>::infinity()) {
      throw DomainError("lower bound must be finite or -infinity");
    }
  }
}

std::string to_string(LPStatus status) {
  switch (status) {
    case LPStatus::optimal:
      return "optimal";
    case LPStatus::infeasible:
      return "infeasible";
    case LPStatus::unbounded:
      return "unbounded";
  }
  return "unknown";
}

template <typename Scalar>
LPSolution<Scalar> solve(const LinearProgram<Scalar>& lp, const SolverOptions& options) {
  detail::RevisedSimplex<Scalar> simplex(lp, options);
  return simplex.run();
}

template struct LinearProgram<double>;
template struct LinearProgram<long double>;
template LPSolution<double> solve(const LinearProgram<double>&, const SolverOptions&);
template LPSolution<long double> solve(const LinearProgram<long double>&, const SolverOptions&);

void write_lp(std::ostream& out, const LinearProgram<double>& lp) {
  const auto n = lp.variables();
  out << std::setprecision(17);
  out << "variables " << n << "\n";
  out << "minimize";
  for (Eigen::Index j = 0; j < n; ++j) out << ' ' << lp.objective(j);
  out << "\nlower";
  for (Eigen::Index j = 0; j < n; ++j) {
    if (std::isinf(lp.lower(j))) {
      out << " -inf";
    } else {
      out << ' ' << lp.lower(j);
    }
  }
  out << '\n';
  auto rows = [&](const char* tag, const Eigen::MatrixXd& m, const Eigen::VectorXd& rhs) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      out << tag;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (m(i, j) != 0.0) out << ' ' << j << ':' << m(i, j);
      }
      out << " rhs " << rhs(i) << '\n';
    }
  };
  rows("eq", lp.eq_matrix, lp.eq_rhs);
  rows("le", lp.ineq_matrix, lp.ineq_rhs);
}

}  // namespace bellnl
