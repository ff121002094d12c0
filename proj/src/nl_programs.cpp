#include "bellnl/nl_programs.hpp"

#include <limits>
#include <string>

#include "bellnl/errors.hpp"

namespace bellnl {

namespace {

void require_same(const Scenario& a, const Scenario& b, const char* what) {
  if (!(a == b)) throw DimensionError(std::string(what) + ": scenarios do not match");
}

// Shared t/lambda part of both programs; q columns (if any) follow lambda.
NlProgram l1_skeleton(const StrategyMatrix& strategies, const InputDistribution& pi, Index extra) {
  const Index n = strategies.scenario().dimension();
  const Index m = strategies.columns();
  NlProgram prog;
  prog.entries = n;
  prog.strategies = m;
  prog.t_offset = 0;
  prog.lambda_offset = n;
  prog.weights = pi.entry_weights() / 2.0;

  const Index vars = n + m + extra;
  prog.lp = LinearProgram<double>(vars);
  prog.lp.objective.head(n) = prog.weights;

  const Eigen::MatrixXd& a = strategies.matrix();
  prog.lp.ineq_matrix = Eigen::MatrixXd::Zero(2 * n, vars);
  prog.lp.ineq_matrix.block(0, 0, n, n) = -Eigen::MatrixXd::Identity(n, n);
  prog.lp.ineq_matrix.block(0, n, n, m) = -a;
  prog.lp.ineq_matrix.block(n, 0, n, n) = -Eigen::MatrixXd::Identity(n, n);
  prog.lp.ineq_matrix.block(n, n, n, m) = a;
  prog.lp.ineq_rhs = Eigen::VectorXd::Zero(2 * n);
  return prog;
}

}  // namespace

LinearConstraints ns_constraints(const Scenario& s) {
  const Index outs = s.output_tuples();
  std::vector<Eigen::VectorXd> rows;
  std::vector<double> rhs;
  for (Index x = 0; x < s.input_tuples(); ++x) {
    Eigen::VectorXd row = Eigen::VectorXd::Zero(s.dimension());
    row.segment(x * outs, outs).setOnes();
    rows.push_back(std::move(row));
    rhs.push_back(1.0);
  }
  for (int k = 0; k < s.parties(); ++k) {
    for (Index x = 0; x < s.input_tuples(); ++x) {
      std::vector<int> inputs = decode_inputs(s, x);
      if (inputs[k] == 0) continue;
      inputs[k] = 0;
      const Index ref = input_tuple_index(s, inputs);
      for (Index a = 0; a < outs; ++a) {
        std::vector<int> outputs = decode_outputs(s, a);
        if (outputs[k] != 0) continue;
        Eigen::VectorXd row = Eigen::VectorXd::Zero(s.dimension());
        for (int ak = 0; ak < s.outputs(k); ++ak) {
          outputs[k] = ak;
          const Index b = output_tuple_index(s, outputs);
          row(x * outs + b) += 1.0;
          row(ref * outs + b) -= 1.0;
        }
        rows.push_back(std::move(row));
        rhs.push_back(0.0);
      }
    }
  }
  LinearConstraints c;
  c.matrix.resize(static_cast<Index>(rows.size()), s.dimension());
  c.rhs.resize(static_cast<Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    c.matrix.row(static_cast<Index>(i)) = rows[i].transpose();
    c.rhs(static_cast<Index>(i)) = rhs[i];
  }
  return c;
}

NlProgram assemble_nl_program(const Behavior& q, const StrategyMatrix& strategies, const InputDistribution& pi) {
  require_same(q.scenario(), strategies.scenario(), "assemble_nl_program");
  require_same(q.scenario(), pi.scenario(), "assemble_nl_program");
  require_valid(q, "assemble_nl_program");

  NlProgram prog = l1_skeleton(strategies, pi, 0);
  const Index n = prog.entries;
  prog.lp.ineq_rhs.head(n) = -q.values();
  prog.lp.ineq_rhs.tail(n) = q.values();

  prog.lp.eq_matrix = Eigen::MatrixXd::Zero(1, prog.lp.variables());
  prog.lp.eq_matrix.block(0, prog.lambda_offset, 1, prog.strategies).setOnes();
  prog.lp.eq_rhs = Eigen::VectorXd::Ones(1);
  return prog;
}

NlProgram assemble_constrained_nl_program(const BellFunctional& f, double value, const StrategyMatrix& strategies,
                                          const InputDistribution& pi) {
  require_same(f.scenario(), strategies.scenario(), "assemble_constrained_nl_program");
  require_same(f.scenario(), pi.scenario(), "assemble_constrained_nl_program");
  if (!std::isfinite(value)) throw DomainError("target value must be finite");

  const Index n = f.scenario().dimension();
  NlProgram prog = l1_skeleton(strategies, pi, n);
  prog.q_offset = prog.lambda_offset + prog.strategies;
  prog.lp.ineq_matrix.block(0, prog.q_offset, n, n) = Eigen::MatrixXd::Identity(n, n);
  prog.lp.ineq_matrix.block(n, prog.q_offset, n, n) = -Eigen::MatrixXd::Identity(n, n);

  const LinearConstraints ns = ns_constraints(f.scenario());
  const Index eq_rows = 2 + ns.matrix.rows();
  prog.lp.eq_matrix = Eigen::MatrixXd::Zero(eq_rows, prog.lp.variables());
  prog.lp.eq_rhs.resize(eq_rows);
  prog.lp.eq_matrix.block(0, prog.lambda_offset, 1, prog.strategies).setOnes();
  prog.lp.eq_rhs(0) = 1.0;
  prog.lp.eq_matrix.block(1, prog.q_offset, 1, n) = f.coefficients().transpose();
  prog.lp.eq_rhs(1) = value;
  prog.lp.eq_matrix.block(2, prog.q_offset, ns.matrix.rows(), n) = ns.matrix;
  prog.lp.eq_rhs.tail(ns.matrix.rows()) = ns.rhs;
  return prog;
}

LocalityResult is_local(const Behavior& q, const StrategyMatrix& strategies, double tol) {
  require_same(q.scenario(), strategies.scenario(), "is_local");
  const Index n = q.scenario().dimension();
  const Index m = strategies.columns();

  // min s  s.t.  |q - A lambda| <= s,  sum lambda = 1,  lambda >= 0.
  LinearProgram<double> lp(1 + m);
  lp.objective(0) = 1.0;
  lp.ineq_matrix = Eigen::MatrixXd::Zero(2 * n, 1 + m);
  lp.ineq_matrix.col(0).setConstant(-1.0);
  lp.ineq_matrix.block(0, 1, n, m) = -strategies.matrix();
  lp.ineq_matrix.block(n, 1, n, m) = strategies.matrix();
  lp.ineq_rhs.resize(2 * n);
  lp.ineq_rhs.head(n) = -q.values();
  lp.ineq_rhs.tail(n) = q.values();
  lp.eq_matrix = Eigen::MatrixXd::Zero(1, 1 + m);
  lp.eq_matrix.block(0, 1, 1, m).setOnes();
  lp.eq_rhs = Eigen::VectorXd::Ones(1);

  const LPSolution<double> sol = solve(lp);
  if (!sol.optimal()) throw SolverError("locality program ended " + to_string(sol.status));
  LocalityResult result;
  result.residual = sol.objective;
  result.weights = sol.primal.tail(m);
  result.local = sol.objective <= tol;
  return result;
}

}  // namespace bellnl
