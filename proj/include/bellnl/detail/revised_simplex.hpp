#pragma once

// Dense-basis revised simplex over a sparse standard form. Included only by
// src/lp.cpp, which instantiates it for double and long double.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "bellnl/errors.hpp"
#include "bellnl/lp.hpp"

namespace bellnl::detail {

template <typename Scalar>
class RevisedSimplex {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Sparse = Eigen::SparseMatrix<Scalar, Eigen::ColMajor, Eigen::Index>;
  using Index = Eigen::Index;

  RevisedSimplex(const LinearProgram<Scalar>& lp, const SolverOptions& options) : lp_(lp), opt_(options) {
    build_standard_form();
  }

  LPSolution<Scalar> run() {
    LPSolution<Scalar> result;
    if (inconsistent_) {
      result.status = LPStatus::infeasible;
      return result;
    }
    install_initial_basis();

    if (artificial_count_ > 0) {
      Vector phase1 = Vector::Zero(cols_);
      for (Index j = 0; j < cols_; ++j) {
        if (kind_[j] == Kind::artificial) phase1(j) = 1;
      }
      iterate(phase1);  // bounded below by zero, never unbounded
      Scalar infeasibility = 0;
      for (Index r = 0; r < rows_; ++r) {
        if (kind_[basis_[r]] == Kind::artificial) infeasibility += std::max<Scalar>(xb_(r), 0);
      }
      const Scalar scale = 1 + (b_.size() ? b_.cwiseAbs().maxCoeff() : Scalar(0));
      if (infeasibility > Scalar(opt_.feasibility_tol) * scale) {
        result.status = LPStatus::infeasible;
        result.iterations = iterations_;
        return result;
      }
      drive_out_artificials();
    }

    Vector phase2 = Vector::Zero(cols_);
    for (Index j = 0; j < lp_.variables(); ++j) {
      phase2(plus_col_[j]) = lp_.objective(j);
      if (minus_col_[j] >= 0) phase2(minus_col_[j]) = -lp_.objective(j);
    }
    if (!iterate(phase2)) {
      result.status = LPStatus::unbounded;
      result.objective = -std::numeric_limits<Scalar>::infinity();
      result.iterations = iterations_;
      return result;
    }
    refactor();
    finish(phase2, result);
    return result;
  }

 private:
  enum class Kind { structural, slack, artificial };

  const LinearProgram<Scalar>& lp_;
  SolverOptions opt_;

  Index rows_ = 0;
  Index cols_ = 0;
  Index eq_rows_ = 0;
  // Original indices of the independent equality rows kept in the standard form.
  std::vector<Index> kept_eq_;
  bool inconsistent_ = false;
  Sparse a_;
  Vector b_;
  Vector row_sign_;
  std::vector<Kind> kind_;
  std::vector<Index> plus_col_;
  std::vector<Index> minus_col_;
  std::vector<Index> slack_col_;
  Index artificial_count_ = 0;

  std::vector<Index> basis_;
  std::vector<Index> position_;
  Matrix binv_;
  Vector xb_;
  long iterations_ = 0;
  long since_refactor_ = 0;

  static bool finite_lower(Scalar v) { return v > -std::numeric_limits<Scalar>::infinity(); }

  // Drops equality rows that are linear combinations of others; flags the
  // program when a dropped row contradicts the kept ones.
  void select_equality_rows() {
    const Index m = lp_.eq_matrix.rows();
    kept_eq_.clear();
    if (m == 0) return;
    Eigen::ColPivHouseholderQR<Matrix> qr(lp_.eq_matrix.transpose());
    qr.setThreshold(Scalar(1e-10));
    const Index rank = qr.rank();
    for (Index k = 0; k < rank; ++k) kept_eq_.push_back(qr.colsPermutation().indices()(k));
    std::sort(kept_eq_.begin(), kept_eq_.end());
    if (rank == m) return;

    Matrix kept(rank, lp_.variables());
    Vector kept_rhs(rank);
    for (Index k = 0; k < rank; ++k) {
      kept.row(k) = lp_.eq_matrix.row(kept_eq_[k]);
      kept_rhs(k) = lp_.eq_rhs(kept_eq_[k]);
    }
    const Vector z = kept.completeOrthogonalDecomposition().solve(kept_rhs);
    const Scalar scale = 1 + lp_.eq_rhs.cwiseAbs().maxCoeff();
    inconsistent_ = (lp_.eq_matrix * z - lp_.eq_rhs).cwiseAbs().maxCoeff() > Scalar(opt_.feasibility_tol) * scale;
  }

  void build_standard_form() {
    lp_.check();
    const Index n = lp_.variables();
    select_equality_rows();
    eq_rows_ = static_cast<Index>(kept_eq_.size());
    const Index ineq_rows = lp_.ineq_matrix.rows();
    rows_ = eq_rows_ + ineq_rows;

    plus_col_.assign(n, -1);
    minus_col_.assign(n, -1);
    Index next = 0;
    for (Index j = 0; j < n; ++j) {
      plus_col_[j] = next++;
      kind_.push_back(Kind::structural);
      if (!finite_lower(lp_.lower(j))) {
        minus_col_[j] = next++;
        kind_.push_back(Kind::structural);
      }
    }
    slack_col_.assign(ineq_rows, -1);
    for (Index i = 0; i < ineq_rows; ++i) {
      slack_col_[i] = next++;
      kind_.push_back(Kind::slack);
    }

    // Shift finite lower bounds into the right-hand side.
    Vector shift = Vector::Zero(n);
    for (Index j = 0; j < n; ++j) {
      if (finite_lower(lp_.lower(j))) shift(j) = lp_.lower(j);
    }
    b_.resize(rows_);
    if (eq_rows_ > 0) {
      const Vector full = lp_.eq_rhs - lp_.eq_matrix * shift;
      for (Index k = 0; k < eq_rows_; ++k) b_(k) = full(kept_eq_[k]);
    }
    if (ineq_rows > 0) b_.tail(ineq_rows) = lp_.ineq_rhs - lp_.ineq_matrix * shift;
    row_sign_ = Vector::Ones(rows_);
    for (Index i = 0; i < rows_; ++i) {
      if (b_(i) < 0) {
        row_sign_(i) = -1;
        b_(i) = -b_(i);
      }
    }

    // Rows without a usable slack get an artificial column.
    std::vector<Index> artificial_row;
    for (Index i = 0; i < rows_; ++i) {
      const bool has_slack = i >= eq_rows_ && row_sign_(i) > 0;
      if (!has_slack) artificial_row.push_back(i);
    }
    artificial_count_ = static_cast<Index>(artificial_row.size());
    const Index artificial_start = next;
    cols_ = next + artificial_count_;
    kind_.resize(cols_, Kind::artificial);

    std::vector<Eigen::Triplet<Scalar, Index>> triplets;
    auto push = [&](Index row, Index col, Scalar value) {
      if (value != Scalar(0)) triplets.emplace_back(row, col, row_sign_(row) * value);
    };
    for (Index j = 0; j < n; ++j) {
      for (Index i = 0; i < eq_rows_; ++i) {
        const Scalar v = lp_.eq_matrix(kept_eq_[i], j);
        push(i, plus_col_[j], v);
        if (minus_col_[j] >= 0) push(i, minus_col_[j], -v);
      }
      for (Index i = 0; i < ineq_rows; ++i) {
        const Scalar v = lp_.ineq_matrix(i, j);
        push(eq_rows_ + i, plus_col_[j], v);
        if (minus_col_[j] >= 0) push(eq_rows_ + i, minus_col_[j], -v);
      }
    }
    for (Index i = 0; i < ineq_rows; ++i) push(eq_rows_ + i, slack_col_[i], 1);
    for (Index k = 0; k < artificial_count_; ++k) {
      triplets.emplace_back(artificial_row[k], artificial_start + k, Scalar(1));
    }
    a_.resize(rows_, cols_);
    a_.setFromTriplets(triplets.begin(), triplets.end());
    a_.makeCompressed();
  }

  void install_initial_basis() {
    basis_.assign(rows_, -1);
    position_.assign(cols_, -1);
    for (Index i = eq_rows_; i < rows_; ++i) {
      if (row_sign_(i) > 0) basis_[i] = slack_col_[i - eq_rows_];
    }
    for (Index j = 0; j < cols_; ++j) {
      if (kind_[j] != Kind::artificial) continue;
      for (typename Sparse::InnerIterator it(a_, j); it; ++it) basis_[it.row()] = j;
    }
    for (Index r = 0; r < rows_; ++r) position_[basis_[r]] = r;
    refactor();
  }

  void refactor() {
    Matrix basis_matrix = Matrix::Zero(rows_, rows_);
    for (Index r = 0; r < rows_; ++r) basis_matrix.col(r) = a_.col(basis_[r]);
    if (rows_ > 0) {
      binv_ = basis_matrix.partialPivLu().inverse();
    } else {
      binv_.resize(0, 0);
    }
    xb_ = binv_ * b_;
    since_refactor_ = 0;
    if (!binv_.allFinite() || !xb_.allFinite()) {
      throw SolverError("simplex basis became singular after " + std::to_string(iterations_) + " pivots");
    }
    const Scalar residual = rows_ ? (basis_matrix * xb_ - b_).cwiseAbs().maxCoeff() : Scalar(0);
    const Scalar scale = 1 + (b_.size() ? b_.cwiseAbs().maxCoeff() : Scalar(0));
    if (residual > Scalar(1e-6) * scale) {
      throw SolverError("simplex basis is ill-conditioned (residual " + std::to_string(double(residual)) +
                        ") after " + std::to_string(iterations_) + " pivots");
    }
  }

  Vector column(Index j) const {
    Vector w = Vector::Zero(rows_);
    for (typename Sparse::InnerIterator it(a_, j); it; ++it) w += it.value() * binv_.col(it.row());
    return w;
  }

  void pivot(Index r, Index entering, const Vector& w, Scalar theta) {
    xb_ -= theta * w;
    xb_(r) = theta;
    position_[basis_[r]] = -1;
    basis_[r] = entering;
    position_[entering] = r;

    const Eigen::Matrix<Scalar, 1, Eigen::Dynamic> pivot_row = binv_.row(r) / w(r);
    binv_.noalias() -= w * pivot_row;
    binv_.row(r) = pivot_row;

    ++iterations_;
    if (iterations_ > opt_.max_iterations) {
      throw SolverError("simplex iteration cap of " + std::to_string(opt_.max_iterations) + " reached");
    }
    if (++since_refactor_ >= opt_.refactor_every) refactor();
  }

  // Returns false when the objective is unbounded below.
  bool iterate(const Vector& cost) {
    const Scalar opt_tol = Scalar(opt_.optimality_tol);
    const Scalar piv_tol = Scalar(opt_.pivot_tol);
    const Scalar feas_tol = Scalar(opt_.feasibility_tol);
    int degenerate_run = 0;

    Vector cb(rows_);
    for (;;) {
      for (Index r = 0; r < rows_; ++r) cb(r) = cost(basis_[r]);
      const Vector y = binv_.transpose() * cb;
      const bool bland = degenerate_run >= opt_.bland_after;

      Index entering = -1;
      Scalar best = -opt_tol;
      for (Index j = 0; j < cols_; ++j) {
        if (position_[j] >= 0 || kind_[j] == Kind::artificial) continue;
        Scalar d = cost(j);
        for (typename Sparse::InnerIterator it(a_, j); it; ++it) d -= it.value() * y(it.row());
        if (bland) {
          if (d < -opt_tol) {
            entering = j;
            break;
          }
        } else if (d < best) {
          best = d;
          entering = j;
        }
      }
      if (entering < 0) return true;

      const Vector w = column(entering);
      const Scalar w_max = w.size() ? w.cwiseAbs().maxCoeff() : Scalar(0);
      const Scalar tol_w = piv_tol * std::max<Scalar>(1, w_max);
      Index leave = -1;
      Scalar theta = 0;
      // Basic artificials already at zero must stay there.
      for (Index r = 0; r < rows_ && leave < 0; ++r) {
        if (kind_[basis_[r]] == Kind::artificial && xb_(r) <= feas_tol && std::abs(w(r)) > tol_w) {
          leave = r;
          theta = 0;
        }
      }
      if (leave < 0 && bland) {
        // Lowest basic index among the minimum ratios, ignoring small pivots.
        const Scalar bland_tol = std::max<Scalar>(tol_w, Scalar(1e-7) * w_max);
        Scalar ratio = std::numeric_limits<Scalar>::infinity();
        for (Index r = 0; r < rows_; ++r) {
          if (w(r) <= bland_tol) continue;
          const Scalar t = std::max<Scalar>(xb_(r), 0) / w(r);
          if (t < ratio || (t == ratio && basis_[r] < basis_[leave])) {
            ratio = t;
            leave = r;
          }
        }
        theta = ratio;
      } else if (leave < 0) {
        // Harris two-pass ratio test.
        Scalar bound = std::numeric_limits<Scalar>::infinity();
        for (Index r = 0; r < rows_; ++r) {
          if (w(r) > tol_w) bound = std::min(bound, (std::max<Scalar>(xb_(r), 0) + feas_tol) / w(r));
        }
        if (bound < std::numeric_limits<Scalar>::infinity()) {
          for (Index r = 0; r < rows_; ++r) {
            if (w(r) <= tol_w) continue;
            if (std::max<Scalar>(xb_(r), 0) / w(r) > bound) continue;
            if (leave < 0 || w(r) > w(leave) || (w(r) == w(leave) && basis_[r] < basis_[leave])) leave = r;
          }
          theta = std::max<Scalar>(xb_(leave), 0) / w(leave);
        }
      }
      if (leave < 0) return false;

      degenerate_run = theta <= Scalar(1e-12) ? degenerate_run + 1 : 0;
      pivot(leave, entering, w, theta);
    }
  }

  void drive_out_artificials() {
    const Scalar piv_tol = Scalar(1e-7);
    for (Index r = 0; r < rows_; ++r) {
      if (kind_[basis_[r]] != Kind::artificial) continue;
      Index best = -1;
      Scalar best_value = piv_tol;
      for (Index j = 0; j < cols_; ++j) {
        if (position_[j] >= 0 || kind_[j] == Kind::artificial) continue;
        Scalar rho = 0;
        for (typename Sparse::InnerIterator it(a_, j); it; ++it) rho += it.value() * binv_(r, it.row());
        if (std::abs(rho) > best_value) {
          best_value = std::abs(rho);
          best = j;
        }
      }
      if (best < 0) continue;  // redundant row: the artificial stays basic at zero
      const Vector w = column(best);
      pivot(r, best, w, 0);
    }
    refactor();
  }

  void finish(const Vector& cost, LPSolution<Scalar>& result) {
    const Scalar feas_tol = Scalar(opt_.feasibility_tol);
    Vector x = Vector::Zero(cols_);
    for (Index r = 0; r < rows_; ++r) {
      Scalar v = xb_(r);
      if (v < 0 && v > -feas_tol) v = 0;
      x(basis_[r]) = v;
    }
    Vector cb(rows_);
    for (Index r = 0; r < rows_; ++r) cb(r) = cost(basis_[r]);
    const Vector y_std = binv_.transpose() * cb;
    const Vector y = row_sign_.cwiseProduct(y_std);

    const Index n = lp_.variables();
    result.primal.resize(n);
    for (Index j = 0; j < n; ++j) {
      Scalar z = x(plus_col_[j]);
      if (minus_col_[j] >= 0) {
        z -= x(minus_col_[j]);
      } else {
        z += lp_.lower(j);
      }
      result.primal(j) = z;
    }
    result.eq_duals = Vector::Zero(lp_.eq_matrix.rows());
    for (Index k = 0; k < eq_rows_; ++k) result.eq_duals(kept_eq_[k]) = y(k);
    result.ineq_duals = y.tail(rows_ - eq_rows_);
    result.reduced_costs = lp_.objective;
    if (lp_.eq_matrix.rows() > 0) result.reduced_costs -= lp_.eq_matrix.transpose() * result.eq_duals;
    if (rows_ > eq_rows_) result.reduced_costs -= lp_.ineq_matrix.transpose() * result.ineq_duals;

    result.status = LPStatus::optimal;
    result.iterations = iterations_;
    result.objective = lp_.objective.dot(result.primal);

    Scalar dual = 0;
    if (lp_.eq_matrix.rows() > 0) dual += lp_.eq_rhs.dot(result.eq_duals);
    if (rows_ > eq_rows_) dual += lp_.ineq_rhs.dot(result.ineq_duals);
    for (Index j = 0; j < n; ++j) {
      if (finite_lower(lp_.lower(j))) dual += lp_.lower(j) * result.reduced_costs(j);
    }
    result.dual_objective = dual;

    Scalar primal_res = 0;
    Scalar comp = 0;
    if (lp_.eq_matrix.rows() > 0) {
      primal_res = std::max(primal_res, (lp_.eq_matrix * result.primal - lp_.eq_rhs).cwiseAbs().maxCoeff());
    }
    if (rows_ > eq_rows_) {
      const Vector slack = lp_.ineq_rhs - lp_.ineq_matrix * result.primal;
      primal_res = std::max(primal_res, std::max<Scalar>(0, -slack.minCoeff()));
      comp = std::max(comp, result.ineq_duals.cwiseProduct(slack).cwiseAbs().maxCoeff());
    }
    for (Index j = 0; j < n; ++j) {
      if (!finite_lower(lp_.lower(j))) continue;
      const Scalar gap = result.primal(j) - lp_.lower(j);
      primal_res = std::max(primal_res, std::max<Scalar>(0, -gap));
      comp = std::max(comp, std::abs(result.reduced_costs(j) * gap));
    }
    result.primal_residual = primal_res;
    result.complementarity = comp;
    result.duality_gap = std::abs(result.objective - dual) / std::max<Scalar>(1, std::abs(result.objective));
  }
};

}  // namespace bellnl::detail
