#pragma once

#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "radau/factor.hpp"
#include "radau/fem.hpp"
#include "radau/tableau.hpp"

namespace radau {

/// The transformed stage system (A^{-1} (x) M + tau I (x) K) k = rhs of a
/// Radau IIA step for M u' + K u = f. Stage vectors are stored block-wise:
/// entries [i*n, (i+1)*n) hold stage i.
class StageSystem {
 public:
  StageSystem(ButcherTableau tableau, std::shared_ptr<const GridOperators> ops, double tau);
  StageSystem(int q, std::shared_ptr<const GridOperators> ops, double tau);

  int q() const { return fact_->q; }
  int n() const { return ops_->n; }
  Eigen::Index size() const { return static_cast<Eigen::Index>(q()) * n(); }
  double tau() const { return tau_; }

  const ButcherTableau& tableau() const { return *tableau_; }
  const TriangularFactorization& factorization() const { return *fact_; }
  const GridOperators& operators() const { return *ops_; }
  std::shared_ptr<const GridOperators> operators_ptr() const { return ops_; }

  /// The temporal coupling matrix of the operator: A^{-1}, or L when the
  /// strictly upper part has been dropped.
  const Eigen::MatrixXd& coupling() const { return uhat_zeroed_ ? fact_->L : fact_->Ainv; }
  /// Uhat of the operator actually represented (zero for lower_only()).
  Eigen::MatrixXd effective_uhat() const;
  bool uhat_zeroed() const { return uhat_zeroed_; }

  /// Same system with Uhat = 0, so that the operator equals its preconditioner.
  StageSystem lower_only() const;
  StageSystem with_tau(double tau) const;

 private:
  StageSystem(std::shared_ptr<const ButcherTableau> tableau,
              std::shared_ptr<const TriangularFactorization> fact,
              std::shared_ptr<const GridOperators> ops, double tau, bool uhat_zeroed);

  std::shared_ptr<const ButcherTableau> tableau_;
  std::shared_ptr<const TriangularFactorization> fact_;
  std::shared_ptr<const GridOperators> ops_;
  double tau_;
  bool uhat_zeroed_ = false;
};

/// (coupling (x) M + tau I (x) K) x, matrix-free via vec(M X C^T) + tau vec(K X).
Eigen::VectorXd stage_apply(const StageSystem& sys, const Eigen::VectorXd& x);

/// (A^{-1} (x) I) gbar - (A^{-1} (x) K)(e (x) u0), e the all-ones q-vector.
Eigen::VectorXd assemble_rhs(const StageSystem& sys, const Eigen::VectorXd& gbar,
                             const Eigen::VectorXd& u0);

enum class BlockSolverKind { automatic, direct_cholesky, cg_inner };

struct PreconditionerOptions {
  BlockSolverKind solver = BlockSolverKind::automatic;
  int direct_limit = 40000;  ///< automatic: direct Cholesky up to this n
  double cg_tolerance = 1e-12;
  int cg_max_iterations = 10000;
  bool parallel = false;  ///< run the q block solves on separate threads
};

/// P = L (x) M + tau I (x) K applied as (T (x) I)(Lambda (x) M + tau I (x) K)^{-1}(T^{-1} (x) I).
class PreconditionerState {
 public:
  explicit PreconditionerState(const StageSystem& sys, PreconditionerOptions opts = {});
  ~PreconditionerState();
  PreconditionerState(PreconditionerState&&) noexcept;
  PreconditionerState& operator=(PreconditionerState&&) noexcept;

  int q() const { return static_cast<int>(Lambda_.size()); }
  int n() const { return n_; }
  BlockSolverKind solver_kind() const { return kind_; }
  const Eigen::VectorXd& Lambda() const { return Lambda_; }
  const Eigen::MatrixXd& T() const { return T_; }
  const Eigen::MatrixXd& Tinv() const { return Tinv_; }

  /// Solve (lambda_i M + tau K) z = y for one block.
  Eigen::VectorXd solve_block(int i, const Eigen::VectorXd& y) const;

  class BlockSolver;

 private:
  Eigen::VectorXd Lambda_;
  Eigen::MatrixXd T_, Tinv_;
  int n_ = 0;
  BlockSolverKind kind_;
  bool parallel_ = false;
  std::vector<std::unique_ptr<BlockSolver>> blocks_;

  friend Eigen::VectorXd prec_apply(const PreconditionerState& p, const Eigen::VectorXd& r);
};

/// P^{-1} r; throws SolverError (block index, residual) on inner CG failure.
Eigen::VectorXd prec_apply(const PreconditionerState& p, const Eigen::VectorXd& r);

inline constexpr Eigen::Index kDenseOracleLimit = 5000;

/// Dense coupling (x) M + tau I (x) K; throws RangeError above kDenseOracleLimit.
Eigen::MatrixXd dense_stage_matrix(const StageSystem& sys);
/// Dense L (x) M + tau I (x) K; same size guard.
Eigen::MatrixXd dense_preconditioner_matrix(const StageSystem& sys);

Eigen::MatrixXd kronecker(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

}  // namespace radau
