#include "radau/kron.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <exception>
#include <string>
#include <thread>

#include "radau/errors.hpp"

namespace radau {

namespace {

void check_length(const StageSystem& sys, const Eigen::VectorXd& x, const char* what) {
  if (x.size() != sys.size()) {
    throw DimensionError(std::string(what) + ": expected length " + std::to_string(sys.size()) +
                         ", got " + std::to_string(x.size()));
  }
}

Eigen::Map<const Eigen::MatrixXd> as_blocks(const Eigen::VectorXd& x, Eigen::Index n) {
  return {x.data(), n, x.size() / n};
}

}  // namespace

StageSystem::StageSystem(ButcherTableau tableau, std::shared_ptr<const GridOperators> ops,
                         double tau)
    : tableau_(std::make_shared<const ButcherTableau>(std::move(tableau))),
      ops_(std::move(ops)),
      tau_(tau) {
  if (!ops_) throw DimensionError("StageSystem needs spatial operators");
  if (!(tau_ > 0.0)) throw DomainError("time step tau must be positive");
  fact_ = std::make_shared<const TriangularFactorization>(factorize(*tableau_));
}

StageSystem::StageSystem(int q, std::shared_ptr<const GridOperators> ops, double tau)
    : StageSystem(radau_tableau(q), std::move(ops), tau) {}

StageSystem::StageSystem(std::shared_ptr<const ButcherTableau> tableau,
                         std::shared_ptr<const TriangularFactorization> fact,
                         std::shared_ptr<const GridOperators> ops, double tau, bool uhat_zeroed)
    : tableau_(std::move(tableau)),
      fact_(std::move(fact)),
      ops_(std::move(ops)),
      tau_(tau),
      uhat_zeroed_(uhat_zeroed) {
  if (!(tau_ > 0.0)) throw DomainError("time step tau must be positive");
}

Eigen::MatrixXd StageSystem::effective_uhat() const {
  if (uhat_zeroed_) return Eigen::MatrixXd::Zero(q(), q());
  return fact_->Uhat;
}

StageSystem StageSystem::lower_only() const {
  return StageSystem(tableau_, fact_, ops_, tau_, true);
}

StageSystem StageSystem::with_tau(double tau) const {
  return StageSystem(tableau_, fact_, ops_, tau, uhat_zeroed_);
}

Eigen::VectorXd stage_apply(const StageSystem& sys, const Eigen::VectorXd& x) {
  check_length(sys, x, "stage_apply");
  const auto& ops = sys.operators();
  const auto X = as_blocks(x, sys.n());
  Eigen::MatrixXd Y = (ops.M * X) * sys.coupling().transpose();
  Y.noalias() += sys.tau() * (ops.K * X);
  return Eigen::Map<const Eigen::VectorXd>(Y.data(), Y.size());
}

Eigen::VectorXd assemble_rhs(const StageSystem& sys, const Eigen::VectorXd& gbar,
                             const Eigen::VectorXd& u0) {
  check_length(sys, gbar, "assemble_rhs");
  if (u0.size() != sys.n()) throw DimensionError("assemble_rhs: u0 has wrong length");
  const Eigen::VectorXd Ku0 = sys.operators().K * u0;
  Eigen::MatrixXd G = as_blocks(gbar, sys.n());
  G.colwise() -= Ku0;
  const Eigen::MatrixXd R = G * sys.coupling().transpose();
  return Eigen::Map<const Eigen::VectorXd>(R.data(), R.size());
}

class PreconditionerState::BlockSolver {
 public:
  virtual ~BlockSolver() = default;
  virtual Eigen::VectorXd solve(const Eigen::VectorXd& y, int index) const = 0;
};

namespace {

class CholeskyBlock final : public PreconditionerState::BlockSolver {
 public:
  explicit CholeskyBlock(const SparseMatrix& B, int index) {
    llt_.compute(B);
    if (llt_.info() != Eigen::Success) {
      throw DefinitenessError("block " + std::to_string(index) +
                              " of the preconditioner is not positive definite");
    }
  }
  Eigen::VectorXd solve(const Eigen::VectorXd& y, int) const override { return llt_.solve(y); }

 private:
  Eigen::SimplicialLLT<SparseMatrix> llt_;
};

class CgBlock final : public PreconditionerState::BlockSolver {
 public:
  CgBlock(const SparseMatrix& B, double tol, int max_iter) : B_(B) {
    cg_.setTolerance(tol);
    cg_.setMaxIterations(max_iter);
    cg_.compute(B_);
  }
  Eigen::VectorXd solve(const Eigen::VectorXd& y, int index) const override {
    Eigen::VectorXd z = cg_.solve(y);
    if (cg_.info() != Eigen::Success) {
      throw SolverError("inner CG did not converge in block " + std::to_string(index), index,
                        cg_.error());
    }
    return z;
  }

 private:
  SparseMatrix B_;
  Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper> cg_;
};

}  // namespace

PreconditionerState::PreconditionerState(const StageSystem& sys, PreconditionerOptions opts)
    : Lambda_(sys.factorization().Lambda),
      T_(sys.factorization().T),
      Tinv_(sys.factorization().Tinv),
      n_(sys.n()),
      kind_(opts.solver),
      parallel_(opts.parallel) {
  if (kind_ == BlockSolverKind::automatic) {
    kind_ = n_ <= opts.direct_limit ? BlockSolverKind::direct_cholesky : BlockSolverKind::cg_inner;
  }
  const auto& ops = sys.operators();
  for (int i = 0; i < q(); ++i) {
    if (!(Lambda_[i] > 0.0)) {
      throw DefinitenessError("nonpositive diagonal entry of L at index " + std::to_string(i));
    }
    const SparseMatrix B = Lambda_[i] * ops.M + sys.tau() * ops.K;
    if (kind_ == BlockSolverKind::direct_cholesky) {
      blocks_.push_back(std::make_unique<CholeskyBlock>(B, i));
    } else {
      blocks_.push_back(
          std::make_unique<CgBlock>(B, opts.cg_tolerance, opts.cg_max_iterations));
    }
  }
}

PreconditionerState::~PreconditionerState() = default;
PreconditionerState::PreconditionerState(PreconditionerState&&) noexcept = default;
PreconditionerState& PreconditionerState::operator=(PreconditionerState&&) noexcept = default;

Eigen::VectorXd PreconditionerState::solve_block(int i, const Eigen::VectorXd& y) const {
  if (i < 0 || i >= q()) throw RangeError("block index out of range");
  if (y.size() != n_) throw DimensionError("solve_block: wrong vector length");
  return blocks_[i]->solve(y, i);
}

Eigen::VectorXd prec_apply(const PreconditionerState& p, const Eigen::VectorXd& r) {
  const Eigen::Index n = p.n();
  const int q = p.q();
  if (r.size() != n * q) throw DimensionError("prec_apply: wrong vector length");
  const Eigen::MatrixXd Y = as_blocks(r, n) * p.Tinv_.transpose();
  Eigen::MatrixXd Z(n, q);

  if (p.parallel_ && q > 1) {
    std::vector<std::exception_ptr> errors(q);
    {
      std::vector<std::jthread> workers;
      workers.reserve(q);
      for (int i = 0; i < q; ++i) {
        workers.emplace_back([&, i] {
          try {
            Z.col(i) = p.blocks_[i]->solve(Y.col(i), i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        });
      }
    }
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  } else {
    for (int i = 0; i < q; ++i) Z.col(i) = p.blocks_[i]->solve(Y.col(i), i);
  }

  const Eigen::MatrixXd X = Z * p.T_.transpose();
  return Eigen::Map<const Eigen::VectorXd>(X.data(), X.size());
}

Eigen::MatrixXd kronecker(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

namespace {

Eigen::MatrixXd dense_kron_operator(const StageSystem& sys, const Eigen::MatrixXd& coupling) {
  if (sys.size() > kDenseOracleLimit) {
    throw RangeError("dense oracle limited to qn <= " + std::to_string(kDenseOracleLimit));
  }
  const Eigen::MatrixXd M(sys.operators().M);
  const Eigen::MatrixXd K(sys.operators().K);
  return kronecker(coupling, M) +
         sys.tau() * kronecker(Eigen::MatrixXd::Identity(sys.q(), sys.q()), K);
}

}  // namespace

Eigen::MatrixXd dense_stage_matrix(const StageSystem& sys) {
  return dense_kron_operator(sys, sys.coupling());
}

Eigen::MatrixXd dense_preconditioner_matrix(const StageSystem& sys) {
  return dense_kron_operator(sys, sys.factorization().L);
}

}  // namespace radau
