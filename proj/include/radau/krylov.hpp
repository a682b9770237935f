#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "radau/kron.hpp"

namespace radau {

using LinearOperator = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

struct SolveReport {
  int iterations = 0;
  std::vector<double> residual_history;  ///< relative residual norms, starting at 1
  bool converged = false;
  Eigen::VectorXd solution;
};

struct GmresOptions {
  double tol = 1e-10;
  int max_iter = 200;
  int restart = 200;  ///< Krylov dimension per cycle
};

/// Right-preconditioned GMRES on A P^{-1} with zero initial guess, modified
/// Gram-Schmidt and a second orthogonalization pass when the first leaves
/// inner products above 1e-8. Convergence is declared on the true relative
/// residual ||b - A x|| / ||b||. Never throws on non-convergence.
SolveReport gmres(const LinearOperator& A, const LinearOperator& Pinv, const Eigen::VectorXd& rhs,
                  const GmresOptions& opts = {});

SolveReport gmres(const StageSystem& sys, const PreconditionerState& p, const Eigen::VectorXd& rhs,
                  const GmresOptions& opts = {});

/// Forcing term f(t) of M u' + K u = f; an empty function means f = 0.
using Forcing = std::function<Eigen::VectorXd(double)>;

struct StepResult {
  Eigen::VectorXd state;
  SolveReport report;
};

/// One Radau IIA step of length sys.tau() from (t_n, u_n): solves the
/// transformed stage system and returns u_n + tau sum_i b_i k_i.
/// Throws SolverError if GMRES does not converge.
StepResult irk_step(const StageSystem& sys, const PreconditionerState& p,
                    const Eigen::VectorXd& u_n, const Forcing& f, double t_n,
                    const GmresOptions& opts = {1e-12, 200, 200});
StepResult irk_step(const StageSystem& sys, const Eigen::VectorXd& u_n, const Forcing& f,
                    double t_n, const GmresOptions& opts = {1e-12, 200, 200});

struct IntegrationResult {
  Eigen::VectorXd state;
  std::vector<SolveReport> reports;
};

/// `steps` fixed steps of size (t_end - t0)/steps; the step size of `sys` is
/// replaced. Step failures are rethrown as SolverError naming the step.
IntegrationResult integrate(const StageSystem& sys, const Eigen::VectorXd& u0, double t0,
                            double t_end, int steps, const Forcing& f = {},
                            const GmresOptions& opts = {1e-12, 200, 200});

}  // namespace radau
