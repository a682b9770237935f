#include "radau/krylov.hpp"

#include <cmath>
#include <string>

#include "radau/errors.hpp"

namespace radau {

namespace {

struct Givens {
  double c = 1.0, s = 0.0;
};

Givens make_givens(double a, double b) {
  if (b == 0.0) return {1.0, 0.0};
  const double r = std::hypot(a, b);
  return {a / r, b / r};
}

}  // namespace

SolveReport gmres(const LinearOperator& A, const LinearOperator& Pinv, const Eigen::VectorXd& rhs,
                  const GmresOptions& opts) {
  if (!(opts.tol > 0.0 && opts.tol < 1.0)) throw DomainError("gmres: tol must lie in (0, 1)");
  const Eigen::Index N = rhs.size();
  SolveReport report;
  report.solution = Eigen::VectorXd::Zero(N);
  const double bnorm = rhs.norm();
  report.residual_history.push_back(1.0);
  if (bnorm == 0.0) {
    report.converged = true;
    return report;
  }
  const int m = std::max(1, opts.restart);

  Eigen::VectorXd r = rhs;
  double beta = bnorm;
  while (report.iterations < opts.max_iter) {
    Eigen::MatrixXd V(N, m + 1), Z(N, m);
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(m + 1, m);
    Eigen::VectorXd g = Eigen::VectorXd::Zero(m + 1);
    std::vector<Givens> rot(m);
    V.col(0) = r / beta;
    g[0] = beta;

    int k = 0;
    bool small_residual = false;
    for (; k < m && report.iterations < opts.max_iter; ++k) {
      Z.col(k) = Pinv(V.col(k));
      Eigen::VectorXd w = A(Z.col(k));
      for (int i = 0; i <= k; ++i) {
        const double hik = V.col(i).dot(w);
        H(i, k) = hik;
        w.noalias() -= hik * V.col(i);
      }
      double wnorm = w.norm();
      if (wnorm > 0.0) {
        const double drift = (V.leftCols(k + 1).transpose() * w).cwiseAbs().maxCoeff();
        if (drift > 1e-8 * wnorm) {
          for (int i = 0; i <= k; ++i) {
            const double corr = V.col(i).dot(w);
            H(i, k) += corr;
            w.noalias() -= corr * V.col(i);
          }
          wnorm = w.norm();
        }
      }
      H(k + 1, k) = wnorm;
      if (wnorm > 0.0) V.col(k + 1) = w / wnorm;

      for (int i = 0; i < k; ++i) {
        const double a = H(i, k), b = H(i + 1, k);
        H(i, k) = rot[i].c * a + rot[i].s * b;
        H(i + 1, k) = -rot[i].s * a + rot[i].c * b;
      }
      rot[k] = make_givens(H(k, k), H(k + 1, k));
      H(k, k) = rot[k].c * H(k, k) + rot[k].s * H(k + 1, k);
      H(k + 1, k) = 0.0;
      g[k + 1] = -rot[k].s * g[k];
      g[k] = rot[k].c * g[k];

      ++report.iterations;
      const double rel = std::abs(g[k + 1]) / bnorm;
      report.residual_history.push_back(rel);
      if (rel <= opts.tol || wnorm == 0.0) {
        small_residual = true;
        ++k;
        break;
      }
    }

    const Eigen::VectorXd y =
        H.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(g.head(k));
    report.solution.noalias() += Z.leftCols(k) * y;
    r = rhs - A(report.solution);
    beta = r.norm();
    if (beta / bnorm <= opts.tol) {
      report.converged = true;
      report.residual_history.back() = beta / bnorm;
      break;
    }
    if (!small_residual && k == 0) break;
  }
  return report;
}

SolveReport gmres(const StageSystem& sys, const PreconditionerState& p, const Eigen::VectorXd& rhs,
                  const GmresOptions& opts) {
  if (rhs.size() != sys.size()) throw DimensionError("gmres: rhs has wrong length");
  return gmres([&](const Eigen::VectorXd& x) { return stage_apply(sys, x); },
               [&](const Eigen::VectorXd& x) { return prec_apply(p, x); }, rhs, opts);
}

StepResult irk_step(const StageSystem& sys, const PreconditionerState& p,
                    const Eigen::VectorXd& u_n, const Forcing& f, double t_n,
                    const GmresOptions& opts) {
  const int q = sys.q();
  const Eigen::Index n = sys.n();
  if (u_n.size() != n) throw DimensionError("irk_step: state has wrong length");
  const auto& tab = sys.tableau();
  const double tau = sys.tau();

  Eigen::VectorXd gbar = Eigen::VectorXd::Zero(q * n);
  if (f) {
    for (int i = 0; i < q; ++i) {
      const Eigen::VectorXd fi = f(t_n + tab.c[i] * tau);
      if (fi.size() != n) throw DimensionError("irk_step: forcing has wrong length");
      gbar.segment(i * n, n) = fi;
    }
  }
  const Eigen::VectorXd rhs = assemble_rhs(sys, gbar, u_n);

  StepResult out;
  out.report = gmres(sys, p, rhs, opts);
  if (!out.report.converged) {
    throw SolverError("stage system did not converge", -1,
                      out.report.residual_history.back());
  }
  const Eigen::Map<const Eigen::MatrixXd> stages(out.report.solution.data(), n, q);
  out.state = u_n + tau * (stages * tab.b);
  return out;
}

StepResult irk_step(const StageSystem& sys, const Eigen::VectorXd& u_n, const Forcing& f,
                    double t_n, const GmresOptions& opts) {
  const PreconditionerState p(sys);
  return irk_step(sys, p, u_n, f, t_n, opts);
}

IntegrationResult integrate(const StageSystem& sys, const Eigen::VectorXd& u0, double t0,
                            double t_end, int steps, const Forcing& f, const GmresOptions& opts) {
  if (steps < 1) throw RangeError("integrate: steps must be >= 1");
  const double tau = (t_end - t0) / steps;
  const StageSystem stepper = sys.with_tau(tau);
  const PreconditionerState p(stepper);
  IntegrationResult out;
  out.state = u0;
  out.reports.reserve(steps);
  for (int s = 0; s < steps; ++s) {
    try {
      auto step = irk_step(stepper, p, out.state, f, t0 + s * tau, opts);
      out.state = std::move(step.state);
      out.reports.push_back(std::move(step.report));
    } catch (const SolverError& e) {
      throw SolverError("step " + std::to_string(s) + ": " + e.what(), s, e.residual());
    }
  }
  return out;
}

}  // namespace radau
