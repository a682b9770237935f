#include "radau/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "radau/errors.hpp"
#include "radau/polynomial.hpp"

namespace radau {

namespace {

bool complex_less(const Complex& a, const Complex& b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

double branch_magnitude(double mu, const TriangularFactorization& fact) {
  double m = 0.0;
  for (const auto& z : branch_eigenvalues(mu, fact)) m = std::max(m, std::abs(z));
  return m;
}

}  // namespace

Eigen::MatrixXd reduced_block(double mu, const Eigen::MatrixXd& Linv, const Eigen::MatrixXd& Uhat) {
  if (!(mu >= 0.0)) throw DomainError("reduced_block: mu must be nonnegative");
  const Eigen::Index q = Linv.rows();
  const Eigen::MatrixXd W = Eigen::MatrixXd::Identity(q, q) + mu * Linv;
  for (Eigen::Index i = 0; i < q; ++i) {
    if (W(i, i) == 0.0) throw FactorizationError("I + mu L^{-1} is singular", static_cast<int>(i));
  }
  return W.triangularView<Eigen::Lower>().solve(Uhat);
}

Eigen::MatrixXd reduced_block(double mu, const TriangularFactorization& fact) {
  return reduced_block(mu, fact.Linv, fact.Uhat);
}

double f_q2(double mu) {
  if (!(mu > 0.0)) throw DomainError("f_q2: mu must be positive");
  return -1.0 / (4.0 / mu + 2.0 * mu / 3.0 + 11.0 / 3.0);
}

std::vector<Complex> branch_eigenvalues(double mu, const Eigen::MatrixXd& Linv,
                                        const Eigen::MatrixXd& Uhat) {
  const Eigen::Index q = Linv.rows();
  if (q < 2) return {};
  const Eigen::MatrixXd R = reduced_block(mu, Linv, Uhat);
  // First column of R vanishes, so its spectrum is {0} u spec(R[1:, 1:]).
  const auto poly = characteristic_polynomial(R.bottomRightCorner(q - 1, q - 1));
  auto roots = polynomial_roots(poly);
  std::sort(roots.begin(), roots.end(), complex_less);
  return roots;
}

std::vector<Complex> branch_eigenvalues(double mu, const TriangularFactorization& fact) {
  return branch_eigenvalues(mu, fact.Linv, fact.Uhat);
}

Eigen::VectorXd eigenvector_q2(double mu, const Eigen::VectorXd& v2) {
  if (!(mu > 0.0)) throw DomainError("eigenvector_q2: mu must be positive");
  if (v2.size() == 0 || v2.norm() == 0.0) throw DomainError("eigenvector_q2: v2 must be nonzero");
  const Eigen::Index n = v2.size();
  Eigen::VectorXd v(2 * n);
  v.head(n) = -(1.0 + 4.0 / mu) / 3.0 * v2;
  v.tail(n) = v2;
  return v;
}

Q3EigenvectorCoefficients q3_eigenvector_coefficients(double mu, int branch,
                                                      const TriangularFactorization& fact) {
  if (fact.q != 3) throw RangeError("q3_eigenvector_coefficients needs q = 3");
  if (!(mu > 0.0)) throw DomainError("eigenvector_q3: mu must be positive");
  if (branch < 0 || branch > 1) throw RangeError("q = 3 has branches 0 and 1");
  const auto& Li = fact.Linv;
  const double u23 = fact.Uhat(1, 2);
  const Complex lambda = branch_eigenvalues(mu, fact)[branch];
  const double d3 = 1.0 + Li(2, 2) * mu;
  const Complex l1 = -(u23 * Li(2, 1) * mu / d3 + lambda * (1.0 + Li(1, 1) * mu));
  const Complex l2 = u23 * Li(2, 0) * mu / d3 + lambda * Li(1, 0) * mu;
  const Complex alpha = l2 / l1;
  const Complex beta = -mu / d3 * (Li(2, 0) + Li(2, 1) * alpha);
  return {lambda, alpha, beta};
}

Eigen::VectorXcd eigenvector_q3(double mu, int branch, const Eigen::VectorXd& v1,
                                const TriangularFactorization& fact) {
  if (v1.size() == 0 || v1.norm() == 0.0) throw DomainError("eigenvector_q3: v1 must be nonzero");
  const auto c = q3_eigenvector_coefficients(mu, branch, fact);
  const Eigen::Index n = v1.size();
  Eigen::VectorXcd v(3 * n);
  v.head(n) = v1.cast<Complex>();
  v.segment(n, n) = c.alpha * v1.cast<Complex>();
  v.tail(n) = c.beta * v1.cast<Complex>();
  return v;
}

RadiusEstimate radius_estimate(const TriangularFactorization& fact, const RadiusGrid& grid) {
  if (fact.q < 2) return {};
  if (!(grid.mu_min > 0.0) || grid.mu_max < grid.mu_min || grid.points < 1) {
    throw DomainError("radius_estimate: invalid mu grid");
  }
  const double lo = std::log(grid.mu_min), hi = std::log(grid.mu_max);
  const int pts = grid.mu_max == grid.mu_min ? 1 : grid.points;
  auto at = [&](int k) { return pts == 1 ? lo : lo + (hi - lo) * k / (pts - 1); };

  RadiusEstimate best{-1.0, 0.0};
  int best_k = 0;
  for (int k = 0; k < pts; ++k) {
    const double mu = std::exp(at(k));
    const double m = branch_magnitude(mu, fact);
    if (m > best.radius) {
      best = {m, mu};
      best_k = k;
    }
  }
  if (pts < 3) return best;

  // Golden-section search for the maximum in log(mu) between the neighbours.
  double a = at(std::max(best_k - 1, 0)), b = at(std::min(best_k + 1, pts - 1));
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
  double f1 = branch_magnitude(std::exp(x1), fact), f2 = branch_magnitude(std::exp(x2), fact);
  for (int it = 0; it < 200 && b - a > 1e-12; ++it) {
    if (f1 > f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = branch_magnitude(std::exp(x1), fact);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = branch_magnitude(std::exp(x2), fact);
    }
  }
  const double x = (a + b) / 2.0;
  const double fx = branch_magnitude(std::exp(x), fact);
  if (fx > best.radius) best = {fx, std::exp(x)};
  return best;
}

RadiusEstimate radius_estimate(int q, const RadiusGrid& grid) {
  return radius_estimate(factorize(q), grid);
}

SpectralReport preconditioned_spectrum(const StageSystem& sys, SpectrumMode mode) {
  SpectralReport rep;
  rep.q = sys.q();
  rep.n = sys.n();
  rep.tau = sys.tau();
  rep.h = sys.operators().h;
  const auto total = static_cast<std::size_t>(sys.size());
  rep.eigenvalues.reserve(total);

  if (mode == SpectrumMode::structured) {
    const Eigen::VectorXd mus = zt_eigenvalues(sys.operators(), sys.tau());
    const Eigen::MatrixXd uhat = sys.effective_uhat();
    const auto& Linv = sys.factorization().Linv;
    for (Eigen::Index j = 0; j < mus.size(); ++j) {
      rep.eigenvalues.emplace_back(1.0, 0.0);
      rep.branch_index.push_back(0);
      rep.mu.push_back(mus[j]);
    }
    for (Eigen::Index j = 0; j < mus.size(); ++j) {
      const auto br = branch_eigenvalues(mus[j], Linv, uhat);
      for (std::size_t i = 0; i < br.size(); ++i) {
        rep.eigenvalues.push_back(1.0 + br[i]);
        rep.branch_index.push_back(static_cast<int>(i) + 1);
        rep.mu.push_back(mus[j]);
      }
    }
  } else {
    const Eigen::MatrixXd A = dense_stage_matrix(sys);
    const Eigen::MatrixXd P = dense_preconditioner_matrix(sys);
    const Eigen::MatrixXd PA = P.partialPivLu().solve(A);
    const Eigen::EigenSolver<Eigen::MatrixXd> es(PA, false);
    if (es.info() != Eigen::Success) throw FactorizationError("dense eigensolve failed");
    for (Eigen::Index j = 0; j < es.eigenvalues().size(); ++j) {
      rep.eigenvalues.push_back(es.eigenvalues()[j]);
      rep.branch_index.push_back(-1);
      rep.mu.push_back(std::numeric_limits<double>::quiet_NaN());
    }
  }
  for (const auto& z : rep.eigenvalues) rep.radius = std::max(rep.radius, std::abs(z - 1.0));
  return rep;
}

std::vector<CountRow> test1_counts(const SpectralReport& report, const std::vector<double>& eps) {
  std::vector<CountRow> rows;
  const double dim = static_cast<double>(report.eigenvalues.size());
  for (double e : eps) {
    if (!(e > 0.0)) throw DomainError("test1_counts: eps must be positive");
    const long count = std::count_if(report.eigenvalues.begin(), report.eigenvalues.end(),
                                     [e](const Complex& z) { return std::abs(z - 1.0) < e; });
    rows.push_back({e, count, dim > 0 ? count / dim : 0.0});
  }
  return rows;
}

double Test2Vectors::max_deviation() const {
  if (E1.size() != E2.size()) throw DimensionError("E1 and E2 differ in length");
  double m = 0.0;
  for (std::size_t k = 0; k < E1.size(); ++k) m = std::max(m, std::abs(E1[k] - E2[k]));
  return m;
}

std::vector<double> symbol_prediction(const StageSystem& sys) {
  const auto& ops = sys.operators();
  if (!(ops.h > 0.0)) throw DomainError("symbol prediction needs a mesh width");
  const int side = ops.dofs_per_side();
  const auto samples = sample_symbol(q1_ratio_symbol(sys.tau(), ops.h), side);
  const Eigen::MatrixXd uhat = sys.effective_uhat();
  const auto& Linv = sys.factorization().Linv;
  std::vector<double> e2(static_cast<std::size_t>(ops.n), 1.0);
  for (double s : samples) {
    for (const auto& z : branch_eigenvalues(s, Linv, uhat)) e2.push_back(std::abs(1.0 + z));
  }
  std::sort(e2.begin(), e2.end());
  return e2;
}

Test2Vectors test2_vectors(const StageSystem& sys) {
  Test2Vectors out;
  const auto rep = preconditioned_spectrum(sys, SpectrumMode::structured);
  out.E1.reserve(rep.eigenvalues.size());
  for (const auto& z : rep.eigenvalues) out.E1.push_back(std::abs(z));
  std::sort(out.E1.begin(), out.E1.end());
  out.E2 = symbol_prediction(sys);
  return out;
}

DistributionSummary distribution_check(int q, const std::vector<int>& n_sides, const TauRule& rule,
                                       BoundaryMode bc, double eps) {
  DistributionSummary sum;
  sum.rule = rule;
  sum.eps = eps;
  const auto tab = radau_tableau(q);
  for (int n_side : n_sides) {
    auto ops = std::make_shared<const GridOperators>(assemble_q1(n_side, bc));
    const double tau = rule.resolve(q, ops->h);
    const StageSystem sys(tab, ops, tau);
    const auto rep = preconditioned_spectrum(sys, SpectrumMode::structured);
    const auto row = test1_counts(rep, {eps}).front();

    std::vector<double> e1;
    for (const auto& z : rep.eigenvalues) e1.push_back(std::abs(z));
    std::sort(e1.begin(), e1.end());
    const Test2Vectors t2{std::move(e1), symbol_prediction(sys)};

    sum.rows.push_back({n_side, ops->h, tau, static_cast<long>(sys.size()), row.count, row.ratio,
                        t2.max_deviation()});
  }
  for (std::size_t k = 1; k < sum.rows.size(); ++k) {
    if (sum.rows[k].ratio < sum.rows[k - 1].ratio) sum.ratio_nondecreasing = false;
    if (!(sum.rows[k].max_deviation < sum.rows[k - 1].max_deviation)) {
      sum.deviation_decreasing = false;
    }
  }
  return sum;
}

}  // namespace radau
