#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "radau/factor.hpp"
#include "radau/fem.hpp"
#include "radau/kron.hpp"
#include "radau/tau_rule.hpp"

namespace radau {

using Complex = std::complex<double>;

// ---------------------------------------------------------------------------
// Per-mu reduction. On the eigenspace of Z = tau M^{-1} K belonging to mu,
// the remainder W1^{-1} W2 of P^{-1} A = I + W1^{-1} W2 acts as the q x q
// matrix R(mu) = (I + mu L^{-1})^{-1} Uhat.
// ---------------------------------------------------------------------------

/// R(mu); throws DomainError for mu < 0.
Eigen::MatrixXd reduced_block(double mu, const TriangularFactorization& fact);
Eigen::MatrixXd reduced_block(double mu, const Eigen::MatrixXd& Linv, const Eigen::MatrixXd& Uhat);

/// Nonzero eigenvalue of R(mu) for q = 2: -(4/mu + 2mu/3 + 11/3)^{-1}.
double f_q2(double mu);

/// The q-1 branch values lambda_i(mu): roots of the characteristic polynomial
/// of R(mu) with the structural zero root removed (R has a zero first column).
/// Sorted by real part, then imaginary part.
std::vector<Complex> branch_eigenvalues(double mu, const TriangularFactorization& fact);
std::vector<Complex> branch_eigenvalues(double mu, const Eigen::MatrixXd& Linv,
                                        const Eigen::MatrixXd& Uhat);

/// Eigenvector of P^{-1} A for q = 2 and eigenvalue 1 + f_q2(mu), given an
/// eigenvector v2 of Z for mu: [-(1/3)(1 + 4/mu) v2; v2].
Eigen::VectorXd eigenvector_q2(double mu, const Eigen::VectorXd& v2);

struct Q3EigenvectorCoefficients {
  Complex lambda;  ///< branch value, eigenvalue of P^{-1} A is 1 + lambda
  Complex alpha;
  Complex beta;
};

/// alpha = l2/l1 and beta = -mu (1 + l33 mu)^{-1} (l31 + l32 alpha) for the
/// given branch (0 or 1) at mu, q = 3.
Q3EigenvectorCoefficients q3_eigenvector_coefficients(double mu, int branch,
                                                      const TriangularFactorization& fact);

/// [v1; alpha v1; beta v1] for an eigenvector v1 of Z with eigenvalue mu.
Eigen::VectorXcd eigenvector_q3(double mu, int branch, const Eigen::VectorXd& v1,
                                const TriangularFactorization& fact);

struct RadiusGrid {
  double mu_min = 1e-8;
  double mu_max = 1e8;
  int points = 2000;
};

struct RadiusEstimate {
  double radius = 0.0;
  double argmax_mu = 0.0;
};

/// sup_mu max_i |lambda_i(mu)| over a log-uniform grid, refined by golden
/// section around the best grid point.
RadiusEstimate radius_estimate(const TriangularFactorization& fact, const RadiusGrid& grid = {});
RadiusEstimate radius_estimate(int q, const RadiusGrid& grid = {});

// ---------------------------------------------------------------------------
// Spectrum of the preconditioned stage operator.
// ---------------------------------------------------------------------------

enum class SpectrumMode { structured, dense_oracle };

struct CountRow {
  double eps = 0.0;
  long count = 0;     ///< N(eps, h)
  double ratio = 0.0; ///< N / (q n)
};

struct SpectralReport {
  int q = 0;
  int n = 0;
  double tau = 0.0;
  double h = 0.0;
  std::vector<Complex> eigenvalues;  ///< q n values of P^{-1} A
  std::vector<int> branch_index;     ///< 0 for the unit family, i >= 1 for branch i, -1 unknown
  std::vector<double> mu;            ///< generating eigenvalue of Z, NaN when unknown
  double radius = 0.0;               ///< max |lambda - 1|
  std::vector<CountRow> counts;
  std::vector<double> E1, E2;
};

/// Structured: {1 (n times)} u {1 + lambda_i(mu_j)}. Dense oracle: assembles
/// P^{-1} A and runs a nonsymmetric eigensolver (qn <= kDenseOracleLimit).
SpectralReport preconditioned_spectrum(const StageSystem& sys,
                                       SpectrumMode mode = SpectrumMode::structured);

/// N(eps) = #{j : |lambda_j - 1| < eps} and N/(qn) for every eps.
std::vector<CountRow> test1_counts(const SpectralReport& report, const std::vector<double>& eps);

struct Test2Vectors {
  std::vector<double> E1;  ///< sorted |eigenvalues of P^{-1} A|
  std::vector<double> E2;  ///< sorted symbol prediction
  double max_deviation() const;
};

/// Symbol prediction: n ones plus |1 + lambda_l(s(theta_i, theta_k))| with
/// s = tau g_stiffness / g_mass sampled on the dofs_per_side^2 grid.
std::vector<double> symbol_prediction(const StageSystem& sys);
Test2Vectors test2_vectors(const StageSystem& sys);

struct DistributionRow {
  int n_side = 0;
  double h = 0.0;
  double tau = 0.0;
  long dim = 0;
  long count = 0;        ///< N(eps, h)
  double ratio = 0.0;    ///< r(eps, h)
  double max_deviation = 0.0;  ///< max_k |E1_k - E2_k|
};

struct DistributionSummary {
  TauRule rule;
  double eps = 0.0;
  std::vector<DistributionRow> rows;
  bool ratio_nondecreasing = true;
  bool deviation_decreasing = true;
};

/// Runs the refinement study over the given grids: cluster ratios r(eps, h)
/// (which must not decrease for clustering rules) and the E1/E2 deviation
/// (which must decrease when tau = C h^2).
DistributionSummary distribution_check(int q, const std::vector<int>& n_sides, const TauRule& rule,
                                       BoundaryMode bc, double eps = 0.05);

}  // namespace radau
