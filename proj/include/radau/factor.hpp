#pragma once

#include <Eigen/Dense>
#include <utility>

#include "radau/tableau.hpp"

namespace radau {

/// Everything the lower-triangular Kronecker preconditioner needs from a
/// tableau: A^{-1} = L U with unit-diagonal U, the strictly upper remainder
/// Uhat = U - I, L^{-1}, and the real eigendecomposition L = T diag(Lambda) T^{-1}.
struct TriangularFactorization {
  int q = 0;
  Eigen::MatrixXd Ainv;
  Eigen::MatrixXd L;
  Eigen::MatrixXd U;
  Eigen::MatrixXd Uhat;
  Eigen::MatrixXd Linv;
  Eigen::VectorXd Lambda;
  Eigen::MatrixXd T;
  Eigen::MatrixXd Tinv;
  double uhat_norm2 = 0.0;
  double uhat_fro = 0.0;
};

/// A^{-1} of the tableau matrix; throws FactorizationError when singular.
Eigen::MatrixXd invert_tableau(const ButcherTableau& t);

/// Crout elimination without pivoting: Ainv = L U, U unit upper triangular.
/// Throws FactorizationError (with the pivot index) on a zero pivot.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> lu_unit_upper(const Eigen::MatrixXd& Ainv);

struct LowerSpectralDecomposition {
  Eigen::MatrixXd T;       ///< unit lower triangular eigenvector matrix
  Eigen::VectorXd Lambda;  ///< diag(L)
  Eigen::MatrixXd Tinv;
};

/// Eigendecomposition of a lower-triangular matrix with distinct diagonal,
/// by forward recursion on (L - lambda_i I) t_i = 0.
/// Throws DegeneracyError when two diagonal entries agree to 1e-10 (relative).
LowerSpectralDecomposition spectral_decompose_lower(const Eigen::MatrixXd& L);

/// Inverse of a lower-triangular matrix; FactorizationError on a zero diagonal.
Eigen::MatrixXd lower_inverse(const Eigen::MatrixXd& L);

TriangularFactorization factorize(const ButcherTableau& t);
TriangularFactorization factorize(int q);

}  // namespace radau
