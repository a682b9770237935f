#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace radau {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// How boundary nodes of the unit square are treated.
///  - full: every node kept, natural (Neumann) boundary; K has the constants
///    as its kernel.
///  - dirichlet_interior: boundary rows and columns eliminated.
///  - dirichlet_constrained: every node kept, boundary rows and columns of K
///    zeroed except for the diagonal (the usual finite-element treatment of
///    homogeneous Dirichlet values); M left untouched.
enum class BoundaryMode { full, dirichlet_interior, dirichlet_constrained };

std::string to_string(BoundaryMode mode);
BoundaryMode parse_boundary_mode(const std::string& text);

/// Spatial operators of M u' + K u = f on the unit square.
struct GridOperators {
  int n_side = 0;  ///< nodes per dimension, 0 for operators not built on a grid
  int n = 0;       ///< total spatial dimension
  double h = 0.0;  ///< mesh width 1/(n_side - 1)
  SparseMatrix M;
  SparseMatrix K;
  BoundaryMode bc_mode = BoundaryMode::full;

  /// Unknowns per coordinate direction (n_side, or n_side - 2 after elimination).
  int dofs_per_side() const;
};

/// Bilinear (Q1) finite elements on the uniform (n_side-1)^2 cell grid.
/// Throws RangeError for n_side < 3.
GridOperators assemble_q1(int n_side, BoundaryMode bc_mode = BoundaryMode::full);

/// Wraps arbitrary symmetric M (positive definite) and K.
GridOperators operators_from_matrices(SparseMatrix M, SparseMatrix K, double h = 0.0);

enum class SymbolRole { stiffness, mass, ratio, other };

/// 3x3 block of Fourier coefficients, coef[k2 + 1][k1 + 1] = g_hat(k1, k2).
using Stencil = std::array<std::array<double, 3>, 3>;

/// A real bivariate symbol on [-pi, pi]^2. Trigonometric polynomials of
/// degree one per variable carry their Fourier coefficients in closed form.
struct SymbolDescriptor {
  std::function<double(double, double)> evaluator;
  SymbolRole role = SymbolRole::other;
  std::optional<Stencil> fourier;

  double operator()(double theta1, double theta2) const { return evaluator(theta1, theta2); }
};

/// (1/3)(8 - 2cos t1 - 2cos t2 (1 + 2cos t1)), the Q1 Laplacian.
SymbolDescriptor q1_stiffness_symbol();
/// 4 - 2cos t1 - 2cos t2, the five-point Laplacian (times h^2).
SymbolDescriptor five_point_stiffness_symbol();
/// (4h^2/36)(2 + cos t1)(2 + cos t2), the Q1 mass matrix.
SymbolDescriptor q1_mass_symbol(double h);
/// tau * stiffness / mass: the symbol of tau M^{-1} K for Q1 elements.
SymbolDescriptor q1_ratio_symbol(double tau, double h);
SymbolDescriptor constant_symbol(double value);

/// Two-level Toeplitz matrix T_{(n_side, n_side)}(g), lexicographic ordering
/// (first variable fastest). Throws UnsupportedError when g carries no
/// Fourier coefficients.
SparseMatrix toeplitz_from_symbol(const SymbolDescriptor& g, int n_side);

/// g(theta_i, theta_k) on theta_m = m pi / (n_side + 1), m = 1..n_side,
/// with i the outer index.
std::vector<double> sample_symbol(const SymbolDescriptor& g, int n_side);

/// Eigenvalues of tau M^{-1} K (ascending) by Cholesky reduction of the
/// symmetric-definite pencil. Roundoff-negative values are clamped to 0.
/// Throws DefinitenessError when M is not positive definite.
Eigen::VectorXd zt_eigenvalues(const GridOperators& ops, double tau);

struct ZtEigenpairs {
  Eigen::VectorXd values;   ///< ascending
  Eigen::MatrixXd vectors;  ///< M-orthonormal columns, Z w = mu w
};
ZtEigenpairs zt_eigenpairs(const GridOperators& ops, double tau);

}  // namespace radau
