#pragma once

#include <Eigen/Dense>

namespace radau {

inline constexpr int kMaxStages = 10;

/// Butcher tableau (c | A, b) of a Runge-Kutta method.
struct ButcherTableau {
  int q = 0;
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  Eigen::VectorXd c;
};

/// Maximum residuals of the three families of conditions a Radau IIA
/// tableau satisfies.
struct OrderConditionReport {
  double sum_b = 0.0;         ///< |sum_j b_j - 1|
  double quadrature = 0.0;    ///< max_k |sum_j b_j c_j^{k-1} - 1/k|, k <= 2q-1
  double collocation = 0.0;   ///< max_{i,k} |sum_j a_ij c_j^{k-1} - c_i^k/k|, k <= q
  double stiff_accuracy = 0.0;  ///< max_j |a_qj - b_j|

  double max_residual() const;
  bool passes(double tol) const { return max_residual() <= tol; }
};

/// Right Radau points on [0, 1]: the roots of
/// d^{q-1}/dt^{q-1} [t^{q-1} (t-1)^q], ascending, last one exactly 1.
Eigen::VectorXd radau_nodes(int q);

/// Radau IIA tableau built by collocation at the Radau points.
ButcherTableau radau_tableau(int q);

OrderConditionReport verify_order_conditions(const ButcherTableau& t);

}  // namespace radau
