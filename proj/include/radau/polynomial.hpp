#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace radau {

/// Coefficients of det(z I - A), lowest degree first (monic, size rows+1),
/// from a Hessenberg reduction followed by Hyman's recursion.
std::vector<double> characteristic_polynomial(const Eigen::MatrixXd& A);

/// Roots of a real polynomial given lowest degree first. Degrees 1-3 use
/// closed forms, higher degrees the companion matrix; all roots get a few
/// guarded Newton steps. Complex roots come in conjugate pairs.
std::vector<std::complex<double>> polynomial_roots(const std::vector<double>& coefficients);

std::complex<double> evaluate_polynomial(const std::vector<double>& coefficients,
                                         std::complex<double> z);

}  // namespace radau
