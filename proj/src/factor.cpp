#include "radau/factor.hpp"

#include <cmath>
#include <string>

#include "radau/errors.hpp"

namespace radau {

Eigen::MatrixXd invert_tableau(const ButcherTableau& t) {
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(t.A);
  if (!lu.isInvertible() || lu.rcond() < 1e-14) {
    throw FactorizationError("tableau matrix is singular to working precision");
  }
  return lu.inverse();
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> lu_unit_upper(const Eigen::MatrixXd& Ainv) {
  const Eigen::Index q = Ainv.rows();
  if (Ainv.cols() != q) throw DimensionError("lu_unit_upper: matrix not square");
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(q, q);
  Eigen::MatrixXd U = Eigen::MatrixXd::Identity(q, q);
  const double scale = std::max(Ainv.cwiseAbs().maxCoeff(), 1.0);
  for (Eigen::Index j = 0; j < q; ++j) {
    for (Eigen::Index i = j; i < q; ++i) {
      double s = Ainv(i, j);
      for (Eigen::Index k = 0; k < j; ++k) s -= L(i, k) * U(k, j);
      L(i, j) = s;
    }
    if (std::abs(L(j, j)) <= 1e-14 * scale) {
      throw FactorizationError("zero pivot at index " + std::to_string(j),
                               static_cast<int>(j));
    }
    for (Eigen::Index k = j + 1; k < q; ++k) {
      double s = Ainv(j, k);
      for (Eigen::Index m = 0; m < j; ++m) s -= L(j, m) * U(m, k);
      U(j, k) = s / L(j, j);
    }
  }
  return {L, U};
}

Eigen::MatrixXd lower_inverse(const Eigen::MatrixXd& L) {
  const Eigen::Index q = L.rows();
  if (L.cols() != q) throw DimensionError("lower_inverse: matrix not square");
  for (Eigen::Index i = 0; i < q; ++i) {
    if (L(i, i) == 0.0) {
      throw FactorizationError("zero diagonal entry at index " + std::to_string(i),
                               static_cast<int>(i));
    }
  }
  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(q, q);
  for (Eigen::Index j = 0; j < q; ++j) {
    X(j, j) = 1.0 / L(j, j);
    for (Eigen::Index i = j + 1; i < q; ++i) {
      double s = 0.0;
      for (Eigen::Index k = j; k < i; ++k) s += L(i, k) * X(k, j);
      X(i, j) = -s / L(i, i);
    }
  }
  return X;
}

LowerSpectralDecomposition spectral_decompose_lower(const Eigen::MatrixXd& L) {
  const Eigen::Index q = L.rows();
  if (L.cols() != q) throw DimensionError("spectral_decompose_lower: matrix not square");
  LowerSpectralDecomposition d;
  d.Lambda = L.diagonal();
  for (Eigen::Index i = 0; i < q; ++i) {
    for (Eigen::Index j = i + 1; j < q; ++j) {
      const double a = d.Lambda[i], b = d.Lambda[j];
      if (std::abs(a - b) <= 1e-10 * std::max(std::abs(a), std::abs(b))) {
        throw DegeneracyError("diagonal entries " + std::to_string(i) + " and " +
                              std::to_string(j) + " coincide");
      }
    }
  }
  // Column i: t_ii = 1, t_ki = sum_{j=i}^{k-1} L_kj t_ji / (lambda_i - L_kk).
  d.T = Eigen::MatrixXd::Zero(q, q);
  for (Eigen::Index i = 0; i < q; ++i) {
    d.T(i, i) = 1.0;
    for (Eigen::Index k = i + 1; k < q; ++k) {
      double s = 0.0;
      for (Eigen::Index j = i; j < k; ++j) s += L(k, j) * d.T(j, i);
      d.T(k, i) = s / (d.Lambda[i] - L(k, k));
    }
  }
  d.Tinv = lower_inverse(d.T);
  return d;
}

TriangularFactorization factorize(const ButcherTableau& t) {
  TriangularFactorization f;
  f.q = t.q;
  f.Ainv = invert_tableau(t);
  std::tie(f.L, f.U) = lu_unit_upper(f.Ainv);
  f.Uhat = f.U - Eigen::MatrixXd::Identity(t.q, t.q);
  f.Linv = lower_inverse(f.L);
  auto d = spectral_decompose_lower(f.L);
  f.T = std::move(d.T);
  f.Lambda = std::move(d.Lambda);
  f.Tinv = std::move(d.Tinv);
  if (t.q > 1) {
    f.uhat_norm2 = Eigen::JacobiSVD<Eigen::MatrixXd>(f.Uhat).singularValues()[0];
  }
  f.uhat_fro = f.Uhat.norm();
  return f;
}

TriangularFactorization factorize(int q) { return factorize(radau_tableau(q)); }

}  // namespace radau
