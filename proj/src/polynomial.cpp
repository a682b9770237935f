#include "radau/polynomial.hpp"

#include <cmath>
#include <numbers>

#include "radau/errors.hpp"

namespace radau {

namespace {

using cplx = std::complex<double>;
using Poly = std::vector<double>;

Poly multiply_linear(const Poly& p, double shift) {
  // (z - shift) * p(z)
  Poly out(p.size() + 1, 0.0);
  for (std::size_t d = 0; d < p.size(); ++d) {
    out[d + 1] += p[d];
    out[d] -= shift * p[d];
  }
  return out;
}

cplx polish(const Poly& p, cplx z) {
  for (int it = 0; it < 4; ++it) {
    cplx v = 0.0, dv = 0.0;
    for (std::size_t d = p.size(); d-- > 0;) {
      dv = dv * z + v;
      v = v * z + p[d];
    }
    if (dv == 0.0) break;
    const cplx next = z - v / dv;
    if (!(std::abs(evaluate_polynomial(p, next)) < std::abs(v))) break;
    z = next;
  }
  return z;
}

std::vector<cplx> quadratic_roots(double b, double c) {
  // z^2 + b z + c
  const double disc = b * b - 4.0 * c;
  if (disc >= 0.0) {
    const double s = std::sqrt(disc);
    const double t = -0.5 * (b + std::copysign(s, b));
    if (t == 0.0) return {0.0, 0.0};
    return {t, c / t};
  }
  const double im = 0.5 * std::sqrt(-disc);
  return {cplx(-0.5 * b, im), cplx(-0.5 * b, -im)};
}

std::vector<cplx> cubic_roots(double a, double b, double c) {
  // z^3 + a z^2 + b z + c, via the depressed cubic y^3 + p y + r.
  const double shift = a / 3.0;
  const double p = b - a * a / 3.0;
  const double r = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
  const double disc = r * r / 4.0 + p * p * p / 27.0;
  if (disc < 0.0) {
    const double m = 2.0 * std::sqrt(-p / 3.0);
    const double arg = std::clamp(3.0 * r / (p * m), -1.0, 1.0);
    const double phi = std::acos(arg) / 3.0;
    std::vector<cplx> out;
    for (int k = 0; k < 3; ++k) {
      out.emplace_back(m * std::cos(phi - 2.0 * std::numbers::pi * k / 3.0) - shift);
    }
    return out;
  }
  const double s = std::sqrt(disc);
  const double u = std::cbrt(-r / 2.0 + s);
  const double v = std::cbrt(-r / 2.0 - s);
  const double re = -(u + v) / 2.0 - shift;
  const double im = std::sqrt(3.0) / 2.0 * (u - v);
  return {cplx(u + v - shift), cplx(re, im), cplx(re, -im)};
}

}  // namespace

cplx evaluate_polynomial(const Poly& coefficients, cplx z) {
  cplx v = 0.0;
  for (std::size_t d = coefficients.size(); d-- > 0;) v = v * z + coefficients[d];
  return v;
}

Poly characteristic_polynomial(const Eigen::MatrixXd& A) {
  const Eigen::Index m = A.rows();
  if (A.cols() != m) throw DimensionError("characteristic_polynomial: matrix not square");
  if (m == 0) return {1.0};
  Eigen::MatrixXd H = A;
  if (m > 2) H = Eigen::HessenbergDecomposition<Eigen::MatrixXd>(A).matrixH();

  // p[k] = det(z I - H[0:k, 0:k]).
  std::vector<Poly> p(m + 1);
  p[0] = {1.0};
  for (Eigen::Index k = 1; k <= m; ++k) {
    Poly pk = multiply_linear(p[k - 1], H(k - 1, k - 1));
    double sub = 1.0;
    for (Eigen::Index i = k - 1; i >= 1; --i) {
      sub *= H(i, i - 1);
      const double w = H(i - 1, k - 1) * sub;
      for (std::size_t d = 0; d < p[i - 1].size(); ++d) pk[d] -= w * p[i - 1][d];
    }
    p[k] = std::move(pk);
  }
  return p[m];
}

std::vector<cplx> polynomial_roots(const Poly& coefficients) {
  Poly p = coefficients;
  while (!p.empty() && p.back() == 0.0) p.pop_back();
  if (p.size() < 2) return {};
  const double lead = p.back();
  for (double& x : p) x /= lead;
  const std::size_t deg = p.size() - 1;

  std::vector<cplx> roots;
  switch (deg) {
    case 1: roots = {cplx(-p[0])}; break;
    case 2: roots = quadratic_roots(p[1], p[0]); break;
    case 3: roots = cubic_roots(p[2], p[1], p[0]); break;
    default: {
      Eigen::MatrixXd C = Eigen::MatrixXd::Zero(deg, deg);
      C.bottomRows(deg - 1).leftCols(deg - 1).setIdentity();
      for (std::size_t j = 0; j < deg; ++j) C(0, j) = -p[deg - 1 - j];
      const Eigen::EigenSolver<Eigen::MatrixXd> es(C, false);
      if (es.info() != Eigen::Success) throw FactorizationError("companion eigensolve failed");
      for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        roots.push_back(es.eigenvalues()[i]);
      }
    }
  }
  // Polish real roots and upper half-plane roots; partners are mirrored so
  // the pairs stay exact conjugates.
  std::vector<cplx> out;
  out.reserve(roots.size());
  for (const auto& z : roots) {
    if (z.imag() == 0.0) {
      out.emplace_back(polish(p, z).real());
    } else if (z.imag() > 0.0) {
      cplx w = polish(p, z);
      if (w.imag() < 0.0) w = std::conj(w);
      out.push_back(w);
      out.push_back(std::conj(w));
    }
  }
  return out;
}

}  // namespace radau
