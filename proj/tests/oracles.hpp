#pragma once
// Test-only reference computations. Nothing here calls into the library
// paths that the tests check.

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace oracle {

/// Exact rational number with 64-bit numerator and denominator.
struct Rational {
  std::int64_t num = 0, den = 1;

  Rational(std::int64_t n = 0, std::int64_t d = 1) : num(n), den(d) {
    if (den == 0) throw std::domain_error("zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const auto g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }
  friend Rational operator+(Rational a, Rational b) {
    const auto g = std::lcm(a.den, b.den);
    return {a.num * (g / a.den) + b.num * (g / b.den), g};
  }
  friend Rational operator-(Rational a, Rational b) { return a + Rational(-b.num, b.den); }
  friend Rational operator*(Rational a, Rational b) {
    const Rational x(a.num, b.den), y(b.num, a.den);
    return {x.num * y.num, x.den * y.den};
  }
  friend Rational operator/(Rational a, Rational b) { return a * Rational(b.den, b.num); }
  friend bool operator==(Rational a, Rational b) { return a.num == b.num && a.den == b.den; }
  long double value() const { return static_cast<long double>(num) / den; }
};

/// Element a + b*sqrt(6) of the field Q(sqrt 6), exact.
struct Surd6 {
  Rational a, b;

  Surd6(Rational x = 0, Rational y = 0) : a(x), b(y) {}
  friend Surd6 operator+(Surd6 x, Surd6 y) { return {x.a + y.a, x.b + y.b}; }
  friend Surd6 operator-(Surd6 x, Surd6 y) { return {x.a - y.a, x.b - y.b}; }
  friend Surd6 operator*(Surd6 x, Surd6 y) {
    return {x.a * y.a + Rational(6) * x.b * y.b, x.a * y.b + x.b * y.a};
  }
  friend Surd6 operator/(Surd6 x, Surd6 y) {
    const Rational norm = y.a * y.a - Rational(6) * y.b * y.b;
    const Surd6 conj{y.a, Rational(0) - y.b};
    const Surd6 t = x * conj;
    return {t.a / norm, t.b / norm};
  }
  bool is_zero() const { return a.num == 0 && b.num == 0; }
  long double value() const { return a.value() + b.value() * std::sqrt(6.0L); }
};

/// Cyclic Jacobi rotations for a dense symmetric matrix; ascending eigenvalues.
inline Eigen::VectorXd jacobi_eigenvalues(Eigen::MatrixXd S) {
  const Eigen::Index n = S.rows();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i + 1; j < n; ++j) off += S(i, j) * S(i, j);
    if (off < 1e-30 * std::max(1.0, S.squaredNorm())) break;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index r = p + 1; r < n; ++r) {
        if (S(p, r) == 0.0) continue;
        const double theta = (S(r, r) - S(p, p)) / (2.0 * S(p, r));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double skp = S(k, p), skr = S(k, r);
          S(k, p) = c * skp - s * skr;
          S(k, r) = s * skp + c * skr;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double spk = S(p, k), srk = S(r, k);
          S(p, k) = c * spk - s * srk;
          S(r, k) = s * spk + c * srk;
        }
      }
    }
  }
  Eigen::VectorXd d = S.diagonal();
  std::sort(d.data(), d.data() + n);
  return d;
}

/// Plain Cholesky factor (lower), throws when not positive definite.
inline Eigen::MatrixXd cholesky(const Eigen::MatrixXd& A) {
  const Eigen::Index n = A.rows();
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double d = A(j, j);
    for (Eigen::Index k = 0; k < j; ++k) d -= C(j, k) * C(j, k);
    if (!(d > 0.0)) throw std::domain_error("not positive definite");
    C(j, j) = std::sqrt(d);
    for (Eigen::Index i = j + 1; i < n; ++i) {
      double s = A(i, j);
      for (Eigen::Index k = 0; k < j; ++k) s -= C(i, k) * C(j, k);
      C(i, j) = s / C(j, j);
    }
  }
  return C;
}

/// Eigenvalues of tau M^{-1} K via Cholesky + Jacobi.
inline Eigen::VectorXd pencil_eigenvalues(const Eigen::MatrixXd& M, const Eigen::MatrixXd& K,
                                          double tau) {
  const Eigen::MatrixXd C = cholesky(M);
  const Eigen::MatrixXd Ci = C.triangularView<Eigen::Lower>().solve(
      Eigen::MatrixXd::Identity(M.rows(), M.cols()));
  Eigen::MatrixXd S = tau * Ci * K * Ci.transpose();
  S = 0.5 * (S + S.transpose());
  return jacobi_eigenvalues(S);
}

/// Integrals over the cell [0,h]^2 of products of Q1 shape functions (or
/// their gradients) with 2x2 Gauss points, from the reference-cell
/// shape functions directly. Local node order (0,0),(1,0),(1,1),(0,1).
struct Q1Cell {
  static double phi(int a, double x, double y) {
    const double xs[4] = {0, 1, 1, 0}, ys[4] = {0, 0, 1, 1};
    return (xs[a] ? x : 1 - x) * (ys[a] ? y : 1 - y);
  }
  static Eigen::Vector2d grad(int a, double x, double y, double h) {
    const double xs[4] = {0, 1, 1, 0}, ys[4] = {0, 0, 1, 1};
    const double gx = (xs[a] ? 1.0 : -1.0) * (ys[a] ? y : 1 - y);
    const double gy = (ys[a] ? 1.0 : -1.0) * (xs[a] ? x : 1 - x);
    return Eigen::Vector2d(gx, gy) / h;
  }
  template <class F>
  static double integrate(F f, double h) {
    const double g = 0.5 / std::sqrt(3.0);
    const double pts[2] = {0.5 - g, 0.5 + g};
    double s = 0.0;
    for (double x : pts)
      for (double y : pts) s += 0.25 * f(x, y);
    return s * h * h;
  }
  static double stiffness(int a, int b, double h) {
    return integrate([&](double x, double y) { return grad(a, x, y, h).dot(grad(b, x, y, h)); }, h);
  }
  static double mass(int a, int b, double h) {
    return integrate([&](double x, double y) { return phi(a, x, y) * phi(b, x, y); }, h);
  }
};

/// 3x3 interior stencil of the assembled matrix at a node, from cell integrals.
/// Result[dy+1][dx+1] is the coupling to the neighbour at offset (dx, dy).
template <class Entry>
std::array<std::array<double, 3>, 3> interior_stencil(Entry entry, double h) {
  std::array<std::array<double, 3>, 3> st{};
  const int ox[4] = {0, 1, 1, 0}, oy[4] = {0, 0, 1, 1};
  // The node is local vertex `a` of the four cells sharing it.
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      const int dx = ox[b] - ox[a], dy = oy[b] - oy[a];
      st[dy + 1][dx + 1] += entry(a, b, h);
    }
  }
  return st;
}

/// Dense Kronecker product written out entry by entry.
inline Eigen::MatrixXd kron(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  Eigen::MatrixXd out(A.rows() * B.rows(), A.cols() * B.cols());
  for (Eigen::Index i = 0; i < out.rows(); ++i)
    for (Eigen::Index j = 0; j < out.cols(); ++j)
      out(i, j) = A(i / B.rows(), j / B.cols()) * B(i % B.rows(), j % B.cols());
  return out;
}

}  // namespace oracle
