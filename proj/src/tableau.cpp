#include "radau/tableau.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "radau/errors.hpp"

namespace radau {

namespace {

using Real = long double;

void check_stage_count(int q) {
  if (q < 1 || q > kMaxStages) {
    throw RangeError("stage count q=" + std::to_string(q) +
                     " outside supported range [1, " +
                     std::to_string(kMaxStages) + "]");
  }
}

// P_q(x) - P_{q-1}(x) with x = 2t - 1, together with its t-derivative.
// Up to a constant factor this is the (q-1)-th derivative of
// t^{q-1} (t-1)^q, and the three-term recurrence avoids the cancellation
// of the expanded monomial form.
struct RadauPoly {
  Real value;
  Real derivative;
};

RadauPoly radau_poly(int q, Real t) {
  const Real x = 2 * t - 1;
  Real p_prev = 1, p = x;     // P_0, P_1
  Real d_prev = 0, d = 1;     // P_0', P_1' in x
  if (q == 1) return {p - p_prev, 2 * (d - d_prev)};
  for (int k = 1; k < q; ++k) {
    const Real p_next = ((2 * k + 1) * x * p - k * p_prev) / (k + 1);
    const Real d_next = d_prev + (2 * k + 1) * p;
    p_prev = p;
    p = p_next;
    d_prev = d;
    d = d_next;
  }
  return {p - p_prev, 2 * (d - d_prev)};
}

Real bisect_then_polish(int q, Real lo, Real hi) {
  Real f_lo = radau_poly(q, lo).value;
  for (int it = 0; it < 200 && hi - lo > 1e-15L; ++it) {
    const Real mid = (lo + hi) / 2;
    const Real f_mid = radau_poly(q, mid).value;
    if ((f_mid < 0) == (f_lo < 0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  Real t = (lo + hi) / 2;
  for (int it = 0; it < 8; ++it) {
    const auto [v, dv] = radau_poly(q, t);
    if (dv == 0) break;
    const Real step = v / dv;
    t -= step;
    if (std::fabs(step) < 1e-19L) break;
  }
  return t;
}

std::vector<Real> nodes_extended(int q) {
  check_stage_count(q);
  std::vector<Real> roots;
  roots.reserve(q);
  // Interior roots lie in (0, 1) and are simple; a uniform grid resolves
  // them comfortably for q <= 10 (minimum spacing ~ 1/(2q^2)).
  const int samples = 400 * q * q;
  Real prev_t = 0;
  Real prev_f = radau_poly(q, prev_t).value;
  for (int s = 1; s < samples; ++s) {
    const Real t = static_cast<Real>(s) / samples;
    const Real f = radau_poly(q, t).value;
    if (f == 0) {
      roots.push_back(t);
    } else if ((f < 0) != (prev_f < 0) && prev_f != 0) {
      roots.push_back(bisect_then_polish(q, prev_t, t));
    }
    prev_t = t;
    prev_f = f;
  }
  roots.push_back(1);
  if (static_cast<int>(roots.size()) != q) {
    throw FactorizationError("Radau node search found " +
                             std::to_string(roots.size()) + " roots for q=" +
                             std::to_string(q));
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

// Monomial coefficients (lowest degree first) of the j-th Lagrange basis
// polynomial on the given nodes.
std::vector<Real> lagrange_coefficients(const std::vector<Real>& nodes, int j) {
  std::vector<Real> coef{1};
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    if (static_cast<int>(k) == j) continue;
    const Real denom = nodes[j] - nodes[k];
    std::vector<Real> next(coef.size() + 1, 0);
    for (std::size_t d = 0; d < coef.size(); ++d) {
      next[d + 1] += coef[d] / denom;
      next[d] -= coef[d] * nodes[k] / denom;
    }
    coef = std::move(next);
  }
  return coef;
}

// \int_0^x p(t) dt for p given by monomial coefficients.
Real integrate_from_zero(const std::vector<Real>& coef, Real x) {
  Real acc = 0;
  for (std::size_t d = coef.size(); d-- > 0;) {
    acc = acc * x + coef[d] / static_cast<Real>(d + 1);
  }
  return acc * x;
}

}  // namespace

double OrderConditionReport::max_residual() const {
  return std::max({sum_b, quadrature, collocation, stiff_accuracy});
}

Eigen::VectorXd radau_nodes(int q) {
  const auto nodes = nodes_extended(q);
  Eigen::VectorXd c(q);
  for (int i = 0; i < q; ++i) c[i] = static_cast<double>(nodes[i]);
  return c;
}

ButcherTableau radau_tableau(int q) {
  const auto nodes = nodes_extended(q);
  ButcherTableau t;
  t.q = q;
  t.A.resize(q, q);
  t.b.resize(q);
  t.c.resize(q);
  for (int j = 0; j < q; ++j) {
    const auto ell = lagrange_coefficients(nodes, j);
    for (int i = 0; i < q; ++i) {
      t.A(i, j) = static_cast<double>(integrate_from_zero(ell, nodes[i]));
    }
    t.b[j] = static_cast<double>(integrate_from_zero(ell, 1));
    t.c[j] = static_cast<double>(nodes[j]);
  }
  return t;
}

OrderConditionReport verify_order_conditions(const ButcherTableau& t) {
  const int q = t.q;
  OrderConditionReport r;
  Real sum = 0;
  for (int j = 0; j < q; ++j) sum += t.b[j];
  r.sum_b = static_cast<double>(std::fabs(sum - 1));

  for (int k = 1; k <= 2 * q - 1; ++k) {
    Real s = 0;
    for (int j = 0; j < q; ++j) s += t.b[j] * std::pow(Real(t.c[j]), k - 1);
    r.quadrature = std::max(r.quadrature,
                            static_cast<double>(std::fabs(s - Real(1) / k)));
  }
  for (int i = 0; i < q; ++i) {
    for (int k = 1; k <= q; ++k) {
      Real s = 0;
      for (int j = 0; j < q; ++j) {
        s += t.A(i, j) * std::pow(Real(t.c[j]), k - 1);
      }
      const Real target = std::pow(Real(t.c[i]), k) / k;
      r.collocation =
          std::max(r.collocation, static_cast<double>(std::fabs(s - target)));
    }
  }
  for (int j = 0; j < q; ++j) {
    r.stiff_accuracy =
        std::max(r.stiff_accuracy, std::fabs(t.A(q - 1, j) - t.b[j]));
  }
  return r;
}

}  // namespace radau
