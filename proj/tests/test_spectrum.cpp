#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <random>

#include "oracles.hpp"
#include "radau/errors.hpp"
#include "radau/matching.hpp"
#include "radau/polynomial.hpp"
#include "radau/spectrum.hpp"

using radau::BoundaryMode;
using radau::Complex;

namespace {

const double kRstar2 = 3 * std::sqrt(6.0) / (11 * std::sqrt(6.0) + 24);  // 0.14424492...

std::shared_ptr<const radau::GridOperators> grid(int n_side, BoundaryMode bc) {
  return std::make_shared<const radau::GridOperators>(radau::assemble_q1(n_side, bc));
}

Eigen::MatrixXd preconditioned_matrix(const radau::StageSystem& sys) {
  const radau::PreconditionerState p(sys);
  const Eigen::Index N = sys.size();
  Eigen::MatrixXd out(N, N);
  for (Eigen::Index j = 0; j < N; ++j)
    out.col(j) = radau::prec_apply(p, radau::stage_apply(sys, Eigen::VectorXd::Unit(N, j)));
  return out;
}

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
  return v;
}

struct Q3Terms {
  Complex l1, l2, d3;
};

Q3Terms q3_terms(double mu, Complex lam, const radau::TriangularFactorization& f) {
  const auto& L = f.Linv;
  const auto& U = f.Uhat;
  const double d3 = 1 + L(2, 2) * mu;
  return {-(U(1, 2) * L(2, 1) * mu / d3 + lam * (1 + L(1, 1) * mu)),
          U(1, 2) * L(2, 0) * mu / d3 + lam * L(1, 0) * mu, d3};
}

// First block row after eliminating v2 and v3, all terms kept.
Complex q3_relation(double mu, Complex lam, const radau::TriangularFactorization& f) {
  const auto& L = f.Linv;
  const auto& U = f.Uhat;
  const auto t = q3_terms(mu, lam, f);
  return -lam * (1 + L(0, 0) * mu) * t.d3 * t.l1 - U(0, 2) * mu * (L(2, 0) * t.l1 + L(2, 1) * t.l2) +
         U(0, 1) * t.d3 * t.l2;
}

// The same relation without the u13 l31 mu l1 term.
Complex q3_relation_without_l31(double mu, Complex lam, const radau::TriangularFactorization& f) {
  const auto& L = f.Linv;
  const auto& U = f.Uhat;
  const auto t = q3_terms(mu, lam, f);
  return -lam * (1 + L(0, 0) * mu) * t.d3 * t.l1 - U(0, 2) * L(2, 1) * mu * t.l2 +
         U(0, 1) * t.d3 * t.l2;
}

double relation_scale(double mu, const radau::TriangularFactorization& f) {
  return (1 + mu) * (1 + mu) * (1 + f.Uhat.cwiseAbs().maxCoeff()) * 10;
}

}  // namespace

TEST_CASE("reduced block for q=2") {
  const auto f = radau::factorize(2);
  const Eigen::MatrixXd R = radau::reduced_block(1.0, f);
  const Eigen::Matrix2d expect{{0.0, 0.2}, {0.0, -0.12}};
  CHECK((R - expect).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((radau::reduced_block(1e-12, f) - f.Uhat).cwiseAbs().maxCoeff() < 1e-11);
  CHECK((radau::reduced_block(0.0, f) - f.Uhat).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(radau::reduced_block(-1.0, f), radau::DomainError);
  for (int q = 2; q <= 6; ++q) {
    const auto fq = radau::factorize(q);
    const Eigen::MatrixXd Rq = radau::reduced_block(3.0, fq);
    CHECK(Rq.col(0).cwiseAbs().maxCoeff() == 0.0);
    const Eigen::MatrixXd direct =
        (Eigen::MatrixXd::Identity(q, q) + 3.0 * fq.Linv).inverse() * fq.Uhat;
    CHECK((Rq - direct).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("f_q2 and the q=2 branch") {
  CHECK(radau::f_q2(std::sqrt(6.0)) == doctest::Approx(-kRstar2).epsilon(1e-14));
  CHECK(std::abs(kRstar2 - 0.1442449235) < 1e-10);
  CHECK(radau::f_q2(1.0) == doctest::Approx(-0.12).epsilon(1e-14));
  CHECK(radau::f_q2(1e6) < 0.0);
  CHECK(radau::f_q2(1e6) > -1e-5);
  CHECK(radau::f_q2(1e-6) > -1e-5);
  CHECK_THROWS_AS(radau::f_q2(0.0), radau::DomainError);

  const auto f = radau::factorize(2);
  const auto b1 = radau::branch_eigenvalues(1.0, f);
  REQUIRE(b1.size() == 1);
  CHECK(std::abs(b1[0] - Complex(-0.12, 0.0)) < 1e-15);
  for (double mu : log_grid(1e-4, 1e4, 50)) {
    const auto b = radau::branch_eigenvalues(mu, f);
    REQUIRE(b.size() == 1);
    CHECK(b[0].imag() == 0.0);
    CHECK(std::abs(b[0].real() - radau::f_q2(mu)) < 1e-12);
    CHECK(radau::f_q2(mu) >= -kRstar2 - 1e-15);
  }
}

TEST_CASE("q=3 branches satisfy the eliminated quadratic") {
  const auto f = radau::factorize(3);
  double literal_worst = 0.0;
  for (double mu : log_grid(1e-4, 1e4, 40)) {
    const auto b = radau::branch_eigenvalues(mu, f);
    REQUIRE(b.size() == 2);
    const double s = relation_scale(mu, f);
    for (const auto& lam : b) {
      CHECK(std::abs(q3_relation(mu, lam, f)) < 1e-10 * s);
      literal_worst = std::max(literal_worst, std::abs(q3_relation_without_l31(mu, lam, f)) / s);
    }
  }
  // Dropping the l31 term gives a different polynomial.
  CHECK(literal_worst > 1e-4);
}

TEST_CASE("q=3 asymptotic branches") {
  const auto f = radau::factorize(3);
  for (double mu : {1e-6, 1e-4}) {
    CAPTURE(mu);
    const auto b = radau::branch_eigenvalues(mu, f);
    REQUIRE(b.size() == 2);
    CHECK(b[0].imag() != 0.0);
    CHECK(std::abs(b[0] - std::conj(b[1])) < 1e-14);
    CHECK(std::abs(b[0].real()) < 0.1 * std::abs(b[0].imag()));
    CHECK(b[0].real() < 0.0);
    CHECK(std::abs(b[0]) < 0.02);
  }
  // Large mu: R(mu) ~ L Uhat / mu, whose trailing block has two distinct real
  // eigenvalues, so the branches are real there.
  const Eigen::Matrix2d B = (f.L * f.Uhat).bottomRightCorner(2, 2);
  const double tr = B.trace(), det = B.determinant();
  REQUIRE(tr * tr - 4 * det > 0.0);
  const double r1 = 0.5 * (tr - std::sqrt(tr * tr - 4 * det));
  const double r2 = 0.5 * (tr + std::sqrt(tr * tr - 4 * det));
  for (double mu : {1e6, 1e8}) {
    CAPTURE(mu);
    const auto b = radau::branch_eigenvalues(mu, f);
    REQUIRE(b.size() == 2);
    CHECK(b[0].imag() == 0.0);
    CHECK(b[1].imag() == 0.0);
    CHECK(b[0].real() * mu == doctest::Approx(r1).epsilon(1e-4));
    CHECK(b[1].real() * mu == doctest::Approx(r2).epsilon(1e-4));
  }
}

TEST_CASE("branches come in conjugate pairs and stay in the disk") {
  for (int q = 2; q <= radau::kMaxStages; ++q) {
    CAPTURE(q);
    const auto f = radau::factorize(q);
    const auto est = radau::radius_estimate(f);
    CHECK(est.radius < 1.0);
    double worst = 0.0;
    for (double mu : log_grid(1e-8, 1e8, 2000)) {
      const auto b = radau::branch_eigenvalues(mu, f);
      REQUIRE(b.size() == static_cast<size_t>(q - 1));
      for (const auto& z : b) {
        worst = std::max(worst, std::abs(z));
        if (z.imag() != 0.0) {
          const bool paired = std::any_of(b.begin(), b.end(), [&](Complex w) {
            return std::abs(w - std::conj(z)) <= 1e-12 * std::max(1.0, std::abs(z));
          });
          CHECK(paired);
        }
      }
      if (mu == 1.0 || q == 4) {
        // Against a general eigensolver on R(mu) with its zero root dropped.
        Eigen::EigenSolver<Eigen::MatrixXd> es(radau::reduced_block(mu, f));
        std::vector<Complex> ref(es.eigenvalues().data(), es.eigenvalues().data() + q);
        std::sort(ref.begin(), ref.end(), [](Complex a, Complex c) { return std::abs(a) < std::abs(c); });
        ref.erase(ref.begin());
        const auto m = radau::match_multisets(b, ref);
        CHECK(m.max_distance < 1e-9);
      }
    }
    CHECK(worst <= est.radius + 1e-9);
  }
}

TEST_CASE("cluster radii") {
  const auto r2 = radau::radius_estimate(2);
  CHECK(std::abs(r2.radius - kRstar2) < 1e-9);
  CHECK(std::abs(r2.argmax_mu - std::sqrt(6.0)) < 1e-4);
  const auto r3 = radau::radius_estimate(3);
  CHECK(std::abs(r3.radius - 0.206) < 5e-3);
  const auto pinned = radau::radius_estimate(radau::factorize(2), {std::sqrt(6.0), std::sqrt(6.0), 1});
  CHECK(pinned.radius == doctest::Approx(kRstar2).epsilon(1e-14));
}

TEST_CASE("structured spectrum matches the dense oracle") {
  struct Case {
    int q, n_side;
    BoundaryMode bc;
  };
  for (const auto c : {Case{2, 5, BoundaryMode::dirichlet_interior},
                       Case{2, 7, BoundaryMode::dirichlet_interior},
                       Case{3, 7, BoundaryMode::dirichlet_interior},
                       Case{3, 5, BoundaryMode::dirichlet_constrained}}) {
    CAPTURE(c.q);
    CAPTURE(c.n_side);
    const auto ops = grid(c.n_side, c.bc);
    const radau::StageSystem sys(c.q, ops, 0.05);
    const auto s = radau::preconditioned_spectrum(sys);
    const auto d = radau::preconditioned_spectrum(sys, radau::SpectrumMode::dense_oracle);
    const auto m = radau::match_multisets(s.eigenvalues, d.eigenvalues);
    CHECK(m.max_distance < 1e-8);

    // And against a general eigensolver on P^{-1} A built here.
    Eigen::EigenSolver<Eigen::MatrixXd> es(preconditioned_matrix(sys));
    const Eigen::VectorXcd ev = es.eigenvalues();
    const std::vector<Complex> ref(ev.data(), ev.data() + ev.size());
    CHECK(radau::match_multisets(s.eigenvalues, ref).max_distance < 1e-8);
  }
}

TEST_CASE("spectral report invariants") {
  for (int q : {2, 3, 4}) {
    const auto ops = grid(9, BoundaryMode::full);
    const radau::StageSystem sys(q, ops, 0.02);
    const auto rep = radau::preconditioned_spectrum(sys);
    REQUIRE(rep.eigenvalues.size() == static_cast<size_t>(q * ops->n));
    const long ones = std::count_if(rep.eigenvalues.begin(), rep.eigenvalues.end(),
                                    [](Complex z) { return std::abs(z - 1.0) < 1e-10; });
    CHECK(ones >= ops->n);
    const double r = radau::radius_estimate(q).radius;
    for (const auto& z : rep.eigenvalues) CHECK(std::abs(z - 1.0) <= r + 1e-10);
    CHECK(rep.radius <= r + 1e-10);
    if (q == 2)
      for (const auto& z : rep.eigenvalues) {
        CHECK(z.imag() == 0.0);
        CHECK(z.real() >= 1 - kRstar2 - 1e-12);
        CHECK(z.real() <= 1 + 1e-12);
      }
    const auto rows = radau::test1_counts(rep, {10.0, 1e-14});
    CHECK(rows[0].count == q * ops->n);
    CHECK(rows[0].ratio == 1.0);
    CHECK(rows[1].count >= ops->n);
    CHECK(rows[1].ratio >= 0.0);
    CHECK(rows[1].ratio <= 1.0);

    const auto low = radau::preconditioned_spectrum(sys.lower_only());
    for (const auto& z : low.eigenvalues) CHECK(z == Complex(1.0, 0.0));
  }
}

TEST_CASE("eigenvectors for q=2") {
  const auto ops = grid(5, BoundaryMode::dirichlet_interior);
  const double tau = 0.04;
  const radau::StageSystem sys(2, ops, tau);
  const Eigen::MatrixXd PA = preconditioned_matrix(sys);
  const auto ep = radau::zt_eigenpairs(*ops, tau);
  for (int k = 0; k < ops->n; ++k) {
    const double mu = ep.values(k);
    const Eigen::VectorXd w = ep.vectors.col(k);
    const Eigen::VectorXd v = radau::eigenvector_q2(mu, w);
    const Eigen::VectorXd r = PA * v - (1 + radau::f_q2(mu)) * v;
    CHECK(r.norm() < 1e-8 * v.norm());
    Eigen::VectorXd unit = Eigen::VectorXd::Zero(2 * ops->n);
    unit.head(ops->n) = w;
    CHECK((PA * unit - unit).norm() < 1e-10);
  }
  const Eigen::VectorXd scalar = radau::eigenvector_q2(1.0, Eigen::VectorXd::Ones(1));
  CHECK(scalar(0) == doctest::Approx(-5.0 / 3));
  CHECK(scalar(1) == 1.0);
}

TEST_CASE("eigenvectors for q=3") {
  const auto ops = grid(5, BoundaryMode::dirichlet_interior);
  const auto& f = radau::factorize(3);
  for (double tau : {0.04, 1.0}) {
    const radau::StageSystem sys(3, ops, tau);
    const Eigen::MatrixXd PA = preconditioned_matrix(sys);
    const auto ep = radau::zt_eigenpairs(*ops, tau);
    Eigen::EigenSolver<Eigen::MatrixXd> es(PA);
    for (int k = 0; k < ops->n; ++k) {
      const double mu = ep.values(k);
      const Eigen::VectorXd w = ep.vectors.col(k);
      for (int branch : {0, 1}) {
        const auto co = radau::q3_eigenvector_coefficients(mu, branch, f);
        const Eigen::VectorXcd v = radau::eigenvector_q3(mu, branch, w, f);
        const Eigen::VectorXcd r = PA.cast<Complex>() * v - (1.0 + co.lambda) * v;
        CHECK(r.norm() < 1e-8 * v.norm());
        if (k == 0) {
          // Smallest mu is simple: compare with the dense eigenvector.
          Eigen::Index best = 0;
          (es.eigenvalues().array() - (1.0 + co.lambda)).abs().minCoeff(&best);
          const Eigen::VectorXcd d = es.eigenvectors().col(best);
          const double c = std::abs(d.dot(v)) / (d.norm() * v.norm());
          CHECK(std::sqrt(std::max(0.0, 1 - c * c)) < 1e-6);
        }
      }
      Eigen::VectorXd unit = Eigen::VectorXd::Zero(3 * ops->n);
      unit.head(ops->n) = w;
      CHECK((PA * unit - unit).norm() < 1e-10);
    }
  }
  const auto tiny = radau::q3_eigenvector_coefficients(1e-10, 0, f);
  CHECK(std::abs(tiny.beta) < 1e-8);
  CHECK_THROWS(radau::q3_eigenvector_coefficients(1.0, 2, f));
}

TEST_CASE("symbol prediction") {
  // Dirichlet elimination: the operators are exact Toeplitz products, so the
  // prediction is the spectrum itself.
  for (int q : {2, 3}) {
    const auto ops = grid(9, BoundaryMode::dirichlet_interior);
    const radau::StageSystem sys(q, ops, 10 * ops->h * ops->h);
    const auto v = radau::test2_vectors(sys);
    REQUIRE(v.E1.size() == v.E2.size());
    REQUIRE(v.E1.size() == static_cast<size_t>(q * ops->n));
    CHECK(v.max_deviation() < 1e-12);
    CHECK(std::is_sorted(v.E2.begin(), v.E2.end()));
    const auto low = radau::test2_vectors(sys.lower_only());
    for (size_t i = 0; i < low.E1.size(); ++i) {
      CHECK(low.E1[i] == doctest::Approx(1.0).epsilon(1e-14));
      CHECK(low.E2[i] == doctest::Approx(1.0).epsilon(1e-14));
    }
  }

  for (int q : {2, 3}) {
    for (double C : {1.0, 10.0}) {
      std::vector<double> dev;
      for (int n_side : {9, 17, 33}) {
        const auto ops = grid(n_side, BoundaryMode::full);
        const radau::StageSystem sys(q, ops, C * ops->h * ops->h);
        dev.push_back(radau::test2_vectors(sys).max_deviation());
      }
      CHECK(dev[1] < dev[0]);
      CHECK(dev[2] < dev[1]);
    }
  }
}

TEST_CASE("refinement studies") {
  const auto matched = radau::distribution_check(3, {5, 9, 17}, radau::TauRule::matched(),
                                                 BoundaryMode::dirichlet_constrained, 0.05);
  REQUIRE(matched.rows.size() == 3);
  CHECK(matched.ratio_nondecreasing);
  const double table[3] = {0.7867, 0.9424, 0.9839};
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(matched.rows[i].count - table[i] * matched.rows[i].dim) <= 3.0);
    CHECK(matched.rows[i].ratio >= 0.0);
    CHECK(matched.rows[i].ratio <= 1.0);
  }

  const auto cubic = radau::distribution_check(2, {5, 9, 17}, radau::TauRule::power(3.0),
                                               BoundaryMode::full, 0.05);
  CHECK(cubic.ratio_nondecreasing);
  CHECK(cubic.rows.back().ratio > cubic.rows.front().ratio);

  const auto c10 = radau::distribution_check(2, {9, 17, 33}, radau::TauRule::c_constant(10.0),
                                             BoundaryMode::full, 0.05);
  CHECK(c10.deviation_decreasing);
}

TEST_CASE("multiset matching") {
  const std::vector<Complex> a = {1.0, 2.0, 3.0}, b = {3.1, 1.1, 2.1};
  const auto m = radau::match_multisets(a, b);
  CHECK(m.assignment == std::vector<int>{1, 2, 0});
  CHECK(m.max_distance == doctest::Approx(0.1));
  CHECK(m.total_cost == doctest::Approx(0.3));

  // Brute force over permutations.
  std::mt19937_64 gen(4);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Complex> x(6), y(6);
    for (auto& z : x) z = {nd(gen), nd(gen)};
    for (auto& z : y) z = {nd(gen), nd(gen)};
    std::vector<int> perm = {0, 1, 2, 3, 4, 5};
    double best = 1e300;
    do {
      double s = 0;
      for (int i = 0; i < 6; ++i) s += std::abs(x[i] - y[perm[i]]);
      best = std::min(best, s);
    } while (std::next_permutation(perm.begin(), perm.end()));
    CHECK(radau::match_multisets(x, y).total_cost == doctest::Approx(best).epsilon(1e-12));
  }
  CHECK_THROWS(radau::match_multisets({1.0}, {1.0, 2.0}));
}

TEST_CASE("characteristic polynomials and roots") {
  const Eigen::Matrix3d A{{2, 1, 0}, {0, 3, 1}, {1, 0, 4}};
  const auto p = radau::characteristic_polynomial(A);
  // det(zI - A) = z^3 - 9 z^2 + 26 z - 25.
  REQUIRE(p.size() == 4);
  CHECK(p[0] == doctest::Approx(-25.0));
  CHECK(p[1] == doctest::Approx(26.0));
  CHECK(p[2] == doctest::Approx(-9.0));
  CHECK(p[3] == 1.0);

  // (z-1)(z-2)(z-3)(z^2+1) lowest first.
  const std::vector<double> c = {-6, 11, -12, 12, -6, 1};
  const auto r = radau::polynomial_roots(c);
  const std::vector<Complex> expect = {1.0, 2.0, 3.0, Complex(0, 1), Complex(0, -1)};
  CHECK(radau::match_multisets(r, expect).max_distance < 1e-12);
  for (int deg = 1; deg <= 3; ++deg) {
    std::vector<double> monic(deg + 1, 0.0);
    monic[0] = -1.0;
    monic[deg] = 1.0;  // z^deg - 1
    const auto roots = radau::polynomial_roots(monic);
    REQUIRE(roots.size() == static_cast<size_t>(deg));
    for (const auto& z : roots) CHECK(std::abs(radau::evaluate_polynomial(monic, z)) < 1e-14);
  }
}
