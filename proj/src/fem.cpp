#include "radau/fem.hpp"

#include <cmath>
#include <numbers>

#include "radau/errors.hpp"

namespace radau {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

// Local node order: (0,0), (1,0), (1,1), (0,1).
constexpr double kElementStiffness[4][4] = {{4, -1, -2, -1},
                                            {-1, 4, -1, -2},
                                            {-2, -1, 4, -1},
                                            {-1, -2, -1, 4}};
constexpr double kElementMass[4][4] = {{4, 2, 1, 2},
                                       {2, 4, 2, 1},
                                       {1, 2, 4, 2},
                                       {2, 1, 2, 4}};

bool on_boundary(int i, int j, int n_side) {
  return i == 0 || j == 0 || i == n_side - 1 || j == n_side - 1;
}

SparseMatrix from_stencil(const Stencil& s, int n_side) {
  const int n = n_side * n_side;
  Triplets trip;
  trip.reserve(static_cast<std::size_t>(9) * n);
  for (int j = 0; j < n_side; ++j) {
    for (int i = 0; i < n_side; ++i) {
      const int row = j * n_side + i;
      for (int dj = -1; dj <= 1; ++dj) {
        for (int di = -1; di <= 1; ++di) {
          const int ii = i - di, jj = j - dj;
          if (ii < 0 || jj < 0 || ii >= n_side || jj >= n_side) continue;
          const double v = s[dj + 1][di + 1];
          if (v != 0.0) trip.emplace_back(row, jj * n_side + ii, v);
        }
      }
    }
  }
  SparseMatrix T(n, n);
  T.setFromTriplets(trip.begin(), trip.end());
  return T;
}

}  // namespace

std::string to_string(BoundaryMode mode) {
  switch (mode) {
    case BoundaryMode::full: return "full";
    case BoundaryMode::dirichlet_interior: return "dirichlet";
    case BoundaryMode::dirichlet_constrained: return "constrained";
  }
  return "unknown";
}

BoundaryMode parse_boundary_mode(const std::string& text) {
  if (text == "full") return BoundaryMode::full;
  if (text == "dirichlet" || text == "dirichlet_interior") return BoundaryMode::dirichlet_interior;
  if (text == "constrained" || text == "dirichlet_constrained") {
    return BoundaryMode::dirichlet_constrained;
  }
  throw RangeError("unknown boundary mode '" + text + "'");
}

int GridOperators::dofs_per_side() const {
  if (n_side == 0) return static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
  return bc_mode == BoundaryMode::dirichlet_interior ? n_side - 2 : n_side;
}

GridOperators assemble_q1(int n_side, BoundaryMode bc_mode) {
  if (n_side < 3) {
    throw RangeError("assemble_q1 needs n_side >= 3, got " + std::to_string(n_side));
  }
  const double h = 1.0 / (n_side - 1);
  const int n_full = n_side * n_side;

  // Map full node index -> unknown index (-1 when eliminated).
  std::vector<int> dof(n_full);
  int n = 0;
  for (int j = 0; j < n_side; ++j) {
    for (int i = 0; i < n_side; ++i) {
      const bool drop = bc_mode == BoundaryMode::dirichlet_interior && on_boundary(i, j, n_side);
      dof[j * n_side + i] = drop ? -1 : n++;
    }
  }

  Triplets km, mm;
  km.reserve(static_cast<std::size_t>(16) * (n_side - 1) * (n_side - 1));
  mm.reserve(km.capacity());
  const double mass_scale = h * h / 36.0;
  for (int ey = 0; ey < n_side - 1; ++ey) {
    for (int ex = 0; ex < n_side - 1; ++ex) {
      const int nodes[4] = {ey * n_side + ex, ey * n_side + ex + 1,
                            (ey + 1) * n_side + ex + 1, (ey + 1) * n_side + ex};
      for (int a = 0; a < 4; ++a) {
        const int r = dof[nodes[a]];
        if (r < 0) continue;
        for (int b = 0; b < 4; ++b) {
          const int c = dof[nodes[b]];
          if (c < 0) continue;
          km.emplace_back(r, c, kElementStiffness[a][b] / 6.0);
          mm.emplace_back(r, c, kElementMass[a][b] * mass_scale);
        }
      }
    }
  }

  GridOperators ops;
  ops.n_side = n_side;
  ops.n = n;
  ops.h = h;
  ops.bc_mode = bc_mode;
  ops.K.resize(n, n);
  ops.M.resize(n, n);
  ops.K.setFromTriplets(km.begin(), km.end());
  ops.M.setFromTriplets(mm.begin(), mm.end());

  if (bc_mode == BoundaryMode::dirichlet_constrained) {
    std::vector<char> constrained(n, 0);
    for (int j = 0; j < n_side; ++j) {
      for (int i = 0; i < n_side; ++i) {
        if (on_boundary(i, j, n_side)) constrained[j * n_side + i] = 1;
      }
    }
    for (int col = 0; col < ops.K.outerSize(); ++col) {
      for (SparseMatrix::InnerIterator it(ops.K, col); it; ++it) {
        if (it.row() != it.col() && (constrained[it.row()] || constrained[it.col()])) {
          it.valueRef() = 0.0;
        }
      }
    }
    ops.K.prune(0.0);
  }
  ops.K.makeCompressed();
  ops.M.makeCompressed();
  return ops;
}

GridOperators operators_from_matrices(SparseMatrix M, SparseMatrix K, double h) {
  if (M.rows() != M.cols() || K.rows() != K.cols() || M.rows() != K.rows()) {
    throw DimensionError("M and K must be square and of equal size");
  }
  GridOperators ops;
  ops.n = static_cast<int>(M.rows());
  ops.h = h;
  ops.M = std::move(M);
  ops.K = std::move(K);
  ops.M.makeCompressed();
  ops.K.makeCompressed();
  return ops;
}

SymbolDescriptor q1_stiffness_symbol() {
  SymbolDescriptor g;
  g.role = SymbolRole::stiffness;
  g.evaluator = [](double t1, double t2) {
    return (8.0 - 2.0 * std::cos(t1) - 2.0 * std::cos(t2) * (1.0 + 2.0 * std::cos(t1))) / 3.0;
  };
  const double e = -1.0 / 3.0;
  g.fourier = Stencil{{{e, e, e}, {e, 8.0 / 3.0, e}, {e, e, e}}};
  return g;
}

SymbolDescriptor five_point_stiffness_symbol() {
  SymbolDescriptor g;
  g.role = SymbolRole::stiffness;
  g.evaluator = [](double t1, double t2) { return 4.0 - 2.0 * std::cos(t1) - 2.0 * std::cos(t2); };
  g.fourier = Stencil{{{0, -1, 0}, {-1, 4, -1}, {0, -1, 0}}};
  return g;
}

SymbolDescriptor q1_mass_symbol(double h) {
  SymbolDescriptor g;
  g.role = SymbolRole::mass;
  const double s = h * h / 36.0;
  g.evaluator = [s](double t1, double t2) {
    return 4.0 * s * (2.0 + std::cos(t1)) * (2.0 + std::cos(t2));
  };
  g.fourier = Stencil{{{s, 4 * s, s}, {4 * s, 16 * s, 4 * s}, {s, 4 * s, s}}};
  return g;
}

SymbolDescriptor q1_ratio_symbol(double tau, double h) {
  SymbolDescriptor g;
  g.role = SymbolRole::ratio;
  g.evaluator = [tau, stiff = q1_stiffness_symbol(), mass = q1_mass_symbol(h)](double t1,
                                                                              double t2) {
    return tau * stiff(t1, t2) / mass(t1, t2);
  };
  return g;
}

SymbolDescriptor constant_symbol(double value) {
  SymbolDescriptor g;
  g.evaluator = [value](double, double) { return value; };
  g.fourier = Stencil{{{0, 0, 0}, {0, value, 0}, {0, 0, 0}}};
  return g;
}

SparseMatrix toeplitz_from_symbol(const SymbolDescriptor& g, int n_side) {
  if (!g.fourier) {
    throw UnsupportedError("symbol is not a trigonometric polynomial with known coefficients");
  }
  if (n_side < 1) throw RangeError("toeplitz_from_symbol needs n_side >= 1");
  return from_stencil(*g.fourier, n_side);
}

std::vector<double> sample_symbol(const SymbolDescriptor& g, int n_side) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n_side) * n_side);
  const double step = std::numbers::pi / (n_side + 1);
  for (int i = 1; i <= n_side; ++i) {
    for (int k = 1; k <= n_side; ++k) out.push_back(g(i * step, k * step));
  }
  return out;
}

namespace {

Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> pencil_solve(const GridOperators& ops,
                                                                       double tau, bool vectors) {
  if (!(tau > 0.0)) throw DomainError("time step tau must be positive");
  const Eigen::MatrixXd M(ops.M);
  const Eigen::MatrixXd K(ops.K);
  if (Eigen::LLT<Eigen::MatrixXd>(M).info() != Eigen::Success) {
    throw DefinitenessError("mass matrix is not positive definite (Cholesky failed)");
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.compute(tau * K, M,
                 (vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly) | Eigen::Ax_lBx);
  if (solver.info() != Eigen::Success) {
    throw DefinitenessError("symmetric-definite eigensolve failed");
  }
  return solver;
}

}  // namespace

Eigen::VectorXd zt_eigenvalues(const GridOperators& ops, double tau) {
  const auto solver = pencil_solve(ops, tau, false);
  return solver.eigenvalues().cwiseMax(0.0);
}

ZtEigenpairs zt_eigenpairs(const GridOperators& ops, double tau) {
  const auto solver = pencil_solve(ops, tau, true);
  return {solver.eigenvalues().cwiseMax(0.0), solver.eigenvectors()};
}

}  // namespace radau
