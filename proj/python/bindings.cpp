#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>

#include "radau/errors.hpp"
#include "radau/experiments.hpp"
#include "radau/krylov.hpp"
#include "radau/spectrum.hpp"

namespace py = pybind11;
using namespace radau;

namespace {

BlockSolverKind parse_solver(const std::string& name) {
  if (name == "auto") return BlockSolverKind::automatic;
  if (name == "cholesky") return BlockSolverKind::direct_cholesky;
  if (name == "cg") return BlockSolverKind::cg_inner;
  throw RangeError("unknown block solver '" + name + "'");
}

SpectrumMode parse_mode(const std::string& name) {
  if (name == "structured") return SpectrumMode::structured;
  if (name == "dense") return SpectrumMode::dense_oracle;
  throw RangeError("unknown spectrum mode '" + name + "'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Radau IIA stage systems and the lower-triangular Kronecker preconditioner";

  auto base = py::register_exception<Error>(m, "RadauError", PyExc_RuntimeError);
  py::register_exception<RangeError>(m, "RangeError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
  py::register_exception<SolverError>(m, "SolverError", base.ptr());
  py::register_exception<FactorizationError>(m, "FactorizationError", base.ptr());

  m.attr("MAX_STAGES") = kMaxStages;

  py::class_<ButcherTableau>(m, "ButcherTableau")
      .def_readonly("q", &ButcherTableau::q)
      .def_readonly("A", &ButcherTableau::A)
      .def_readonly("b", &ButcherTableau::b)
      .def_readonly("c", &ButcherTableau::c);

  py::class_<OrderConditionReport>(m, "OrderConditionReport")
      .def_readonly("sum_b", &OrderConditionReport::sum_b)
      .def_readonly("quadrature", &OrderConditionReport::quadrature)
      .def_readonly("collocation", &OrderConditionReport::collocation)
      .def_readonly("stiff_accuracy", &OrderConditionReport::stiff_accuracy)
      .def("max_residual", &OrderConditionReport::max_residual)
      .def("passes", &OrderConditionReport::passes, py::arg("tol"));

  m.def("radau_nodes", &radau_nodes, py::arg("q"));
  m.def("radau_tableau", &radau_tableau, py::arg("q"));
  m.def("verify_order_conditions", &verify_order_conditions, py::arg("tableau"));

  py::class_<TriangularFactorization>(m, "TriangularFactorization")
      .def_readonly("q", &TriangularFactorization::q)
      .def_readonly("Ainv", &TriangularFactorization::Ainv)
      .def_readonly("L", &TriangularFactorization::L)
      .def_readonly("U", &TriangularFactorization::U)
      .def_readonly("Uhat", &TriangularFactorization::Uhat)
      .def_readonly("Linv", &TriangularFactorization::Linv)
      .def_readonly("Lambda", &TriangularFactorization::Lambda)
      .def_readonly("T", &TriangularFactorization::T)
      .def_readonly("Tinv", &TriangularFactorization::Tinv)
      .def_readonly("uhat_norm2", &TriangularFactorization::uhat_norm2)
      .def_readonly("uhat_fro", &TriangularFactorization::uhat_fro);

  m.def("factorize", py::overload_cast<int>(&factorize), py::arg("q"));

  py::class_<GridOperators, std::shared_ptr<GridOperators>>(m, "GridOperators")
      .def_readonly("n_side", &GridOperators::n_side)
      .def_readonly("n", &GridOperators::n)
      .def_readonly("h", &GridOperators::h)
      .def_readonly("M", &GridOperators::M)
      .def_readonly("K", &GridOperators::K)
      .def_property_readonly("bc", [](const GridOperators& g) { return to_string(g.bc_mode); });

  m.def(
      "assemble_q1",
      [](int n_side, const std::string& bc) {
        return std::make_shared<GridOperators>(assemble_q1(n_side, parse_boundary_mode(bc)));
      },
      py::arg("n_side"), py::arg("bc") = "full");
  m.def(
      "operators_from_matrices",
      [](SparseMatrix M, SparseMatrix K, double h) {
        return std::make_shared<GridOperators>(operators_from_matrices(std::move(M), std::move(K), h));
      },
      py::arg("M"), py::arg("K"), py::arg("h") = 0.0);
  m.def("zt_eigenvalues", &zt_eigenvalues, py::arg("ops"), py::arg("tau"));

  py::class_<StageSystem>(m, "StageSystem")
      .def(py::init([](int q, std::shared_ptr<GridOperators> ops, double tau) {
             return StageSystem(q, std::move(ops), tau);
           }),
           py::arg("q"), py::arg("ops"), py::arg("tau"))
      .def_property_readonly("q", &StageSystem::q)
      .def_property_readonly("n", &StageSystem::n)
      .def_property_readonly("size", &StageSystem::size)
      .def_property_readonly("tau", &StageSystem::tau)
      .def_property_readonly("factorization", &StageSystem::factorization, py::return_value_policy::copy)
      .def("apply", [](const StageSystem& s, const Eigen::VectorXd& x) { return stage_apply(s, x); },
           py::arg("x"))
      .def("rhs", [](const StageSystem& s, const Eigen::VectorXd& g, const Eigen::VectorXd& u0) {
             return assemble_rhs(s, g, u0);
           },
           py::arg("gbar"), py::arg("u0"))
      .def("lower_only", &StageSystem::lower_only)
      .def("with_tau", &StageSystem::with_tau, py::arg("tau"));

  py::class_<PreconditionerState>(m, "Preconditioner")
      .def(py::init([](const StageSystem& s, const std::string& solver, bool parallel) {
             PreconditionerOptions o;
             o.solver = parse_solver(solver);
             o.parallel = parallel;
             return std::make_unique<PreconditionerState>(s, o);
           }),
           py::arg("system"), py::arg("solver") = "auto", py::arg("parallel") = false)
      .def_property_readonly("Lambda", &PreconditionerState::Lambda)
      .def("apply", [](const PreconditionerState& p, const Eigen::VectorXd& r) { return prec_apply(p, r); },
           py::arg("r"));

  py::class_<SolveReport>(m, "SolveReport")
      .def_readonly("iterations", &SolveReport::iterations)
      .def_readonly("residual_history", &SolveReport::residual_history)
      .def_readonly("converged", &SolveReport::converged)
      .def_readonly("solution", &SolveReport::solution);

  m.def(
      "gmres",
      [](const StageSystem& s, const PreconditionerState& p, const Eigen::VectorXd& rhs, double tol,
         int max_iter, int restart) { return gmres(s, p, rhs, {tol, max_iter, restart}); },
      py::arg("system"), py::arg("preconditioner"), py::arg("rhs"), py::arg("tol") = 1e-10,
      py::arg("max_iter") = 200, py::arg("restart") = 200);
  m.def(
      "integrate",
      [](const StageSystem& s, const Eigen::VectorXd& u0, double t0, double t_end, int steps,
         const Forcing& f, double tol) {
        return integrate(s, u0, t0, t_end, steps, f, {tol, 200, 200}).state;
      },
      py::arg("system"), py::arg("u0"), py::arg("t0"), py::arg("t_end"), py::arg("steps"),
      py::arg("forcing") = Forcing{}, py::arg("tol") = 1e-12);

  m.def("reduced_block", py::overload_cast<double, const TriangularFactorization&>(&reduced_block),
        py::arg("mu"), py::arg("fact"));
  m.def("f_q2", &f_q2, py::arg("mu"));
  m.def("branch_eigenvalues",
        py::overload_cast<double, const TriangularFactorization&>(&branch_eigenvalues), py::arg("mu"),
        py::arg("fact"));
  m.def(
      "radius_estimate",
      [](int q, double mu_min, double mu_max, int points) {
        const auto e = radius_estimate(q, {mu_min, mu_max, points});
        return py::make_tuple(e.radius, e.argmax_mu);
      },
      py::arg("q"), py::arg("mu_min") = 1e-8, py::arg("mu_max") = 1e8, py::arg("points") = 2000);

  m.def(
      "preconditioned_spectrum",
      [](const StageSystem& s, const std::string& mode) {
        const auto r = preconditioned_spectrum(s, parse_mode(mode));
        py::dict d;
        d["eigenvalues"] = Eigen::VectorXcd(Eigen::Map<const Eigen::VectorXcd>(
            r.eigenvalues.data(), static_cast<Eigen::Index>(r.eigenvalues.size())));
        d["branch_index"] = r.branch_index;
        d["mu"] = r.mu;
        d["radius"] = r.radius;
        return d;
      },
      py::arg("system"), py::arg("mode") = "structured");
  m.def(
      "test1_counts",
      [](const StageSystem& s, const std::vector<double>& eps) {
        std::vector<std::tuple<double, long, double>> rows;
        for (const auto& row : test1_counts(preconditioned_spectrum(s), eps))
          rows.emplace_back(row.eps, row.count, row.ratio);
        return rows;
      },
      py::arg("system"), py::arg("eps"));
  m.def(
      "test2_vectors",
      [](const StageSystem& s) {
        auto v = test2_vectors(s);
        return py::make_tuple(v.E1, v.E2);
      },
      py::arg("system"));
  m.def("tau_from_rule", [](const std::string& rule, int q, double h) { return parse_tau_rule(rule).resolve(q, h); },
        py::arg("rule"), py::arg("q"), py::arg("h"));
}
