// radau: command line front end for the Radau IIA stage preconditioner.
//
// Exit codes: 0 ok, 2 usage, 3 numerical failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "radau/errors.hpp"
#include "radau/experiments.hpp"
#include "radau/io.hpp"
#include "radau/krylov.hpp"
#include "radau/spectrum.hpp"

namespace {

using json = nlohmann::json;
using radau::format_double;

constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

// nlohmann prints the shortest round-trip form; floats here get 17 digits.
void dump17(const json& j, std::string& out, int depth) {
  const std::string pad(2 * (depth + 1), ' '), close(2 * depth, ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        out += pad + json(key).dump() + ": ";
        dump17(value, out, depth + 1);
      }
      out += "\n" + close + "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        dump17(j[i], out, depth + 1);
      }
      out += "\n" + close + "]";
      return;
    }
    case json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? format_double(v) : "null";
      return;
    }
    default: out += j.dump();
  }
}

struct Output {
  std::string format = "csv";
  std::string path;

  void emit(const std::string& content) const {
    if (path.empty()) {
      std::cout << content;
      std::cout.flush();
    } else {
      radau::write_file_atomic(path, content);
    }
  }
  void emit(const json& j) const {
    std::string text;
    dump17(j, text, 0);
    emit(text + "\n");
  }
  bool is_json() const { return format == "json"; }
};

void add_output(CLI::App* cmd, Output& out, std::vector<std::string> formats = {"csv", "json"}) {
  cmd->add_option("--format", out.format, "Output format")
      ->capture_default_str()
      ->check(CLI::IsMember(formats));
  cmd->add_option("--out,-o", out.path, "Write to this file (atomically) instead of stdout");
}

struct SystemArgs {
  int stages = 2;
  int n_side = 9;
  std::string tau_rule = "matched";
  std::string bc = "full";
  std::string eps = "0.2,0.1,0.05";

  radau::ExperimentConfig config() const {
    radau::ExperimentConfig c;
    c.stages = stages;
    c.n_side = n_side;
    c.tau_rule = radau::parse_tau_rule(tau_rule);
    c.bc = radau::parse_boundary_mode(bc);
    c.eps_list = radau::parse_eps_list(eps);
    c.validate();
    return c;
  }
};

void add_system(CLI::App* cmd, SystemArgs& a, bool with_eps) {
  cmd->add_option("--stages,-q", a.stages, "Number of Radau IIA stages (1..10)")->capture_default_str();
  cmd->add_option("--n-side", a.n_side, "Grid nodes per side; h = 1/(n_side - 1)")->capture_default_str();
  cmd->add_option("--tau-rule", a.tau_rule,
                  "matched (tau^(2q-1) = h^2), c<C> (tau = C h^2), power:<p> (tau = h^p) or explicit:<tau>")
      ->capture_default_str();
  cmd->add_option("--bc", a.bc, "full, dirichlet (eliminated) or constrained")->capture_default_str();
  if (with_eps) cmd->add_option("--eps", a.eps, "Comma separated radii around 1")->capture_default_str();
}

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) r.push_back(m(i, j));
    rows.push_back(r);
  }
  return rows;
}

json vector_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

void csv_matrix(std::ostringstream& os, const std::string& name, const Eigen::MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      os << name << ',' << i + 1 << ',' << j + 1 << ',' << format_double(m(i, j)) << '\n';
}

// ---------------------------------------------------------------------------

void cmd_tableau(int q, const Output& out) {
  const auto t = radau::radau_tableau(q);
  if (out.is_json()) {
    out.emit(json{{"q", q}, {"A", matrix_json(t.A)}, {"b", vector_json(t.b)}, {"c", vector_json(t.c)}});
    return;
  }
  std::ostringstream os;
  if (out.format == "pretty") {
    char buf[64];
    for (int i = 0; i < q; ++i) {
      std::snprintf(buf, sizeof buf, "%12.8f |", t.c(i));
      os << buf;
      for (int j = 0; j < q; ++j) {
        std::snprintf(buf, sizeof buf, " %12.8f", t.A(i, j));
        os << buf;
      }
      os << '\n';
    }
    os << std::string(13, '-') << '+' << std::string(13 * q, '-') << '\n' << std::string(13, ' ') << '|';
    for (int j = 0; j < q; ++j) {
      std::snprintf(buf, sizeof buf, " %12.8f", t.b(j));
      os << buf;
    }
    os << '\n';
  } else {
    os << "row,c";
    for (int j = 1; j <= q; ++j) os << ",a" << j;
    os << '\n';
    for (int i = 0; i < q; ++i) {
      os << i + 1 << ',' << format_double(t.c(i));
      for (int j = 0; j < q; ++j) os << ',' << format_double(t.A(i, j));
      os << '\n';
    }
    os << "b,";
    for (int j = 0; j < q; ++j) os << ',' << format_double(t.b(j));
    os << '\n';
  }
  out.emit(os.str());
}

void cmd_factor(int q, const Output& out) {
  const auto f = radau::factorize(q);
  if (out.is_json()) {
    out.emit(json{{"q", q},
                  {"Ainv", matrix_json(f.Ainv)},
                  {"L", matrix_json(f.L)},
                  {"U", matrix_json(f.U)},
                  {"Uhat", matrix_json(f.Uhat)},
                  {"Linv", matrix_json(f.Linv)},
                  {"Lambda", vector_json(f.Lambda)},
                  {"T", matrix_json(f.T)},
                  {"Tinv", matrix_json(f.Tinv)},
                  {"norms", {{"uhat_2", f.uhat_norm2}, {"uhat_fro", f.uhat_fro}}}});
    return;
  }
  std::ostringstream os;
  os << "matrix,i,j,value\n";
  csv_matrix(os, "Ainv", f.Ainv);
  csv_matrix(os, "L", f.L);
  csv_matrix(os, "U", f.U);
  csv_matrix(os, "Uhat", f.Uhat);
  csv_matrix(os, "Linv", f.Linv);
  csv_matrix(os, "Lambda", f.Lambda);
  csv_matrix(os, "T", f.T);
  csv_matrix(os, "Tinv", f.Tinv);
  os << "uhat_2,1,1," << format_double(f.uhat_norm2) << '\n';
  os << "uhat_fro,1,1," << format_double(f.uhat_fro) << '\n';
  out.emit(os.str());
}

struct FemArgs {
  int n_side = 5;
  std::string bc = "full";
  std::string emit = "stencils";
  std::string matrix = "K";
  double tau = 1.0;
};

radau::Stencil centre_stencil(const radau::SparseMatrix& A, int per_side) {
  radau::Stencil st{};
  const int mid = per_side / 2;
  const int node = mid * per_side + mid;
  for (int dy = -1; dy <= 1; ++dy)
    for (int dx = -1; dx <= 1; ++dx) st[dy + 1][dx + 1] = A.coeff(node, node + dy * per_side + dx);
  return st;
}

void cmd_fem(const FemArgs& a, const Output& out) {
  const auto ops = radau::assemble_q1(a.n_side, radau::parse_boundary_mode(a.bc));
  if (a.emit == "matrix-market") {
    out.emit(radau::matrix_market(a.matrix == "M" ? ops.M : ops.K));
    return;
  }
  if (a.emit == "eigs") {
    const auto mu = radau::zt_eigenvalues(ops, a.tau);
    if (out.is_json()) {
      out.emit(json{{"n_side", a.n_side}, {"n", ops.n}, {"h", ops.h}, {"tau", a.tau}, {"bc", a.bc},
                    {"mu", vector_json(mu)}});
      return;
    }
    std::ostringstream os;
    os << "index,mu\n";
    for (Eigen::Index i = 0; i < mu.size(); ++i) os << i << ',' << format_double(mu(i)) << '\n';
    out.emit(os.str());
    return;
  }
  const int per_side = ops.dofs_per_side();
  if (per_side < 3) throw radau::RangeError("stencils need at least 3 unknowns per side");
  const auto k = centre_stencil(ops.K, per_side);
  const auto m = centre_stencil(ops.M, per_side);
  if (out.is_json()) {
    out.emit(json{{"n_side", a.n_side}, {"h", ops.h}, {"bc", a.bc}, {"K", k}, {"M", m}});
    return;
  }
  std::ostringstream os;
  os << "matrix,dy,dx,value\n";
  for (const auto& [name, st] : {std::pair{"K", k}, std::pair{"M", m}})
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx)
        os << name << ',' << dy << ',' << dx << ',' << format_double(st[dy + 1][dx + 1]) << '\n';
  out.emit(os.str());
}

struct SolveArgs {
  double tol = 1e-10;
  int max_iter = 200;
  int restart = 200;
  std::string block_solver = "auto";
};

int cmd_solve(const SystemArgs& s, const SolveArgs& a, const Output& out) {
  const auto cfg = s.config();
  const auto sys = cfg.build_system();
  radau::PreconditionerOptions popts;
  if (a.block_solver == "cholesky") popts.solver = radau::BlockSolverKind::direct_cholesky;
  if (a.block_solver == "cg") popts.solver = radau::BlockSolverKind::cg_inner;
  const radau::PreconditionerState p(sys, popts);
  // Manufactured solution with a deterministic pattern.
  Eigen::VectorXd xs(sys.size());
  for (Eigen::Index k = 0; k < xs.size(); ++k) xs(k) = std::sin(0.37 * static_cast<double>(k) + 1.0);
  const Eigen::VectorXd rhs = radau::stage_apply(sys, xs);
  const auto rep = radau::gmres(sys, p, rhs, {a.tol, a.max_iter, a.restart});
  const double true_res = (rhs - radau::stage_apply(sys, rep.solution)).norm() / rhs.norm();
  const double err = (rep.solution - xs).norm() / xs.norm();
  if (out.is_json()) {
    out.emit(json{{"q", sys.q()},
                  {"n_side", cfg.n_side},
                  {"n", sys.n()},
                  {"h", cfg.mesh_width()},
                  {"tau", sys.tau()},
                  {"tau_rule", cfg.tau_rule.to_string()},
                  {"bc", radau::to_string(cfg.bc)},
                  {"block_solver", p.solver_kind() == radau::BlockSolverKind::cg_inner ? "cg" : "cholesky"},
                  {"tol", a.tol},
                  {"converged", rep.converged},
                  {"iterations", rep.iterations},
                  {"relative_residual", true_res},
                  {"relative_error", err},
                  {"residual_history", rep.residual_history}});
  } else {
    std::ostringstream os;
    os << "iteration,relative_residual\n";
    for (std::size_t i = 0; i < rep.residual_history.size(); ++i)
      os << i << ',' << format_double(rep.residual_history[i]) << '\n';
    out.emit(os.str());
  }
  if (!rep.converged) {
    std::cerr << "radau solve: GMRES did not reach " << a.tol << " in " << rep.iterations
              << " iterations (residual " << true_res << ")\n";
    return kExitNumerical;
  }
  return 0;
}

void cmd_spectrum(const SystemArgs& s, const std::string& mode, const Output& out) {
  const auto cfg = s.config();
  const auto sys = cfg.build_system();
  const auto rep = radau::preconditioned_spectrum(
      sys, mode == "dense" ? radau::SpectrumMode::dense_oracle : radau::SpectrumMode::structured);
  if (out.is_json()) {
    json eigs = json::array();
    for (std::size_t i = 0; i < rep.eigenvalues.size(); ++i)
      eigs.push_back({{"re", rep.eigenvalues[i].real()},
                      {"im", rep.eigenvalues[i].imag()},
                      {"branch_index", rep.branch_index[i]},
                      {"mu", rep.mu[i]}});
    out.emit(json{{"q", rep.q}, {"n", rep.n}, {"tau", rep.tau}, {"h", rep.h}, {"mode", mode},
                  {"radius", rep.radius}, {"eigenvalues", eigs}});
    return;
  }
  std::ostringstream os;
  os << "re,im,branch_index,mu\n";
  for (std::size_t i = 0; i < rep.eigenvalues.size(); ++i)
    os << format_double(rep.eigenvalues[i].real()) << ',' << format_double(rep.eigenvalues[i].imag())
       << ',' << rep.branch_index[i] << ',' << format_double(rep.mu[i]) << '\n';
  out.emit(os.str());
}

void cmd_radius(int q, const radau::RadiusGrid& grid, const Output& out) {
  if (q < 1 || q > radau::kMaxStages) throw radau::RangeError("stages must lie in [1, 10]");
  if (!(grid.mu_min > 0.0) || !(grid.mu_max >= grid.mu_min) || grid.points < 1)
    throw radau::RangeError("invalid mu grid");
  const auto est = radau::radius_estimate(q, grid);
  if (out.is_json()) {
    out.emit(json{{"q", q}, {"radius", est.radius}, {"argmax_mu", est.argmax_mu},
                  {"grid", {{"mu_min", grid.mu_min}, {"mu_max", grid.mu_max}, {"points", grid.points}}}});
    return;
  }
  out.emit("q,radius,argmax_mu\n" + std::to_string(q) + ',' + format_double(est.radius) + ',' +
           format_double(est.argmax_mu) + '\n');
}

void cmd_test1(const SystemArgs& s, const Output& out) {
  const auto cfg = s.config();
  const auto sys = cfg.build_system();
  const auto rows = radau::test1_counts(radau::preconditioned_spectrum(sys), cfg.eps_list);
  if (out.is_json()) {
    json r = json::array();
    for (const auto& row : rows) r.push_back({{"eps", row.eps}, {"count", row.count}, {"ratio", row.ratio}});
    out.emit(json{{"q", sys.q()}, {"n_side", cfg.n_side}, {"n", sys.n()}, {"dim", sys.size()},
                  {"h", cfg.mesh_width()}, {"tau", sys.tau()}, {"tau_rule", cfg.tau_rule.to_string()},
                  {"bc", radau::to_string(cfg.bc)}, {"rows", r}});
    return;
  }
  std::ostringstream os;
  os << "h,dim,eps,count,ratio\n";
  for (const auto& row : rows)
    os << format_double(cfg.mesh_width()) << ',' << sys.size() << ',' << format_double(row.eps) << ','
       << row.count << ',' << format_double(row.ratio) << '\n';
  out.emit(os.str());
}

void cmd_test2(const SystemArgs& s, const Output& out) {
  const auto cfg = s.config();
  const auto sys = cfg.build_system();
  const auto v = radau::test2_vectors(sys);
  if (out.is_json()) {
    out.emit(json{{"q", sys.q()}, {"n_side", cfg.n_side}, {"h", cfg.mesh_width()}, {"tau", sys.tau()},
                  {"tau_rule", cfg.tau_rule.to_string()}, {"bc", radau::to_string(cfg.bc)},
                  {"max_deviation", v.max_deviation()}, {"E1", v.E1}, {"E2", v.E2}});
    return;
  }
  std::ostringstream os;
  os << "index,E1,E2\n";
  for (std::size_t i = 0; i < v.E1.size(); ++i)
    os << i << ',' << format_double(v.E1[i]) << ',' << format_double(v.E2[i]) << '\n';
  out.emit(os.str());
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      throw radau::RangeError("invalid grid size '" + item + "'");
    }
    if (used != item.size()) throw radau::RangeError("invalid grid size '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw radau::RangeError("n-sides list must not be empty");
  return out;
}

void cmd_distribution(const SystemArgs& s, const std::string& n_sides, double eps, const Output& out) {
  const auto rule = radau::parse_tau_rule(s.tau_rule);
  const auto bc = radau::parse_boundary_mode(s.bc);
  if (s.stages < 1 || s.stages > radau::kMaxStages) throw radau::RangeError("stages must lie in [1, 10]");
  if (!(eps > 0.0)) throw radau::RangeError("eps must be positive");
  const auto sum = radau::distribution_check(s.stages, parse_int_list(n_sides), rule, bc, eps);
  if (out.is_json()) {
    json rows = json::array();
    for (const auto& r : sum.rows)
      rows.push_back({{"n_side", r.n_side}, {"h", r.h}, {"tau", r.tau}, {"dim", r.dim}, {"count", r.count},
                      {"ratio", r.ratio}, {"max_deviation", r.max_deviation}});
    out.emit(json{{"q", s.stages}, {"tau_rule", rule.to_string()}, {"bc", radau::to_string(bc)},
                  {"eps", eps}, {"ratio_nondecreasing", sum.ratio_nondecreasing},
                  {"deviation_decreasing", sum.deviation_decreasing}, {"rows", rows}});
    return;
  }
  std::ostringstream os;
  os << "n_side,h,tau,dim,count,ratio,max_deviation\n";
  for (const auto& r : sum.rows)
    os << r.n_side << ',' << format_double(r.h) << ',' << format_double(r.tau) << ',' << r.dim << ','
       << r.count << ',' << format_double(r.ratio) << ',' << format_double(r.max_deviation) << '\n';
  out.emit(os.str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Radau IIA stage systems with the lower-triangular Kronecker preconditioner"};
  app.require_subcommand(1);

  int stages = 2;
  Output out;

  auto* tableau = app.add_subcommand("tableau", "Butcher tableau of the q-stage Radau IIA method");
  tableau->add_option("--stages,-q", stages, "Number of stages (1..10)")->capture_default_str();
  add_output(tableau, out, {"csv", "json", "pretty"});

  auto* factor = app.add_subcommand("factor", "A^{-1} = L U, L^{-1} and L = T Lambda T^{-1}");
  factor->add_option("--stages,-q", stages, "Number of stages (1..10)")->capture_default_str();
  add_output(factor, out);

  FemArgs fem_args;
  auto* fem = app.add_subcommand("fem", "Q1 mass and stiffness matrices on the unit square");
  fem->add_option("--n-side", fem_args.n_side, "Grid nodes per side")->capture_default_str();
  fem->add_option("--bc", fem_args.bc, "full, dirichlet or constrained")->capture_default_str();
  fem->add_option("--emit", fem_args.emit, "What to write")
      ->capture_default_str()
      ->check(CLI::IsMember({"stencils", "eigs", "matrix-market"}));
  fem->add_option("--matrix", fem_args.matrix, "Matrix for --emit matrix-market")
      ->capture_default_str()
      ->check(CLI::IsMember({"M", "K"}));
  fem->add_option("--tau", fem_args.tau, "Time step for the eigenvalues of tau M^{-1} K")->capture_default_str();
  add_output(fem, out);

  SystemArgs sys_args;
  SolveArgs solve_args;
  auto* solve = app.add_subcommand("solve", "Preconditioned GMRES on a manufactured stage system");
  add_system(solve, sys_args, false);
  solve->add_option("--tol", solve_args.tol, "Relative residual target")->capture_default_str();
  solve->add_option("--max-iter", solve_args.max_iter, "Iteration limit")->capture_default_str();
  solve->add_option("--restart", solve_args.restart, "Krylov dimension per cycle")->capture_default_str();
  solve->add_option("--block-solver", solve_args.block_solver, "Inner block solver")
      ->capture_default_str()
      ->check(CLI::IsMember({"auto", "cholesky", "cg"}));
  solve->add_option("--report", out.format, "Alias of --format")->check(CLI::IsMember({"csv", "json"}));
  add_output(solve, out);

  std::string spec_mode = "structured";
  auto* spectrum = app.add_subcommand("spectrum", "Eigenvalues of the preconditioned stage operator");
  add_system(spectrum, sys_args, false);
  spectrum->add_option("--mode", spec_mode, "structured or dense")
      ->capture_default_str()
      ->check(CLI::IsMember({"structured", "dense"}));
  add_output(spectrum, out);

  radau::RadiusGrid grid;
  auto* radius = app.add_subcommand("radius", "Cluster radius sup_mu max_i |lambda_i(mu)|");
  radius->add_option("--stages,-q", stages, "Number of stages (1..10)")->capture_default_str();
  radius->add_option("--mu-min", grid.mu_min, "Smallest mu of the log grid")->capture_default_str();
  radius->add_option("--mu-max", grid.mu_max, "Largest mu of the log grid")->capture_default_str();
  radius->add_option("--points", grid.points, "Grid points")->capture_default_str();
  add_output(radius, out);

  SystemArgs t1_args;
  t1_args.stages = 3;
  t1_args.n_side = 5;
  t1_args.bc = "constrained";
  auto* test1 = app.add_subcommand("test1", "Eigenvalue counts N(eps) within eps of 1");
  add_system(test1, t1_args, true);
  add_output(test1, out);

  SystemArgs t2_args;
  t2_args.tau_rule = "c1";
  auto* test2 = app.add_subcommand("test2", "Sorted eigenvalue moduli E1 against the symbol prediction E2");
  add_system(test2, t2_args, false);
  add_output(test2, out);

  SystemArgs dist_args;
  dist_args.stages = 3;
  dist_args.bc = "constrained";
  std::string n_sides = "5,9,17";
  double dist_eps = 0.05;
  auto* distribution = app.add_subcommand("distribution", "Refinement study of r(eps, h) and max |E1 - E2|");
  add_system(distribution, dist_args, false);
  distribution->remove_option(distribution->get_option("--n-side"));
  distribution->add_option("--n-sides", n_sides, "Comma separated grid sizes")->capture_default_str();
  distribution->add_option("--eps", dist_eps, "Cluster radius")->capture_default_str();
  add_output(distribution, out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*tableau) {
      if (stages < 1 || stages > radau::kMaxStages) throw radau::RangeError("stages must lie in [1, 10]");
      cmd_tableau(stages, out);
    } else if (*factor) {
      if (stages < 1 || stages > radau::kMaxStages) throw radau::RangeError("stages must lie in [1, 10]");
      cmd_factor(stages, out);
    } else if (*fem) {
      cmd_fem(fem_args, out);
    } else if (*solve) {
      return cmd_solve(sys_args, solve_args, out);
    } else if (*spectrum) {
      cmd_spectrum(sys_args, spec_mode, out);
    } else if (*radius) {
      cmd_radius(stages, grid, out);
    } else if (*test1) {
      cmd_test1(t1_args, out);
    } else if (*test2) {
      cmd_test2(t2_args, out);
    } else if (*distribution) {
      cmd_distribution(dist_args, n_sides, dist_eps, out);
    }
  } catch (const radau::RangeError& e) {
    std::cerr << "radau: " << e.what() << '\n';
    return kExitUsage;
  } catch (const radau::DomainError& e) {
    std::cerr << "radau: " << e.what() << '\n';
    return kExitUsage;
  } catch (const radau::UnsupportedError& e) {
    std::cerr << "radau: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "radau: numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return 0;
}
