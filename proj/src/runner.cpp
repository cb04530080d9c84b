#include "dgh/runner.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "dgh/errors.hpp"
#include "dgh/expr.hpp"
#include "dgh/vtk.hpp"

namespace dgh {

namespace {

std::vector<double> split_numbers(const std::string& s) {
  std::istringstream is(s);
  std::vector<double> out;
  double v;
  while (is >> v) out.push_back(v);
  return out;
}

std::vector<std::string> split_exprs(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ';') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

Mesh build_mesh(const RunConfig& cfg) {
  const std::string kind = cfg.get("mesh.kind", "box");
  if (kind == "box") {
    const int dim = cfg.get_int("mesh.dim", 3);
    const auto cells = split_numbers(cfg.require("mesh.cells"));
    const auto box = split_numbers(cfg.get("mesh.box", dim == 2 ? "0 1 0 1" : "0 1 0 1 0 1"));
    if (static_cast<int>(cells.size()) < dim || static_cast<int>(box.size()) < 2 * dim)
      throw config_error("mesh.cells / mesh.box have too few entries");
    std::array<int, 3> n = {1, 1, 1};
    Eigen::Vector3d lo = Eigen::Vector3d::Zero(), hi = Eigen::Vector3d::Ones();
    for (int d = 0; d < dim; ++d) {
      n[d] = static_cast<int>(cells[d]);
      lo[d] = box[2 * d];
      hi[d] = box[2 * d + 1];
    }
    return build_cartesian_mesh(dim, n, lo, hi);
  }
  if (kind == "tri-grid") {
    const auto cells = split_numbers(cfg.require("mesh.cells"));
    const auto box = split_numbers(cfg.get("mesh.box", "0 1 0 1"));
    if (cells.size() < 2 || box.size() < 4)
      throw config_error("tri-grid needs mesh.cells = nx ny and mesh.box = x0 x1 y0 y1");
    return build_triangulated_rectangle(static_cast<int>(cells[0]), static_cast<int>(cells[1]),
                                        {box[0], box[2]}, {box[1], box[3]});
  }
  if (kind == "cylinder-shell") {
    const auto p = split_numbers(cfg.require("mesh.cylinder"));
    if (p.size() < 6)
      throw config_error("mesh.cylinder = r_inner r_outer height n_radial n_theta n_axial");
    return build_cylinder_shell_tets(p[0], p[1], p[2], static_cast<int>(p[3]),
                                     static_cast<int>(p[4]), static_cast<int>(p[5]));
  }
  if (kind == "file") {
    const std::string path = cfg.require("mesh.path");
    std::ifstream in(path);
    if (!in) throw config_error("cannot open mesh file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return import_mesh(ss.str());
  }
  throw config_error("unknown mesh.kind '" + kind + "'");
}

BCKind bc_kind_from(const std::string& s) {
  if (s == "dirichlet_nitsche") return BCKind::DirichletNitsche;
  if (s == "dirichlet_lagrange") return BCKind::DirichletLagrange;
  if (s == "neumann") return BCKind::Neumann;
  throw config_error("unknown boundary type '" + s + "'");
}

/// Vector of expressions -> (X, t) function. Components without an explicit
/// t reference are scaled by the loading fraction (proportional loading).
SpaceTimeFn make_vector_fn(const std::vector<std::string>& comps, int dim) {
  std::vector<Expr> exprs;
  std::vector<bool> timed;
  for (const auto& c : comps) {
    exprs.push_back(Expr::parse(c));
    timed.push_back(exprs.back().uses_time());
  }
  return [exprs, timed, dim](const Eigen::Vector3d& X, double t) -> Eigen::Vector3d {
    Eigen::Vector3d out = Eigen::Vector3d::Zero();
    for (int c = 0; c < dim && c < static_cast<int>(exprs.size()); ++c) {
      const double v = exprs[c].eval(X.x(), X.y(), X.z(), t);
      out[c] = timed[c] ? v : t * v;
    }
    return out;
  };
}

}  // namespace

ProblemBundle build_problem(const RunConfig& cfg) {
  ProblemBundle b;
  b.mesh = std::make_unique<Mesh>(build_mesh(cfg));
  const int dim = b.mesh->dim;
  const int degree = cfg.get_int("degree", 1);

  // material
  const std::string regime_s = cfg.get("regime", "compressible");
  const Regime regime =
      regime_s == "incompressible" ? Regime::Incompressible : Regime::Compressible;
  const LawTag law = law_from_name(cfg.require("law"));
  LameParams prm;
  if (cfg.has("young") || cfg.has("poisson"))
    prm = lame_from_young_poisson(cfg.require_num("young"), cfg.require_num("poisson"));
  else {
    prm.mu = cfg.require_num("mu");
    prm.lambda = cfg.get_num("lambda", 0.0);
  }
  if (prm.mu <= 0) throw config_error("shear modulus mu must be positive");
  if (law == LawTag::NHK_I && regime != Regime::Incompressible)
    throw config_error("NHK-I requires the incompressible regime");
  if (law == LawTag::NHK_CAV && regime == Regime::Incompressible)
    throw config_error("NHK-CAV is a compressible-only law");
  if (law == LawTag::NHK_C && regime == Regime::Incompressible)
    throw config_error("use nhk-i for the incompressible neo-Hookean law");

  // manufactured data short-circuit
  const std::string mcase = cfg.get("case", "");
  std::optional<ManufacturedCase> mc;
  if (mcase == "manufactured") {
    if (dim != 3) throw config_error("manufactured cases are 3D");
    mc = regime == Regime::Incompressible ? ManufacturedCase::incompressible(law, prm)
                                          : ManufacturedCase::compressible(law, prm);
  } else if (!mcase.empty()) {
    throw config_error("unknown case '" + mcase + "'");
  }

  // boundary regions
  std::vector<BoundaryRegionSpec> specs;
  std::vector<BCRegionData> data;
  for (const std::string& name : cfg.group_names("bc")) {
    const std::string base = "bc." + name;
    BoundaryRegionSpec spec;
    spec.name = name;
    spec.kind = bc_kind_from(cfg.require(base + ".type"));
    const std::string where = cfg.require(base + ".where");
    if (where.rfind("tag:", 0) == 0) {
      const std::string tag = where.substr(4);
      spec.matches = [tag](const Eigen::Vector3d&, const std::string& t) { return t == tag; };
    } else {
      const Expr pred = Expr::parse(where);
      spec.matches = [pred](const Eigen::Vector3d& c, const std::string&) {
        return pred.eval(c.x(), c.y(), c.z(), 0.0) != 0.0;
      };
    }

    BCRegionData bd;
    bd.name = name;
    bd.kind = spec.kind;
    const std::string value = cfg.get(base + ".value", "0");
    if (value == "exact") {
      if (!mc) throw config_error("bc." + name + ".value = exact needs case = manufactured");
      const ManufacturedCase m = *mc;
      if (spec.kind == BCKind::Neumann)
        bd.traction = [m](const Eigen::Vector3d& X, const Eigen::Vector3d& n, double t) {
          return Eigen::Vector3d(t * m.traction(X, n));
        };
      else
        bd.value = [m](const Eigen::Vector3d& X, double t) {
          return Eigen::Vector3d(t * m.displacement<double>(X));
        };
    } else {
      const SpaceTimeFn fn = make_vector_fn(split_exprs(value), dim);
      if (spec.kind == BCKind::Neumann)
        bd.traction = [fn](const Eigen::Vector3d& X, const Eigen::Vector3d&, double t) {
          return fn(X, t);
        };
      else
        bd.value = fn;
    }
    specs.push_back(std::move(spec));
    data.push_back(std::move(bd));
  }
  if (specs.empty()) throw config_error("no boundary regions configured (bc.<name>.*)");

  const double patch_angle = cfg.get_num("stab.patch_angle", 30.0);
  b.partition =
      std::make_unique<BoundaryPartition>(classify_boundary(*b.mesh, specs, patch_angle));

  if (regime == Regime::Incompressible && b.partition->has_lagrange() &&
      cfg.get_int("allow_incompressible_lagrange", 0) == 0)
    throw config_error(
        "Lagrange-multiplier Dirichlet conditions are disabled in the incompressible "
        "regime by default (set allow_incompressible_lagrange = 1 to override)");

  const int quad_degree = cfg.get_int("quad.degree", -1);
  b.ctx = std::make_unique<DGContext>(*b.mesh, *b.partition, degree, quad_degree);

  Problem& pb = b.problem;
  pb.mesh = b.mesh.get();
  pb.partition = b.partition.get();
  pb.ctx = b.ctx.get();
  pb.regime = regime;
  pb.law = law;
  pb.material = prm;
  pb.stab.beta = cfg.get_num("stab.beta", 1.0);
  pb.stab.eps = cfg.get_num("stab.epsilon", 0.0);
  pb.stab.eta_lbb = cfg.get_num("stab.eta_lbb", 1.0);
  pb.stab.eta_lambda = cfg.get_num("stab.eta_lambda", 1.0);
  pb.stab.refresh_each_iteration = cfg.get_int("stab.refresh", 0) != 0;

  const double rho = cfg.get_num("rho", 1.0);
  if (mc) {
    const ManufacturedCase m = *mc;
    pb.body_force = [m](const Eigen::Vector3d& X, double t) {
      return Eigen::Vector3d(t * m.forcing(X));
    };
  } else {
    const SpaceTimeFn fn = make_vector_fn(split_exprs(cfg.get("forcing", "0; 0; 0")), dim);
    pb.body_force = [fn, rho](const Eigen::Vector3d& X, double t) {
      return Eigen::Vector3d(rho * fn(X, t));
    };
  }
  pb.regions = std::move(data);
  pb.init_spaces();
  return b;
}

NewtonSettings solver_settings(const RunConfig& cfg) {
  NewtonSettings st;
  st.tol = cfg.get_num("solver.newton_tol", 1e-10);
  st.max_iterations = cfg.get_int("solver.newton_max_iter", 8);
  const std::string lin = cfg.get("solver.linear", "direct");
  if (lin == "direct") st.linear = LinearSolverMode::Direct;
  else if (lin == "krylov") st.linear = LinearSolverMode::Krylov;
  else throw config_error("solver.linear must be 'direct' or 'krylov'");
  st.split_on_failure = cfg.get_int("solver.split_on_failure", 0) != 0;
  return st;
}

std::string report_to_json(const RunConfig& cfg, const SolveReport& report) {
  nlohmann::json j;
  j["config"] = nlohmann::json::object();
  for (const auto& [k, v] : cfg.entries()) j["config"][k] = v;
  j["converged"] = report.converged;
  j["failure"] = report.failure;
  j["reached_fraction"] = report.reached_fraction;
  j["wall_ms"] = report.wall_ms;
  j["total_newton_iterations"] = report.total_newton_iterations();
  j["increments"] = nlohmann::json::array();
  for (const auto& inc : report.increments) {
    nlohmann::json ji;
    ji["index"] = inc.index;
    ji["fraction"] = inc.fraction;
    ji["newton_iterations"] = inc.newton_iterations;
    ji["residual_history"] = inc.residual_history;
    ji["linear_iterations"] = inc.linear_iterations;
    ji["eta"] = {{"min", inc.eta.min}, {"mean", inc.eta.mean}, {"max", inc.eta.max},
                 {"lambda_max", inc.eta.lambda_max}};
    ji["wall_ms"] = inc.wall_ms;
    j["increments"].push_back(ji);
  }
  return j.dump(2);
}

std::string report_to_csv(const SolveReport& report) {
  std::ostringstream os;
  os << "increment,fraction,newton_iterations,linear_iterations,residual_start,"
        "residual_end,eta_min,eta_mean,eta_max,wall_ms\n";
  os << std::scientific << std::setprecision(6);
  for (const auto& inc : report.increments) {
    int lin = 0;
    for (int v : inc.linear_iterations) lin += v;
    const double r0 = inc.residual_history.empty() ? 0.0 : inc.residual_history.front();
    const double r1 = inc.residual_history.empty() ? 0.0 : inc.residual_history.back();
    os << inc.index << "," << inc.fraction << "," << inc.newton_iterations << "," << lin << ","
       << r0 << "," << r1 << "," << inc.eta.min << "," << inc.eta.mean << "," << inc.eta.max
       << "," << inc.wall_ms << "\n";
  }
  return os.str();
}

RunOutput run_config(const RunConfig& cfg, bool smoke) {
  ProblemBundle b = build_problem(cfg);
  NewtonSettings settings = solver_settings(cfg);
  int increments = cfg.get_int("solver.increments", 1);
  if (smoke) increments = std::max(1, increments);  // smoke mode runs only the first step

  const std::string vtk_prefix = cfg.get("output.vtk", "");
  const int vtk_every = cfg.get_int("output.vtk_every", 1);

  RunOutput out;
  if (smoke) {
    // first increment only, at fraction 1/N
    Eigen::VectorXd state = Eigen::VectorXd::Zero(b.problem.dofs.total);
    IncrementReport inc;
    inc.index = 1;
    inc.fraction = 1.0 / increments;
    const std::vector<double> eta =
        compute_face_eta(b.problem, state, inc.fraction, &inc.eta);
    const bool ok = newton_solve(b.problem, state, inc.fraction, eta, settings, inc);
    out.result.state = state;
    out.result.report.converged = ok;
    out.result.report.reached_fraction = ok ? inc.fraction : 0.0;
    out.result.report.increments.push_back(inc);
    if (!ok) out.result.report.failure = "smoke increment did not converge";
  } else {
    IncrementObserver observer;
    if (!vtk_prefix.empty()) {
      std::filesystem::path p(vtk_prefix);
      if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
      const Problem& pb = b.problem;
      observer = [&pb, vtk_prefix, vtk_every](int index, double fraction,
                                              const Eigen::VectorXd& state) {
        if (vtk_every <= 0 || index % vtk_every != 0) return;
        const std::vector<double> eta = compute_face_eta(pb, state, fraction);
        std::ostringstream name;
        name << vtk_prefix << "_" << std::setfill('0') << std::setw(4) << index << ".vtk";
        export_vtk(pb, state, &eta, name.str());
      };
    }
    out.result = incremental_solve(b.problem, increments, settings, nullptr, observer);
  }

  if (!vtk_prefix.empty()) {
    std::filesystem::path p(vtk_prefix);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    const std::vector<double> eta =
        compute_face_eta(b.problem, out.result.state, out.result.report.reached_fraction);
    export_vtk(b.problem, out.result.state, &eta, vtk_prefix + "_final.vtk");
  }
  out.report_json = report_to_json(cfg, out.result.report);
  out.report_csv = report_to_csv(out.result.report);
  const std::string json_path = cfg.get("output.json", "");
  if (!json_path.empty()) {
    std::ofstream f(json_path);
    f << out.report_json;
  }
  const std::string csv_path = cfg.get("output.csv", "");
  if (!csv_path.empty()) {
    std::ofstream f(csv_path);
    f << out.report_csv;
  }
  return out;
}

}  // namespace dgh
