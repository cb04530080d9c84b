#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "dgh/presets.hpp"
#include "dgh/runner.hpp"
#include "dgh/verification.hpp"

namespace {

dgh::RunConfig load_config(const std::string& path, const std::string& preset_name) {
  if (!preset_name.empty()) return dgh::preset(preset_name);
  std::ifstream in(path);
  if (!in) throw dgh::config_error("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return dgh::RunConfig::parse(ss.str());
}

void apply_override(dgh::RunConfig& cfg, const std::string& key, const std::string& value) {
  if (!value.empty()) cfg.set(key, value);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"BR2 discontinuous Galerkin solver for finite-strain hyperelasticity"};
  app.require_subcommand(1);

  // ------------------------------------------------------------------ solve
  auto* solve = app.add_subcommand("solve", "run a configured loading path");
  std::string config_path, preset_name, mesh_path, linear, out_vtk, out_csv, out_json;
  std::string beta, eps, eta_lbb, eta_lambda, increments, newton_tol, newton_max, quad_degree;
  bool smoke = false, split = false;
  solve->add_option("config", config_path, "configuration file");
  solve->add_option("--preset", preset_name, "use a named preset instead of a file");
  solve->add_option("--mesh", mesh_path, "override the mesh file path");
  solve->add_option("--increments", increments, "loading increments N");
  solve->add_option("--newton-tol", newton_tol, "relative residual drop target");
  solve->add_option("--newton-max-iter", newton_max, "Newton iterations per increment");
  solve->add_option("--linear-solver", linear, "direct | krylov");
  solve->add_option("--beta", beta, "adaptive stabilization weight");
  solve->add_option("--epsilon", eps, "constant stabilization floor");
  solve->add_option("--eta-lbb", eta_lbb, "pressure jump penalty");
  solve->add_option("--eta-lambda", eta_lambda, "multiplier edge jump penalty");
  solve->add_option("--quad-degree", quad_degree, "quadrature degree override");
  solve->add_option("--vtk", out_vtk, "VTK output prefix");
  solve->add_option("--csv", out_csv, "CSV report path");
  solve->add_option("--json", out_json, "JSON report path");
  solve->add_flag("--split-on-failure", split, "bisect failing increments");
  solve->add_flag("--smoke", smoke, "run only the first increment");

  // ------------------------------------------------------------ convergence
  auto* conv = app.add_subcommand("convergence", "manufactured-solution h-refinement study");
  std::string family = "nhk-c", bc = "nitsche", conv_csv;
  int levels = 3;
  std::vector<int> degrees = {1};
  int conv_increments = 3;
  std::string conv_linear = "direct";
  conv->add_option("family", family, "nhk-c | svk-c | nhk-i | svk-i")->required();
  conv->add_option("--levels", levels, "mesh levels starting at 4^3 (doubling)");
  conv->add_option("--degrees", degrees, "polynomial degrees")->delimiter(',');
  conv->add_option("--bc", bc, "nitsche | lagrange");
  conv->add_option("--increments", conv_increments, "loading increments per level");
  conv->add_option("--linear-solver", conv_linear, "direct | krylov");
  conv->add_option("--csv", conv_csv, "write the table to this CSV file");

  // ----------------------------------------------------------------- preset
  auto* pre = app.add_subcommand("preset", "list or show benchmark presets");
  std::string action, which;
  pre->add_option("action", action, "list | show")->required();
  pre->add_option("name", which, "preset name (for show)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) {
      dgh::RunConfig cfg = load_config(config_path, preset_name);
      apply_override(cfg, "mesh.path", mesh_path);
      apply_override(cfg, "solver.increments", increments);
      apply_override(cfg, "solver.newton_tol", newton_tol);
      apply_override(cfg, "solver.newton_max_iter", newton_max);
      apply_override(cfg, "solver.linear", linear);
      apply_override(cfg, "stab.beta", beta);
      apply_override(cfg, "stab.epsilon", eps);
      apply_override(cfg, "stab.eta_lbb", eta_lbb);
      apply_override(cfg, "stab.eta_lambda", eta_lambda);
      apply_override(cfg, "quad.degree", quad_degree);
      apply_override(cfg, "output.vtk", out_vtk);
      apply_override(cfg, "output.csv", out_csv);
      apply_override(cfg, "output.json", out_json);
      if (split) cfg.set("solver.split_on_failure", 1);

      const dgh::RunOutput out = dgh::run_config(cfg, smoke);
      const auto& rep = out.result.report;
      if (rep.converged) {
        std::cout << "converged: " << rep.increments.size() << " increment(s), "
                  << rep.total_newton_iterations() << " Newton iteration(s), "
                  << rep.wall_ms / 1000.0 << " s\n";
      } else {
        std::cout << "FAILED: " << rep.failure << "\n";
        std::cout << "reached " << rep.reached_fraction * 100 << "% of the loading path\n";
      }
      std::cout << out.report_csv;
      return rep.converged ? 0 : 2;
    }

    if (*conv) {
      dgh::LawTag law;
      dgh::Regime regime;
      if (family == "nhk-c") { law = dgh::LawTag::NHK_C; regime = dgh::Regime::Compressible; }
      else if (family == "svk-c") { law = dgh::LawTag::SVK; regime = dgh::Regime::Compressible; }
      else if (family == "nhk-i") { law = dgh::LawTag::NHK_I; regime = dgh::Regime::Incompressible; }
      else if (family == "svk-i") { law = dgh::LawTag::SVK; regime = dgh::Regime::Incompressible; }
      else throw dgh::config_error("unknown family '" + family + "'");

      const dgh::LameParams prm{1.0, 10.0};
      const dgh::ManufacturedCase mc = regime == dgh::Regime::Compressible
                                           ? dgh::ManufacturedCase::compressible(law, prm)
                                           : dgh::ManufacturedCase::incompressible(law, prm);
      dgh::BCKind mech = bc == "lagrange" ? dgh::BCKind::DirichletLagrange
                                          : dgh::BCKind::DirichletNitsche;
      if (regime == dgh::Regime::Incompressible && mech == dgh::BCKind::DirichletLagrange)
        throw dgh::config_error("Lagrange multiplier BCs are not enabled for the "
                                "incompressible regime");
      dgh::NewtonSettings settings;
      settings.linear = conv_linear == "krylov" ? dgh::LinearSolverMode::Krylov
                                                : dgh::LinearSolverMode::Direct;
      dgh::StabilizationParams stab;
      stab.beta = 1;
      stab.eps = 0;

      std::ostringstream all;
      for (int k : degrees) {
        std::vector<int> cells;
        for (int l = 0; l < levels; ++l) cells.push_back(4 << l);
        const dgh::ConvergenceTable table = dgh::run_manufactured_convergence(
            mc, k, mech, cells, conv_increments, settings, stab);
        all << "# family " << family << ", degree " << k << ", bc " << bc << "\n"
            << table.to_csv();
        std::cout << all.str();
      }
      if (!conv_csv.empty()) {
        std::ofstream f(conv_csv);
        f << all.str();
      }
      return 0;
    }

    if (*pre) {
      if (action == "list") {
        for (const auto& n : dgh::preset_names()) std::cout << n << "\n";
        return 0;
      }
      if (action == "show") {
        std::cout << dgh::preset(which).serialize();
        return 0;
      }
      throw dgh::config_error("preset action must be 'list' or 'show'");
    }
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 0;
}
