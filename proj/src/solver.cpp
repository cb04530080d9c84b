#include "dgh/solver.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>
#include <chrono>
#include <sstream>
#include <unsupported/Eigen/IterativeSolvers>

#include "dgh/errors.hpp"

namespace dgh {

namespace {

double now_ms() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch()).count();
}

Eigen::VectorXd direct_solve(const Eigen::SparseMatrix<double>& J, const Eigen::VectorXd& rhs) {
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(J);
  lu.factorize(J);
  if (lu.info() != Eigen::Success)
    throw numeric_error("sparse LU factorization failed: " + lu.lastErrorMessage());
  Eigen::VectorXd x = lu.solve(rhs);
  if (lu.info() != Eigen::Success) throw numeric_error("sparse LU solve failed");
  return x;
}

bool newton_loop(const Problem& pb, Eigen::VectorXd& state, double t,
                 std::vector<double> eta, bool refresh_eta, const NewtonSettings& settings,
                 IncrementReport& report) {
  Eigen::VectorXd r = assemble_residual(pb, state, t, eta);
  const double r0 = r.norm();
  report.residual_history.push_back(r0);
  const double floor = 1e-14 * (1.0 + state.norm());
  if (r0 <= floor) return true;  // zero loads: nothing to do

  for (int it = 0; it < settings.max_iterations; ++it) {
    AssembledSystem sys = assemble_system(pb, state, t, eta, true);
    LinearSolveInfo lin;
    const Eigen::VectorXd dw = linear_solve(sys.jacobian, -sys.residual, settings.linear, &lin);
    state += dw;
    ++report.newton_iterations;
    report.linear_iterations.push_back(lin.iterations);

    if (refresh_eta) eta = compute_face_eta(pb, state, t, &report.eta);
    r = assemble_residual(pb, state, t, eta);
    report.residual_history.push_back(r.norm());
    if (r.norm() / r0 <= settings.tol || r.norm() <= floor) return true;
  }
  return false;
}

}  // namespace

Eigen::VectorXd linear_solve(const Eigen::SparseMatrix<double>& J, const Eigen::VectorXd& rhs,
                             LinearSolverMode mode, LinearSolveInfo* info) {
  if (info) *info = {};
  if (mode == LinearSolverMode::Direct) return direct_solve(J, rhs);

  Eigen::GMRES<Eigen::SparseMatrix<double>, Eigen::IncompleteLUT<double>> gmres;
  gmres.setTolerance(1e-8);
  gmres.set_restart(120);
  gmres.setMaxIterations(1200);
  gmres.preconditioner().setDroptol(1e-5);
  gmres.preconditioner().setFillfactor(60);
  bool ok = false;
  Eigen::VectorXd x;
  try {
    gmres.compute(J);
    if (gmres.info() == Eigen::Success) {
      x = gmres.solve(rhs);
      ok = gmres.info() == Eigen::Success;
    }
  } catch (const std::exception&) {
    ok = false;
  }
  if (ok) {
    if (info) {
      info->iterations = static_cast<int>(gmres.iterations());
      info->residual = gmres.error();
    }
    return x;
  }
  // stagnation: fall back to the direct factorization when affordable
  if (J.rows() <= 300000) return direct_solve(J, rhs);
  throw numeric_error("krylov solver stagnated and the system is too large for LU fallback");
}

bool newton_solve(const Problem& pb, Eigen::VectorXd& state, double t,
                  const std::vector<double>& eta, const NewtonSettings& settings,
                  IncrementReport& report) {
  return newton_loop(pb, state, t, eta, /*refresh_eta=*/false, settings, report);
}

SolveResult incremental_solve(const Problem& pb, int increments, const NewtonSettings& settings,
                              const Eigen::VectorXd* start, const IncrementObserver& observer) {
  if (increments < 1) throw config_error("the loading path needs at least one increment");
  if (pb.incompressible() && !pb.partition->has_lagrange()) {
    bool any_neumann = false;
    for (int f : pb.mesh->boundary_faces)
      if (pb.partition->face_kind[f] == BCKind::Neumann) any_neumann = true;
    if (!any_neumann)
      throw unsupported_error(
          "incompressible problem with only Nitsche-Dirichlet boundaries: the pressure "
          "level is undetermined");
  }

  SolveResult out;
  out.state = start ? *start : Eigen::VectorXd::Zero(pb.dofs.total);
  const double t_start = now_ms();

  // worklist of loading sub-intervals; bisection pushes two halves
  struct Step {
    double from, to;
    int depth;
  };
  std::vector<Step> work;
  for (int i = increments; i >= 1; --i)
    work.push_back({(i - 1) / static_cast<double>(increments),
                    i / static_cast<double>(increments), 0});

  int index = 0;
  double reached = 0;
  while (!work.empty()) {
    const Step step = work.back();
    work.pop_back();
    ++index;

    IncrementReport inc;
    inc.index = index;
    inc.fraction = step.to;
    const double inc_start = now_ms();

    Eigen::VectorXd trial = out.state;
    bool ok = false;
    std::string why;
    try {
      const std::vector<double> eta = compute_face_eta(pb, trial, step.to, &inc.eta);
      ok = newton_loop(pb, trial, step.to, eta, pb.stab.refresh_each_iteration, settings, inc);
      if (!ok) why = "Newton did not reach the residual drop target";
    } catch (const invalid_state_error& err) {
      ok = false;
      why = err.what();
    }

    inc.wall_ms = now_ms() - inc_start;
    out.report.increments.push_back(inc);

    if (ok) {
      out.state = trial;
      reached = step.to;
      if (observer) observer(index, step.to, out.state);
      continue;
    }
    if (settings.split_on_failure && step.depth < settings.max_splits) {
      const double mid = 0.5 * (step.from + step.to);
      work.push_back({mid, step.to, step.depth + 1});
      work.push_back({step.from, mid, step.depth + 1});
      continue;
    }
    std::ostringstream os;
    os << "failed to converge when reaching " << static_cast<int>(step.to * 100 + 0.5)
       << "% of the loading path";
    if (!why.empty()) os << " (" << why << ")";
    out.report.converged = false;
    out.report.failure = os.str();
    out.report.reached_fraction = reached;
    out.report.failed_increment = index;
    out.report.wall_ms = now_ms() - t_start;
    return out;
  }

  out.report.converged = true;
  out.report.reached_fraction = 1.0;
  out.report.wall_ms = now_ms() - t_start;
  return out;
}

}  // namespace dgh
