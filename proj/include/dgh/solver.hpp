#pragma once

#include <Eigen/Sparse>
#include <functional>
#include <string>
#include <vector>

#include "dgh/assembly.hpp"
#include "dgh/problem.hpp"

namespace dgh {

enum class LinearSolverMode { Direct, Krylov };

struct LinearSolveInfo {
  int iterations = 0;  // 0 for direct solves
  double residual = 0;
};

/// Solves J x = rhs. Direct mode uses a sparse LU factorization; krylov mode
/// a restarted GMRES with incomplete-LU preconditioning (1e-8 relative drop),
/// falling back to the direct solver on stagnation when the size permits.
Eigen::VectorXd linear_solve(const Eigen::SparseMatrix<double>& J, const Eigen::VectorXd& rhs,
                             LinearSolverMode mode, LinearSolveInfo* info = nullptr);

struct NewtonSettings {
  double tol = 1e-10;          // relative residual drop per increment
  int max_iterations = 8;
  LinearSolverMode linear = LinearSolverMode::Direct;
  bool split_on_failure = false;  // bisect a failing increment
  int max_splits = 8;             // bisection depth bound
};

struct IncrementReport {
  int index = 0;
  double fraction = 0;  // loading fraction reached at the END of the increment
  int newton_iterations = 0;
  std::vector<double> residual_history;       // including the initial residual
  std::vector<int> linear_iterations;         // per Newton iteration
  EtaStats eta;
  double wall_ms = 0;
};

struct SolveReport {
  bool converged = false;
  std::string failure;       // human-readable reason when !converged
  double reached_fraction = 0;
  int failed_increment = -1;
  std::vector<IncrementReport> increments;
  double wall_ms = 0;

  int total_newton_iterations() const {
    int n = 0;
    for (const auto& inc : increments) n += inc.newton_iterations;
    return n;
  }
};

struct SolveResult {
  Eigen::VectorXd state;
  SolveReport report;
};

/// Called after every converged increment with the accepted state.
using IncrementObserver =
    std::function<void(int index, double fraction, const Eigen::VectorXd& state)>;

/// Incremental load method: solves the problem at loading fractions i/N,
/// warm-starting each increment from the previous solution (initial state
/// u = 0, p = 0, lambda = 0 unless a start state is supplied).
SolveResult incremental_solve(const Problem& pb, int increments, const NewtonSettings& settings,
                              const Eigen::VectorXd* start = nullptr,
                              const IncrementObserver& observer = nullptr);

/// One Newton loop at fixed loading fraction t with frozen penalties.
/// Returns true on convergence; updates state in place and appends to report.
bool newton_solve(const Problem& pb, Eigen::VectorXd& state, double t,
                  const std::vector<double>& eta, const NewtonSettings& settings,
                  IncrementReport& report);

}  // namespace dgh
