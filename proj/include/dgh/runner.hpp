#pragma once

#include <string>

#include "dgh/config.hpp"
#include "dgh/solver.hpp"
#include "dgh/verification.hpp"

namespace dgh {

/// Materializes the configured problem (mesh, partition, spaces, data).
ProblemBundle build_problem(const RunConfig& cfg);

NewtonSettings solver_settings(const RunConfig& cfg);

struct RunOutput {
  SolveResult result;
  std::string report_json;
  std::string report_csv;
};

/// Executes the configured loading path; writes VTK snapshots per increment
/// plus CSV/JSON reports when output paths are configured. smoke = true
/// truncates the path to its first increment (used by preset validation).
RunOutput run_config(const RunConfig& cfg, bool smoke = false);

std::string report_to_json(const RunConfig& cfg, const SolveReport& report);
std::string report_to_csv(const SolveReport& report);

}  // namespace dgh
