#pragma once

/// CLI command implementations: scheme analysis, simulation runs, and the
/// space-refinement convergence study. Kept library-side so the acceptance
/// checks can drive them directly.

#include <ostream>

#include "apkin/run_config.hpp"
#include "apkin/solver.hpp"

namespace apkin {

struct ConvergenceRow {
  std::size_t nx = 0;
  double error = 0.0;  ///< L1 density error against the reference
  double order = 0.0;  ///< observed order vs the previous row
  bool has_order = false;
};

struct SimulationResult {
  DistributionField field;  ///< final state
  double mass_drift = 0.0;  ///< |total rho(t_final) - total rho(0)| * dx
  std::size_t steps = 0;
};

/// Runs the configured stepper on `nx` cells to cfg.t_final; when `series`
/// is non-null, appends a `t,x,rho,ux,uy,T` CSV block per step (incl. t = 0).
SimulationResult run_simulation(const RunConfig& cfg, std::size_t nx,
                                std::ostream* series = nullptr);

/// L1-in-x error of the coarse cell-center densities against the fine field,
/// restricted to the coarse centers by cubic interpolation of the fine point
/// values (fine.nx must be a multiple of coarse.nx).
double density_l1_error(const DistributionField& coarse, const DistributionField& fine);

/// One row per nx (reference rows excluded in self-convergence mode); runs
/// at different nx execute concurrently.
std::vector<ConvergenceRow> convergence_table(const RunConfig& cfg);

std::string convergence_csv(const std::vector<ConvergenceRow>& rows);

/// Command entry points: write outputs under cfg.out, human-readable report
/// to `out`. Return the process exit code (0 success).
int cmd_analyze(const RunConfig& cfg, std::ostream& out);
int cmd_simulate(const RunConfig& cfg, std::ostream& out);
int cmd_converge(const RunConfig& cfg, std::ostream& out);

/// Validates and dispatches; maps ConfigError to 2 and runtime failures to 1,
/// reporting them on `err`.
int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace apkin
