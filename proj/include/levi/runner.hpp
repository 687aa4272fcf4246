#pragma once

/** \file runner.hpp
 *  \brief Subcommand implementations behind the command-line driver, exposed
 *         as library functions so the orchestration logic is testable: each
 *         one consumes a validated RunConfig, writes CSV/JSON artifacts under
 *         the configured output directory and returns a process exit code
 *         (0 on success, 1 on a failed check, 2 on non-contraction).
 */

#include "levi/config.hpp"

#include <iosfwd>

namespace levi {

/// Build the kernel tabulation at the configured pole, export the kernel grid
/// (gamma_frozen, J, gamma per grid point) and the series diagnostics.
int run_kernel(const RunConfig& cfg, std::ostream& log);

/// Run the envelope-estimate suite (all ids, or cfg.suite_ids) and export the
/// fitted constants.
int run_verify(const RunConfig& cfg, std::ostream& log);

/// Solve the Cauchy problem for the configured data and export the solution
/// grid plus a pointwise equation-residual report.
int run_cauchy(const RunConfig& cfg, std::ostream& log);

/// Cross-check the construction against the independent reference solvers:
/// finite differences on the 1-D Euclidean presets, Monte Carlo sampling of
/// the frozen kernel otherwise.
int run_oracle_compare(const RunConfig& cfg, std::ostream& log);

/// Evaluate and certify the modulus shipped by the configured coefficient
/// preset: tabulated integrals, quasi-monotonicity, omega <= C' dini fit.
int run_modulus_check(const RunConfig& cfg, std::ostream& log);

} // namespace levi
