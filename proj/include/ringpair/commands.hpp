#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "ringpair/config.hpp"

namespace ringpair {

/// Process exit codes of the command-line tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitValidation = 2,
    kExitInfeasible = 3,
    kExitNumericalGuard = 4,
};

struct CommandOptions {
    /// Overrides output.directory when non-empty.
    std::filesystem::path out_dir;
    /// Truncation guard raises instead of warning.
    bool strict = false;
};

struct CommandResult {
    int exit_code = kExitOk;
    std::vector<std::filesystem::path> files;
    nlohmann::json summary;
};

/// Incident, lineshape and in-resonator spectra plus the temporal picture,
/// for the configured pump and the single-pulse reference.
CommandResult cmd_spectrum(const RunConfig& config, const CommandOptions& options = {});

/// JSI matrix, Schmidt spectrum and leading modes; purity in the summary.
CommandResult cmd_jsi(const RunConfig& config, const CommandOptions& options = {});

/// Purity and R/R_0 over the configured (eta, delta_tau) grid.
CommandResult cmd_sweep(const RunConfig& config, const CommandOptions& options = {});

/// Rate-constrained optima versus (tau_p Omega)^-1. Exits with
/// kExitInfeasible when any optimization has no feasible point.
CommandResult cmd_optimize(const RunConfig& config, const CommandOptions& options = {});

/// Purity versus resonance wavelength shift (per quality factor) or phase.
CommandResult cmd_sensitivity(const RunConfig& config, const CommandOptions& options = {});

/// Maps a library exception to its exit code.
int exit_code_for(const std::exception& e);

} // namespace ringpair
