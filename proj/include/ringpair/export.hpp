#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include <json.hpp>

#include "ringpair/biphoton.hpp"
#include "ringpair/optimizer.hpp"
#include "ringpair/schmidt.hpp"

namespace ringpair::io {

/// Shortest text that reads back to the same double.
std::string format_number(double x);

/// Writes every line of `text` as a "# " comment.
void write_comment_block(std::ostream& out, std::string_view text);

/// JSA as JSON: grid metadata plus row-major "real" and "imag" arrays
/// (rows follow the idler grid).
nlohmann::json jsa_to_json(const JointSpectralAmplitude& jsa);
JointSpectralAmplitude jsa_from_json(const nlohmann::json& doc);

nlohmann::json grid_to_json(const FrequencyGrid& grid);
FrequencyGrid grid_from_json(const nlohmann::json& doc);

/// Normalized JSI matrix as CSV: first row holds the signal axis, first
/// column the idler axis.
void write_jsi_csv(std::ostream& out, const JointSpectralAmplitude& jsa);

/// Columns: k, lambda_k, lambda_k^2 / sum lambda^2 (k starts at 1).
void write_schmidt_table(std::ostream& out, const SchmidtSpectrum& spectrum);

/// Columns: eta, delta_tau_omega, purity, relative_rate, status. Undefined
/// purities are left empty with status "rate_zero"; failures carry "error".
void write_sweep_csv(std::ostream& out, const SweepResult& result);

void write_trace_csv(std::ostream& out, const OptimumReport& report);

/// Columns: parameter, detuning_omega, phi, purity, relative_rate, status.
void write_sensitivity_csv(std::ostream& out, const SensitivityCurve& curve, std::string_view parameter_name);

nlohmann::json to_json(const SchmidtSpectrum& spectrum);
nlohmann::json to_json(const OptimumReport& report);

} // namespace ringpair::io
