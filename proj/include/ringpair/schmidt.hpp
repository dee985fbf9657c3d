#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ringpair/biphoton.hpp"

namespace ringpair {

/// Schmidt coefficients of a discretized JSA.
///
/// The coefficients are the singular values of A * sqrt(dw_i dw_s), so that
/// sum lambda^2 approximates the continuum double integral of |A|^2.
struct SchmidtSpectrum {
    std::vector<double> coefficients; // descending, >= 0
    double purity = 0.0;              // sum lambda^4 / (sum lambda^2)^2
    double schmidt_number = 0.0;      // 1 / purity
    double rate_sum = 0.0;            // sum lambda^2
    /// Sum of lambda^2 dropped by a truncated spectrum (0 for a full one).
    double discarded_weight = 0.0;
};

/// Columns are modes; psi(w) = column / sqrt(dw), so that
/// sum_w conj(psi_j) psi_k dw = delta_jk.
struct SchmidtModes {
    Eigen::MatrixXcd idler_modes;
    Eigen::MatrixXcd signal_modes;
};

struct SchmidtDecomposition {
    SchmidtSpectrum spectrum;
    SchmidtModes modes;

    /// sum_k lambda_k psi_i,k(w_i) psi_s,k(w_s) over the extracted modes.
    Eigen::MatrixXcd reconstruct() const;
};

struct SpectrumOptions {
    /// Keep only the leading coefficients whose discarded lambda^2 stays below
    /// this fraction of the total. 0 keeps the full spectrum. Purity is always
    /// evaluated on the full spectrum.
    double truncation_tolerance = 0.0;
};

/// Full singular-value decomposition with the leading n_modes modes. Each
/// signal mode is phased so its largest-magnitude sample is real positive.
SchmidtDecomposition decompose(const JointSpectralAmplitude& jsa, std::size_t n_modes);

/// Singular values only.
SchmidtSpectrum schmidt_spectrum(const JointSpectralAmplitude& jsa, const SpectrumOptions& options = {});

double purity(const JointSpectralAmplitude& jsa);

/// sum lambda^4 / (sum lambda^2)^2 for any coefficient list.
double purity_from_coefficients(std::span<const double> coefficients);

} // namespace ringpair
