#pragma once

#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include "ringpair/error.hpp"
#include "ringpair/grid.hpp"

namespace ringpair {

using Complex = std::complex<double>;

/// A Lorentzian ring resonance.
///
/// omega0 and detuning share the unit of the frequency grids they are
/// evaluated on. In normalized units (pump linewidth = 1) a resonance with
/// loaded quality factor Q has omega0 = Q.
struct Resonance {
    double omega0 = 1.0;
    double q_loaded = 1.0;
    double detuning = 0.0;

    /// Full width at half maximum of |l|^2, omega0 / Q.
    double linewidth() const { return omega0 / q_loaded; }
    double half_linewidth() const { return 0.5 * linewidth(); }

    void validate() const;

    /// Resonance whose linewidth equals `linewidth` in the caller's unit.
    static Resonance with_linewidth(double linewidth, double q_loaded, double detuning = 0.0);
};

enum class PumpShape { SingleGaussian, DualPulse, Target };

/// Incident pump envelope description.
///
/// DualPulse: alpha(w) = [sqrt(eta) + exp(i phi) exp(-i dtau w) sqrt(1 - eta)] exp(-tau^2 w^2 / 2).
/// phi = pi gives the two pulses opposite sign; dtau > 0 delays the second pulse.
/// Target: alpha(w) = l^{-1}(w) exp(-w^2 / 2 sigma^2) for the supplied resonance.
struct PumpSpec {
    PumpShape shape = PumpShape::SingleGaussian;
    double tau_p = 1.0;
    double eta = 1.0;
    double delta_tau = 0.0;
    double phi = std::numbers::pi;
    double sigma = 0.0;

    void validate() const;

    static PumpSpec single(double tau_p);
    static PumpSpec dual(double tau_p, double eta, double delta_tau, double phi = std::numbers::pi);
    /// The tau_p of a target pump only sizes default grids; it defaults to 1/sigma.
    static PumpSpec target(double sigma, double tau_p = 0.0);
};

const char* to_string(PumpShape shape);
PumpShape pump_shape_from_string(const std::string& name);

/// Sampled complex function on a frequency grid.
struct ComplexSpectrum {
    FrequencyGrid grid;
    std::vector<Complex> values;

    ComplexSpectrum(FrequencyGrid g, std::vector<Complex> v);
    explicit ComplexSpectrum(FrequencyGrid g);

    /// sum |v|^2 * spacing
    double energy() const;
    double peak_magnitude() const;
};

/// Uniform time grid with complex samples.
struct TemporalField {
    double t_first = 0.0;
    double dt = 1.0;
    std::vector<Complex> values;

    double time(std::size_t n) const { return t_first + dt * static_cast<double>(n); }
    std::vector<double> times() const;

    /// 2 pi * sum |v|^2 * dt, directly comparable with ComplexSpectrum::energy().
    double energy() const;
};

/// l(w) = 1 / (omega0 / (2 Q) + i (w - detuning)).
ComplexSpectrum lorentzian_lineshape(const FrequencyGrid& grid, const Resonance& res);

/// Incident envelope for the Gaussian shapes. Target requires a resonance and
/// throws ConfigError through this overload.
ComplexSpectrum pump_envelope(const FrequencyGrid& grid, const PumpSpec& pump);
ComplexSpectrum pump_envelope(const FrequencyGrid& grid, const PumpSpec& pump, const Resonance& res);

/// l^{-1}(w) exp(-w^2 / 2 sigma^2). l^{-1} is a first-order polynomial, so
/// no regularization is needed anywhere on the grid.
ComplexSpectrum target_envelope(const FrequencyGrid& grid, const Resonance& res, double sigma);

/// Amplitude factor that gives the incident pulse unit energy.
///
/// For the Gaussian shapes this is the factor of a single unit-energy Gaussian
/// of duration tau_p, applied to both terms of a dual pulse: each pulse carries
/// its weight (eta, 1 - eta) of the unit energy, and light rejected by the
/// interference is not counted. For Target the actual envelope is normalized.
double unit_energy_amplitude(const PumpSpec& pump, const Resonance& pump_res);

/// A_p(w) = alpha_p(w) l_p(w) on the envelope's grid.
ComplexSpectrum in_resonator_field(const ComplexSpectrum& envelope, const Resonance& res);

struct ConvolutionOptions {
    /// |A_p| at either grid edge must stay below this fraction of its peak.
    double edge_tolerance = 1e-6;
    /// Throw NumericalGuardError on a truncation instead of warning.
    bool strict = false;
};

/// F_p(w) = integral dw' A(w - w') A(w'), via zero-padded FFT convolution
/// scaled by the grid spacing.
///
/// The full convolution lives on the grid 2 * first + j * spacing. Output
/// points that coincide with it (within 1e-9 spacing) are copied exactly,
/// others are linearly interpolated; points outside the support are zero.
ComplexSpectrum pump_self_convolution(const ComplexSpectrum& field, const FrequencyGrid& out_grid,
                                      const ConvolutionOptions& options = {},
                                      Diagnostics* diagnostics = nullptr);

/// Grid on which pump_self_convolution is exact (no interpolation).
FrequencyGrid self_convolution_grid(const FrequencyGrid& field_grid);

/// A(t) = (1 / 2 pi) integral A(w) exp(+i w t) dw.
///
/// Under this sign a Lorentzian l(w) maps to a causal exp(-Omega t / 2) decay
/// and exp(-i dtau w) to a delay by dtau. The time grid is conjugate to the
/// frequency grid: dt = 2 pi / (N dw), centered on t = 0.
TemporalField to_time_domain(const ComplexSpectrum& field);

/// Inverse of to_time_domain for a field produced on `grid`.
ComplexSpectrum to_frequency_domain(const TemporalField& field, const FrequencyGrid& grid);

/// Full width at half maximum of |values|, with linear interpolation between
/// samples. Returns 0 for an all-zero spectrum.
double magnitude_fwhm(const ComplexSpectrum& spectrum);

} // namespace ringpair
