#pragma once

#include <Eigen/Dense>

#include "ringpair/grid.hpp"
#include "ringpair/spectral.hpp"

namespace ringpair {

/// Pump, signal and idler resonances of one ring plus the incident pump.
struct RingSource {
    Resonance pump_res;
    Resonance signal_res;
    Resonance idler_res;
    PumpSpec pump;
    /// Scale the incident envelope to `pulse_energy` (see unit_energy_amplitude).
    bool pump_energy_norm = true;
    double pulse_energy = 1.0;

    void validate() const;

    /// Three identical resonances of unit linewidth (normalized units).
    static RingSource standard(const PumpSpec& pump, double q_loaded = 1e5);

    /// Copy with every resonance of the ring moved by `detuning`.
    RingSource shifted(double detuning) const;

    /// Single Gaussian pulse with the same tau_p and unit incident energy: the
    /// R_0 reference of every relative rate.
    RingSource single_pulse_reference() const;
};

/// Discretized A(w_i, w_s); rows follow the idler grid, columns the signal grid.
class JointSpectralAmplitude {
public:
    JointSpectralAmplitude(FrequencyGrid idler_grid, FrequencyGrid signal_grid, Eigen::MatrixXcd values);

    const FrequencyGrid& idler_grid() const { return idler_grid_; }
    const FrequencyGrid& signal_grid() const { return signal_grid_; }
    const Eigen::MatrixXcd& values() const { return values_; }

    /// sum |A|^2 dw_i dw_s, proportional to the pair probability R.
    double norm_sq() const { return norm_sq_; }

    /// Column-major summation, independent of how the matrix was filled.
    static double compute_norm_sq(const Eigen::MatrixXcd& values, double idler_spacing,
                                  double signal_spacing);

private:
    FrequencyGrid idler_grid_;
    FrequencyGrid signal_grid_;
    Eigen::MatrixXcd values_;
    double norm_sq_ = 0.0;
};

struct JsaOptions {
    ConvolutionOptions convolution;
    /// Upper bound on the pump-grid spacing, in pump linewidths.
    double max_pump_spacing = 0.05;
    /// Pump-grid half-width; 0 selects default_pump_half_width().
    double pump_half_width = 0.0;
};

/// max(10 Omega, 6 / tau_p), widened to 6 sigma for a target pump.
double default_pump_half_width(const PumpSpec& pump, const Resonance& pump_res);

/// Grid for 1-D spectra: default_pump_half_width() with 1024 points.
FrequencyGrid default_spectrum_grid(const PumpSpec& pump, const Resonance& pump_res,
                                    std::size_t n_points = 1024);

/// +/- window linewidths around the resonance center (including its detuning).
FrequencyGrid default_jsa_grid(const Resonance& res, std::size_t n_points = 512,
                               double window_linewidths = 6.0);

/// Scaled incident envelope alpha_p on `grid`, as used by build_jsa.
ComplexSpectrum incident_envelope(const RingSource& source, const FrequencyGrid& grid);

/// Pump grid used by build_jsa: fine enough for the lineshape and, when the
/// idler and signal spacings agree, aligned so every w_i + w_s is a sample of
/// the self-convolution.
FrequencyGrid pump_grid_for(const RingSource& source, const FrequencyGrid& idler_grid,
                            const FrequencyGrid& signal_grid, const JsaOptions& options = {});

/// A(w_i, w_s) = F_p(w_i + w_s) l_i(w_i) l_s(w_s).
///
/// F_p is computed once on the pump grid and sampled exactly when grids are
/// aligned, by linear interpolation otherwise. Throws ConfigError when the
/// pump grid cannot cover w_i + w_s.
JointSpectralAmplitude build_jsa(const RingSource& source, const FrequencyGrid& idler_grid,
                                 const FrequencyGrid& signal_grid, const JsaOptions& options = {},
                                 Diagnostics* diagnostics = nullptr);

/// |A|^2 normalized to unit maximum.
Eigen::MatrixXd jsi(const JointSpectralAmplitude& jsa);

/// R / R_0 = norm_sq / reference.norm_sq.
double relative_rate(const JointSpectralAmplitude& jsa, const JointSpectralAmplitude& reference);

} // namespace ringpair
