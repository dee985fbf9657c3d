#pragma once

namespace ringpair::units {

inline constexpr double kSpeedOfLight = 299792458.0; // m/s

/// 2 pi c / lambda
double angular_frequency(double wavelength);

/// Resonance linewidth Omega = omega0 / Q for a resonance at `wavelength`.
double linewidth_from_wavelength(double wavelength, double q_loaded);

/// Angular-frequency shift of a resonance whose wavelength moves by
/// delta_lambda: d omega = -2 pi c d lambda / lambda^2.
double wavelength_shift_to_detuning(double delta_lambda, double wavelength);

/// Converts physical quantities to units of the pump linewidth Omega
/// (frequencies as w / Omega, times as t * Omega).
class Normalizer {
public:
    Normalizer(double wavelength, double q_loaded);

    double linewidth() const { return linewidth_; }
    double frequency(double angular_frequency) const { return angular_frequency / linewidth_; }
    double time(double seconds) const { return seconds * linewidth_; }
    double wavelength_shift(double delta_lambda) const;

private:
    double wavelength_;
    double linewidth_;
};

} // namespace ringpair::units
