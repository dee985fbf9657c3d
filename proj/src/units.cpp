#include "ringpair/units.hpp"

#include <cmath>
#include <numbers>

#include "ringpair/error.hpp"

namespace ringpair::units {

double angular_frequency(double wavelength)
{
    if (!(wavelength > 0.0) || !std::isfinite(wavelength))
        throw ConfigError("wavelength must be positive");
    return 2.0 * std::numbers::pi * kSpeedOfLight / wavelength;
}

double linewidth_from_wavelength(double wavelength, double q_loaded)
{
    if (!(q_loaded > 0.0) || !std::isfinite(q_loaded))
        throw ConfigError("loaded quality factor must be positive");
    return angular_frequency(wavelength) / q_loaded;
}

double wavelength_shift_to_detuning(double delta_lambda, double wavelength)
{
    if (!(wavelength > 0.0) || !std::isfinite(wavelength))
        throw ConfigError("wavelength must be positive");
    return -2.0 * std::numbers::pi * kSpeedOfLight * delta_lambda / (wavelength * wavelength);
}

Normalizer::Normalizer(double wavelength, double q_loaded)
    : wavelength_(wavelength), linewidth_(linewidth_from_wavelength(wavelength, q_loaded))
{
}

double Normalizer::wavelength_shift(double delta_lambda) const
{
    return frequency(wavelength_shift_to_detuning(delta_lambda, wavelength_));
}

} // namespace ringpair::units
