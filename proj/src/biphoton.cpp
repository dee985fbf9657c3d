#include "ringpair/biphoton.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ringpair {

namespace {

// Sample a spectrum at x: exact when x lies on the grid, linear otherwise.
Complex sample(const ComplexSpectrum& s, double x)
{
    const double pos = (x - s.grid.first()) / s.grid.spacing();
    const double nearest = std::round(pos);
    const double last = static_cast<double>(s.values.size() - 1);
    if (std::abs(pos - nearest) < 1e-9)
        return (nearest >= 0.0 && nearest <= last) ? s.values[static_cast<std::size_t>(nearest)] : Complex{};
    if (pos < 0.0 || pos > last)
        return {};
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const double frac = pos - static_cast<double>(lo);
    return (1.0 - frac) * s.values[lo] + frac * s.values[lo + 1];
}

bool same_spacing(const FrequencyGrid& a, const FrequencyGrid& b)
{
    return std::abs(a.spacing() - b.spacing()) <= 1e-12 * a.spacing();
}

} // namespace

void RingSource::validate() const
{
    pump_res.validate();
    signal_res.validate();
    idler_res.validate();
    pump.validate();
    if (!(pulse_energy >= 0.0) || !std::isfinite(pulse_energy))
        throw ConfigError("pulse energy must be non-negative");
}

RingSource RingSource::standard(const PumpSpec& pump, double q_loaded)
{
    const Resonance res = Resonance::with_linewidth(1.0, q_loaded);
    RingSource s{res, res, res, pump};
    s.validate();
    return s;
}

RingSource RingSource::shifted(double detuning) const
{
    RingSource s = *this;
    s.pump_res.detuning += detuning;
    s.signal_res.detuning += detuning;
    s.idler_res.detuning += detuning;
    return s;
}

RingSource RingSource::single_pulse_reference() const
{
    RingSource s = *this;
    s.pump = PumpSpec::single(pump.tau_p);
    s.pump_energy_norm = true;
    s.pulse_energy = 1.0;
    return s;
}

JointSpectralAmplitude::JointSpectralAmplitude(FrequencyGrid idler_grid, FrequencyGrid signal_grid,
                                               Eigen::MatrixXcd values)
    : idler_grid_(std::move(idler_grid)), signal_grid_(std::move(signal_grid)), values_(std::move(values))
{
    if (static_cast<std::size_t>(values_.rows()) != idler_grid_.size()
        || static_cast<std::size_t>(values_.cols()) != signal_grid_.size())
        throw ConfigError("JSA matrix dimensions do not match its grids");
    norm_sq_ = compute_norm_sq(values_, idler_grid_.spacing(), signal_grid_.spacing());
}

double JointSpectralAmplitude::compute_norm_sq(const Eigen::MatrixXcd& values, double idler_spacing,
                                               double signal_spacing)
{
    double sum = 0.0;
    for (Eigen::Index b = 0; b < values.cols(); ++b)
        for (Eigen::Index a = 0; a < values.rows(); ++a)
            sum += std::norm(values(a, b));
    return sum * idler_spacing * signal_spacing;
}

double default_pump_half_width(const PumpSpec& pump, const Resonance& pump_res)
{
    double w = std::max(10.0 * pump_res.linewidth(), 6.0 / pump.tau_p);
    if (pump.shape == PumpShape::Target)
        w = std::max(w, 6.0 * pump.sigma);
    return w;
}

FrequencyGrid default_spectrum_grid(const PumpSpec& pump, const Resonance& pump_res, std::size_t n_points)
{
    return FrequencyGrid(default_pump_half_width(pump, pump_res), n_points);
}

FrequencyGrid default_jsa_grid(const Resonance& res, std::size_t n_points, double window_linewidths)
{
    return FrequencyGrid(window_linewidths * res.linewidth(), n_points, res.detuning);
}

ComplexSpectrum incident_envelope(const RingSource& source, const FrequencyGrid& grid)
{
    // A target pump is shaped for the unshifted resonance.
    Resonance design = source.pump_res;
    design.detuning = 0.0;
    ComplexSpectrum env = pump_envelope(grid, source.pump, design);
    double scale = std::sqrt(source.pulse_energy);
    if (source.pump_energy_norm)
        scale *= unit_energy_amplitude(source.pump, design);
    for (auto& v : env.values)
        v *= scale;
    return env;
}

FrequencyGrid pump_grid_for(const RingSource& source, const FrequencyGrid& idler_grid,
                            const FrequencyGrid& signal_grid, const JsaOptions& options)
{
    const double sum_lo = idler_grid.first() + signal_grid.first();
    const double sum_hi = idler_grid.last() + signal_grid.last();
    double half_width = options.pump_half_width;
    if (half_width <= 0.0) {
        half_width = default_pump_half_width(source.pump, source.pump_res);
        half_width = std::max({half_width, 0.5 * std::abs(sum_lo) + source.pump_res.linewidth(),
                               0.5 * std::abs(sum_hi) + source.pump_res.linewidth()});
    }
    const double max_spacing = options.max_pump_spacing * source.pump_res.linewidth();
    if (!(max_spacing > 0.0))
        throw ConfigError("pump grid spacing bound must be positive");

    if (!same_spacing(idler_grid, signal_grid)) {
        const double h = std::min({idler_grid.spacing(), signal_grid.spacing(), max_spacing});
        const auto half = static_cast<std::size_t>(std::ceil(half_width / h));
        return FrequencyGrid::from_spacing(-static_cast<double>(half) * h, h, 2 * half + 1);
    }

    // Points c + j h with 2c = sum_lo make every w_i + w_s = 2c + (a + b) m h a
    // sample of the self-convolution grid.
    const double jsa_spacing = idler_grid.spacing();
    const double m = std::ceil(jsa_spacing / max_spacing - 1e-12);
    const double h = jsa_spacing / m;
    const double c = 0.5 * sum_lo;
    const double j_lo = std::floor((-half_width - c) / h);
    const double j_hi = std::ceil((half_width - c) / h);
    return FrequencyGrid::from_spacing(c + j_lo * h, h, static_cast<std::size_t>(j_hi - j_lo) + 1);
}

JointSpectralAmplitude build_jsa(const RingSource& source, const FrequencyGrid& idler_grid,
                                 const FrequencyGrid& signal_grid, const JsaOptions& options,
                                 Diagnostics* diagnostics)
{
    source.validate();
    const FrequencyGrid pump_grid = pump_grid_for(source, idler_grid, signal_grid, options);

    const double need_lo = idler_grid.first() + signal_grid.first();
    const double need_hi = idler_grid.last() + signal_grid.last();
    const FrequencyGrid fp_grid = self_convolution_grid(pump_grid);
    const double tol = 1e-9 * fp_grid.spacing();
    if (fp_grid.first() > need_lo + tol || fp_grid.last() < need_hi - tol) {
        std::ostringstream msg;
        msg << "pump grid covers summed frequencies [" << fp_grid.first() << ", " << fp_grid.last()
            << "] but the JSA requires [" << need_lo << ", " << need_hi << "]";
        throw ConfigError(msg.str());
    }

    const ComplexSpectrum field = in_resonator_field(incident_envelope(source, pump_grid), source.pump_res);
    const ComplexSpectrum fp = pump_self_convolution(field, fp_grid, options.convolution, diagnostics);
    const ComplexSpectrum li = lorentzian_lineshape(idler_grid, source.idler_res);
    const ComplexSpectrum ls = lorentzian_lineshape(signal_grid, source.signal_res);

    Eigen::MatrixXcd values(idler_grid.size(), signal_grid.size());
    for (std::size_t b = 0; b < signal_grid.size(); ++b)
        for (std::size_t a = 0; a < idler_grid.size(); ++a)
            values(a, b) = sample(fp, idler_grid[a] + signal_grid[b]) * li.values[a] * ls.values[b];
    return JointSpectralAmplitude(idler_grid, signal_grid, std::move(values));
}

Eigen::MatrixXd jsi(const JointSpectralAmplitude& jsa)
{
    Eigen::MatrixXd out = jsa.values().cwiseAbs2();
    const double peak = out.maxCoeff();
    if (!(peak > 0.0))
        throw NumericalGuardError("cannot normalize the JSI of an all-zero JSA");
    return out / peak;
}

double relative_rate(const JointSpectralAmplitude& jsa, const JointSpectralAmplitude& reference)
{
    if (!(reference.norm_sq() > 0.0))
        throw NumericalGuardError("reference JSA has zero norm; relative rate undefined");
    return jsa.norm_sq() / reference.norm_sq();
}

} // namespace ringpair
