#include "ringpair/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fft.hpp"

namespace ringpair {

namespace {

constexpr Complex kI{0.0, 1.0};

bool finite_positive(double x) { return std::isfinite(x) && x > 0.0; }

Complex lorentzian_at(double w, const Resonance& res)
{
    return 1.0 / Complex(res.half_linewidth(), w - res.detuning);
}

Complex dual_pulse_at(double w, const PumpSpec& p)
{
    const Complex second = std::exp(kI * (p.phi - p.delta_tau * w)) * std::sqrt(1.0 - p.eta);
    return (std::sqrt(p.eta) + second) * std::exp(-0.5 * p.tau_p * p.tau_p * w * w);
}

void require_same_grid(const FrequencyGrid& a, const FrequencyGrid& b, const char* what)
{
    if (!(a == b))
        throw ConfigError(std::string(what) + ": frequency grids do not match");
}

} // namespace

void Resonance::validate() const
{
    if (!finite_positive(omega0))
        throw ConfigError("resonance center frequency must be positive");
    if (!finite_positive(q_loaded))
        throw ConfigError("loaded quality factor must be positive");
    if (!std::isfinite(detuning))
        throw ConfigError("resonance detuning must be finite");
    if (!finite_positive(linewidth()))
        throw ConfigError("resonance linewidth must be positive");
}

Resonance Resonance::with_linewidth(double linewidth, double q_loaded, double detuning)
{
    Resonance r{linewidth * q_loaded, q_loaded, detuning};
    r.validate();
    return r;
}

void PumpSpec::validate() const
{
    if (!finite_positive(tau_p))
        throw ConfigError("pump duration tau_p must be positive");
    if (!(eta >= 0.0 && eta <= 1.0))
        throw ConfigError("pulse weight eta must lie in [0, 1]");
    if (!std::isfinite(delta_tau) || !std::isfinite(phi))
        throw ConfigError("pulse separation and phase must be finite");
    if (shape == PumpShape::Target && !finite_positive(sigma))
        throw ConfigError("target spectrum width sigma must be positive");
}

PumpSpec PumpSpec::single(double tau_p)
{
    PumpSpec p;
    p.shape = PumpShape::SingleGaussian;
    p.tau_p = tau_p;
    p.validate();
    return p;
}

PumpSpec PumpSpec::dual(double tau_p, double eta, double delta_tau, double phi)
{
    PumpSpec p;
    p.shape = PumpShape::DualPulse;
    p.tau_p = tau_p;
    p.eta = eta;
    p.delta_tau = delta_tau;
    p.phi = phi;
    p.validate();
    return p;
}

PumpSpec PumpSpec::target(double sigma, double tau_p)
{
    PumpSpec p;
    p.shape = PumpShape::Target;
    p.sigma = sigma;
    p.tau_p = tau_p > 0.0 ? tau_p : (sigma > 0.0 ? 1.0 / sigma : 0.0);
    p.validate();
    return p;
}

const char* to_string(PumpShape shape)
{
    switch (shape) {
    case PumpShape::SingleGaussian: return "single";
    case PumpShape::DualPulse: return "dual";
    case PumpShape::Target: return "target";
    }
    return "unknown";
}

PumpShape pump_shape_from_string(const std::string& name)
{
    if (name == "single")
        return PumpShape::SingleGaussian;
    if (name == "dual")
        return PumpShape::DualPulse;
    if (name == "target")
        return PumpShape::Target;
    throw ConfigError("unknown pump shape '" + name + "' (expected single, dual or target)");
}

ComplexSpectrum::ComplexSpectrum(FrequencyGrid g, std::vector<Complex> v)
    : grid(std::move(g)), values(std::move(v))
{
    if (values.size() != grid.size())
        throw ConfigError("spectrum has " + std::to_string(values.size()) + " samples for a grid of "
                          + std::to_string(grid.size()));
}

ComplexSpectrum::ComplexSpectrum(FrequencyGrid g) : grid(std::move(g)), values(grid.size()) {}

double ComplexSpectrum::energy() const
{
    double sum = 0.0;
    for (const auto& v : values)
        sum += std::norm(v);
    return sum * grid.spacing();
}

double ComplexSpectrum::peak_magnitude() const
{
    double peak = 0.0;
    for (const auto& v : values)
        peak = std::max(peak, std::abs(v));
    return peak;
}

std::vector<double> TemporalField::times() const
{
    std::vector<double> t(values.size());
    for (std::size_t n = 0; n < t.size(); ++n)
        t[n] = time(n);
    return t;
}

double TemporalField::energy() const
{
    double sum = 0.0;
    for (const auto& v : values)
        sum += std::norm(v);
    return 2.0 * std::numbers::pi * sum * dt;
}

ComplexSpectrum lorentzian_lineshape(const FrequencyGrid& grid, const Resonance& res)
{
    res.validate();
    ComplexSpectrum out(grid);
    for (std::size_t k = 0; k < grid.size(); ++k)
        out.values[k] = lorentzian_at(grid[k], res);
    return out;
}

ComplexSpectrum pump_envelope(const FrequencyGrid& grid, const PumpSpec& pump)
{
    pump.validate();
    ComplexSpectrum out(grid);
    switch (pump.shape) {
    case PumpShape::SingleGaussian:
        for (std::size_t k = 0; k < grid.size(); ++k)
            out.values[k] = std::exp(-0.5 * pump.tau_p * pump.tau_p * grid[k] * grid[k]);
        break;
    case PumpShape::DualPulse:
        // eta = 1 must reproduce the single Gaussian bit for bit.
        if (pump.eta == 1.0)
            return pump_envelope(grid, PumpSpec::single(pump.tau_p));
        for (std::size_t k = 0; k < grid.size(); ++k)
            out.values[k] = dual_pulse_at(grid[k], pump);
        break;
    case PumpShape::Target:
        throw ConfigError("target pump envelope requires the pump resonance");
    }
    return out;
}

ComplexSpectrum pump_envelope(const FrequencyGrid& grid, const PumpSpec& pump, const Resonance& res)
{
    if (pump.shape == PumpShape::Target) {
        pump.validate();
        return target_envelope(grid, res, pump.sigma);
    }
    return pump_envelope(grid, pump);
}

ComplexSpectrum target_envelope(const FrequencyGrid& grid, const Resonance& res, double sigma)
{
    res.validate();
    if (!finite_positive(sigma))
        throw ConfigError("target spectrum width sigma must be positive");
    ComplexSpectrum out(grid);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double w = grid[k];
        out.values[k] = Complex(res.half_linewidth(), w - res.detuning)
                        * std::exp(-0.5 * w * w / (sigma * sigma));
    }
    return out;
}

double unit_energy_amplitude(const PumpSpec& pump, const Resonance& pump_res)
{
    pump.validate();
    const double sqrt_pi = std::sqrt(std::numbers::pi);
    if (pump.shape != PumpShape::Target)
        return std::sqrt(pump.tau_p / sqrt_pi);
    // integral |g + i(w - d)|^2 exp(-w^2/sigma^2) dw = sqrt(pi) sigma (g^2 + d^2 + sigma^2 / 2)
    const double g = pump_res.half_linewidth();
    const double d = pump_res.detuning;
    const double s = pump.sigma;
    return 1.0 / std::sqrt(sqrt_pi * s * (g * g + d * d + 0.5 * s * s));
}

ComplexSpectrum in_resonator_field(const ComplexSpectrum& envelope, const Resonance& res)
{
    const ComplexSpectrum line = lorentzian_lineshape(envelope.grid, res);
    require_same_grid(envelope.grid, line.grid, "in_resonator_field");
    ComplexSpectrum out(envelope.grid);
    for (std::size_t k = 0; k < out.values.size(); ++k)
        out.values[k] = envelope.values[k] * line.values[k];
    return out;
}

FrequencyGrid self_convolution_grid(const FrequencyGrid& field_grid)
{
    return FrequencyGrid::from_spacing(2.0 * field_grid.first(), field_grid.spacing(),
                                       2 * field_grid.size() - 1);
}

ComplexSpectrum pump_self_convolution(const ComplexSpectrum& field, const FrequencyGrid& out_grid,
                                      const ConvolutionOptions& options, Diagnostics* diagnostics)
{
    const double peak = field.peak_magnitude();
    const bool finite = std::all_of(field.values.begin(), field.values.end(),
                                    [](const Complex& v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); });
    if (!finite)
        throw NumericalGuardError("pump field contains non-finite samples");
    if (peak > 0.0) {
        const double edge = std::max(std::abs(field.values.front()), std::abs(field.values.back()));
        if (edge > options.edge_tolerance * peak) {
            const std::string msg = "pump field truncated: edge magnitude is "
                                    + std::to_string(edge / peak) + " of peak (tolerance "
                                    + std::to_string(options.edge_tolerance) + "); widen the pump grid";
            if (options.strict)
                throw NumericalGuardError(msg);
            if (diagnostics)
                diagnostics->warn(msg);
        }
    }

    std::vector<Complex> full = detail::linear_convolution(field.values, field.values);
    const double h = field.grid.spacing();
    for (auto& v : full)
        v *= h;
    const FrequencyGrid full_grid = self_convolution_grid(field.grid);

    ComplexSpectrum out(out_grid);
    const double last = static_cast<double>(full.size() - 1);
    for (std::size_t k = 0; k < out_grid.size(); ++k) {
        const double pos = (out_grid[k] - full_grid.first()) / h;
        const double nearest = std::round(pos);
        if (std::abs(pos - nearest) < 1e-9) {
            if (nearest >= 0.0 && nearest <= last)
                out.values[k] = full[static_cast<std::size_t>(nearest)];
            continue;
        }
        if (pos < 0.0 || pos > last)
            continue;
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const double frac = pos - static_cast<double>(lo);
        out.values[k] = (1.0 - frac) * full[lo] + frac * full[lo + 1];
    }
    return out;
}

TemporalField to_time_domain(const ComplexSpectrum& field)
{
    const std::size_t n = field.values.size();
    const double h = field.grid.spacing();
    const double two_pi = 2.0 * std::numbers::pi;
    const std::size_t mid = n / 2;

    TemporalField out;
    out.dt = two_pi / (static_cast<double>(n) * h);
    out.t_first = -static_cast<double>(mid) * out.dt;
    out.values.resize(n);

    // A(t_m) = h/2pi exp(i w_0 t_m) sum_k [A_k exp(-2 pi i k mid / N)] exp(+2 pi i k m / N)
    for (std::size_t k = 0; k < n; ++k) {
        const double shift = -two_pi * static_cast<double>((k * mid) % n) / static_cast<double>(n);
        out.values[k] = field.values[k] * std::polar(1.0, shift);
    }
    detail::dft(out.values, detail::FftSign::Positive);
    const double w0 = field.grid.first();
    for (std::size_t m = 0; m < n; ++m)
        out.values[m] *= (h / two_pi) * std::polar(1.0, w0 * out.time(m));
    return out;
}

ComplexSpectrum to_frequency_domain(const TemporalField& field, const FrequencyGrid& grid)
{
    const std::size_t n = field.values.size();
    if (n != grid.size())
        throw ConfigError("to_frequency_domain: time and frequency grids differ in length");
    const double two_pi = 2.0 * std::numbers::pi;
    const double expected_dt = two_pi / (static_cast<double>(n) * grid.spacing());
    if (std::abs(field.dt - expected_dt) > 1e-12 * expected_dt)
        throw ConfigError("to_frequency_domain: time grid is not conjugate to the frequency grid");
    const std::size_t mid = n / 2;

    ComplexSpectrum out(grid);
    const double w0 = grid.first();
    for (std::size_t m = 0; m < n; ++m)
        out.values[m] = field.values[m] * std::polar(1.0, -w0 * field.time(m));
    detail::dft(out.values, detail::FftSign::Negative);
    for (std::size_t k = 0; k < n; ++k) {
        const double shift = two_pi * static_cast<double>((k * mid) % n) / static_cast<double>(n);
        out.values[k] *= field.dt * std::polar(1.0, shift);
    }
    return out;
}

double magnitude_fwhm(const ComplexSpectrum& spectrum)
{
    const auto& v = spectrum.values;
    const double peak = spectrum.peak_magnitude();
    if (peak == 0.0)
        return 0.0;
    const double half = 0.5 * peak;
    std::size_t lo = 0;
    while (std::abs(v[lo]) < half)
        ++lo;
    std::size_t hi = v.size() - 1;
    while (std::abs(v[hi]) < half)
        --hi;

    const auto crossing = [&](std::size_t inside, std::size_t outside) {
        const double a = std::abs(v[inside]);
        const double b = std::abs(v[outside]);
        const double frac = (a - half) / (a - b);
        return spectrum.grid[inside] + frac * (spectrum.grid[outside] - spectrum.grid[inside]);
    };
    const double left = lo == 0 ? spectrum.grid.first() : crossing(lo, lo - 1);
    const double right = hi == v.size() - 1 ? spectrum.grid.last() : crossing(hi, hi + 1);
    return right - left;
}

} // namespace ringpair
