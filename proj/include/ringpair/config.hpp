#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ringpair/biphoton.hpp"
#include "ringpair/optimizer.hpp"
#include "ringpair/units.hpp"

namespace ringpair {

/// Run configuration in a small INI-like text format:
///
///     [pump]
///     shape = dual
///     tau_p = 10 ps            # or "0.1 inverse_linewidths"
///     phi = 1 pi
///
/// Dimensioned values carry an explicit unit. Frequencies may be given in
/// `linewidths` (units of the pump linewidth) or `rad/s`; times in
/// `inverse_linewidths` or s/ms/us/ns/ps/fs; wavelengths in m/um/nm/pm;
/// angles in rad/deg/pi. Ranges are written "min max n [unit]".
class RunConfig {
public:
    struct Entry {
        std::string value;
        int line = 0; // 0 for overrides and defaults
    };

    static RunConfig parse(std::string_view text, std::string_view source_name = "config");
    static RunConfig load(const std::filesystem::path& path);

    /// Canonical text, keys in schema order. parse(emit()) == *this.
    std::string emit() const;

    /// Copy with every defaulted key filled in; this is what output files embed.
    RunConfig with_defaults() const;

    /// Sets "section.key" after validating the key and the value syntax.
    void set(std::string_view dotted_key, std::string_view value);
    std::optional<std::string> get(std::string_view dotted_key) const;
    const std::map<std::string, Entry>& entries() const { return entries_; }
    std::string_view source_name() const { return source_; }

    /// All keys the format accepts, as "section.key".
    static std::vector<std::string> known_keys();

    bool operator==(const RunConfig& other) const;

private:
    std::string source_ = "config";
    std::map<std::string, Entry> entries_;
};

/// A time or frequency either in pump-linewidth units or in SI units.
struct ScaledQuantity {
    double value = 0.0;
    bool normalized = true;

    /// Value in linewidth units; physical values need a normalizer.
    double in_linewidth_units(const units::Normalizer* normalizer, bool is_time) const;
};

/// Typed view of a RunConfig. Times and frequencies are kept as written so
/// they can be normalized against several quality factors.
struct ResolvedConfig {
    std::optional<double> wavelength; // m
    double q_pump = 1e5;
    double q_signal = 1e5;
    double q_idler = 1e5;

    PumpShape shape = PumpShape::DualPulse;
    ScaledQuantity tau_p{0.1, true};
    double eta = 0.55;
    ScaledQuantity delta_tau{0.2, true};
    double phi = 3.141592653589793;
    std::optional<ScaledQuantity> sigma; // unset: sigma = 1 / tau_p
    double pulse_energy = 1.0;

    std::size_t jsa_points = 512;
    double jsa_window = 6.0;
    std::size_t spectrum_points = 1024;
    double spectrum_window = 0.0; // 0: automatic
    double edge_tolerance = 1e-6;
    double max_pump_spacing = 0.05;
    std::size_t scan_jsa_points = 128;
    unsigned threads = 0;
    double undefined_rate_floor = 1e-6;
    std::size_t schmidt_modes = 10;

    AxisRange sweep_eta{0.0, 1.0, 21};
    AxisRange sweep_delta_tau{-2.0, 2.0, 41}; // 1/Omega

    std::vector<double> rate_floors{0.0, 0.2, 0.5};
    std::vector<double> inverse_tau_p; // explicit list; empty: use the log range
    double inverse_tau_min = 0.5;
    double inverse_tau_max = 20.0;
    std::size_t inverse_tau_points = 25;
    AxisRange optimize_eta{0.0, 1.0, 41};
    AxisRange optimize_delta_tau{-2.0, 2.0, 41};

    std::string sensitivity_mode = "wavelength";
    AxisRange delta_lambda{-40e-12, 40e-12, 81}; // m
    AxisRange phase{0.5 * 3.141592653589793, 1.5 * 3.141592653589793, 41};
    std::vector<double> q_values;
    double threshold = 0.95;

    std::string output_directory = "out";
    bool write_jsa_json = false;

    static ResolvedConfig from(const RunConfig& config);

    /// Normalizer for the pump resonance, if a wavelength is configured.
    std::optional<units::Normalizer> normalizer(std::optional<double> q = std::nullopt) const;

    /// Pump in linewidth units of a ring with quality factor q (default q_pump).
    PumpSpec pump(std::optional<double> q = std::nullopt) const;
    RingSource source(std::optional<double> q = std::nullopt) const;
    JsaOptions jsa_options(bool strict) const;
    EvaluationSettings scan_settings(bool strict) const;
    std::vector<double> inverse_tau_values() const;
};

} // namespace ringpair
