#include "ringpair/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "ringpair/export.hpp"

namespace ringpair {

namespace {

enum class Kind {
    Word,
    Number,
    Integer,
    Bool,
    Text,
    Frequency,
    Time,
    Length,
    Angle,
    NumberList,
    NumberRange,
    NormalizedTimeRange,
    LengthRange,
    AngleRange,
};

struct KeySpec {
    std::string_view section;
    std::string_view key;
    Kind kind;
    const char* fallback; // nullptr: no default
    std::array<std::string_view, 3> words{};
};

// Schema order is emission order.
constexpr std::array kSchema{
    KeySpec{"resonator", "wavelength", Kind::Length, "1550 nm"},
    KeySpec{"resonator", "q_loaded", Kind::Number, "100000"},
    KeySpec{"resonator", "q_signal", Kind::Number, nullptr},
    KeySpec{"resonator", "q_idler", Kind::Number, nullptr},
    KeySpec{"pump", "shape", Kind::Word, "dual", {"single", "dual", "target"}},
    KeySpec{"pump", "tau_p", Kind::Time, "0.1 inverse_linewidths"},
    KeySpec{"pump", "eta", Kind::Number, "0.55"},
    KeySpec{"pump", "delta_tau", Kind::Time, "0.2 inverse_linewidths"},
    KeySpec{"pump", "phi", Kind::Angle, "1 pi"},
    KeySpec{"pump", "sigma", Kind::Frequency, nullptr},
    KeySpec{"pump", "pulse_energy", Kind::Number, "1"},
    KeySpec{"numerics", "jsa_points", Kind::Integer, "512"},
    KeySpec{"numerics", "jsa_window", Kind::Frequency, "6 linewidths"},
    KeySpec{"numerics", "spectrum_points", Kind::Integer, "1024"},
    KeySpec{"numerics", "spectrum_window", Kind::Frequency, nullptr},
    KeySpec{"numerics", "edge_tolerance", Kind::Number, "1e-06"},
    KeySpec{"numerics", "max_pump_spacing", Kind::Frequency, "0.05 linewidths"},
    KeySpec{"numerics", "scan_jsa_points", Kind::Integer, "128"},
    KeySpec{"numerics", "threads", Kind::Integer, "0"},
    KeySpec{"numerics", "undefined_rate_floor", Kind::Number, "1e-06"},
    KeySpec{"numerics", "schmidt_modes", Kind::Integer, "10"},
    KeySpec{"sweep", "eta", Kind::NumberRange, "0 1 21"},
    KeySpec{"sweep", "delta_tau", Kind::NormalizedTimeRange, "-2 2 41 inverse_linewidths"},
    KeySpec{"optimize", "rate_floors", Kind::NumberList, "0 0.2 0.5"},
    KeySpec{"optimize", "inverse_tau_p", Kind::NumberList, nullptr},
    KeySpec{"optimize", "inverse_tau_range", Kind::NumberRange, "0.5 20 25"},
    KeySpec{"optimize", "eta_grid", Kind::NumberRange, "0 1 41"},
    KeySpec{"optimize", "delta_tau_grid", Kind::NormalizedTimeRange, "-2 2 41 inverse_linewidths"},
    KeySpec{"sensitivity", "mode", Kind::Word, "wavelength", {"wavelength", "phase"}},
    KeySpec{"sensitivity", "delta_lambda", Kind::LengthRange, "-40 40 81 pm"},
    KeySpec{"sensitivity", "phase", Kind::AngleRange, "0.5 1.5 41 pi"},
    KeySpec{"sensitivity", "q_values", Kind::NumberList, nullptr},
    KeySpec{"sensitivity", "threshold", Kind::Number, "0.95"},
    KeySpec{"output", "directory", Kind::Text, "out"},
    KeySpec{"output", "jsa_json", Kind::Bool, "false"},
};

std::string dotted(const KeySpec& k) { return std::string(k.section) + "." + std::string(k.key); }

const KeySpec* find_key(std::string_view dotted_key)
{
    for (const auto& k : kSchema)
        if (dotted(k) == dotted_key)
            return &k;
    return nullptr;
}

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> tokens(std::string_view s)
{
    std::istringstream in{std::string(s)};
    std::vector<std::string> out;
    for (std::string t; in >> t;)
        out.push_back(t);
    return out;
}

std::string collapse(std::string_view s)
{
    std::string out;
    for (const auto& t : tokens(s)) {
        if (!out.empty())
            out += ' ';
        out += t;
    }
    return out;
}

std::optional<double> to_number(std::string_view t)
{
    double v = 0.0;
    const auto* end = t.data() + t.size();
    auto [ptr, ec] = std::from_chars(t.data(), end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v))
        return std::nullopt;
    return v;
}

// Unit factors: frequency to rad/s, time to s, length to m, angle to rad.
// A factor of 0 marks the normalized (linewidth) unit.
std::optional<double> unit_factor(Kind kind, std::string_view unit)
{
    struct U {
        std::string_view name;
        double factor;
    };
    static constexpr std::array frequency{U{"linewidths", 0.0}, U{"rad/s", 1.0}};
    static constexpr std::array time{U{"inverse_linewidths", 0.0}, U{"s", 1.0},    U{"ms", 1e-3},
                                     U{"us", 1e-6},               U{"ns", 1e-9},   U{"ps", 1e-12},
                                     U{"fs", 1e-15}};
    static constexpr std::array length{U{"m", 1.0}, U{"um", 1e-6}, U{"nm", 1e-9}, U{"pm", 1e-12}};
    static constexpr std::array angle{U{"rad", 1.0}, U{"deg", std::numbers::pi / 180.0}, U{"pi", std::numbers::pi}};

    const auto look = [&](const auto& table) -> std::optional<double> {
        for (const auto& u : table)
            if (u.name == unit)
                return u.factor;
        return std::nullopt;
    };
    switch (kind) {
    case Kind::Frequency: return look(frequency);
    case Kind::Time: return look(time);
    case Kind::NormalizedTimeRange: return unit == "inverse_linewidths" ? std::optional<double>(0.0) : std::nullopt;
    case Kind::Length:
    case Kind::LengthRange: return look(length);
    case Kind::Angle:
    case Kind::AngleRange: return look(angle);
    default: return std::nullopt;
    }
}

const char* unit_hint(Kind kind)
{
    switch (kind) {
    case Kind::Frequency: return "linewidths or rad/s";
    case Kind::Time: return "inverse_linewidths, s, ms, us, ns, ps or fs";
    case Kind::NormalizedTimeRange: return "inverse_linewidths";
    case Kind::Length:
    case Kind::LengthRange: return "m, um, nm or pm";
    case Kind::Angle:
    case Kind::AngleRange: return "rad, deg or pi";
    default: return "";
    }
}

// Throws a bare message; callers add the location.
void check_value(const KeySpec& spec, std::string_view value)
{
    const auto t = tokens(value);
    const auto need_number = [](const std::string& s) {
        if (!to_number(s))
            throw ConfigError("'" + s + "' is not a number");
    };
    switch (spec.kind) {
    case Kind::Word:
        if (t.size() != 1 || std::find(spec.words.begin(), spec.words.end(), t[0]) == spec.words.end()) {
            std::string allowed;
            for (auto w : spec.words)
                if (!w.empty())
                    allowed += (allowed.empty() ? "" : ", ") + std::string(w);
            throw ConfigError("expected one of: " + allowed);
        }
        return;
    case Kind::Number:
        if (t.size() != 1)
            throw ConfigError("expected a single dimensionless number");
        need_number(t[0]);
        return;
    case Kind::Integer: {
        if (t.size() != 1)
            throw ConfigError("expected a non-negative integer");
        const auto v = to_number(t[0]);
        if (!v || *v < 0.0 || std::floor(*v) != *v)
            throw ConfigError("expected a non-negative integer");
        return;
    }
    case Kind::Bool:
        if (t.size() != 1 || (t[0] != "true" && t[0] != "false"))
            throw ConfigError("expected true or false");
        return;
    case Kind::Text:
        if (t.empty())
            throw ConfigError("expected a value");
        return;
    case Kind::Frequency:
    case Kind::Time:
    case Kind::Length:
    case Kind::Angle:
        if (t.size() != 2)
            throw ConfigError(std::string("expected a number followed by a unit (") + unit_hint(spec.kind) + ")");
        need_number(t[0]);
        if (!unit_factor(spec.kind, t[1]))
            throw ConfigError("unknown unit '" + t[1] + "' (expected " + unit_hint(spec.kind) + ")");
        return;
    case Kind::NumberList:
        if (t.empty())
            throw ConfigError("expected at least one number");
        for (const auto& s : t)
            need_number(s);
        return;
    case Kind::NumberRange:
    case Kind::NormalizedTimeRange:
    case Kind::LengthRange:
    case Kind::AngleRange: {
        const bool unit_required = spec.kind == Kind::LengthRange || spec.kind == Kind::AngleRange;
        const bool unit_allowed = spec.kind != Kind::NumberRange;
        const std::size_t expect = unit_required ? 4 : (t.size() == 4 && unit_allowed ? 4 : 3);
        if (t.size() != expect)
            throw ConfigError(std::string("expected 'min max n") + (unit_required ? " unit'" : "'"));
        need_number(t[0]);
        need_number(t[1]);
        const auto n = to_number(t[2]);
        if (!n || *n < 2.0 || std::floor(*n) != *n)
            throw ConfigError("range needs an integer point count of at least 2");
        if (*to_number(t[0]) >= *to_number(t[1]))
            throw ConfigError("range needs min < max");
        if (t.size() == 4 && !unit_factor(spec.kind, t[3]))
            throw ConfigError("unknown unit '" + t[3] + "' (expected " + unit_hint(spec.kind) + ")");
        return;
    }
    }
}

std::string where(std::string_view source, const std::string& key, int line)
{
    if (line > 0)
        return std::string(source) + ":" + std::to_string(line) + ": " + key + ": ";
    return std::string(source) + ": " + key + ": ";
}

} // namespace

RunConfig RunConfig::parse(std::string_view text, std::string_view source_name)
{
    RunConfig cfg;
    cfg.source_ = std::string(source_name);
    std::istringstream in{std::string(text)};
    std::string raw;
    std::string section;
    int line_no = 0;
    const auto fail = [&](const std::string& msg) {
        throw ConfigError(cfg.source_ + ":" + std::to_string(line_no) + ": " + msg);
    };
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                fail("malformed section header '" + line + "'");
            section = trim(std::string_view(line).substr(1, line.size() - 2));
            const bool known = std::any_of(kSchema.begin(), kSchema.end(),
                                           [&](const KeySpec& k) { return k.section == section; });
            if (!known)
                fail("unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            fail("expected 'key = value'");
        if (section.empty())
            fail("key outside of any [section]");
        const std::string key = section + "." + trim(std::string_view(line).substr(0, eq));
        const std::string value = collapse(std::string_view(line).substr(eq + 1));
        const KeySpec* spec = find_key(key);
        if (!spec)
            fail("unknown key '" + key + "'");
        if (cfg.entries_.count(key))
            fail("duplicate key '" + key + "'");
        try {
            check_value(*spec, value);
        } catch (const ConfigError& e) {
            fail(key + ": " + e.what());
        }
        cfg.entries_[key] = Entry{value, line_no};
    }
    return cfg;
}

RunConfig RunConfig::load(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path.string());
}

std::string RunConfig::emit() const
{
    std::ostringstream out;
    std::string_view current;
    for (const auto& k : kSchema) {
        const auto it = entries_.find(dotted(k));
        if (it == entries_.end())
            continue;
        if (k.section != current) {
            if (!current.empty())
                out << '\n';
            out << '[' << k.section << "]\n";
            current = k.section;
        }
        out << k.key << " = " << it->second.value << '\n';
    }
    return out.str();
}

RunConfig RunConfig::with_defaults() const
{
    RunConfig out = *this;
    for (const auto& k : kSchema)
        if (k.fallback && !out.entries_.count(dotted(k)))
            out.entries_[dotted(k)] = Entry{k.fallback, 0};
    return out;
}

void RunConfig::set(std::string_view dotted_key, std::string_view value)
{
    const std::string key(dotted_key);
    const KeySpec* spec = find_key(key);
    if (!spec)
        throw ConfigError(source_ + ": unknown key '" + key + "'");
    const std::string v = collapse(value);
    try {
        check_value(*spec, v);
    } catch (const ConfigError& e) {
        throw ConfigError(source_ + ": override " + key + ": " + e.what());
    }
    entries_[key] = Entry{v, 0};
}

std::optional<std::string> RunConfig::get(std::string_view dotted_key) const
{
    const auto it = entries_.find(std::string(dotted_key));
    if (it == entries_.end())
        return std::nullopt;
    return it->second.value;
}

std::vector<std::string> RunConfig::known_keys()
{
    std::vector<std::string> out;
    for (const auto& k : kSchema)
        out.push_back(dotted(k));
    return out;
}

bool RunConfig::operator==(const RunConfig& other) const
{
    if (entries_.size() != other.entries_.size())
        return false;
    return std::equal(entries_.begin(), entries_.end(), other.entries_.begin(),
                      [](const auto& a, const auto& b) { return a.first == b.first && a.second.value == b.second.value; });
}

double ScaledQuantity::in_linewidth_units(const units::Normalizer* normalizer, bool is_time) const
{
    if (normalized)
        return value;
    if (!normalizer)
        throw ConfigError("physical units need resonator.wavelength and resonator.q_loaded");
    return is_time ? normalizer->time(value) : normalizer->frequency(value);
}

ResolvedConfig ResolvedConfig::from(const RunConfig& config)
{
    const RunConfig full = config.with_defaults();
    ResolvedConfig r;

    const auto entry = [&](const std::string& key) -> const RunConfig::Entry* {
        const auto it = full.entries().find(key);
        return it == full.entries().end() ? nullptr : &it->second;
    };
    const auto context = [&](const std::string& key) {
        const auto* e = entry(key);
        return where(full.source_name(), key, e ? e->line : 0);
    };
    const auto fail = [&](const std::string& key, const std::string& msg) {
        throw ConfigError(context(key) + msg);
    };
    const auto toks = [&](const std::string& key) { return tokens(entry(key)->value); };
    const auto number = [&](const std::string& key) { return *to_number(toks(key)[0]); };
    const auto quantity = [&](const std::string& key, Kind kind) {
        const auto t = toks(key);
        const double factor = *unit_factor(kind, t[1]);
        const double v = *to_number(t[0]);
        return factor == 0.0 ? ScaledQuantity{v, true} : ScaledQuantity{v * factor, false};
    };
    const auto range = [&](const std::string& key, Kind kind) {
        const auto t = toks(key);
        double factor = 1.0;
        if (t.size() == 4 && kind != Kind::NormalizedTimeRange)
            factor = *unit_factor(kind, t[3]);
        return AxisRange{*to_number(t[0]) * factor, *to_number(t[1]) * factor,
                         static_cast<std::size_t>(*to_number(t[2]))};
    };
    const auto list = [&](const std::string& key) {
        std::vector<double> v;
        for (const auto& t : toks(key))
            v.push_back(*to_number(t));
        return v;
    };
    const auto positive = [&](const std::string& key, double v) {
        if (!(v > 0.0))
            fail(key, "must be positive");
        return v;
    };

    if (entry("resonator.wavelength")) {
        const auto t = toks("resonator.wavelength");
        r.wavelength = positive("resonator.wavelength", *to_number(t[0]) * *unit_factor(Kind::Length, t[1]));
    }
    r.q_pump = positive("resonator.q_loaded", number("resonator.q_loaded"));
    r.q_signal = entry("resonator.q_signal") ? positive("resonator.q_signal", number("resonator.q_signal")) : r.q_pump;
    r.q_idler = entry("resonator.q_idler") ? positive("resonator.q_idler", number("resonator.q_idler")) : r.q_pump;

    r.shape = pump_shape_from_string(toks("pump.shape")[0]);
    r.tau_p = quantity("pump.tau_p", Kind::Time);
    if (!(r.tau_p.value > 0.0))
        fail("pump.tau_p", "must be positive");
    r.eta = number("pump.eta");
    if (!(r.eta >= 0.0 && r.eta <= 1.0))
        fail("pump.eta", "must lie in [0, 1]");
    r.delta_tau = quantity("pump.delta_tau", Kind::Time);
    {
        const auto t = toks("pump.phi");
        r.phi = *to_number(t[0]) * *unit_factor(Kind::Angle, t[1]);
    }
    if (entry("pump.sigma")) {
        r.sigma = quantity("pump.sigma", Kind::Frequency);
        if (!(r.sigma->value > 0.0))
            fail("pump.sigma", "must be positive");
    }
    r.pulse_energy = number("pump.pulse_energy");
    if (!(r.pulse_energy >= 0.0))
        fail("pump.pulse_energy", "must be non-negative");

    const auto linewidths = [&](const std::string& key) {
        const auto q = quantity(key, Kind::Frequency);
        if (!q.normalized)
            fail(key, "must be given in linewidths");
        return positive(key, q.value);
    };
    const auto count = [&](const std::string& key, std::size_t min) {
        const auto v = static_cast<std::size_t>(number(key));
        if (v < min)
            fail(key, "must be at least " + std::to_string(min));
        return v;
    };
    r.jsa_points = count("numerics.jsa_points", 2);
    r.jsa_window = linewidths("numerics.jsa_window");
    r.spectrum_points = count("numerics.spectrum_points", 2);
    if (entry("numerics.spectrum_window"))
        r.spectrum_window = linewidths("numerics.spectrum_window");
    r.edge_tolerance = positive("numerics.edge_tolerance", number("numerics.edge_tolerance"));
    r.max_pump_spacing = linewidths("numerics.max_pump_spacing");
    r.scan_jsa_points = count("numerics.scan_jsa_points", 2);
    r.threads = static_cast<unsigned>(number("numerics.threads"));
    r.undefined_rate_floor = number("numerics.undefined_rate_floor");
    r.schmidt_modes = count("numerics.schmidt_modes", 1);
    if (r.schmidt_modes > r.jsa_points)
        fail("numerics.schmidt_modes", "exceeds the JSA grid size");

    r.sweep_eta = range("sweep.eta", Kind::NumberRange);
    if (r.sweep_eta.min < 0.0 || r.sweep_eta.max > 1.0)
        fail("sweep.eta", "must lie within [0, 1]");
    r.sweep_delta_tau = range("sweep.delta_tau", Kind::NormalizedTimeRange);

    r.rate_floors = list("optimize.rate_floors");
    for (double c : r.rate_floors)
        if (!(c >= 0.0))
            fail("optimize.rate_floors", "rate floors must be non-negative");
    if (entry("optimize.inverse_tau_p")) {
        r.inverse_tau_p = list("optimize.inverse_tau_p");
        for (double v : r.inverse_tau_p)
            positive("optimize.inverse_tau_p", v);
    }
    {
        const AxisRange a = range("optimize.inverse_tau_range", Kind::NumberRange);
        r.inverse_tau_min = positive("optimize.inverse_tau_range", a.min);
        r.inverse_tau_max = a.max;
        r.inverse_tau_points = a.n;
    }
    r.optimize_eta = range("optimize.eta_grid", Kind::NumberRange);
    if (r.optimize_eta.min < 0.0 || r.optimize_eta.max > 1.0)
        fail("optimize.eta_grid", "must lie within [0, 1]");
    r.optimize_delta_tau = range("optimize.delta_tau_grid", Kind::NormalizedTimeRange);

    r.sensitivity_mode = toks("sensitivity.mode")[0];
    r.delta_lambda = range("sensitivity.delta_lambda", Kind::LengthRange);
    r.phase = range("sensitivity.phase", Kind::AngleRange);
    if (entry("sensitivity.q_values")) {
        r.q_values = list("sensitivity.q_values");
        for (double q : r.q_values)
            positive("sensitivity.q_values", q);
    } else {
        r.q_values = {r.q_pump};
    }
    r.threshold = number("sensitivity.threshold");

    r.output_directory = entry("output.directory")->value;
    r.write_jsa_json = toks("output.jsa_json")[0] == "true";

    // Physical times need a wavelength to be normalized.
    for (const char* key : {"pump.tau_p", "pump.delta_tau", "pump.sigma"}) {
        const auto* e = entry(key);
        if (!e)
            continue;
        const auto q = quantity(key, std::string_view(key) == "pump.sigma" ? Kind::Frequency : Kind::Time);
        if (!q.normalized && !r.wavelength)
            fail(key, "physical units need resonator.wavelength");
    }
    return r;
}

std::optional<units::Normalizer> ResolvedConfig::normalizer(std::optional<double> q) const
{
    if (!wavelength)
        return std::nullopt;
    return units::Normalizer(*wavelength, q.value_or(q_pump));
}

PumpSpec ResolvedConfig::pump(std::optional<double> q) const
{
    const auto norm = normalizer(q);
    const units::Normalizer* n = norm ? &*norm : nullptr;
    const double tau = tau_p.in_linewidth_units(n, true);
    switch (shape) {
    case PumpShape::SingleGaussian: return PumpSpec::single(tau);
    case PumpShape::DualPulse: return PumpSpec::dual(tau, eta, delta_tau.in_linewidth_units(n, true), phi);
    case PumpShape::Target:
        return PumpSpec::target(sigma ? sigma->in_linewidth_units(n, false) : 1.0 / tau, tau);
    }
    throw ConfigError("unknown pump shape");
}

RingSource ResolvedConfig::source(std::optional<double> q) const
{
    const double qp = q.value_or(q_pump);
    // Linewidths scale as 1/Q; sideband centers are close enough to the pump
    // that the omega0 ratio is taken as 1.
    RingSource s;
    s.pump_res = Resonance::with_linewidth(1.0, qp);
    s.signal_res = Resonance::with_linewidth(q_pump / q_signal, qp * q_signal / q_pump);
    s.idler_res = Resonance::with_linewidth(q_pump / q_idler, qp * q_idler / q_pump);
    s.pump = pump(q);
    s.pulse_energy = pulse_energy;
    s.validate();
    return s;
}

JsaOptions ResolvedConfig::jsa_options(bool strict) const
{
    JsaOptions o;
    o.convolution.edge_tolerance = edge_tolerance;
    o.convolution.strict = strict;
    o.max_pump_spacing = max_pump_spacing;
    return o;
}

EvaluationSettings ResolvedConfig::scan_settings(bool strict) const
{
    EvaluationSettings s;
    s.jsa_points = scan_jsa_points;
    s.jsa_window = jsa_window;
    s.undefined_rate_floor = undefined_rate_floor;
    s.jsa = jsa_options(strict);
    s.threads = threads;
    return s;
}

std::vector<double> ResolvedConfig::inverse_tau_values() const
{
    if (!inverse_tau_p.empty())
        return inverse_tau_p;
    return log_spaced(inverse_tau_min, inverse_tau_max, inverse_tau_points);
}

} // namespace ringpair
