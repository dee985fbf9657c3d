#include "ringpair/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "ringpair/export.hpp"
#include "ringpair/schmidt.hpp"

namespace ringpair {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

/// One output directory; every file carries the resolved configuration.
class OutputSet {
public:
    OutputSet(const RunConfig& config, const ResolvedConfig& resolved, const CommandOptions& options,
              std::string command)
        : dir_(options.out_dir.empty() ? fs::path(resolved.output_directory) : options.out_dir),
          config_text_(config.with_defaults().emit()),
          command_(std::move(command))
    {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec)
            throw ConfigError("cannot create output directory " + dir_.string() + ": " + ec.message());
    }

    void csv(const std::string& name, const std::function<void(std::ostream&)>& body)
    {
        std::ostringstream out;
        io::write_comment_block(out, "ringpair " + command_ + "\n" + config_text_);
        body(out);
        write(name, out.str());
    }

    void json_file(const std::string& name, json doc)
    {
        doc["command"] = command_;
        doc["config"] = config_text_;
        write(name, doc.dump(2) + "\n");
    }

    CommandResult finish(json summary, int exit_code = kExitOk)
    {
        json_file("summary.json", summary);
        CommandResult r;
        r.exit_code = exit_code;
        r.files = files_;
        r.summary = std::move(summary);
        return r;
    }

private:
    void write(const std::string& name, const std::string& content)
    {
        const fs::path path = dir_ / name;
        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw ConfigError("cannot write " + path.string());
        out << content;
        files_.push_back(path);
    }

    fs::path dir_;
    std::string config_text_;
    std::string command_;
    std::vector<fs::path> files_;
};

std::vector<double> normalized_abs_sq(const ComplexSpectrum& s)
{
    const double e = s.energy();
    std::vector<double> out(s.values.size());
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k] = e > 0.0 ? std::norm(s.values[k]) / e : 0.0;
    return out;
}

std::vector<double> normalized_abs_sq(const TemporalField& f)
{
    const double e = f.energy();
    std::vector<double> out(f.values.size());
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k] = e > 0.0 ? 2.0 * 3.141592653589793 * std::norm(f.values[k]) / e : 0.0;
    return out;
}

// Fraction of the temporal energy later than t_peak + delay.
double late_energy_fraction(const TemporalField& f, double delay)
{
    std::size_t peak = 0;
    for (std::size_t k = 1; k < f.values.size(); ++k)
        if (std::norm(f.values[k]) > std::norm(f.values[peak]))
            peak = k;
    const double cut = f.time(peak) + delay;
    double late = 0.0;
    double total = 0.0;
    for (std::size_t k = 0; k < f.values.size(); ++k) {
        const double e = std::norm(f.values[k]);
        total += e;
        if (f.time(k) > cut)
            late += e;
    }
    return total > 0.0 ? late / total : 0.0;
}

json warnings_json(const Diagnostics& d) { return d.warnings; }

FrequencyGrid jsa_axis(const ResolvedConfig& rc, const Resonance& res, std::size_t n)
{
    return FrequencyGrid(rc.jsa_window, n, res.detuning);
}

} // namespace

int exit_code_for(const std::exception& e)
{
    if (dynamic_cast<const ConfigError*>(&e))
        return kExitValidation;
    if (dynamic_cast<const InfeasibleError*>(&e))
        return kExitInfeasible;
    if (dynamic_cast<const NumericalGuardError*>(&e))
        return kExitNumericalGuard;
    return 1;
}

CommandResult cmd_spectrum(const RunConfig& config, const CommandOptions& options)
{
    const ResolvedConfig rc = ResolvedConfig::from(config);
    const RingSource source = rc.source();
    const Resonance& res = source.pump_res;
    const FrequencyGrid grid = rc.spectrum_window > 0.0
                                   ? FrequencyGrid(rc.spectrum_window, rc.spectrum_points)
                                   : default_spectrum_grid(source.pump, res, rc.spectrum_points);

    RingSource target = source;
    target.pump = PumpSpec::target(rc.sigma ? rc.pump().sigma : 1.0 / source.pump.tau_p, source.pump.tau_p);
    if (source.pump.shape == PumpShape::Target)
        target.pump = source.pump;
    const RingSource single = source.single_pulse_reference();

    const ComplexSpectrum alpha = incident_envelope(source, grid);
    const ComplexSpectrum alpha1 = incident_envelope(single, grid);
    const ComplexSpectrum alpha_t = incident_envelope(target, grid);
    const ComplexSpectrum line = lorentzian_lineshape(grid, res);
    const ComplexSpectrum field = in_resonator_field(alpha, res);
    const ComplexSpectrum field1 = in_resonator_field(alpha1, res);
    const TemporalField t = to_time_domain(field);
    const TemporalField t1 = to_time_domain(field1);

    OutputSet out(config, rc, options, "spectrum");
    const auto a_sq = normalized_abs_sq(field);
    const auto a1_sq = normalized_abs_sq(field1);
    out.csv("spectrum.csv", [&](std::ostream& os) {
        os << "omega_over_Omega,pump_abs_alpha,pump_arg_alpha,abs_l,pump_abs_A_sq,"
              "single_abs_alpha,single_arg_alpha,single_abs_A_sq,target_abs_alpha,target_arg_alpha\n";
        for (std::size_t k = 0; k < grid.size(); ++k)
            os << io::format_number(grid[k]) << ',' << io::format_number(std::abs(alpha.values[k])) << ','
               << io::format_number(std::arg(alpha.values[k])) << ','
               << io::format_number(std::abs(line.values[k])) << ',' << io::format_number(a_sq[k]) << ','
               << io::format_number(std::abs(alpha1.values[k])) << ','
               << io::format_number(std::arg(alpha1.values[k])) << ',' << io::format_number(a1_sq[k]) << ','
               << io::format_number(std::abs(alpha_t.values[k])) << ','
               << io::format_number(std::arg(alpha_t.values[k])) << '\n';
    });
    const auto ta = normalized_abs_sq(t);
    const auto ta1 = normalized_abs_sq(t1);
    out.csv("temporal.csv", [&](std::ostream& os) {
        os << "t_Omega,pump_abs_A_sq,single_abs_A_sq\n";
        for (std::size_t k = 0; k < t.values.size(); ++k)
            os << io::format_number(t.time(k)) << ',' << io::format_number(ta[k]) << ','
               << io::format_number(ta1[k]) << '\n';
    });

    const double delay =
        5.0 * (source.pump.shape == PumpShape::DualPulse && source.pump.delta_tau != 0.0 ? std::abs(source.pump.delta_tau)
                                                                                      : source.pump.tau_p);
    json summary{{"grid", io::grid_to_json(grid)},
                 {"pump_shape", to_string(source.pump.shape)},
                 {"tau_p_omega", source.pump.tau_p},
                 {"in_resonator_fwhm", magnitude_fwhm(field)},
                 {"single_in_resonator_fwhm", magnitude_fwhm(field1)},
                 {"in_resonator_energy", field.energy()},
                 {"single_in_resonator_energy", field1.energy()},
                 {"incident_energy", alpha.energy()},
                 {"late_energy_delay", delay},
                 {"late_energy_fraction", late_energy_fraction(t, delay)},
                 {"single_late_energy_fraction", late_energy_fraction(t1, delay)}};
    return out.finish(std::move(summary));
}

CommandResult cmd_jsi(const RunConfig& config, const CommandOptions& options)
{
    const ResolvedConfig rc = ResolvedConfig::from(config);
    const RingSource source = rc.source();
    const FrequencyGrid idler = jsa_axis(rc, source.idler_res, rc.jsa_points);
    const FrequencyGrid signal = jsa_axis(rc, source.signal_res, rc.jsa_points);
    const JsaOptions jsa_opts = rc.jsa_options(options.strict);

    Diagnostics diag;
    const JointSpectralAmplitude jsa = build_jsa(source, idler, signal, jsa_opts, &diag);
    const JointSpectralAmplitude ref = build_jsa(source.single_pulse_reference(), idler, signal, jsa_opts, &diag);
    const SchmidtDecomposition dec = decompose(jsa, rc.schmidt_modes);

    OutputSet out(config, rc, options, "jsi");
    out.csv("jsi.csv", [&](std::ostream& os) { io::write_jsi_csv(os, jsa); });
    out.csv("schmidt.csv", [&](std::ostream& os) { io::write_schmidt_table(os, dec.spectrum); });
    out.csv("modes.csv", [&](std::ostream& os) {
        os << "side,k,omega_over_Omega,re,im\n";
        const auto emit = [&](const char* side, const Eigen::MatrixXcd& modes, const FrequencyGrid& g) {
            for (Eigen::Index k = 0; k < modes.cols(); ++k)
                for (Eigen::Index a = 0; a < modes.rows(); ++a)
                    os << side << ',' << k + 1 << ',' << io::format_number(g[static_cast<std::size_t>(a)]) << ','
                       << io::format_number(modes(a, k).real()) << ',' << io::format_number(modes(a, k).imag())
                       << '\n';
        };
        emit("idler", dec.modes.idler_modes, idler);
        emit("signal", dec.modes.signal_modes, signal);
    });
    if (rc.write_jsa_json)
        out.json_file("jsa.json", io::jsa_to_json(jsa));

    json summary = io::to_json(dec.spectrum);
    summary["relative_rate"] = relative_rate(jsa, ref);
    summary["reference_purity"] = purity(ref);
    summary["idler_grid"] = io::grid_to_json(idler);
    summary["signal_grid"] = io::grid_to_json(signal);
    summary["warnings"] = warnings_json(diag);
    return out.finish(std::move(summary));
}

CommandResult cmd_sweep(const RunConfig& config, const CommandOptions& options)
{
    const ResolvedConfig rc = ResolvedConfig::from(config);
    const RingSource source = rc.source();
    SweepPlan plan;
    plan.eta = rc.sweep_eta;
    plan.delta_tau = rc.sweep_delta_tau;
    plan.tau_p = source.pump.tau_p;
    plan.phi = rc.phi;
    plan.settings = rc.scan_settings(options.strict);
    const SweepResult result = sweep(plan, source);

    OutputSet out(config, rc, options, "sweep");
    out.csv("sweep.csv", [&](std::ostream& os) { io::write_sweep_csv(os, result); });

    json summary{{"tau_p_omega", plan.tau_p},
                 {"phi", plan.phi},
                 {"reference", {{"description", "single pulse, same tau_p, unit incident energy"},
                                {"norm_sq", result.reference_norm_sq},
                                {"purity", result.reference_purity}}}};
    std::size_t undefined = 0;
    std::size_t errors = 0;
    std::optional<std::size_t> best;
    for (std::size_t k = 0; k < result.points.size(); ++k) {
        const auto& p = result.points[k];
        if (p.error)
            ++errors;
        else if (!p.purity)
            ++undefined;
        else if (!best || *p.purity > *result.points[*best].purity)
            best = k;
    }
    summary["rate_zero_points"] = undefined;
    summary["error_points"] = errors;
    if (best) {
        const std::size_t i = *best / plan.delta_tau.n;
        const std::size_t j = *best % plan.delta_tau.n;
        summary["max_purity"] = *result.points[*best].purity;
        summary["max_purity_eta"] = plan.eta.at(i);
        summary["max_purity_delta_tau_omega"] = plan.delta_tau.at(j);
        summary["max_purity_relative_rate"] = result.points[*best].relative_rate;
    }
    return out.finish(std::move(summary));
}

CommandResult cmd_optimize(const RunConfig& config, const CommandOptions& options)
{
    const ResolvedConfig rc = ResolvedConfig::from(config);
    OptimizeOptions opt;
    opt.eta = rc.optimize_eta;
    opt.delta_tau = rc.optimize_delta_tau;
    opt.settings = rc.scan_settings(options.strict);
    const std::vector<double> inverse_taus = rc.inverse_tau_values();
    const std::vector<BandwidthPoint> study = bandwidth_study(inverse_taus, rc.rate_floors, rc.phi, opt);

    OutputSet out(config, rc, options, "optimize");
    out.csv("optimize.csv", [&](std::ostream& os) {
        os << "inverse_tau_p_omega,tau_p_omega,rate_floor,feasible,best_eta,best_delta_tau_omega,best_purity,"
              "achieved_rate_ratio,single_pulse_purity,evaluations\n";
        for (const auto& bp : study)
            for (const auto& r : bp.optima) {
                os << io::format_number(bp.inverse_tau_p) << ',' << io::format_number(r.tau_p) << ','
                   << io::format_number(r.rate_floor) << ',' << (r.feasible ? "true" : "false") << ',';
                if (r.feasible)
                    os << io::format_number(r.best_eta) << ',' << io::format_number(r.best_delta_tau) << ','
                       << io::format_number(r.best_purity) << ',' << io::format_number(r.achieved_rate_ratio);
                else
                    os << ",,,";
                os << ',' << io::format_number(bp.single_pulse_purity) << ',' << r.evaluations << '\n';
            }
    });
    out.csv("traces.csv", [&](std::ostream& os) {
        os << "inverse_tau_p_omega,rate_floor,stage,eta,delta_tau_omega,purity,relative_rate\n";
        for (const auto& bp : study)
            for (const auto& r : bp.optima)
                for (const auto& t : r.trace)
                    os << io::format_number(bp.inverse_tau_p) << ',' << io::format_number(r.rate_floor) << ','
                       << to_string(t.stage) << ',' << io::format_number(t.eta) << ','
                       << io::format_number(t.delta_tau) << ','
                       << (t.purity ? io::format_number(*t.purity) : std::string()) << ','
                       << io::format_number(t.relative_rate) << '\n';
    });

    json points = json::array();
    bool infeasible = false;
    for (const auto& bp : study) {
        json optima = json::array();
        for (const auto& r : bp.optima) {
            optima.push_back(io::to_json(r));
            infeasible = infeasible || !r.feasible;
        }
        points.push_back({{"inverse_tau_p_omega", bp.inverse_tau_p},
                          {"single_pulse_purity", bp.single_pulse_purity},
                          {"optima", std::move(optima)}});
    }
    json summary{{"rate_floors", rc.rate_floors}, {"phi", rc.phi}, {"points", std::move(points)}};
    summary["infeasible"] = infeasible;
    return out.finish(std::move(summary), infeasible ? kExitInfeasible : kExitOk);
}

CommandResult cmd_sensitivity(const RunConfig& config, const CommandOptions& options)
{
    const ResolvedConfig rc = ResolvedConfig::from(config);
    const EvaluationSettings settings = rc.scan_settings(options.strict);
    OutputSet out(config, rc, options, "sensitivity");
    json summary{{"mode", rc.sensitivity_mode}, {"threshold", rc.threshold}};

    if (rc.sensitivity_mode == "phase") {
        const PumpSpec p = rc.pump();
        const SensitivityBase base{p.eta, p.delta_tau, p.tau_p, rc.phi};
        const SensitivityCurve curve = phase_scan(base, rc.phase.values(), settings);
        out.csv("phase.csv", [&](std::ostream& os) { io::write_sensitivity_csv(os, curve, "phi_deviation"); });
        const PointEvaluation at_base = PumpEvaluator(RingSource::standard(base.pump()), settings).evaluate(base.pump());
        summary["base_purity"] = at_base.purity ? json(*at_base.purity) : json(nullptr);
        const auto drop = first_drop_below(curve, rc.threshold);
        summary["first_drop_below_threshold_rad"] = drop ? json(*drop) : json(nullptr);
        return out.finish(std::move(summary));
    }

    std::vector<double> qs = rc.q_values;
    if (qs.empty())
        qs.push_back(rc.q_pump);
    json curves = json::array();
    for (std::size_t i = 0; i < qs.size(); ++i) {
        const double q = qs[i];
        const auto normalizer = rc.normalizer(q);
        if (!normalizer)
            throw ConfigError("wavelength sensitivity needs resonator.wavelength");
        const PumpSpec p = rc.pump(q);
        const SensitivityBase base{p.eta, p.delta_tau, p.tau_p, rc.phi};
        const SensitivityCurve curve = wavelength_shift_scan(base, *normalizer, rc.delta_lambda.values(), settings);
        const std::string name = "sensitivity_q" + std::to_string(i + 1) + ".csv";
        out.csv(name, [&](std::ostream& os) { io::write_sensitivity_csv(os, curve, "delta_lambda_m"); });

        const PointEvaluation at_base = PumpEvaluator(RingSource::standard(base.pump()), settings).evaluate(base.pump());
        const auto drop = first_drop_below(curve, rc.threshold);
        curves.push_back({{"q_loaded", q},
                          {"file", name},
                          {"tau_p_omega", base.tau_p},
                          {"delta_tau_omega", base.delta_tau},
                          {"linewidth_rad_per_s", normalizer->linewidth()},
                          {"base_purity", at_base.purity ? json(*at_base.purity) : json(nullptr)},
                          {"first_drop_below_threshold_m", drop ? json(*drop) : json(nullptr)}});
    }
    summary["curves"] = std::move(curves);
    return out.finish(std::move(summary));
}

} // namespace ringpair
