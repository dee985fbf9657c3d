#include "ringpair/export.hpp"

#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <sstream>

namespace ringpair::io {

namespace {

const char* status_of(const PointEvaluation& e)
{
    if (e.error)
        return "error";
    return e.purity ? "ok" : "rate_zero";
}

std::string optional_number(const std::optional<double>& x)
{
    return x ? format_number(*x) : std::string();
}

} // namespace

std::string format_number(double x)
{
    char buf[32];
    for (int precision = 15; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof buf, "%.*g", precision, x);
        if (std::strtod(buf, nullptr) == x)
            break;
    }
    return buf;
}

void write_comment_block(std::ostream& out, std::string_view text)
{
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line))
        out << "# " << line << '\n';
}

nlohmann::json grid_to_json(const FrequencyGrid& grid)
{
    return {{"first", grid.first()}, {"spacing", grid.spacing()}, {"n_points", grid.size()}};
}

FrequencyGrid grid_from_json(const nlohmann::json& doc)
{
    try {
        return FrequencyGrid::from_spacing(doc.at("first").get<double>(), doc.at("spacing").get<double>(),
                                           doc.at("n_points").get<std::size_t>());
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed grid metadata: ") + e.what());
    }
}

nlohmann::json jsa_to_json(const JointSpectralAmplitude& jsa)
{
    const auto& v = jsa.values();
    nlohmann::json re = nlohmann::json::array();
    nlohmann::json im = nlohmann::json::array();
    for (Eigen::Index a = 0; a < v.rows(); ++a) {
        nlohmann::json rrow = nlohmann::json::array();
        nlohmann::json irow = nlohmann::json::array();
        for (Eigen::Index b = 0; b < v.cols(); ++b) {
            rrow.push_back(v(a, b).real());
            irow.push_back(v(a, b).imag());
        }
        re.push_back(std::move(rrow));
        im.push_back(std::move(irow));
    }
    return {{"idler_grid", grid_to_json(jsa.idler_grid())},
            {"signal_grid", grid_to_json(jsa.signal_grid())},
            {"norm_sq", jsa.norm_sq()},
            {"layout", "row-major, rows = idler"},
            {"real", std::move(re)},
            {"imag", std::move(im)}};
}

JointSpectralAmplitude jsa_from_json(const nlohmann::json& doc)
{
    const FrequencyGrid idler = grid_from_json(doc.at("idler_grid"));
    const FrequencyGrid signal = grid_from_json(doc.at("signal_grid"));
    const auto& re = doc.at("real");
    const auto& im = doc.at("imag");
    if (re.size() != idler.size() || im.size() != idler.size())
        throw ConfigError("JSA rows do not match the idler grid");
    Eigen::MatrixXcd values(idler.size(), signal.size());
    for (std::size_t a = 0; a < idler.size(); ++a) {
        if (re[a].size() != signal.size() || im[a].size() != signal.size())
            throw ConfigError("JSA columns do not match the signal grid");
        for (std::size_t b = 0; b < signal.size(); ++b)
            values(a, b) = {re[a][b].get<double>(), im[a][b].get<double>()};
    }
    return JointSpectralAmplitude(idler, signal, std::move(values));
}

void write_jsi_csv(std::ostream& out, const JointSpectralAmplitude& jsa)
{
    const Eigen::MatrixXd m = jsi(jsa);
    out << "idler\\signal";
    for (std::size_t b = 0; b < jsa.signal_grid().size(); ++b)
        out << ',' << format_number(jsa.signal_grid()[b]);
    out << '\n';
    for (Eigen::Index a = 0; a < m.rows(); ++a) {
        out << format_number(jsa.idler_grid()[static_cast<std::size_t>(a)]);
        for (Eigen::Index b = 0; b < m.cols(); ++b)
            out << ',' << format_number(m(a, b));
        out << '\n';
    }
}

void write_schmidt_table(std::ostream& out, const SchmidtSpectrum& spectrum)
{
    out << "k,lambda,weight\n";
    for (std::size_t k = 0; k < spectrum.coefficients.size(); ++k) {
        const double c = spectrum.coefficients[k];
        out << k + 1 << ',' << format_number(c) << ',' << format_number(c * c / spectrum.rate_sum) << '\n';
    }
}

void write_sweep_csv(std::ostream& out, const SweepResult& result)
{
    out << "eta,delta_tau_omega,purity,relative_rate,status\n";
    for (std::size_t i = 0; i < result.plan.eta.n; ++i)
        for (std::size_t j = 0; j < result.plan.delta_tau.n; ++j) {
            const auto& p = result.at(i, j);
            out << format_number(result.plan.eta.at(i)) << ',' << format_number(result.plan.delta_tau.at(j)) << ','
                << optional_number(p.purity) << ',' << format_number(p.relative_rate) << ',' << status_of(p)
                << '\n';
        }
}

void write_trace_csv(std::ostream& out, const OptimumReport& report)
{
    out << "stage,eta,delta_tau_omega,purity,relative_rate\n";
    for (const auto& t : report.trace)
        out << to_string(t.stage) << ',' << format_number(t.eta) << ',' << format_number(t.delta_tau) << ','
            << optional_number(t.purity) << ',' << format_number(t.relative_rate) << '\n';
}

void write_sensitivity_csv(std::ostream& out, const SensitivityCurve& curve, std::string_view parameter_name)
{
    out << parameter_name << ",detuning_omega,phi,purity,relative_rate,status\n";
    for (const auto& p : curve.points)
        out << format_number(p.parameter) << ',' << format_number(p.detuning) << ',' << format_number(p.phi) << ','
            << optional_number(p.result.purity) << ',' << format_number(p.result.relative_rate) << ','
            << status_of(p.result) << '\n';
}

nlohmann::json to_json(const SchmidtSpectrum& spectrum)
{
    return {{"purity", spectrum.purity},
            {"schmidt_number", spectrum.schmidt_number},
            {"rate_sum", spectrum.rate_sum},
            {"leading_coefficients",
             std::vector<double>(spectrum.coefficients.begin(),
                                 spectrum.coefficients.begin()
                                     + static_cast<std::ptrdiff_t>(std::min<std::size_t>(10, spectrum.coefficients.size())))}};
}

nlohmann::json to_json(const OptimumReport& report)
{
    nlohmann::json j{{"feasible", report.feasible},
                     {"tau_p_omega", report.tau_p},
                     {"phi", report.phi},
                     {"rate_floor", report.rate_floor},
                     {"evaluations", report.evaluations}};
    if (report.feasible) {
        j["best_eta"] = report.best_eta;
        j["best_delta_tau_omega"] = report.best_delta_tau;
        j["best_purity"] = report.best_purity;
        j["achieved_rate_ratio"] = report.achieved_rate_ratio;
    }
    return j;
}

} // namespace ringpair::io
