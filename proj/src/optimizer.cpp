#include "ringpair/optimizer.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

#include "ringpair/schmidt.hpp"

namespace ringpair {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

unsigned worker_count(unsigned requested, std::size_t jobs)
{
    unsigned n = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(jobs, 1)));
}

// Runs fn(i) for i in [0, n); results must be written to slot i only.
template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn)
{
    const unsigned workers = worker_count(threads, n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++)
                fn(i);
        });
}

struct GridScan {
    std::vector<Candidate> points;
    std::vector<PointEvaluation> results;
};

GridScan scan_grid(const PumpEvaluator& evaluator, const OptimizeOptions& options)
{
    GridScan scan;
    for (std::size_t i = 0; i < options.eta.n; ++i)
        for (std::size_t j = 0; j < options.delta_tau.n; ++j)
            scan.points.push_back({options.eta.at(i), options.delta_tau.at(j)});
    scan.results.resize(scan.points.size());
    parallel_for(scan.points.size(), options.settings.threads, [&](std::size_t k) {
        scan.results[k] = evaluator.evaluate_dual(scan.points[k].eta, scan.points[k].delta_tau);
    });
    return scan;
}

bool feasible(const PointEvaluation& e, double rate_floor)
{
    return e.purity.has_value() && e.relative_rate >= rate_floor;
}

struct Vertex {
    std::array<double, 2> x{};
    double f = kInf;
    PointEvaluation eval;
};

class ConstrainedRefiner {
public:
    ConstrainedRefiner(const PumpEvaluator& evaluator, double rate_floor, OptimumReport& report)
        : evaluator_(evaluator), floor_(rate_floor), report_(report)
    {
    }

    Vertex evaluate(double eta, double delta_tau, TraceEntry::Stage stage)
    {
        Vertex v;
        v.x = {eta, delta_tau};
        if (!(eta >= 0.0 && eta <= 1.0))
            return v;
        v.eval = evaluator_.evaluate_dual(eta, delta_tau);
        ++report_.evaluations;
        report_.trace.push_back({stage, eta, delta_tau, v.eval.purity, v.eval.relative_rate});
        if (feasible(v.eval, floor_))
            v.f = -*v.eval.purity;
        return v;
    }

    Vertex simplex(Vertex seed, std::array<double, 2> step, const OptimizeOptions& options)
    {
        using Stage = TraceEntry::Stage;
        std::array<Vertex, 3> s;
        s[0] = std::move(seed);
        for (int d = 0; d < 2; ++d) {
            auto x = s[0].x;
            x[d] += step[d];
            if (d == 0 && x[0] > 1.0)
                x[0] = s[0].x[0] - step[0];
            s[d + 1] = evaluate(x[0], x[1], Stage::Simplex);
        }

        const auto point = [](const std::array<double, 2>& c, const std::array<double, 2>& w, double t) {
            return std::array<double, 2>{c[0] + t * (w[0] - c[0]), c[1] + t * (w[1] - c[1])};
        };

        for (std::size_t it = 0; it < options.max_simplex_iterations; ++it) {
            std::stable_sort(s.begin(), s.end(), [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
            double diameter = 0.0;
            for (int i = 1; i < 3; ++i)
                diameter = std::max(diameter, std::hypot(s[i].x[0] - s[0].x[0], s[i].x[1] - s[0].x[1]));
            if (std::isfinite(s[2].f) && s[2].f - s[0].f <= options.purity_tolerance
                && diameter <= options.step_tolerance)
                break;
            if (diameter <= 1e-3 * options.step_tolerance)
                break;

            const std::array<double, 2> c{0.5 * (s[0].x[0] + s[1].x[0]), 0.5 * (s[0].x[1] + s[1].x[1])};
            auto xr = point(c, s[2].x, -1.0);
            Vertex r = evaluate(xr[0], xr[1], Stage::Simplex);
            if (r.f < s[0].f) {
                auto xe = point(c, s[2].x, -2.0);
                Vertex e = evaluate(xe[0], xe[1], Stage::Simplex);
                s[2] = e.f < r.f ? std::move(e) : std::move(r);
                continue;
            }
            if (r.f < s[1].f) {
                s[2] = std::move(r);
                continue;
            }
            const bool outside = r.f < s[2].f;
            auto xc = outside ? point(c, r.x, 0.5) : point(c, s[2].x, 0.5);
            Vertex k = evaluate(xc[0], xc[1], Stage::Simplex);
            if (outside ? k.f <= r.f : k.f < s[2].f) {
                s[2] = std::move(k);
                continue;
            }
            for (int i = 1; i < 3; ++i) {
                auto xs = point(s[0].x, s[i].x, 0.5);
                s[i] = evaluate(xs[0], xs[1], Stage::Simplex);
            }
        }
        std::stable_sort(s.begin(), s.end(), [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
        return std::move(s[0]);
    }

private:
    const PumpEvaluator& evaluator_;
    double floor_;
    OptimumReport& report_;
};

OptimumReport refine(const PumpEvaluator& evaluator, const GridScan& scan, double rate_floor,
                     std::span<const Candidate> warm_starts, const OptimizeOptions& options)
{
    OptimumReport report;
    report.tau_p = evaluator.source().pump.tau_p;
    report.phi = evaluator.source().pump.phi;
    report.rate_floor = rate_floor;
    report.evaluations = scan.points.size();
    for (std::size_t k = 0; k < scan.points.size(); ++k)
        report.trace.push_back({TraceEntry::Stage::Grid, scan.points[k].eta, scan.points[k].delta_tau,
                                scan.results[k].purity, scan.results[k].relative_rate});

    ConstrainedRefiner refiner(evaluator, rate_floor, report);
    Vertex seed;
    for (std::size_t k = 0; k < scan.points.size(); ++k) {
        const auto& r = scan.results[k];
        if (feasible(r, rate_floor) && -*r.purity < seed.f) {
            seed.x = {scan.points[k].eta, scan.points[k].delta_tau};
            seed.f = -*r.purity;
            seed.eval = r;
        }
    }
    for (const auto& c : warm_starts) {
        Vertex v = refiner.evaluate(c.eta, c.delta_tau, TraceEntry::Stage::WarmStart);
        if (v.f < seed.f)
            seed = std::move(v);
    }
    if (!std::isfinite(seed.f))
        return report;

    const std::array<double, 2> step{0.5 * (options.eta.max - options.eta.min) / static_cast<double>(options.eta.n - 1),
                                     0.5 * (options.delta_tau.max - options.delta_tau.min)
                                         / static_cast<double>(options.delta_tau.n - 1)};
    const Vertex best = refiner.simplex(std::move(seed), step, options);

    report.feasible = true;
    report.best_eta = best.x[0];
    report.best_delta_tau = best.x[1];
    report.best_purity = *best.eval.purity;
    report.achieved_rate_ratio = best.eval.relative_rate;
    return report;
}

void validate_optimize(double tau_p, double phi, const OptimizeOptions& options)
{
    if (!(tau_p > 0.0) || !std::isfinite(tau_p))
        throw ConfigError("tau_p Omega must be positive");
    if (!std::isfinite(phi))
        throw ConfigError("phase must be finite");
    options.eta.validate("eta");
    options.delta_tau.validate("delta_tau");
    if (options.eta.min < 0.0 || options.eta.max > 1.0)
        throw ConfigError("eta range must lie within [0, 1]");
}

void validate_floor(double rate_floor)
{
    if (!(rate_floor >= 0.0) || !std::isfinite(rate_floor))
        throw ConfigError("rate floor must be a non-negative number");
}

} // namespace

double AxisRange::at(std::size_t i) const
{
    if (i + 1 == n)
        return max;
    return min + (max - min) * static_cast<double>(i) / static_cast<double>(n - 1);
}

std::vector<double> AxisRange::values() const
{
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = at(i);
    return v;
}

void AxisRange::validate(const char* name) const
{
    if (n < 2)
        throw ConfigError(std::string(name) + " axis needs at least 2 points");
    if (!std::isfinite(min) || !std::isfinite(max) || !(min < max))
        throw ConfigError(std::string(name) + " axis range must satisfy min < max");
}

std::vector<double> log_spaced(double min, double max, std::size_t n)
{
    if (!(min > 0.0) || !(max > min) || n < 2)
        throw ConfigError("logarithmic range needs 0 < min < max and at least 2 points");
    std::vector<double> v(n);
    const double a = std::log(min);
    const double b = std::log(max);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
    v.front() = min;
    v.back() = max;
    return v;
}

PumpEvaluator::PumpEvaluator(RingSource source, EvaluationSettings settings)
    : source_(std::move(source)),
      settings_(std::move(settings)),
      idler_grid_(default_jsa_grid(source_.idler_res, settings_.jsa_points, settings_.jsa_window)),
      signal_grid_(default_jsa_grid(source_.signal_res, settings_.jsa_points, settings_.jsa_window))
{
    source_.validate();
    const JointSpectralAmplitude ref =
        build_jsa(source_.single_pulse_reference(), idler_grid_, signal_grid_, settings_.jsa);
    reference_norm_sq_ = ref.norm_sq();
    reference_purity_ = purity(ref);
}

PointEvaluation PumpEvaluator::evaluate(const PumpSpec& pump) const
{
    PointEvaluation out;
    try {
        RingSource s = source_;
        s.pump = pump;
        const JointSpectralAmplitude jsa = build_jsa(s, idler_grid_, signal_grid_, settings_.jsa);
        out.relative_rate = jsa.norm_sq() / reference_norm_sq_;
        if (out.relative_rate >= settings_.undefined_rate_floor)
            out.purity = purity(jsa);
    } catch (const Error& e) {
        out.error = e.what();
    }
    return out;
}

PointEvaluation PumpEvaluator::evaluate_dual(double eta, double delta_tau) const
{
    PumpSpec p;
    p.shape = PumpShape::DualPulse;
    p.tau_p = source_.pump.tau_p;
    p.phi = source_.pump.phi;
    p.eta = eta;
    p.delta_tau = delta_tau;
    return evaluate(p);
}

void SweepPlan::validate() const
{
    eta.validate("eta");
    delta_tau.validate("delta_tau");
    if (eta.min < 0.0 || eta.max > 1.0)
        throw ConfigError("eta range must lie within [0, 1]");
    if (!(tau_p > 0.0))
        throw ConfigError("tau_p Omega must be positive");
    if (!std::isfinite(phi))
        throw ConfigError("phase must be finite");
}

const PointEvaluation& SweepResult::at(std::size_t i_eta, std::size_t i_dt) const
{
    return points.at(i_eta * plan.delta_tau.n + i_dt);
}

std::optional<double> SweepResult::max_purity() const
{
    std::optional<double> best;
    for (const auto& p : points)
        if (p.purity && (!best || *p.purity > *best))
            best = p.purity;
    return best;
}

SweepResult sweep(const SweepPlan& plan, const RingSource& source_template)
{
    plan.validate();
    SweepResult result;
    result.plan = plan;
    result.started = std::chrono::system_clock::now();

    RingSource source = source_template;
    source.pump = PumpSpec::dual(plan.tau_p, 1.0, 0.0, plan.phi);
    const PumpEvaluator evaluator(source, plan.settings);
    result.reference_norm_sq = evaluator.reference_norm_sq();
    result.reference_purity = evaluator.reference_purity();

    result.points.resize(plan.eta.n * plan.delta_tau.n);
    parallel_for(result.points.size(), plan.settings.threads, [&](std::size_t k) {
        const std::size_t i = k / plan.delta_tau.n;
        const std::size_t j = k % plan.delta_tau.n;
        result.points[k] = evaluator.evaluate_dual(plan.eta.at(i), plan.delta_tau.at(j));
    });
    result.finished = std::chrono::system_clock::now();
    return result;
}

SweepResult sweep(const SweepPlan& plan)
{
    return sweep(plan, RingSource::standard(PumpSpec::single(plan.tau_p)));
}

const char* to_string(TraceEntry::Stage stage)
{
    switch (stage) {
    case TraceEntry::Stage::Grid: return "grid";
    case TraceEntry::Stage::Simplex: return "simplex";
    case TraceEntry::Stage::WarmStart: return "warm_start";
    }
    return "unknown";
}

OptimumReport optimize_constrained(double tau_p, double rate_floor, double phi, const OptimizeOptions& options,
                                   std::span<const Candidate> warm_starts)
{
    validate_optimize(tau_p, phi, options);
    validate_floor(rate_floor);
    const PumpEvaluator evaluator(RingSource::standard(PumpSpec::dual(tau_p, 1.0, 0.0, phi)), options.settings);
    return refine(evaluator, scan_grid(evaluator, options), rate_floor, warm_starts, options);
}

std::vector<OptimumReport> optimize_rate_floors(double tau_p, std::span<const double> rate_floors, double phi,
                                                const OptimizeOptions& options)
{
    validate_optimize(tau_p, phi, options);
    for (double c : rate_floors)
        validate_floor(c);
    const PumpEvaluator evaluator(RingSource::standard(PumpSpec::dual(tau_p, 1.0, 0.0, phi)), options.settings);
    const GridScan scan = scan_grid(evaluator, options);

    std::vector<std::size_t> order(rate_floors.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return rate_floors[a] > rate_floors[b]; });

    std::vector<OptimumReport> reports(rate_floors.size());
    std::vector<Candidate> stricter;
    for (std::size_t idx : order) {
        reports[idx] = refine(evaluator, scan, rate_floors[idx], stricter, options);
        if (reports[idx].feasible)
            stricter.push_back({reports[idx].best_eta, reports[idx].best_delta_tau});
    }
    return reports;
}

SensitivityCurve detuning_scan(const SensitivityBase& base, std::span<const double> detunings,
                               const EvaluationSettings& settings)
{
    SensitivityCurve curve;
    curve.base = base;
    curve.points.resize(detunings.size());
    const PumpSpec pump = base.pump();
    parallel_for(detunings.size(), settings.threads, [&](std::size_t k) {
        auto& p = curve.points[k];
        p.parameter = detunings[k];
        p.detuning = detunings[k];
        p.phi = base.phi;
        try {
            EvaluationSettings serial = settings;
            serial.threads = 1;
            const PumpEvaluator evaluator(RingSource::standard(pump).shifted(detunings[k]), serial);
            p.result = evaluator.evaluate(pump);
        } catch (const Error& e) {
            p.result.error = e.what();
        }
    });
    return curve;
}

SensitivityCurve wavelength_shift_scan(const SensitivityBase& base, const units::Normalizer& normalizer,
                                       std::span<const double> delta_lambdas, const EvaluationSettings& settings)
{
    std::vector<double> detunings(delta_lambdas.size());
    for (std::size_t k = 0; k < detunings.size(); ++k)
        detunings[k] = normalizer.wavelength_shift(delta_lambdas[k]);
    SensitivityCurve curve = detuning_scan(base, detunings, settings);
    for (std::size_t k = 0; k < detunings.size(); ++k)
        curve.points[k].parameter = delta_lambdas[k];
    return curve;
}

SensitivityCurve phase_scan(const SensitivityBase& base, std::span<const double> phis,
                            const EvaluationSettings& settings)
{
    SensitivityCurve curve;
    curve.base = base;
    curve.points.resize(phis.size());
    const PumpEvaluator evaluator(RingSource::standard(base.pump()), settings);
    parallel_for(phis.size(), settings.threads, [&](std::size_t k) {
        auto& p = curve.points[k];
        p.parameter = phis[k] - base.phi;
        p.phi = phis[k];
        SensitivityBase shifted = base;
        shifted.phi = phis[k];
        p.result = evaluator.evaluate(shifted.pump());
    });
    return curve;
}

std::optional<double> first_drop_below(const SensitivityCurve& curve, double threshold)
{
    std::optional<double> best;
    for (const auto& p : curve.points) {
        const bool below = !p.result.purity || *p.result.purity < threshold;
        if (below && (!best || std::abs(p.parameter) < *best))
            best = std::abs(p.parameter);
    }
    return best;
}

std::vector<BandwidthPoint> bandwidth_study(std::span<const double> inverse_tau_p, std::span<const double> rate_floors,
                                            double phi, const OptimizeOptions& options)
{
    std::vector<BandwidthPoint> out;
    out.reserve(inverse_tau_p.size());
    for (double inv : inverse_tau_p) {
        if (!(inv > 0.0))
            throw ConfigError("(tau_p Omega)^-1 must be positive");
        BandwidthPoint bp;
        bp.inverse_tau_p = inv;
        const double tau = 1.0 / inv;
        bp.single_pulse_purity =
            PumpEvaluator(RingSource::standard(PumpSpec::single(tau)), options.settings).reference_purity();
        bp.optima = optimize_rate_floors(tau, rate_floors, phi, options);
        out.push_back(std::move(bp));
    }
    return out;
}

} // namespace ringpair
