// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>

#include "oracles.hpp"
#include "ringpair/biphoton.hpp"
#include "ringpair/optimizer.hpp"
#include "ringpair/schmidt.hpp"
#include "ringpair/units.hpp"

using namespace ringpair;

namespace {

int failures = 0;

void report(int id, const char* title, bool ok, const std::string& detail)
{
    std::printf("%s criterion %d (%s): %s\n", ok ? "PASS" : "FAIL", id, title, detail.c_str());
    std::fflush(stdout);
    if (!ok)
        ++failures;
}

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

JointSpectralAmplitude headline_jsa(const PumpSpec& pump, std::size_t n = 512)
{
    const RingSource src = RingSource::standard(pump);
    const FrequencyGrid g = default_jsa_grid(src.signal_res, n, 6.0);
    return build_jsa(src, g, g);
}

double headline_purity(const PumpSpec& pump, std::size_t n = 512)
{
    return purity(headline_jsa(pump, n));
}

const PumpSpec kHeadlineDual = PumpSpec::dual(0.1, 0.55, 0.2);

void single_pulse_asymptote()
{
    bool ok = true;
    std::string detail;
    for (double tau : {0.05, 0.02}) {
        const auto t0 = std::chrono::steady_clock::now();
        const double p = headline_purity(PumpSpec::single(tau));
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        ok = ok && p >= 0.915 && p <= 0.925;
        detail += fmt("tau_p*Omega=%.2f P=%.6f (%.2fs) ", tau, p, secs);
    }
    report(1, "single-pulse asymptote", ok, detail);
}

void dual_pulse_headline()
{
    const JointSpectralAmplitude dual = headline_jsa(kHeadlineDual);
    const JointSpectralAmplitude single = headline_jsa(PumpSpec::single(0.1));
    const double p = purity(dual);
    // rows reaching 10% of the JSI peak; a clear drift is over twice the dual bound
    const int drift_dual = oracle::row_argmax_drift(jsi(dual), 0.1);
    const int drift_single = oracle::row_argmax_drift(jsi(single), 0.1);
    const bool ok = p > 0.99 && drift_dual < 2 && drift_single >= 5;
    report(2, "dual-pulse headline", ok,
           fmt("P=%.6f drift dual=%d bins, single=%d bins", p, drift_dual, drift_single));
}

void target_factorability()
{
    const double sigma = 20.0;
    const double p = headline_purity(PumpSpec::target(sigma));

    const Resonance res{1e5, 1e5, 0.0};
    const FrequencyGrid g(8.0 * sigma, 2001);
    const ComplexSpectrum field = in_resonator_field(target_envelope(g, res, sigma), res);
    const ComplexSpectrum fp = pump_self_convolution(field, self_convolution_grid(g));
    const double slope = oracle::log_quadratic_slope(fp.grid.points(), fp.values, 3.0 * sigma);
    const double expected = -1.0 / (4.0 * sigma * sigma);
    const double rel = std::abs(slope / expected - 1.0);
    report(3, "target-spectrum factorability", p > 0.999 && rel < 1e-3,
           fmt("P=%.7f fitted width coefficient %.9g vs %.9g (rel %.2e)", p, -slope, -expected, rel));
}

void symmetry_suite()
{
    SweepPlan plan;
    plan.eta = {0.0, 1.0, 21};
    plan.delta_tau = {-1.0, 1.0, 21};
    plan.tau_p = 0.2;
    const SweepResult r = sweep(plan);
    double dp = 0.0;
    double dr = 0.0;
    bool defined_match = true;
    for (std::size_t i = 0; i < 21; ++i)
        for (std::size_t j = 0; j < 21; ++j) {
            const auto& a = r.at(i, j);
            const auto& b = r.at(20 - i, 20 - j);
            dr = std::max(dr, std::abs(a.relative_rate - b.relative_rate));
            if (a.purity.has_value() != b.purity.has_value())
                defined_match = false;
            else if (a.purity)
                dp = std::max(dp, std::abs(*a.purity - *b.purity));
        }
    report(4, "mirror symmetry", defined_match && dp < 1e-6 && dr < 1e-6,
           fmt("max |dP|=%.2e max |dR|/R0=%.2e", dp, dr));
}

void rate_zero_point()
{
    const JointSpectralAmplitude z = headline_jsa(PumpSpec::dual(0.2, 0.5, 0.0));
    const JointSpectralAmplitude ref = headline_jsa(PumpSpec::single(0.2));
    const double rr = relative_rate(z, ref);
    report(5, "rate zero point", rr < 1e-10, fmt("R/R0=%.3e", rr));
}

void constrained_optimization()
{
    const std::vector<double> floors{0.0, 0.2, 0.5};
    const auto reports = optimize_rate_floors(0.1, floors, std::numbers::pi);
    const auto& c0 = reports[0];
    const auto& c2 = reports[1];
    const auto& c5 = reports[2];
    const bool feasible = c0.feasible && c2.feasible && c5.feasible;
    const bool ok = feasible && c2.best_purity > 0.99 && c2.achieved_rate_ratio >= 0.2
                    && c5.best_purity <= c2.best_purity && c2.best_purity <= c0.best_purity;
    report(6, "constrained optimization", ok,
           fmt("P(c=0)=%.6f P(c=0.2)=%.6f at eta=%.4f dtau=%.4f R/R0=%.4f P(c=0.5)=%.6f", c0.best_purity,
               c2.best_purity, c2.best_eta, c2.best_delta_tau, c2.achieved_rate_ratio, c5.best_purity));
}

void oracle_equivalence()
{
    std::mt19937 rng(20240611);
    std::normal_distribution<double> normal;
    std::uniform_int_distribution<int> rank_dist(1, 8);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        // sums of a few random product terms plus noise, spanning low to high purity
        const int rank = rank_dist(rng);
        Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(64, 64);
        for (int k = 0; k < rank; ++k) {
            Eigen::VectorXcd u(64), v(64);
            for (int n = 0; n < 64; ++n) {
                u(n) = {normal(rng), normal(rng)};
                v(n) = {normal(rng), normal(rng)};
            }
            a += std::pow(0.5, k) * u * v.transpose();
        }
        for (int n = 0; n < 64 * 64; ++n)
            a(n) += 0.01 * Complex{normal(rng), normal(rng)};
        const FrequencyGrid g(3.0, 64);
        const JointSpectralAmplitude jsa(g, g, a);
        worst = std::max(worst, std::abs(purity(jsa) - oracle::trace_purity(a, g.spacing(), g.spacing())));
    }
    double worst_headline = 0.0;
    for (const PumpSpec& p : {PumpSpec::single(0.1), kHeadlineDual}) {
        const JointSpectralAmplitude jsa = headline_jsa(p);
        worst_headline = std::max(worst_headline, std::abs(purity(jsa) - oracle::trace_purity(jsa.values(), jsa.idler_grid().spacing(),
                                                                                    jsa.signal_grid().spacing())));
    }
    report(7, "SVD vs trace oracle", worst < 1e-9 && worst_headline < 1e-9,
           fmt("random max diff=%.2e, headline JSAs max diff=%.2e", worst, worst_headline));
}

void convolution_oracle()
{
    std::mt19937 rng(77);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> npts(64, 512);
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        const double tau = 0.05 + 0.5 * u(rng);
        PumpSpec pump;
        switch (trial % 3) {
        case 0: pump = PumpSpec::single(tau); break;
        case 1: pump = PumpSpec::dual(tau, u(rng), 2.0 * u(rng) - 1.0, 2.0 * std::numbers::pi * u(rng)); break;
        default: pump = PumpSpec::target(2.0 + 20.0 * u(rng)); break;
        }
        RingSource src = RingSource::standard(pump);
        const FrequencyGrid g(default_pump_half_width(pump, src.pump_res) * (0.8 + 0.4 * u(rng)),
                              static_cast<std::size_t>(npts(rng)), 0.3 * (u(rng) - 0.5));
        const ComplexSpectrum field = in_resonator_field(incident_envelope(src, g), src.pump_res);
        const ComplexSpectrum fast = pump_self_convolution(field, self_convolution_grid(g));
        const auto direct = oracle::direct_self_convolution(field.values, g.spacing());
        double peak = 0.0;
        double diff = 0.0;
        for (std::size_t k = 0; k < direct.size(); ++k) {
            peak = std::max(peak, std::abs(direct[k]));
            diff = std::max(diff, std::abs(direct[k] - fast.values[k]));
        }
        worst = std::max(worst, diff / peak);
    }
    report(8, "convolution oracle", worst < 1e-8, fmt("max relative diff=%.2e over 10 pumps", worst));
}

void numerical_hygiene()
{
    double parseval = 0.0;
    for (const PumpSpec& p : {PumpSpec::single(0.1), kHeadlineDual, PumpSpec::target(20.0, 0.05)}) {
        const RingSource src = RingSource::standard(p);
        const FrequencyGrid g = default_spectrum_grid(p, src.pump_res);
        const ComplexSpectrum field = in_resonator_field(incident_envelope(src, g), src.pump_res);
        parseval = std::max(parseval, std::abs(to_time_domain(field).energy() / field.energy() - 1.0));
    }
    double doubling = 0.0;
    std::string detail;
    for (const PumpSpec& p : {PumpSpec::single(0.05), PumpSpec::single(0.02), PumpSpec::single(0.1), kHeadlineDual,
                              PumpSpec::target(20.0)}) {
        const double d = std::abs(headline_purity(p, 1024) - headline_purity(p, 512));
        doubling = std::max(doubling, d);
    }
    report(9, "numerical hygiene", parseval < 1e-10 && doubling < 1e-4,
           fmt("Parseval rel err=%.2e, grid-doubling max |dP|=%.2e", parseval, doubling));
}

void sensitivity_property()
{
    const double lambda = 1550e-9;
    const double tau_p = 10e-12;
    AxisRange shifts{-40e-12, 40e-12, 81};
    double drop[2] = {0.0, 0.0};
    bool defined = true;
    const double qs[2] = {5e4, 2e5};
    for (int k = 0; k < 2; ++k) {
        const units::Normalizer norm(lambda, qs[k]);
        const SensitivityBase base{0.6, 0.3, norm.time(tau_p), std::numbers::pi};
        const auto curve = wavelength_shift_scan(base, norm, shifts.values());
        const auto d = first_drop_below(curve, 0.95);
        defined = defined && d.has_value();
        drop[k] = d.value_or(0.0);
    }
    report(10, "sensitivity Q1 < Q2", defined && drop[0] > drop[1],
           fmt("first |dlambda| below 0.95: Q=5e4 %.0f pm, Q=2e5 %.0f pm", drop[0] * 1e12, drop[1] * 1e12));
}

} // namespace

int main()
{
    single_pulse_asymptote();
    dual_pulse_headline();
    target_factorability();
    symmetry_suite();
    rate_zero_point();
    constrained_optimization();
    oracle_equivalence();
    convolution_oracle();
    numerical_hygiene();
    sensitivity_property();
    std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
