#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "ringpair/biphoton.hpp"
#include "ringpair/schmidt.hpp"

using namespace ringpair;
using Catch::Approx;

TEST_CASE("JSA matches the direct product formula", "[biphoton]")
{
    const RingSource src = RingSource::standard(PumpSpec::dual(0.2, 0.6, 0.3));
    const FrequencyGrid g(4.0, 33);
    const JointSpectralAmplitude jsa = build_jsa(src, g, g);

    // F_p from direct summation on the pump grid the library picked
    const FrequencyGrid pg = pump_grid_for(src, g, g);
    const auto field = in_resonator_field(incident_envelope(src, pg), src.pump_res);
    const auto fp = oracle::direct_self_convolution(field.values, pg.spacing());
    const FrequencyGrid fg = self_convolution_grid(pg);
    const auto l = lorentzian_lineshape(g, src.signal_res);

    double peak = 0.0, err = 0.0;
    for (std::size_t a = 0; a < g.size(); ++a)
        for (std::size_t b = 0; b < g.size(); ++b) {
            const auto k = fg.nearest_index(g[a] + g[b]);
            REQUIRE(fg[k] == Approx(g[a] + g[b]).margin(1e-9));
            const Complex expect = fp[k] * l.values[a] * l.values[b];
            peak = std::max(peak, std::abs(expect));
            err = std::max(err, std::abs(expect - jsa.values()(a, b)));
        }
    CHECK(err < 1e-12 * peak);

    double norm = 0.0;
    for (std::size_t a = 0; a < g.size(); ++a)
        for (std::size_t b = 0; b < g.size(); ++b)
            norm += std::norm(jsa.values()(a, b));
    CHECK(jsa.norm_sq() == Approx(norm * g.spacing() * g.spacing()).epsilon(1e-12));
}

TEST_CASE("unequal signal and idler grids", "[biphoton]")
{
    const RingSource src = RingSource::standard(PumpSpec::single(0.2));
    const FrequencyGrid gi(5.0, 97);
    const FrequencyGrid gs(5.0, 131);
    const auto a = build_jsa(src, gi, gs);
    CHECK(a.values().rows() == 97);
    CHECK(a.values().cols() == 131);
    const auto b = build_jsa(src, FrequencyGrid(5.0, 129), FrequencyGrid(5.0, 129));
    CHECK(purity(a) == Approx(purity(b)).margin(2e-3));
}

TEST_CASE("pump grid coverage", "[biphoton]")
{
    const RingSource src = RingSource::standard(PumpSpec::single(0.2));
    const FrequencyGrid g(6.0, 64);
    JsaOptions opts;
    const FrequencyGrid pg = pump_grid_for(src, g, g, opts);
    CHECK(2 * pg.first() <= 2 * g.first() + 1e-12);
    CHECK(2 * pg.last() >= 2 * g.last() - 1e-12);
    CHECK(pg.spacing() <= 0.05 + 1e-15);

    opts.pump_half_width = 1.0;
    CHECK_THROWS_AS(build_jsa(src, g, g, opts), ConfigError);

    // covers the sums but cuts the field off at +/- 6.5
    opts.pump_half_width = 6.5;
    Diagnostics diag;
    build_jsa(src, g, g, opts, &diag);
    CHECK_FALSE(diag.empty());
    opts.convolution.strict = true;
    CHECK_THROWS_AS(build_jsa(src, g, g, opts), NumericalGuardError);
}

TEST_CASE("relative rate and energy compensation", "[biphoton]")
{
    const FrequencyGrid g(6.0, 128);
    RingSource src = RingSource::standard(PumpSpec::dual(0.2, 0.3, -0.5));
    const auto ref = build_jsa(src.single_pulse_reference(), g, g);
    CHECK(relative_rate(ref, ref) == 1.0);

    const double rr = relative_rate(build_jsa(src, g, g), ref);
    REQUIRE(rr > 0.0);
    REQUIRE(rr < 1.0);
    src.pulse_energy = 1.0 / std::sqrt(rr);
    CHECK(relative_rate(build_jsa(src, g, g), ref) == Approx(1.0).epsilon(1e-6));
}

TEST_CASE("mirror symmetry on random pumps", "[biphoton][property]")
{
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const FrequencyGrid g(6.0, 96);
    for (int trial = 0; trial < 8; ++trial) {
        const double tau = 0.05 + 0.5 * u(rng);
        const double eta = u(rng);
        const double dt = 4.0 * u(rng) - 2.0;
        const auto a = build_jsa(RingSource::standard(PumpSpec::dual(tau, eta, dt)), g, g);
        const auto b = build_jsa(RingSource::standard(PumpSpec::dual(tau, 1.0 - eta, -dt)), g, g);
        CHECK(purity(a) == Approx(purity(b)).margin(1e-8));
        CHECK(a.norm_sq() == Approx(b.norm_sq()).epsilon(1e-8));
    }
}

TEST_CASE("resonance shift", "[biphoton]")
{
    const RingSource src = RingSource::standard(PumpSpec::single(0.2));
    const RingSource moved = src.shifted(0.7);
    CHECK(moved.pump_res.detuning == 0.7);
    CHECK(moved.signal_res.detuning == 0.7);
    CHECK(moved.idler_res.detuning == 0.7);
    CHECK(src.shifted(0.0).pump_res.detuning == 0.0);

    const FrequencyGrid g = default_jsa_grid(moved.signal_res, 64, 6.0);
    CHECK(g.center_offset() == Approx(0.7));
}

TEST_CASE("JSI normalization and guards", "[biphoton]")
{
    const FrequencyGrid g(6.0, 32);
    const auto jsa = build_jsa(RingSource::standard(PumpSpec::single(0.3)), g, g);
    CHECK(jsi(jsa).maxCoeff() == Approx(1.0));
    CHECK(jsi(jsa).minCoeff() >= 0.0);

    const JointSpectralAmplitude zero(g, g, Eigen::MatrixXcd::Zero(32, 32));
    CHECK_THROWS_AS(jsi(zero), NumericalGuardError);
    CHECK_THROWS_AS(JointSpectralAmplitude(g, g, Eigen::MatrixXcd::Zero(31, 32)), ConfigError);
}
