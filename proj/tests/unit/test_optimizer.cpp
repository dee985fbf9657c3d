#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ringpair/optimizer.hpp"
#include "ringpair/schmidt.hpp"

using namespace ringpair;
using Catch::Approx;

namespace {

EvaluationSettings coarse(std::size_t n = 64)
{
    EvaluationSettings s;
    s.jsa_points = n;
    return s;
}

} // namespace

TEST_CASE("axis ranges", "[optimizer]")
{
    const AxisRange r{-2.0, 2.0, 5};
    CHECK(r.values() == std::vector<double>{-2.0, -1.0, 0.0, 1.0, 2.0});
    CHECK(r.at(4) == 2.0);
    CHECK_THROWS_AS((AxisRange{0.0, 1.0, 1}.validate("x")), ConfigError);
    CHECK_THROWS_AS((AxisRange{1.0, 1.0, 3}.validate("x")), ConfigError);

    const auto l = log_spaced(0.5, 20.0, 25);
    CHECK(l.size() == 25);
    CHECK(l.front() == Approx(0.5));
    CHECK(l.back() == Approx(20.0));
    CHECK(l[12] == Approx(std::sqrt(10.0)));
    CHECK_THROWS_AS(log_spaced(0.0, 1.0, 3), ConfigError);
}

TEST_CASE("sweep", "[optimizer]")
{
    SweepPlan plan;
    plan.eta = {0.0, 1.0, 5};
    plan.delta_tau = {-1.0, 1.0, 5};
    plan.tau_p = 0.2;
    plan.settings = coarse();
    const SweepResult r = sweep(plan);
    const double single = PumpEvaluator(RingSource::standard(PumpSpec::single(0.2)), plan.settings).reference_purity();

    SECTION("extremes recover the single pulse")
    {
        for (std::size_t j = 0; j < 5; ++j) {
            CHECK(*r.at(0, j).purity == Approx(single).margin(1e-8));
            CHECK(*r.at(4, j).purity == Approx(single).margin(1e-8));
            CHECK(r.at(0, j).relative_rate == Approx(1.0).epsilon(1e-8));
        }
    }
    SECTION("rate zero point is undefined")
    {
        const auto& z = r.at(2, 2);
        CHECK_FALSE(z.purity.has_value());
        CHECK(z.relative_rate < 1e-10);
        CHECK_FALSE(z.error.has_value());
    }
    SECTION("bitwise reproducible and thread independent")
    {
        SweepPlan serial = plan;
        serial.settings.threads = 1;
        SweepPlan wide = plan;
        wide.settings.threads = 4;
        const SweepResult a = sweep(serial);
        const SweepResult b = sweep(wide);
        for (std::size_t k = 0; k < r.points.size(); ++k) {
            CHECK(a.points[k].purity == r.points[k].purity);
            CHECK(b.points[k].purity == r.points[k].purity);
            CHECK(a.points[k].relative_rate == b.points[k].relative_rate);
        }
    }
}

TEST_CASE("sweep records per-point failures", "[optimizer]")
{
    SweepPlan plan;
    plan.eta = {0.0, 1.0, 3};
    plan.delta_tau = {-1.0, 1.0, 3};
    plan.settings = coarse(32);
    plan.settings.jsa.convolution.strict = true;
    plan.settings.jsa.pump_half_width = 7.0; // truncates the field of every pulse
    plan.tau_p = 0.05;
    REQUIRE_THROWS_AS(sweep(plan), NumericalGuardError); // the reference itself fails

    // a reference that builds while some dual points do not
    plan.settings.jsa.pump_half_width = 0.0;
    plan.settings.undefined_rate_floor = 0.0;
    const SweepResult r = sweep(plan);
    CHECK(std::none_of(r.points.begin(), r.points.end(), [](const PointEvaluation& p) { return p.error.has_value(); }));
}

TEST_CASE("constrained optimization", "[optimizer]")
{
    OptimizeOptions opts;
    opts.eta = {0.0, 1.0, 11};
    opts.delta_tau = {-2.0, 2.0, 11};
    opts.settings = coarse();
    const double tau = 0.1;

    const OptimumReport r = optimize_constrained(tau, 0.2, std::numbers::pi, opts);
    REQUIRE(r.feasible);
    CHECK(r.achieved_rate_ratio >= 0.2 - 1e-6);
    CHECK(r.best_purity > 0.99);

    // re-verify the reported point independently
    const PumpEvaluator ev(RingSource::standard(PumpSpec::dual(tau, r.best_eta, r.best_delta_tau)), opts.settings);
    const auto check = ev.evaluate(PumpSpec::dual(tau, r.best_eta, r.best_delta_tau));
    CHECK(*check.purity == Approx(r.best_purity).margin(1e-8));
    CHECK(check.relative_rate == Approx(r.achieved_rate_ratio).margin(1e-8));

    const auto grid_entries = std::count_if(r.trace.begin(), r.trace.end(),
                                            [](const TraceEntry& t) { return t.stage == TraceEntry::Stage::Grid; });
    const auto simplex_entries = std::count_if(r.trace.begin(), r.trace.end(),
                                               [](const TraceEntry& t) { return t.stage == TraceEntry::Stage::Simplex; });
    CHECK(grid_entries == 121);
    CHECK(simplex_entries > 0);
    CHECK(r.evaluations == r.trace.size());

    const OptimumReport none = optimize_constrained(tau, 10.0, std::numbers::pi, opts);
    CHECK_FALSE(none.feasible);

    CHECK_THROWS_AS(optimize_constrained(-1.0, 0.2, std::numbers::pi, opts), ConfigError);
    CHECK_THROWS_AS(optimize_constrained(tau, -0.1, std::numbers::pi, opts), ConfigError);
}

TEST_CASE("rate floors nest", "[optimizer]")
{
    OptimizeOptions opts;
    opts.eta = {0.0, 1.0, 9};
    opts.delta_tau = {-2.0, 2.0, 9};
    opts.settings = coarse();
    const std::vector<double> floors{0.5, 0.0, 0.2};
    const auto reports = optimize_rate_floors(0.15, floors, std::numbers::pi, opts);
    REQUIRE(reports.size() == 3);
    CHECK(reports[0].rate_floor == 0.5);
    CHECK(reports[0].best_purity <= reports[2].best_purity);
    CHECK(reports[2].best_purity <= reports[1].best_purity);
    for (const auto& r : reports)
        CHECK(r.achieved_rate_ratio >= r.rate_floor - 1e-6);
}

TEST_CASE("phase scan near pi for the headline dual pulse", "[optimizer]")
{
    // pi sits in a shallow dip (about 1e-5 deep) between side maxima at
    // |phi - pi| ~ 0.02-0.03; on a 0.05 rad scale it is the peak
    const SensitivityBase base{0.55, 0.2, 0.1, std::numbers::pi};
    const AxisRange phis{std::numbers::pi - 0.3, std::numbers::pi + 0.3, 61};
    const auto curve = phase_scan(base, phis.values(), coarse(96));
    const auto& mid = curve.points[30];
    CHECK(mid.parameter == Approx(0.0).margin(1e-12));

    const auto best = std::max_element(curve.points.begin(), curve.points.end(), [](const auto& a, const auto& b) {
        return a.result.purity.value_or(0.0) < b.result.purity.value_or(0.0);
    });
    CHECK(*best->result.purity - *mid.result.purity < 2e-5);
    CHECK(std::abs(best->parameter) <= 0.05 + 1e-12);
    CHECK(*mid.result.purity > *curve.points[25].result.purity);
    CHECK(*mid.result.purity > *curve.points[35].result.purity);
    // symmetric about pi
    CHECK(*curve.points[20].result.purity == Approx(*curve.points[40].result.purity).margin(1e-10));
}

TEST_CASE("sensitivity scans", "[optimizer]")
{
    const SensitivityBase base{0.6, 0.3, 0.2, std::numbers::pi};
    const auto settings = coarse();
    const PointEvaluation at_base = PumpEvaluator(RingSource::standard(base.pump()), settings).evaluate(base.pump());

    const auto curve = detuning_scan(base, std::vector<double>{-1.0, 0.0, 1.0}, settings);
    CHECK(curve.points[1].result.purity == at_base.purity);
    CHECK(curve.points[1].result.relative_rate == at_base.relative_rate);
    CHECK(*curve.points[0].result.purity < *at_base.purity);

    const units::Normalizer norm(1550e-9, 1e5);
    const auto wl = wavelength_shift_scan(base, norm, std::vector<double>{0.0, 5e-12}, settings);
    CHECK(wl.points[0].result.purity == at_base.purity);
    CHECK(wl.points[1].detuning == Approx(norm.wavelength_shift(5e-12)));
    CHECK(wl.points[1].detuning < 0.0);
}

TEST_CASE("first drop below threshold", "[optimizer]")
{
    SensitivityCurve c;
    const double xs[] = {-3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0};
    const double ps[] = {0.90, 0.94, 0.97, 0.99, 0.96, 0.955, 0.93};
    for (int k = 0; k < 7; ++k)
        c.points.push_back({xs[k], xs[k], 0.0, {ps[k], 1.0, std::nullopt}});
    CHECK(*first_drop_below(c, 0.95) == 2.0);
    CHECK(*first_drop_below(c, 0.985) == 1.0);
    CHECK_FALSE(first_drop_below(c, 0.5).has_value());
    c.points[4].result.purity.reset();
    CHECK(*first_drop_below(c, 0.95) == 1.0);
}
