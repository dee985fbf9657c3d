#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <random>

#include "oracles.hpp"
#include "ringpair/schmidt.hpp"

using namespace ringpair;
using Catch::Approx;

namespace {

Eigen::MatrixXcd random_jsa(std::mt19937& rng, int rows, int cols, int rank)
{
    std::normal_distribution<double> normal;
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(rows, cols);
    for (int k = 0; k < rank; ++k) {
        Eigen::VectorXcd u(rows), v(cols);
        for (int n = 0; n < rows; ++n)
            u(n) = {normal(rng), normal(rng)};
        for (int n = 0; n < cols; ++n)
            v(n) = {normal(rng), normal(rng)};
        a += std::pow(0.6, k) * u * v.transpose();
    }
    return a;
}

} // namespace

TEST_CASE("product state is pure", "[schmidt]")
{
    const FrequencyGrid g(3.0, 40);
    Eigen::VectorXcd u(40), v(40);
    for (int k = 0; k < 40; ++k) {
        u(k) = std::exp(-0.3 * g[k] * g[k]);
        v(k) = Complex{std::cos(g[k]), std::sin(g[k])} / (1.0 + g[k] * g[k]);
    }
    const JointSpectralAmplitude jsa(g, g, u * v.transpose());
    const auto s = schmidt_spectrum(jsa);
    CHECK(s.purity == Approx(1.0).margin(1e-14));
    CHECK(s.schmidt_number == Approx(1.0).margin(1e-14));
    CHECK(s.coefficients[1] < 1e-12 * s.coefficients[0]);
    CHECK(s.rate_sum == Approx(jsa.norm_sq()).epsilon(1e-12));
}

TEST_CASE("diagonal JSA", "[schmidt]")
{
    const FrequencyGrid g(1.0, 5);
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(5, 5);
    const double d[5] = {0.5, -2.0, 1.0, 0.0, Complex{0, 3}.imag()};
    for (int k = 0; k < 5; ++k)
        a(k, k) = d[k];
    const auto s = schmidt_spectrum(JointSpectralAmplitude(g, g, a));
    const double h = g.spacing();
    CHECK(s.coefficients[0] == Approx(3.0 * h));
    CHECK(s.coefficients[1] == Approx(2.0 * h));
    CHECK(s.coefficients[2] == Approx(1.0 * h));
    CHECK(s.coefficients[3] == Approx(0.5 * h));
    // four equal weights would give 1/4
    CHECK(s.purity == Approx((81 + 16 + 1 + 0.0625) / std::pow(9 + 4 + 1 + 0.25, 2)));
    CHECK(purity_from_coefficients(s.coefficients) == Approx(s.purity));
}

TEST_CASE("purity agrees with the trace oracle", "[schmidt][property]")
{
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> dims(8, 48);
    for (int trial = 0; trial < 25; ++trial) {
        const int r = dims(rng), c = dims(rng);
        const Eigen::MatrixXcd a = random_jsa(rng, r, c, 1 + trial % 6);
        const FrequencyGrid gi(2.0, static_cast<std::size_t>(r));
        const FrequencyGrid gs(3.0, static_cast<std::size_t>(c));
        const JointSpectralAmplitude jsa(gi, gs, a);
        const double p = purity(jsa);
        CHECK(p == Approx(oracle::trace_purity(a, gi.spacing(), gs.spacing())).margin(1e-12));
        CHECK(p > 0.0);
        CHECK(p <= 1.0 + 1e-12);
    }
}

TEST_CASE("decomposition modes", "[schmidt]")
{
    std::mt19937 rng(8);
    const FrequencyGrid gi(2.0, 20);
    const FrequencyGrid gs(4.0, 24);
    const JointSpectralAmplitude jsa(gi, gs, random_jsa(rng, 20, 24, 20));
    const auto dec = decompose(jsa, 20);

    SECTION("full reconstruction")
    {
        CHECK((dec.reconstruct() - jsa.values()).norm() < 1e-10 * jsa.values().norm());
    }
    SECTION("orthonormal under the grid measure")
    {
        const Eigen::MatrixXcd gram_i = dec.modes.idler_modes.adjoint() * dec.modes.idler_modes * gi.spacing();
        const Eigen::MatrixXcd gram_s = dec.modes.signal_modes.adjoint() * dec.modes.signal_modes * gs.spacing();
        CHECK((gram_i - Eigen::MatrixXcd::Identity(20, 20)).norm() < 1e-10);
        CHECK((gram_s - Eigen::MatrixXcd::Identity(20, 20)).norm() < 1e-10);
    }
    SECTION("phase convention")
    {
        for (Eigen::Index k = 0; k < 20; ++k) {
            Eigen::Index idx = 0;
            dec.modes.signal_modes.col(k).cwiseAbs().maxCoeff(&idx);
            const Complex top = dec.modes.signal_modes(idx, k);
            CHECK(top.real() > 0.0);
            CHECK(std::abs(top.imag()) < 1e-12 * top.real());
        }
    }
    SECTION("leading modes only")
    {
        const auto few = decompose(jsa, 3);
        CHECK(few.modes.idler_modes.cols() == 3);
        CHECK(few.spectrum.purity == Approx(dec.spectrum.purity).epsilon(1e-12));
    }
    CHECK_THROWS_AS(decompose(jsa, 21), ConfigError);
}

TEST_CASE("truncated spectrum", "[schmidt]")
{
    std::mt19937 rng(21);
    const FrequencyGrid g(2.0, 40);
    const JointSpectralAmplitude jsa(g, g, random_jsa(rng, 40, 40, 12));
    const auto full = schmidt_spectrum(jsa);
    SpectrumOptions opts;
    opts.truncation_tolerance = 1e-10;
    const auto cut = schmidt_spectrum(jsa, opts);
    CHECK(cut.coefficients.size() < full.coefficients.size());
    CHECK(cut.discarded_weight <= 1e-10 * full.rate_sum);
    CHECK(cut.purity == full.purity);
    CHECK(full.discarded_weight == 0.0);
}

TEST_CASE("degenerate inputs", "[schmidt]")
{
    const FrequencyGrid g(1.0, 8);
    CHECK_THROWS_AS(schmidt_spectrum(JointSpectralAmplitude(g, g, Eigen::MatrixXcd::Zero(8, 8))),
                    NumericalGuardError);
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Ones(8, 8);
    a(2, 3) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(purity(JointSpectralAmplitude(g, g, a)), NumericalGuardError);
    CHECK_THROWS_AS(purity_from_coefficients(std::vector<double>{}), NumericalGuardError);
}
