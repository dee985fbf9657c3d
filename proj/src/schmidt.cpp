#include "ringpair/schmidt.hpp"

#include <cmath>
#include <string>

namespace ringpair {

namespace {

Eigen::MatrixXcd scaled_kernel(const JointSpectralAmplitude& jsa)
{
    if (!jsa.values().allFinite())
        throw NumericalGuardError("JSA contains non-finite entries");
    if (!(jsa.norm_sq() > 0.0))
        throw NumericalGuardError("cannot decompose an all-zero JSA");
    return jsa.values() * std::sqrt(jsa.idler_grid().spacing() * jsa.signal_grid().spacing());
}

SchmidtSpectrum spectrum_from(const Eigen::VectorXd& singular, const SpectrumOptions& options)
{
    SchmidtSpectrum s;
    s.coefficients.assign(singular.data(), singular.data() + singular.size());
    s.purity = purity_from_coefficients(s.coefficients);
    s.schmidt_number = 1.0 / s.purity;
    double total = 0.0;
    for (double c : s.coefficients)
        total += c * c;
    s.rate_sum = total;

    if (options.truncation_tolerance > 0.0) {
        double dropped = 0.0;
        std::size_t keep = s.coefficients.size();
        while (keep > 1) {
            const double c = s.coefficients[keep - 1];
            if (dropped + c * c >= options.truncation_tolerance * total)
                break;
            dropped += c * c;
            --keep;
        }
        s.coefficients.resize(keep);
        s.discarded_weight = dropped;
    }
    return s;
}

} // namespace

double purity_from_coefficients(std::span<const double> coefficients)
{
    double sum2 = 0.0;
    double sum4 = 0.0;
    for (double c : coefficients) {
        const double c2 = c * c;
        sum2 += c2;
        sum4 += c2 * c2;
    }
    if (!(sum2 > 0.0))
        throw NumericalGuardError("purity undefined for an all-zero spectrum");
    return sum4 / (sum2 * sum2);
}

SchmidtSpectrum schmidt_spectrum(const JointSpectralAmplitude& jsa, const SpectrumOptions& options)
{
    const Eigen::BDCSVD<Eigen::MatrixXcd> svd(scaled_kernel(jsa));
    return spectrum_from(svd.singularValues(), options);
}

double purity(const JointSpectralAmplitude& jsa)
{
    return schmidt_spectrum(jsa).purity;
}

SchmidtDecomposition decompose(const JointSpectralAmplitude& jsa, std::size_t n_modes)
{
    const Eigen::MatrixXcd kernel = scaled_kernel(jsa);
    const auto rank = static_cast<std::size_t>(std::min(kernel.rows(), kernel.cols()));
    if (n_modes > rank)
        throw ConfigError("requested " + std::to_string(n_modes) + " Schmidt modes but the JSA supports at most "
                          + std::to_string(rank));

    const Eigen::BDCSVD<Eigen::MatrixXcd> svd(kernel, Eigen::ComputeThinU | Eigen::ComputeThinV);
    SchmidtDecomposition out;
    out.spectrum = spectrum_from(svd.singularValues(), {});

    const auto n = static_cast<Eigen::Index>(n_modes);
    const double hi = jsa.idler_grid().spacing();
    const double hs = jsa.signal_grid().spacing();
    // A sqrt(hi hs) = U S V^dagger, so psi_i = U / sqrt(hi) and psi_s = conj(V) / sqrt(hs).
    out.modes.idler_modes = svd.matrixU().leftCols(n) / std::sqrt(hi);
    out.modes.signal_modes = svd.matrixV().leftCols(n).conjugate() / std::sqrt(hs);

    for (Eigen::Index k = 0; k < n; ++k) {
        Eigen::Index peak = 0;
        out.modes.signal_modes.col(k).cwiseAbs().maxCoeff(&peak);
        const Complex v = out.modes.signal_modes(peak, k);
        const Complex gauge = std::abs(v) > 0.0 ? std::conj(v) / std::abs(v) : Complex{1.0};
        out.modes.signal_modes.col(k) *= gauge;
        out.modes.idler_modes.col(k) /= gauge;
    }
    return out;
}

Eigen::MatrixXcd SchmidtDecomposition::reconstruct() const
{
    const Eigen::Index n = modes.idler_modes.cols();
    Eigen::VectorXd lambda(n);
    for (Eigen::Index k = 0; k < n; ++k)
        lambda(k) = spectrum.coefficients[static_cast<std::size_t>(k)];
    return modes.idler_modes * lambda.asDiagonal() * modes.signal_modes.transpose();
}

} // namespace ringpair
