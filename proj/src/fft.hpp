#pragma once

#include <complex>
#include <span>
#include <vector>

namespace ringpair::detail {

enum class FftSign { Negative, Positive };

/// Unnormalized in-place DFT: X_k = sum_n x_n exp(+-2 pi i k n / N).
void dft(std::span<std::complex<double>> data, FftSign sign);

/// Full linear convolution (length a.size() + b.size() - 1) through zero
/// padded transforms of at least twice the input length.
std::vector<std::complex<double>> linear_convolution(std::span<const std::complex<double>> a,
                                                     std::span<const std::complex<double>> b);

} // namespace ringpair::detail
