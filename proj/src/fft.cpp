#include "fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>

namespace ringpair::detail {

namespace {

// FFTW planning is not reentrant; execution on distinct arrays is.
std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}

class Plan {
public:
    Plan(std::span<std::complex<double>> data, FftSign sign)
    {
        auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
        std::lock_guard lock(planner_mutex());
        plan_ = fftw_plan_dft_1d(static_cast<int>(data.size()), ptr, ptr,
                                 sign == FftSign::Negative ? FFTW_FORWARD : FFTW_BACKWARD,
                                 FFTW_ESTIMATE);
    }
    ~Plan()
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan_);
    }
    Plan(const Plan&) = delete;
    Plan& operator=(const Plan&) = delete;

    void execute() const { fftw_execute(plan_); }

private:
    fftw_plan plan_ = nullptr;
};

std::size_t padded_length(std::size_t n)
{
    std::size_t len = 1;
    while (len < n)
        len <<= 1;
    return len;
}

} // namespace

void dft(std::span<std::complex<double>> data, FftSign sign)
{
    if (data.empty())
        return;
    Plan plan(data, sign);
    plan.execute();
}

std::vector<std::complex<double>> linear_convolution(std::span<const std::complex<double>> a,
                                                     std::span<const std::complex<double>> b)
{
    if (a.empty() || b.empty())
        return {};
    const std::size_t out_len = a.size() + b.size() - 1;
    const std::size_t len = padded_length(std::max(out_len, 2 * std::max(a.size(), b.size())));

    std::vector<std::complex<double>> fa(len), fb(len);
    std::copy(a.begin(), a.end(), fa.begin());
    std::copy(b.begin(), b.end(), fb.begin());
    dft(fa, FftSign::Negative);
    dft(fb, FftSign::Negative);
    for (std::size_t k = 0; k < len; ++k)
        fa[k] *= fb[k];
    dft(fa, FftSign::Positive);

    const double scale = 1.0 / static_cast<double>(len);
    std::vector<std::complex<double>> out(out_len);
    for (std::size_t k = 0; k < out_len; ++k)
        out[k] = fa[k] * scale;
    return out;
}

} // namespace ringpair::detail
