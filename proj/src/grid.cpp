#include "ringpair/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ringpair/error.hpp"

namespace ringpair {

FrequencyGrid::FrequencyGrid(double half_width, std::size_t n_points, double center_offset)
{
    if (n_points < 2)
        throw ConfigError("frequency grid needs at least 2 points, got " + std::to_string(n_points));
    if (!(half_width > 0.0) || !std::isfinite(half_width))
        throw ConfigError("frequency grid half-width must be positive and finite");
    if (!std::isfinite(center_offset))
        throw ConfigError("frequency grid center must be finite");
    n_ = n_points;
    spacing_ = 2.0 * half_width / static_cast<double>(n_points - 1);
    first_ = center_offset - half_width;
}

FrequencyGrid FrequencyGrid::from_spacing(double first, double spacing, std::size_t n_points)
{
    if (n_points < 2)
        throw ConfigError("frequency grid needs at least 2 points, got " + std::to_string(n_points));
    if (!(spacing > 0.0) || !std::isfinite(spacing) || !std::isfinite(first))
        throw ConfigError("frequency grid spacing must be positive and finite");
    FrequencyGrid g;
    g.first_ = first;
    g.spacing_ = spacing;
    g.n_ = n_points;
    return g;
}

std::vector<double> FrequencyGrid::points() const
{
    std::vector<double> out(n_);
    for (std::size_t k = 0; k < n_; ++k)
        out[k] = point(k);
    return out;
}

std::size_t FrequencyGrid::nearest_index(double x) const
{
    const double r = std::round((x - first_) / spacing_);
    if (r <= 0.0)
        return 0;
    return std::min(static_cast<std::size_t>(r), n_ - 1);
}

} // namespace ringpair
