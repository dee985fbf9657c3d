#pragma once

#include <cstddef>
#include <vector>

namespace ringpair {

/// Uniform grid of angular frequencies, relative to a resonance center.
///
/// All library operations are unit-agnostic: frequencies on a grid, resonance
/// linewidths and inverse pulse durations only need to share one unit. The
/// front ends use the pump linewidth as that unit.
class FrequencyGrid {
public:
    /// Symmetric grid of n_points spanning center_offset +/- half_width.
    FrequencyGrid(double half_width, std::size_t n_points, double center_offset = 0.0);

    /// Grid defined by its first point and spacing. Used where sums of grid
    /// points must land exactly on another grid.
    static FrequencyGrid from_spacing(double first, double spacing, std::size_t n_points);

    double center_offset() const { return first_ + 0.5 * spacing_ * static_cast<double>(n_ - 1); }
    double half_width() const { return 0.5 * spacing_ * static_cast<double>(n_ - 1); }
    std::size_t size() const { return n_; }
    double spacing() const { return spacing_; }
    double first() const { return first_; }
    double last() const { return point(n_ - 1); }
    double point(std::size_t k) const { return first_ + spacing_ * static_cast<double>(k); }
    double operator[](std::size_t k) const { return point(k); }

    std::vector<double> points() const;

    /// Index of the grid point nearest to x (clamped to the grid).
    std::size_t nearest_index(double x) const;

    bool operator==(const FrequencyGrid& other) const = default;

private:
    FrequencyGrid() = default;

    double first_ = 0.0;
    double spacing_ = 1.0;
    std::size_t n_ = 2;
};

} // namespace ringpair
