#pragma once

#include "nodalheat/geometry.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace nodalheat {

/// Regular grid of square cells. Samples live at cell centres.
struct GridSpec {
    int nx = 0;
    int ny = 0;
    double x0 = 0.0;
    double y0 = 0.0;
    double h = 0.0;
    bool periodic_x = false;
    bool periodic_y = false;

    /// Throws InvalidParameter unless extent_x / nx == extent_y / ny.
    static GridSpec make(int nx, int ny, Point origin, double extent_x, double extent_y,
                         bool periodic_x = false, bool periodic_y = false);
    static GridSpec square(int n, Point origin, double extent, bool periodic = false);

    double extent_x() const { return nx * h; }
    double extent_y() const { return ny * h; }
    double cell_area() const { return h * h; }
    std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx) + static_cast<std::size_t>(i);
    }
    Point cell_center(int i, int j) const { return {x0 + (i + 0.5) * h, y0 + (j + 0.5) * h}; }
    Box bounds() const { return {{x0, y0}, {x0 + extent_x(), y0 + extent_y()}}; }

    /// Maps periodic coordinates into the fundamental rectangle.
    Point wrap(Point p) const;
    /// Cell containing p after wrapping; nullopt when p is off a non-periodic grid.
    std::optional<std::pair<int, int>> locate(Point p) const;
    /// Shortest displacement b - a, using the minimal image on periodic axes.
    Point displacement(Point a, Point b) const;

    bool operator==(const GridSpec&) const = default;
};

/// Cell-centred samples of a scalar function.
struct ScalarField {
    GridSpec grid;
    std::vector<double> values;
    /// Cells the sampled model is defined on; empty means every cell.
    std::vector<std::uint8_t> support;
    std::vector<std::string> warnings;

    double at(int i, int j) const { return values[grid.index(i, j)]; }
    bool supported(std::size_t k) const { return support.empty() || support[k] != 0; }
    double max_abs() const;
};

} // namespace nodalheat
