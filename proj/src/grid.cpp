#include "nodalheat/errors.hpp"
#include "nodalheat/grid.hpp"
#include "nodalheat/mask.hpp"

#include <algorithm>
#include <cmath>

namespace nodalheat {

GridSpec GridSpec::make(int nx, int ny, Point origin, double extent_x, double extent_y, bool periodic_x,
                        bool periodic_y) {
    if (nx <= 0 || ny <= 0) throw InvalidParameter("grid cell counts must be positive");
    if (!(extent_x > 0.0) || !(extent_y > 0.0)) throw InvalidParameter("grid extents must be positive");
    const double hx = extent_x / nx;
    const double hy = extent_y / ny;
    if (std::abs(hx - hy) > 1e-12 * std::max(hx, hy)) {
        throw InvalidParameter("grid cells must be square (extent_x/nx == extent_y/ny)");
    }
    GridSpec g;
    g.nx = nx;
    g.ny = ny;
    g.x0 = origin.x;
    g.y0 = origin.y;
    g.h = hx;
    g.periodic_x = periodic_x;
    g.periodic_y = periodic_y;
    return g;
}

GridSpec GridSpec::square(int n, Point origin, double extent, bool periodic) {
    return make(n, n, origin, extent, extent, periodic, periodic);
}

namespace {
double wrap_coord(double v, double lo, double extent) {
    double r = std::fmod(v - lo, extent);
    if (r < 0.0) r += extent;
    if (r >= extent) r = 0.0;
    return lo + r;
}
} // namespace

Point GridSpec::wrap(Point p) const {
    if (periodic_x) p.x = wrap_coord(p.x, x0, extent_x());
    if (periodic_y) p.y = wrap_coord(p.y, y0, extent_y());
    return p;
}

std::optional<std::pair<int, int>> GridSpec::locate(Point p) const {
    p = wrap(p);
    const double fx = (p.x - x0) / h;
    const double fy = (p.y - y0) / h;
    if (!(fx >= 0.0) || !(fy >= 0.0) || fx > nx || fy > ny) return std::nullopt;
    int i = std::min(static_cast<int>(fx), nx - 1);
    int j = std::min(static_cast<int>(fy), ny - 1);
    return std::pair{i, j};
}

Point GridSpec::displacement(Point a, Point b) const {
    Point d = b - a;
    if (periodic_x) d.x -= extent_x() * std::round(d.x / extent_x());
    if (periodic_y) d.y -= extent_y() * std::round(d.y / extent_y());
    return d;
}

double ScalarField::max_abs() const {
    double m = 0.0;
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (supported(k)) m = std::max(m, std::abs(values[k]));
    }
    return m;
}

int DomainMask::sign_of(int label) const {
    require_label(label);
    return signs[static_cast<std::size_t>(label - 1)];
}

double DomainMask::area_of(int label) const {
    require_label(label);
    return areas[static_cast<std::size_t>(label - 1)];
}

void DomainMask::require_label(int label) const {
    if (label < 1 || label > count()) throw UnknownLabel(label);
}

DomainMask DomainMask::from_labels(const GridSpec& grid, std::vector<int> labels) {
    if (labels.size() != grid.size()) throw InvalidParameter("label array does not match grid");
    DomainMask m;
    m.grid = grid;
    int top = 0;
    for (int l : labels) {
        if (l < 0) throw InvalidParameter("labels must be nonnegative");
        top = std::max(top, l);
    }
    m.labels = std::move(labels);
    m.signs.assign(static_cast<std::size_t>(top), 1);
    m.areas.assign(static_cast<std::size_t>(top), 0.0);
    for (int l : m.labels) {
        if (l > 0) m.areas[static_cast<std::size_t>(l - 1)] += grid.cell_area();
    }
    return m;
}

double mask_perimeter(const DomainMask& mask, int label) {
    mask.require_label(label);
    const GridSpec& g = mask.grid;
    std::size_t faces = 0;
    auto other = [&](int i, int j) {
        if (i < 0 || i >= g.nx) {
            if (!g.periodic_x) return true;
            i = (i + g.nx) % g.nx;
        }
        if (j < 0 || j >= g.ny) {
            if (!g.periodic_y) return true;
            j = (j + g.ny) % g.ny;
        }
        return mask.label_at(i, j) != label;
    };
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            if (mask.label_at(i, j) != label) continue;
            faces += other(i - 1, j) + other(i + 1, j) + other(i, j - 1) + other(i, j + 1);
        }
    }
    return static_cast<double>(faces) * g.h;
}

} // namespace nodalheat
