#include "nodalheat/nodal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nodalheat {

namespace {

constexpr double far = 1e30;

// Lower envelope of parabolas (Felzenszwalb & Huttenlocher) on a 1-D array;
// entries at `far` are absent. arg receives the minimising position.
void edt_1d(const std::vector<double>& f, std::vector<double>& d, std::vector<int>& arg) {
    const int n = static_cast<int>(f.size());
    d.assign(f.size(), far);
    arg.assign(f.size(), -1);
    std::vector<int> v(f.size());
    std::vector<double> z(f.size() + 1);
    auto fv = [&](int q) { return f[static_cast<std::size_t>(q)]; };
    auto meet = [&](int q, int p) { return ((fv(q) + double(q) * q) - (fv(p) + double(p) * p)) / (2.0 * (q - p)); };
    int k = -1;
    for (int q = 0; q < n; ++q) {
        if (fv(q) >= far) continue;
        if (k < 0) {
            k = 0;
            v[0] = q;
            z[0] = -std::numeric_limits<double>::infinity();
            z[1] = std::numeric_limits<double>::infinity();
            continue;
        }
        double s = meet(q, v[static_cast<std::size_t>(k)]);
        while (s <= z[static_cast<std::size_t>(k)]) {
            --k;
            s = meet(q, v[static_cast<std::size_t>(k)]);
        }
        ++k;
        v[static_cast<std::size_t>(k)] = q;
        z[static_cast<std::size_t>(k)] = s;
        z[static_cast<std::size_t>(k) + 1] = std::numeric_limits<double>::infinity();
    }
    if (k < 0) return;
    int j = 0;
    for (int q = 0; q < n; ++q) {
        while (z[static_cast<std::size_t>(j) + 1] < q) ++j;
        const int p = v[static_cast<std::size_t>(j)];
        d[static_cast<std::size_t>(q)] = double(q - p) * (q - p) + fv(p);
        arg[static_cast<std::size_t>(q)] = p;
    }
}

// Builds the padded 1-D line: periodic lines are tripled so the minimal image
// wins; walled lines get one outside sample beyond each end.
int pad_line(const std::vector<double>& line, bool periodic, bool walls, std::vector<double>& f) {
    f.clear();
    const int n = static_cast<int>(line.size());
    if (periodic) {
        for (int rep = 0; rep < 3; ++rep) f.insert(f.end(), line.begin(), line.end());
        return n;
    }
    if (walls) {
        f.push_back(0.0);
        f.insert(f.end(), line.begin(), line.end());
        f.push_back(0.0);
        return 1;
    }
    f = line;
    return 0;
}

} // namespace

DistanceMap distance_map(const GridSpec& g, const std::vector<unsigned char>& outside, bool walls_outside) {
    const bool wall_x = walls_outside && !g.periodic_x;
    const bool wall_y = walls_outside && !g.periodic_y;
    DistanceMap out;
    out.squared.assign(g.size(), far);
    out.offset.assign(g.size(), {0, 0});
    std::vector<int> dx(g.size(), 0);

    std::vector<double> line;
    std::vector<double> f;
    std::vector<double> d;
    std::vector<int> arg;
    for (int j = 0; j < g.ny; ++j) {
        line.resize(static_cast<std::size_t>(g.nx));
        for (int i = 0; i < g.nx; ++i) line[static_cast<std::size_t>(i)] = outside[g.index(i, j)] ? 0.0 : far;
        const int off = pad_line(line, g.periodic_x, wall_x, f);
        edt_1d(f, d, arg);
        for (int i = 0; i < g.nx; ++i) {
            const auto q = static_cast<std::size_t>(i + off);
            out.squared[g.index(i, j)] = d[q];
            dx[g.index(i, j)] = arg[q] < 0 ? 0 : arg[q] - (i + off);
        }
    }
    std::vector<double> first(out.squared);
    for (int i = 0; i < g.nx; ++i) {
        line.resize(static_cast<std::size_t>(g.ny));
        for (int j = 0; j < g.ny; ++j) line[static_cast<std::size_t>(j)] = first[g.index(i, j)];
        const int off = pad_line(line, g.periodic_y, wall_y, f);
        edt_1d(f, d, arg);
        for (int j = 0; j < g.ny; ++j) {
            const auto q = static_cast<std::size_t>(j + off);
            out.squared[g.index(i, j)] = d[q];
            if (arg[q] < 0) continue;
            const int p = arg[q];
            int row = p - off;
            int ox = 0;
            if (g.periodic_y) {
                row = ((p % g.ny) + g.ny) % g.ny;
                ox = dx[g.index(i, row)];
            } else if (row >= 0 && row < g.ny) {
                ox = dx[g.index(i, row)];
            }
            out.offset[g.index(i, j)] = {ox, p - (j + off)};
        }
    }
    return out;
}

std::vector<double> squared_distance_transform(const GridSpec& grid, const std::vector<unsigned char>& outside,
                                               bool walls_outside) {
    return distance_map(grid, outside, walls_outside).squared;
}

double domain_inradius(const DomainMask& mask, int label) {
    mask.require_label(label);
    const GridSpec& g = mask.grid;
    std::vector<unsigned char> outside(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) outside[k] = mask.labels[k] != label;
    const std::vector<double> d2 = squared_distance_transform(g, outside, true);
    double best = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (!outside[k]) best = std::max(best, d2[k]);
    }
    // Distance between cell centres minus the half cell to the absorbing face.
    return (std::sqrt(best) - 0.5) * g.h;
}

} // namespace nodalheat
