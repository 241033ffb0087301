#include "nodalheat/errors.hpp"
#include "nodalheat/nodal.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <unordered_map>

namespace nodalheat {

namespace {

std::vector<double> node_coords(double origin, double h, int n, bool periodic) {
    std::vector<double> xs;
    if (periodic) {
        for (int i = 0; i < n; ++i) xs.push_back(origin + (i + 0.5) * h);
    } else {
        xs.push_back(origin);
        for (int i = 0; i < n; ++i) xs.push_back(origin + (i + 0.5) * h);
        xs.push_back(origin + n * h);
    }
    return xs;
}

// Grid cell index along one axis feeding node i; ghost nodes map to the edge cell.
int source_index(int i, int n, bool periodic) {
    if (periodic) return i;
    return std::clamp(i - 1, 0, n - 1);
}

} // namespace

NodeLattice::NodeLattice(const ScalarField& field) : grid_(field.grid) {
    const GridSpec& g = grid_;
    if (field.values.size() != g.size()) throw InvalidParameter("field values do not match grid");
    xs_ = node_coords(g.x0, g.h, g.nx, g.periodic_x);
    ys_ = node_coords(g.y0, g.h, g.ny, g.periodic_y);

    const double eps = zero_perturbation * field.max_abs();
    std::vector<double> cells(field.values);
    for (std::size_t k = 0; k < cells.size(); ++k) {
        if (!std::isfinite(cells[k])) throw InvalidParameter("field contains non-finite values");
        if (field.supported(k) && std::abs(cells[k]) <= eps && eps > 0.0) {
            cells[k] = eps;
            ++perturbed_;
        }
    }

    const int NX = nodes_x();
    const int NY = nodes_y();
    values_.assign(static_cast<std::size_t>(NX) * NY, 0.0);
    support_.assign(values_.size(), 0);

    auto cell = [&](int i, int j) { return cells[g.index(i, j)]; };
    // Extend each cell row along x, then extend the columns along y.
    std::vector<double> rows(static_cast<std::size_t>(NX) * g.ny);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < NX; ++i) {
            double v;
            if (g.periodic_x || (i >= 1 && i <= g.nx)) {
                v = cell(source_index(i, g.nx, g.periodic_x), j);
            } else if (i == 0) {
                v = g.nx >= 2 ? 1.5 * cell(0, j) - 0.5 * cell(1, j) : cell(0, j);
            } else {
                v = g.nx >= 2 ? 1.5 * cell(g.nx - 1, j) - 0.5 * cell(g.nx - 2, j) : cell(g.nx - 1, j);
            }
            rows[static_cast<std::size_t>(j) * NX + i] = v;
        }
    }
    auto row = [&](int i, int j) { return rows[static_cast<std::size_t>(j) * NX + i]; };
    for (int j = 0; j < NY; ++j) {
        for (int i = 0; i < NX; ++i) {
            double v;
            if (g.periodic_y || (j >= 1 && j <= g.ny)) {
                v = row(i, source_index(j, g.ny, g.periodic_y));
            } else if (j == 0) {
                v = g.ny >= 2 ? 1.5 * row(i, 0) - 0.5 * row(i, 1) : row(i, 0);
            } else {
                v = g.ny >= 2 ? 1.5 * row(i, g.ny - 1) - 0.5 * row(i, g.ny - 2) : row(i, g.ny - 1);
            }
            if (v == 0.0 && eps > 0.0 && is_ghost(i, j)) {
                v = eps;
                ++perturbed_;
            }
            values_[index(i, j)] = v;
            const auto [si, sj] = source_cell(i, j);
            support_[index(i, j)] = field.supported(g.index(si, sj)) ? 1 : 0;
        }
    }
}

std::pair<int, int> NodeLattice::source_cell(int i, int j) const {
    return {source_index(i, grid_.nx, grid_.periodic_x), source_index(j, grid_.ny, grid_.periodic_y)};
}

bool NodeLattice::is_ghost(int i, int j) const {
    const bool gx = !grid_.periodic_x && (i == 0 || i == nodes_x() - 1);
    const bool gy = !grid_.periodic_y && (j == 0 || j == nodes_y() - 1);
    return gx || gy;
}

Point NodeLattice::dual_origin(int ci, int cj) const { return {node_x(ci), node_y(cj)}; }

Point NodeLattice::dual_size(int ci, int cj) const {
    const double w = (grid_.periodic_x && ci == nodes_x() - 1) ? grid_.h : node_x(ci + 1) - node_x(ci);
    const double hh = (grid_.periodic_y && cj == nodes_y() - 1) ? grid_.h : node_y(cj + 1) - node_y(cj);
    return {w, hh};
}

namespace {

// Dual cell index and offset inside it along one axis; false when off the lattice.
bool locate_axis(double x, double origin, double h, int n, bool periodic, const std::vector<double>& nodes, int& ci,
                 double& s) {
    if (periodic) {
        const double extent = n * h;
        double r = std::fmod(x - nodes[0], extent);
        if (r < 0.0) r += extent;
        ci = std::min(static_cast<int>(r / h), n - 1);
        s = r - ci * h;
        return true;
    }
    if (!(x >= origin) || x > origin + n * h) return false;
    ci = std::clamp(static_cast<int>(std::floor((x - origin) / h + 0.5)), 0, n);
    s = x - nodes[static_cast<std::size_t>(ci)];
    return true;
}

} // namespace

std::optional<NodeLattice::Sample> NodeLattice::interpolate(Point p) const {
    int ci = 0;
    int cj = 0;
    double sx = 0.0;
    double sy = 0.0;
    if (!locate_axis(p.x, grid_.x0, grid_.h, grid_.nx, grid_.periodic_x, xs_, ci, sx)) return std::nullopt;
    if (!locate_axis(p.y, grid_.y0, grid_.h, grid_.ny, grid_.periodic_y, ys_, cj, sy)) return std::nullopt;
    const int i1 = wrap_node_x(ci + 1);
    const int j1 = wrap_node_y(cj + 1);
    if (!supported(ci, cj) || !supported(i1, cj) || !supported(i1, j1) || !supported(ci, j1)) return std::nullopt;
    const Point size = dual_size(ci, cj);
    const double u = sx / size.x;
    const double w = sy / size.y;
    const double v00 = value(ci, cj);
    const double v10 = value(i1, cj);
    const double v11 = value(i1, j1);
    const double v01 = value(ci, j1);
    Sample s;
    s.value = v00 * (1 - u) * (1 - w) + v10 * u * (1 - w) + v01 * (1 - u) * w + v11 * u * w;
    s.gradient = {((v10 - v00) * (1 - w) + (v11 - v01) * w) / size.x, ((v01 - v00) * (1 - u) + (v11 - v10) * u) / size.y};
    s.ci = ci;
    s.cj = cj;
    return s;
}

namespace {

// A connected piece of contour inside one dual cell, running between two
// lattice-edge crossings, optionally through the vertex of a saddle branch.
struct Branch {
    std::array<Point, 3> pts{};
    int npts = 2;
    std::array<long long, 2> edge{};
    std::array<int, 2> label_a{};  // isolated/first-side label per piece
    std::array<int, 2> label_b{};
};

struct ContourBuilder {
    const NodeLattice& lat;
    const DomainMask* mask;
    const ScalarField& field;
    // Also trace the zero contour between supported and unsupported nodes.
    bool support_edge = false;

    long long h_edge(int i, int j) const {
        return 2LL * (static_cast<long long>(lat.wrap_node_y(j)) * lat.nodes_x() + lat.wrap_node_x(i));
    }
    long long v_edge(int i, int j) const { return h_edge(i, j) + 1; }

    int node_label(int i, int j) const {
        if (mask == nullptr) return 0;
        i = lat.wrap_node_x(i);
        j = lat.wrap_node_y(j);
        if (!lat.supported(i, j)) return off_support;
        const auto [si, sj] = lat.source_cell(i, j);
        const int l = mask->label_at(si, sj);
        if (!lat.is_ghost(i, j)) return l;
        const bool ghost_pos = lat.value(i, j) > 0.0;
        const bool cell_pos = field.at(si, sj) > 0.0;
        return ghost_pos == cell_pos ? l : 0;
    }

    std::vector<Branch> build() const {
        std::vector<Branch> out;
        for (int cj = 0; cj < lat.cells_y(); ++cj) {
            for (int ci = 0; ci < lat.cells_x(); ++ci) emit_cell(ci, cj, out);
        }
        return out;
    }

    void emit_cell(int ci, int cj, std::vector<Branch>& out) const {
        const std::array<std::pair<int, int>, 4> node{{{ci, cj}, {ci + 1, cj}, {ci + 1, cj + 1}, {ci, cj + 1}}};
        std::array<double, 4> v{};
        int supported = 0;
        for (int k = 0; k < 4; ++k) {
            const int i = lat.wrap_node_x(node[k].first);
            const int j = lat.wrap_node_y(node[k].second);
            supported += lat.supported(i, j);
            v[k] = lat.value(i, j);
        }
        if (supported == 0 || (supported < 4 && !support_edge)) return;
        std::array<bool, 4> pos{};
        int npos = 0;
        for (int k = 0; k < 4; ++k) {
            pos[k] = v[k] > 0.0;
            npos += pos[k];
        }
        if (npos == 0 || npos == 4) return;

        const Point o = lat.dual_origin(ci, cj);
        const Point sz = lat.dual_size(ci, cj);
        const std::array<Point, 4> P{{{0, 0}, {sz.x, 0}, {sz.x, sz.y}, {0, sz.y}}};
        const std::array<long long, 4> edge_id{h_edge(ci, cj), v_edge(ci + 1, cj), h_edge(ci, cj + 1), v_edge(ci, cj)};
        std::array<int, 4> lab{};
        for (int k = 0; k < 4; ++k) lab[k] = node_label(node[k].first, node[k].second);

        // Crossing on edge k, between corner k and corner k+1.
        auto crossing = [&](int k) {
            const int a = k;
            const int b = (k + 1) % 4;
            const double t = v[a] / (v[a] - v[b]);
            return o + P[a] + t * (P[b] - P[a]);
        };

        const bool saddle = npos == 2 && pos[0] == pos[2];
        if (!saddle) {
            std::array<int, 2> e{};
            int ne = 0;
            for (int k = 0; k < 4; ++k) {
                if (pos[k] != pos[(k + 1) % 4]) e[ne++] = k;
            }
            int lp = 0;
            int ln = 0;
            for (int k = 0; k < 4; ++k) {
                int& slot = pos[k] ? lp : ln;
                if (slot == 0) slot = lab[k];
            }
            Branch br;
            br.pts[0] = crossing(e[0]);
            br.pts[1] = crossing(e[1]);
            br.npts = 2;
            br.edge = {edge_id[e[0]], edge_id[e[1]]};
            br.label_a = {lp, lp};
            br.label_b = {ln, ln};
            out.push_back(br);
            return;
        }

        // Saddle: the sign of the bilinear interpolant at its critical point
        // decides which pair of diagonal corners is connected.
        const double a = v[0];
        const double b = (v[1] - v[0]) / sz.x;
        const double c = (v[3] - v[0]) / sz.y;
        const double d = (v[2] - v[1] - v[3] + v[0]) / (sz.x * sz.y);
        const double us = -c / d;
        const double ws = -b / d;
        const double fs = a - b * c / d;
        const bool positive_connected = fs >= 0.0;
        const double q = -fs / d;
        const double r = std::sqrt(std::abs(q));
        for (int k = 0; k < 4; ++k) {
            if (pos[k] == positive_connected) continue;  // k is an isolated corner
            const int prev_edge = (k + 3) % 4;           // edge between k-1 and k
            const int next_edge = k;                     // edge between k and k+1
            Branch br;
            br.edge = {edge_id[prev_edge], edge_id[next_edge]};
            br.pts[0] = crossing(prev_edge);
            const Point last = crossing(next_edge);
            const double sx = P[k].x > us ? 1.0 : -1.0;
            const double sy = P[k].y > ws ? 1.0 : -1.0;
            const Point vtx{us + sx * r, ws + sy * r};
            const double tol = 1e-12 * (sz.x + sz.y);
            const bool inside = vtx.x >= -tol && vtx.x <= sz.x + tol && vtx.y >= -tol && vtx.y <= sz.y + tol;
            const int other_prev = lab[(k + 3) % 4];
            const int other_next = lab[(k + 1) % 4];
            if (inside) {
                br.pts[1] = o + vtx;
                br.pts[2] = last;
                br.npts = 3;
                br.label_a = {lab[k], lab[k]};
                br.label_b = {other_prev, other_next};
            } else {
                br.pts[1] = last;
                br.npts = 2;
                br.label_a = {lab[k], lab[k]};
                br.label_b = {other_prev != 0 ? other_prev : other_next, other_prev != 0 ? other_prev : other_next};
            }
            out.push_back(br);
        }
    }
};

double branch_length(const Branch& br) {
    double len = 0.0;
    for (int k = 0; k + 1 < br.npts; ++k) len += distance(br.pts[k], br.pts[k + 1]);
    return len;
}

std::vector<std::vector<Point>> chain(const std::vector<Branch>& branches, const GridSpec& g) {
    std::unordered_map<long long, std::vector<std::pair<std::size_t, int>>> by_edge;
    by_edge.reserve(branches.size() * 2);
    for (std::size_t b = 0; b < branches.size(); ++b) {
        for (int e = 0; e < 2; ++e) by_edge[branches[b].edge[e]].push_back({b, e});
    }
    auto degree = [&](std::size_t b, int e) { return by_edge[branches[b].edge[e]].size(); };
    auto snap = [&](Point from, Point to) {
        Point d = from - to;
        if (g.periodic_x) d.x = g.extent_x() * std::round(d.x / g.extent_x());
        else d.x = 0.0;
        if (g.periodic_y) d.y = g.extent_y() * std::round(d.y / g.extent_y());
        else d.y = 0.0;
        return d;
    };

    std::vector<char> used(branches.size(), 0);
    std::vector<std::vector<Point>> lines;

    auto walk = [&](std::size_t start, int start_end) {
        std::vector<Point> line;
        const Branch& first = branches[start];
        // Traverse `start` beginning at its end `start_end`.
        if (start_end == 0) {
            for (int k = 0; k < first.npts; ++k) line.push_back(first.pts[k]);
        } else {
            for (int k = first.npts - 1; k >= 0; --k) line.push_back(first.pts[k]);
        }
        used[start] = 1;
        long long edge = first.edge[1 - start_end];
        while (true) {
            std::size_t next = branches.size();
            int next_end = 0;
            for (const auto& [b, e] : by_edge[edge]) {
                if (!used[b]) {
                    next = b;
                    next_end = e;
                    break;
                }
            }
            if (next == branches.size()) break;
            const Branch& br = branches[next];
            used[next] = 1;
            const Point join = next_end == 0 ? br.pts[0] : br.pts[br.npts - 1];
            const Point shift = snap(line.back(), join);
            if (next_end == 0) {
                for (int k = 1; k < br.npts; ++k) line.push_back(br.pts[k] + shift);
            } else {
                for (int k = br.npts - 2; k >= 0; --k) line.push_back(br.pts[k] + shift);
            }
            edge = br.edge[1 - next_end];
        }
        lines.push_back(std::move(line));
    };

    for (std::size_t b = 0; b < branches.size(); ++b) {
        if (used[b]) continue;
        if (degree(b, 0) == 1) walk(b, 0);
        else if (degree(b, 1) == 1) walk(b, 1);
    }
    for (std::size_t b = 0; b < branches.size(); ++b) {
        if (!used[b]) walk(b, 0);
    }
    return lines;
}

} // namespace

NodalSet extract_nodal_set(const ScalarField& field) {
    const NodeLattice lat(field);
    const ContourBuilder builder{lat, nullptr, field, false};
    const std::vector<Branch> branches = builder.build();
    NodalSet ns;
    for (const Branch& br : branches) {
        ns.total_length += branch_length(br);
        ns.segment_count += static_cast<std::size_t>(br.npts - 1);
    }
    ns.polylines = chain(branches, field.grid);
    ns.perturbed_zeros = lat.perturbed_zeros();
    return ns;
}

std::vector<ContourPiece> contour_pieces(const ScalarField& field, const DomainMask& mask) {
    if (!(mask.grid == field.grid)) throw InvalidParameter("mask and field grids differ");
    const NodeLattice lat(field);
    const ContourBuilder builder{lat, &mask, field, true};
    std::vector<ContourPiece> pieces;
    for (const Branch& br : builder.build()) {
        for (int k = 0; k + 1 < br.npts; ++k) {
            pieces.push_back({br.pts[k], br.pts[k + 1], br.label_a[k], br.label_b[k]});
        }
    }
    return pieces;
}

namespace {

double wall_length(const DomainMask& mask, int label) {
    const GridSpec& g = mask.grid;
    std::size_t faces = 0;
    if (!g.periodic_x) {
        for (int j = 0; j < g.ny; ++j) faces += (mask.label_at(0, j) == label) + (mask.label_at(g.nx - 1, j) == label);
    }
    if (!g.periodic_y) {
        for (int i = 0; i < g.nx; ++i) faces += (mask.label_at(i, 0) == label) + (mask.label_at(i, g.ny - 1) == label);
    }
    return static_cast<double>(faces) * g.h;
}

// Contour length next to `label`, split by whether the far side is off the support.
std::pair<double, double> adjacent_lengths(const DomainMask& mask, int label, const ScalarField& field) {
    mask.require_label(label);
    double nodal = 0.0;
    double edge = 0.0;
    for (const ContourPiece& p : contour_pieces(field, mask)) {
        if (p.label_a != label && p.label_b != label) continue;
        const bool off = p.label_a == off_support || p.label_b == off_support;
        (off ? edge : nodal) += distance(p.a, p.b);
    }
    return {nodal, edge};
}

} // namespace

double nodal_boundary_length(const DomainMask& mask, int label, const ScalarField& field) {
    return adjacent_lengths(mask, label, field).first;
}

double boundary_length(const DomainMask& mask, int label, const ScalarField& field) {
    const auto [nodal, edge] = adjacent_lengths(mask, label, field);
    return nodal + edge + wall_length(mask, label);
}

} // namespace nodalheat
