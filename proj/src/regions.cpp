#include "nodalheat/errors.hpp"
#include "nodalheat/regions.hpp"

#include <algorithm>
#include <cmath>

namespace nodalheat {

double planar_crossing_probability(double d0, double d1, double dt) {
    return std::exp(-std::max(d0, 0.0) * std::max(d1, 0.0) / dt);
}

double crossing_cap(double dt) { return 6.0 * std::sqrt(2.0 * dt); }

double Region::bridge_survival(Point a, Point b, double dt) const {
    const double cap = crossing_cap(dt);
    const double d0 = boundary_distance(a, cap);
    if (d0 >= cap) return 1.0;
    const double d1 = boundary_distance(b, cap);
    if (d1 >= cap) return 1.0;
    return 1.0 - planar_crossing_probability(d0, d1, dt);
}

namespace {

double box_distance2(Point p, Point centre, double half) {
    const double dx = std::max(std::abs(p.x - centre.x) - half, 0.0);
    const double dy = std::max(std::abs(p.y - centre.y) - half, 0.0);
    return dx * dx + dy * dy;
}

constexpr double far_squared = 1e29;

// floor without a libm call; paths never wander beyond the int64 range.
inline double fast_floor(double v) {
    const double t = static_cast<double>(static_cast<long long>(v));
    return t > v ? t - 1.0 : t;
}

} // namespace

MaskRegion::MaskRegion(const DomainMask& mask, int label) : grid_(mask.grid), inv_h_(1.0 / mask.grid.h) {
    mask.require_label(label);
    inside_.resize(grid_.size());
    std::vector<unsigned char> outside(grid_.size());
    for (std::size_t k = 0; k < grid_.size(); ++k) {
        inside_[k] = mask.labels[k] == label;
        outside[k] = !inside_[k];
    }
    dist_ = distance_map(grid_, outside, true);
}

bool MaskRegion::cell_of(Point& p, int& i, int& j) const {
    const double fx = (p.x - grid_.x0) * inv_h_;
    const double fy = (p.y - grid_.y0) * inv_h_;
    if (!(std::abs(fx) < 1e15 && std::abs(fy) < 1e15)) return false;
    double cx = fast_floor(fx);
    double cy = fast_floor(fy);
    if (grid_.periodic_x) {
        const double shift = grid_.nx * fast_floor(cx / grid_.nx);
        cx -= shift;
        p.x -= shift * grid_.h;
    } else if (!(cx >= 0.0 && cx < grid_.nx)) {
        return false;
    }
    if (grid_.periodic_y) {
        const double shift = grid_.ny * fast_floor(cy / grid_.ny);
        cy -= shift;
        p.y -= shift * grid_.h;
    } else if (!(cy >= 0.0 && cy < grid_.ny)) {
        return false;
    }
    i = std::min(static_cast<int>(cx), grid_.nx - 1);
    j = std::min(static_cast<int>(cy), grid_.ny - 1);
    return true;
}

bool MaskRegion::contains(Point p) const {
    int i = 0;
    int j = 0;
    return cell_of(p, i, j) && inside_[grid_.index(i, j)];
}

double MaskRegion::boundary_distance(Point p, double cap) const {
    int i = 0;
    int j = 0;
    if (!cell_of(p, i, j)) return 0.0;
    return distance_from_cell(p, i, j, cap);
}

double MaskRegion::probe(Point p, double cap) const {
    int i = 0;
    int j = 0;
    if (!cell_of(p, i, j) || !inside_[grid_.index(i, j)]) return -1.0;
    return distance_from_cell(p, i, j, cap);
}

double MaskRegion::distance_from_cell(Point p, int i, int j, double cap) const {
    const double d2 = dist_.squared[grid_.index(i, j)];
    if (d2 > far_squared) return cap;
    const double h = grid_.h;
    if ((std::sqrt(d2) - 1.5) * h >= cap) return cap;
    double best = cap * cap;
    for (int dj = -1; dj <= 1; ++dj) {
        for (int di = -1; di <= 1; ++di) {
            int ni = i + di;
            int nj = j + dj;
            if (ni < 0 || ni >= grid_.nx) {
                if (!grid_.periodic_x) continue;
                ni = (ni + grid_.nx) % grid_.nx;
            }
            if (nj < 0 || nj >= grid_.ny) {
                if (!grid_.periodic_y) continue;
                nj = (nj + grid_.ny) % grid_.ny;
            }
            const std::size_t k = grid_.index(ni, nj);
            if (dist_.squared[k] > far_squared) continue;
            const auto& o = dist_.offset[k];
            const Point c = grid_.cell_center(i + di + o[0], j + dj + o[1]);
            best = std::min(best, box_distance2(p, c, 0.5 * h));
        }
    }
    return std::sqrt(best);
}

NodalRegion::NodalRegion(const ScalarField& field, const DomainMask& mask, int label)
    : lattice_(field), label_(label), sign_(mask.sign_of(label)) {
    if (!(mask.grid == field.grid)) throw InvalidParameter("mask and field grids differ");
    const int nx = lattice_.nodes_x();
    const int ny = lattice_.nodes_y();
    node_labels_.assign(static_cast<std::size_t>(nx) * ny, 0);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const auto [si, sj] = lattice_.source_cell(i, j);
            int l = mask.label_at(si, sj);
            if (lattice_.is_ghost(i, j) && ((lattice_.value(i, j) > 0.0) != (field.at(si, sj) > 0.0))) l = 0;
            node_labels_[static_cast<std::size_t>(j) * nx + i] = l;
        }
    }
}

bool NodalRegion::contains(Point p) const {
    const auto s = lattice_.interpolate(p);
    if (!s || sign_ * s->value <= 0.0) return false;
    const int nx = lattice_.nodes_x();
    const int i1 = lattice_.wrap_node_x(s->ci + 1);
    const int j1 = lattice_.wrap_node_y(s->cj + 1);
    for (const auto& [i, j] : {std::pair{s->ci, s->cj}, std::pair{i1, s->cj}, std::pair{s->ci, j1}, std::pair{i1, j1}}) {
        if (node_labels_[static_cast<std::size_t>(j) * nx + i] == label_) return true;
    }
    return false;
}

double NodalRegion::boundary_distance(Point p, double cap) const {
    const auto s = lattice_.interpolate(p);
    if (!s) return 0.0;
    double d = cap;
    const double g = norm(s->gradient);
    if (g > 0.0) d = std::min(d, std::abs(s->value) / g);
    const GridSpec& grid = lattice_.grid();
    if (!grid.periodic_x) d = std::min({d, p.x - grid.x0, grid.x0 + grid.extent_x() - p.x});
    if (!grid.periodic_y) d = std::min({d, p.y - grid.y0, grid.y0 + grid.extent_y() - p.y});
    return std::max(d, 0.0);
}

HalfPlaneRegion::HalfPlaneRegion(Point origin, Point inward_normal) : origin_(origin) {
    const double n = norm(inward_normal);
    if (!(n > 0.0)) throw InvalidParameter("half-plane normal must be nonzero");
    normal_ = (1.0 / n) * inward_normal;
}

bool HalfPlaneRegion::contains(Point p) const { return dot(p - origin_, normal_) > 0.0; }

double HalfPlaneRegion::boundary_distance(Point p, double cap) const {
    return std::min(cap, std::max(dot(p - origin_, normal_), 0.0));
}

BoxRegion::BoxRegion(Box box) : box_(box) {
    if (!(box.width() > 0.0) || !(box.height() > 0.0)) throw InvalidParameter("box must have positive extent");
}

bool BoxRegion::contains(Point p) const {
    return p.x > box_.lo.x && p.x < box_.hi.x && p.y > box_.lo.y && p.y < box_.hi.y;
}

double BoxRegion::boundary_distance(Point p, double cap) const {
    return std::max(0.0, std::min({cap, p.x - box_.lo.x, box_.hi.x - p.x, p.y - box_.lo.y, box_.hi.y - p.y}));
}

double BoxRegion::bridge_survival(Point a, Point b, double dt) const {
    const double cap = crossing_cap(dt);
    const double da[4] = {a.x - box_.lo.x, box_.hi.x - a.x, a.y - box_.lo.y, box_.hi.y - a.y};
    const double db[4] = {b.x - box_.lo.x, box_.hi.x - b.x, b.y - box_.lo.y, box_.hi.y - b.y};
    double s = 1.0;
    for (int w = 0; w < 4; ++w) {
        if (da[w] < cap && db[w] < cap) s *= 1.0 - planar_crossing_probability(da[w], db[w], dt);
    }
    return s;
}

TubeRegion::TubeRegion(Point a, Point b, double half_width) : a_(a), b_(b), half_width_(half_width) {
    if (!(half_width > 0.0)) throw InvalidParameter("tube half-width must be positive");
    if (distance(a, b) > 1.0 + 1e-12) throw InvalidParameter("tube segment longer than the torus period");
}

double TubeRegion::axis_distance(Point p) const {
    p = wrap(p);
    const Point ab = b_ - a_;
    const double len2 = dot(ab, ab);
    double best = 1e300;
    for (int sy = -1; sy <= 1; ++sy) {
        for (int sx = -1; sx <= 1; ++sx) {
            const Point q{p.x + sx, p.y + sy};
            double s = len2 > 0.0 ? dot(q - a_, ab) / len2 : 0.0;
            s = std::clamp(s, 0.0, 1.0);
            best = std::min(best, distance(q, a_ + s * ab));
        }
    }
    return best;
}

bool TubeRegion::contains(Point p) const { return axis_distance(p) < half_width_; }

double TubeRegion::boundary_distance(Point p, double cap) const {
    return std::clamp(half_width_ - axis_distance(p), 0.0, cap);
}

Point TubeRegion::wrap(Point p) const {
    p.x -= std::floor(p.x);
    p.y -= std::floor(p.y);
    return p;
}

ConeRegion::ConeRegion(double alpha) : alpha_(alpha) {
    if (!(alpha > 0.0) || alpha > 2.0 * pi + 1e-12) throw InvalidParameter("cone opening must lie in (0, 2π]");
    wall_dir_[0] = {std::cos(alpha / 2), std::sin(alpha / 2)};
    wall_dir_[1] = {std::cos(alpha / 2), -std::sin(alpha / 2)};
    if (alpha > 2.0 * pi - 1e-9) walls_ = 1;
    normal_[0] = {std::sin(alpha / 2), -std::cos(alpha / 2)};
    normal_[1] = {std::sin(alpha / 2), std::cos(alpha / 2)};
}

bool ConeRegion::contains(Point p) const {
    const bool in0 = dot(p, normal_[0]) > 0.0;
    const bool in1 = dot(p, normal_[1]) > 0.0;
    // Convex for alpha <= π; otherwise the union of the two half-planes.
    return alpha_ <= pi ? (in0 && in1) : (in0 || in1);
}

double ConeRegion::wall_distance(Point p, int wall) const {
    const Point u = wall_dir_[wall];
    if (dot(p, u) <= 0.0) return norm(p);
    return std::abs(cross(u, p));
}

double ConeRegion::boundary_distance(Point p, double cap) const {
    return std::min({cap, wall_distance(p, 0), wall_distance(p, walls_ - 1)});
}

double ConeRegion::bridge_survival(Point a, Point b, double dt) const {
    const double cap = crossing_cap(dt);
    double s = 1.0;
    for (int w = 0; w < walls_; ++w) {
        const double d0 = wall_distance(a, w);
        const double d1 = wall_distance(b, w);
        if (d0 < cap && d1 < cap) s *= 1.0 - planar_crossing_probability(d0, d1, dt);
    }
    return s;
}

} // namespace nodalheat
