#include "nodalheat/shapes.hpp"

#include "nodalheat/errors.hpp"
#include "nodalheat/fields.hpp"
#include "nodalheat/nodal.hpp"

#include <cmath>

namespace nodalheat {

DomainMask predicate_domain(Box box, int cells_per_unit, const std::function<bool(Point)>& inside) {
    if (cells_per_unit < 4) throw InvalidParameter("at least four cells per unit length are required");
    const double h = 1.0 / cells_per_unit;
    const int nx = static_cast<int>(std::lround(box.width() / h));
    const int ny = static_cast<int>(std::lround(box.height() / h));
    if (nx < 1 || ny < 1 || std::abs(nx * h - box.width()) > 1e-9 || std::abs(ny * h - box.height()) > 1e-9) {
        throw InvalidParameter("box sides must be multiples of the cell size");
    }
    const GridSpec g = GridSpec::make(nx, ny, box.lo, box.width(), box.height());
    std::vector<int> labels(g.size(), 0);
    bool any = false;
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            if (inside(g.cell_center(i, j))) {
                labels[g.index(i, j)] = 1;
                any = true;
            }
        }
    }
    if (!any) throw EmptyDomain("predicate selects no cell");
    return DomainMask::from_labels(g, std::move(labels));
}

DomainMask rectangle_domain(double width, double height, int cells_per_unit) {
    if (!(width > 0.0) || !(height > 0.0)) throw InvalidParameter("rectangle sides must be positive");
    return predicate_domain({{0.0, 0.0}, {width, height}}, cells_per_unit, [](Point) { return true; });
}

DomainMask l_shape_domain(int cells_per_unit) {
    return predicate_domain({{0.0, 0.0}, {1.0, 1.0}}, cells_per_unit,
                            [](Point p) { return p.x < 0.5 || p.y < 0.5; });
}

DomainMask slit_domain(int cells_per_unit) {
    const double h = 1.0 / cells_per_unit;
    const int mid = cells_per_unit / 2;
    const double lo = mid * h;
    return predicate_domain({{0.0, 0.0}, {1.0, 1.0}}, cells_per_unit,
                            [=](Point p) { return !(p.x > lo && p.x < lo + h && p.y < 0.5); });
}

DomainMask comb_domain(int teeth, int cells_per_unit) {
    if (teeth < 1) throw InvalidParameter("a comb needs at least one tooth");
    if (cells_per_unit % (2 * teeth) != 0 || cells_per_unit % 4 != 0) {
        throw InvalidParameter("cells per unit must resolve the teeth");
    }
    const double period = 1.0 / teeth;
    return predicate_domain({{0.0, 0.0}, {1.0, 1.0}}, cells_per_unit, [=](Point p) {
        if (p.y < 0.25) return true;
        const double phase = p.x / period - std::floor(p.x / period);
        return phase < 0.5;
    });
}

DomainMask strip_domain(double width, int cells_per_unit) { return rectangle_domain(1.0, width, cells_per_unit); }

std::vector<NamedDomain> isoperimetry_family(int cells_per_unit) {
    std::vector<NamedDomain> out;
    auto add = [&](std::string name, DomainMask mask) {
        const double perimeter = mask_perimeter(mask, 1);
        out.push_back({std::move(name), std::move(mask), 1, perimeter, 0.0});
    };
    add("square", rectangle_domain(1.0, 1.0, cells_per_unit));
    add("rectangle-2x0.5", rectangle_domain(2.0, 0.5, cells_per_unit));
    add("ell", l_shape_domain(cells_per_unit));
    add("slit", slit_domain(cells_per_unit));
    add("comb-4", comb_domain(4, cells_per_unit));
    add("strip-0.125", strip_domain(0.125, cells_per_unit));

    const auto model = make_torus_eigenfunction(1, 1);
    const ScalarField field = sample_field(model, natural_grid(model, cells_per_unit));
    DomainMask mask = label_nodal_domains(field);
    const int label = mask.label_at(cells_per_unit / 8, cells_per_unit / 8);
    const double perimeter = boundary_length(mask, label, field);
    out.push_back({"torus-1-1-domain", std::move(mask), label, perimeter, 1.0 / model.eigenvalue()});
    return out;
}

} // namespace nodalheat
