#pragma once

#include "nodalheat/geometry.hpp"
#include "nodalheat/mask.hpp"

#include <functional>
#include <string>
#include <vector>

namespace nodalheat {

/// Single-label mask (label 1) of the cells of `box` whose centres satisfy
/// `inside`; `cells_per_unit` fixes h = 1 / cells_per_unit. The grid edges are
/// absorbing walls.
DomainMask predicate_domain(Box box, int cells_per_unit, const std::function<bool(Point)>& inside);

DomainMask rectangle_domain(double width, double height, int cells_per_unit);
/// Unit square without its upper right quarter.
DomainMask l_shape_domain(int cells_per_unit);
/// Unit square cut by a one-cell-wide slit rising from the middle of the
/// bottom wall to height 1/2.
DomainMask slit_domain(int cells_per_unit);
/// Spine [0,1]×[0,1/4] carrying `teeth` teeth of width 1/(2·teeth) up to y = 1.
DomainMask comb_domain(int teeth, int cells_per_unit);
/// Thin strip [0,1]×[0,width].
DomainMask strip_domain(double width, int cells_per_unit);

struct NamedDomain {
    std::string name;
    DomainMask mask;
    int label = 1;
    double perimeter = 0.0;     // length of the boundary curve
    double natural_time = 0.0;  // 1/λ for nodal domains, 0 otherwise
};

/// Built-in family for the isoperimetry sweep: rectangles, an ell, a slit
/// square, a comb, a strip and one nodal domain of the torus (1,1) mode.
std::vector<NamedDomain> isoperimetry_family(int cells_per_unit);

} // namespace nodalheat
