#pragma once

#include "nodalheat/grid.hpp"

#include <vector>

namespace nodalheat {

/// Labelled cells of a grid. Label 0 is outside every domain; labels 1..count()
/// are the domains, each 4-connected with a fixed sign.
struct DomainMask {
    GridSpec grid;
    std::vector<int> labels;
    std::vector<int> signs;     // indexed by label - 1
    std::vector<double> areas;  // indexed by label - 1

    int count() const { return static_cast<int>(signs.size()); }
    int label_at(int i, int j) const { return labels[grid.index(i, j)]; }
    int sign_of(int label) const;
    double area_of(int label) const;
    /// Throws UnknownLabel when label is not in 1..count().
    void require_label(int label) const;

    /// Builds a mask from raw labels (0 = outside); signs default to +1.
    static DomainMask from_labels(const GridSpec& grid, std::vector<int> labels);
};

/// Stair-step perimeter of a labelled region, counting faces against other
/// labels and, on non-periodic axes, the outer walls.
double mask_perimeter(const DomainMask& mask, int label);

} // namespace nodalheat
