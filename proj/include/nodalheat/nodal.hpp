#pragma once

#include "nodalheat/geometry.hpp"
#include "nodalheat/grid.hpp"
#include "nodalheat/mask.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

namespace nodalheat {

/// Samples within this fraction of ‖f‖∞ of zero count as zeros and are
/// shifted up to it.
inline constexpr double zero_perturbation = 1e-12;
/// Side label of contour pieces that face cells off the model's support.
inline constexpr int off_support = -1;

/// Sample lattice used for contouring and bilinear interpolation. Interior
/// nodes are cell centres; on non-periodic axes a ghost ring of linearly
/// extrapolated values sits on the outer walls so contours reach them.
class NodeLattice {
public:
    explicit NodeLattice(const ScalarField& field);

    int nodes_x() const { return static_cast<int>(xs_.size()); }
    int nodes_y() const { return static_cast<int>(ys_.size()); }
    /// Number of dual cells along each axis.
    int cells_x() const { return grid_.periodic_x ? nodes_x() : nodes_x() - 1; }
    int cells_y() const { return grid_.periodic_y ? nodes_y() : nodes_y() - 1; }

    double node_x(int i) const { return xs_[static_cast<std::size_t>(i)]; }
    double node_y(int j) const { return ys_[static_cast<std::size_t>(j)]; }
    double value(int i, int j) const { return values_[index(i, j)]; }
    bool supported(int i, int j) const { return support_[index(i, j)] != 0; }
    /// Grid cell a node samples (ghost nodes map to their adjacent cell).
    std::pair<int, int> source_cell(int i, int j) const;
    bool is_ghost(int i, int j) const;

    /// Lower-left node and extent of dual cell (ci, cj), in the unwrapped chart.
    Point dual_origin(int ci, int cj) const;
    Point dual_size(int ci, int cj) const;
    int wrap_node_x(int i) const { return grid_.periodic_x ? (i % nodes_x()) : i; }
    int wrap_node_y(int j) const { return grid_.periodic_y ? (j % nodes_y()) : j; }

    struct Sample {
        double value;
        Point gradient;
        int ci;
        int cj;
    };
    /// Bilinear value and gradient at p; nullopt off a non-periodic grid or
    /// inside a dual cell with unsupported corners.
    std::optional<Sample> interpolate(Point p) const;

    const GridSpec& grid() const { return grid_; }
    std::size_t perturbed_zeros() const { return perturbed_; }

private:
    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(j) * xs_.size() + static_cast<std::size_t>(i);
    }

    GridSpec grid_;
    std::vector<double> xs_;
    std::vector<double> ys_;
    std::vector<double> values_;
    std::vector<unsigned char> support_;
    std::size_t perturbed_ = 0;
};

/// Zero contour of the bilinear interpolant.
struct NodalSet {
    std::vector<std::vector<Point>> polylines;
    double total_length = 0.0;
    std::size_t segment_count = 0;
    std::size_t perturbed_zeros = 0;
};

/// One straight contour piece with the domain labels on either side.
struct ContourPiece {
    Point a;
    Point b;
    int label_a = 0;  // label of the corner on one side (0 when unlabelled, off_support off the model)
    int label_b = 0;
};

NodalSet extract_nodal_set(const ScalarField& field);
/// Contour pieces with side labels taken from the mask, including the zero
/// contour between supported and unsupported cells (the disk edge).
std::vector<ContourPiece> contour_pieces(const ScalarField& field, const DomainMask& mask);

/// 4-connected components of strict sign, labelled in raster order.
DomainMask label_nodal_domains(const ScalarField& field);

/// Exact squared Euclidean distance (in cells) from each cell centre to the
/// nearest cell where `outside` is set. Periodic axes wrap; on non-periodic
/// axes the region beyond the grid counts as outside when `walls_outside`.
std::vector<double> squared_distance_transform(const GridSpec& grid, const std::vector<unsigned char>& outside,
                                               bool walls_outside);

/// Squared distances plus, per cell, the offset (in cells, unwrapped) to the
/// nearest outside cell; wall cells beyond the grid count as outside cells.
struct DistanceMap {
    std::vector<double> squared;
    std::vector<std::array<int, 2>> offset;
};
DistanceMap distance_map(const GridSpec& grid, const std::vector<unsigned char>& outside, bool walls_outside);

/// Largest distance from an in-domain cell centre to the domain boundary
/// (cell faces of out-of-domain cells).
double domain_inradius(const DomainMask& mask, int label);

/// Length of the boundary of one nodal domain: contour pieces adjacent to the
/// label, the support edge, and exposed outer-wall faces on non-periodic axes.
double boundary_length(const DomainMask& mask, int label, const ScalarField& field);
/// The same without the outer walls and the support edge (the part of the
/// boundary lying in Z).
double nodal_boundary_length(const DomainMask& mask, int label, const ScalarField& field);

} // namespace nodalheat
