#pragma once

#include "nodalheat/geometry.hpp"
#include "nodalheat/grid.hpp"
#include "nodalheat/mask.hpp"
#include "nodalheat/nodal.hpp"

#include <memory>
#include <vector>

namespace nodalheat {

/// Open planar region with an absorbing boundary, as seen by the path engine.
class Region {
public:
    virtual ~Region() = default;

    virtual bool contains(Point p) const = 0;
    /// Distance from an inside point to the boundary, or `cap` when it is at least `cap`.
    virtual double boundary_distance(Point p, double cap) const = 0;
    /// Canonical representative of p (periodic regions wrap; others return p).
    virtual Point wrap(Point p) const { return p; }
    /// Probability that a Brownian bridge from a to b over dt (generator Δ)
    /// stays inside, given both endpoints are inside. The default treats the
    /// boundary as locally planar at the nearest point.
    virtual double bridge_survival(Point a, Point b, double dt) const;
    /// True when bridge_survival is the planar formula on boundary_distance,
    /// so a path loop may reuse the distance of the previous step.
    virtual bool planar_bridge() const { return true; }
    /// boundary_distance(p, cap) for inside points, -1 outside.
    virtual double probe(Point p, double cap) const { return contains(p) ? boundary_distance(p, cap) : -1.0; }
};

/// Cells of one label of a mask; the boundary is the union of cell faces.
class MaskRegion : public Region {
public:
    MaskRegion(const DomainMask& mask, int label);
    bool contains(Point p) const override;
    double boundary_distance(Point p, double cap) const override;
    double probe(Point p, double cap) const override;
    Point wrap(Point p) const override { return grid_.wrap(p); }

    const GridSpec& grid() const { return grid_; }

private:
    /// Cell holding p; wraps p into the periodic chart. False off a walled grid.
    bool cell_of(Point& p, int& i, int& j) const;
    double distance_from_cell(Point p, int i, int j, double cap) const;

    GridSpec grid_;
    double inv_h_;
    std::vector<unsigned char> inside_;
    DistanceMap dist_;
};

/// One sign component of the bilinear interpolant of a sampled field.
class NodalRegion : public Region {
public:
    NodalRegion(const ScalarField& field, const DomainMask& mask, int label);
    bool contains(Point p) const override;
    double boundary_distance(Point p, double cap) const override;
    Point wrap(Point p) const override { return lattice_.grid().wrap(p); }

private:
    NodeLattice lattice_;
    std::vector<int> node_labels_;
    int label_;
    int sign_;
};

/// {p : dot(p - origin, normal) > 0} for a unit inward normal.
class HalfPlaneRegion : public Region {
public:
    HalfPlaneRegion(Point origin, Point inward_normal);
    bool contains(Point p) const override;
    double boundary_distance(Point p, double cap) const override;

private:
    Point origin_;
    Point normal_;
};

/// Open axis-aligned box; crossing probabilities multiply over the four walls.
class BoxRegion : public Region {
public:
    explicit BoxRegion(Box box);
    bool contains(Point p) const override;
    double boundary_distance(Point p, double cap) const override;
    double bridge_survival(Point a, Point b, double dt) const override;
    bool planar_bridge() const override { return false; }

private:
    Box box_;
};

/// Points of the unit torus within half_width of a straight segment.
class TubeRegion : public Region {
public:
    TubeRegion(Point a, Point b, double half_width);
    bool contains(Point p) const override;
    double boundary_distance(Point p, double cap) const override;
    Point wrap(Point p) const override;
    double axis_distance(Point p) const;

private:
    Point a_;
    Point b_;
    double half_width_;
};

/// Cone W(alpha) = {|arg p| < alpha/2} with apex at the origin.
class ConeRegion : public Region {
public:
    explicit ConeRegion(double alpha);
    bool contains(Point p) const override;
    double boundary_distance(Point p, double cap) const override;
    double bridge_survival(Point a, Point b, double dt) const override;
    bool planar_bridge() const override { return false; }
    double alpha() const { return alpha_; }

private:
    double wall_distance(Point p, int wall) const;
    double alpha_;
    Point wall_dir_[2];
    Point normal_[2];  // inward wall normals
    int walls_ = 2;  // the two walls coincide for a full slit plane
};

/// Bridge crossing probability of a planar boundary for endpoint distances d0, d1.
double planar_crossing_probability(double d0, double d1, double dt);
/// Distance cap beyond which crossings are negligible: 6·sqrt(2 dt).
double crossing_cap(double dt);

} // namespace nodalheat
