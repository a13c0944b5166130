#pragma once

#include <array>
#include <vector>

#include "semirec/interval.hpp"

namespace semirec {

enum class SpaceKind { Box, Circle };

/// Compact phase space: a finite box in R^n (n <= 2) or the circle R/Z.
class PhaseSpace {
public:
    static PhaseSpace box(const IntervalBox& bounds);
    static PhaseSpace circle();

    SpaceKind kind() const { return kind_; }
    int dim() const { return bounds_.dim(); }
    const IntervalBox& bounds() const { return bounds_; }

    double dist(const Point& x, const Point& y) const;
    /// Box: inside the bounds up to `slack`. Circle: always true (wraps).
    bool contains(const Point& p, double slack = 0.0) const;
    /// Circle: coordinates reduced into [0, 1). Box: unchanged.
    Point wrap(const Point& p) const;
    /// Largest side length; used for relative slacks.
    double extent() const;

    bool operator==(const PhaseSpace&) const = default;

private:
    PhaseSpace(SpaceKind kind, IntervalBox bounds) : kind_(kind), bounds_(bounds) {}

    SpaceKind kind_;
    IntervalBox bounds_;
};

/// Multi-index of a grid cell.
struct CellId {
    std::array<int, kMaxDim> ix{0, 0};
    int dim = 1;

    bool operator==(const CellId&) const = default;
};

/// Uniform grid over a phase space. Cells are half-open [lo, hi) per axis,
/// except that on a box the last cell along each axis is closed. Flat indices
/// run row-major; cell_count() itself names the absorbing ESCAPE pseudo-cell.
class Grid {
public:
    Grid(PhaseSpace space, const std::vector<int>& cells_per_axis);

    const PhaseSpace& space() const { return space_; }
    int cells_along(int axis) const { return counts_[static_cast<std::size_t>(axis)]; }
    double width_along(int axis) const { return widths_[static_cast<std::size_t>(axis)]; }
    /// Largest cell width over the axes.
    double delta() const;
    /// Half-diagonal of a cell: max distance from any cell point to its center.
    double center_slack() const;

    int cell_count() const { return total_; }
    int escape_cell() const { return total_; }

    CellId cell_of(const Point& p) const;
    Point center_of(const CellId& c) const;
    IntervalBox cell_box(const CellId& c) const;

    int flat(const CellId& c) const;
    CellId unflat(int flat_index) const;

    Point center_of_flat(int flat_index) const { return center_of(unflat(flat_index)); }
    IntervalBox box_of_flat(int flat_index) const { return cell_box(unflat(flat_index)); }
    int flat_cell_of(const Point& p) const { return flat(cell_of(p)); }

private:
    PhaseSpace space_;
    std::array<int, kMaxDim> counts_{1, 1};
    std::array<double, kMaxDim> widths_{0.0, 0.0};
    int total_ = 0;
};

double dist(const PhaseSpace& space, const Point& x, const Point& y);

/// Reduce an interval to arcs of the unit circle (at most two, within [0,1]).
std::vector<Interval> circle_arcs(const Interval& iv);

/// Overlap test that respects circle wrap when the space is a circle.
bool image_overlaps(const PhaseSpace& space, const IntervalBox& image, const IntervalBox& target);

} // namespace semirec
