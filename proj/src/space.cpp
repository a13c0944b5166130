#include "semirec/space.hpp"

#include <cmath>
#include <stdexcept>

namespace semirec {

PhaseSpace PhaseSpace::box(const IntervalBox& bounds) {
    if (!bounds.finite()) throw std::invalid_argument("phase box must have finite bounds");
    for (int i = 0; i < bounds.dim(); ++i)
        if (!(bounds[i].width() > 0.0))
            throw std::invalid_argument("phase box must have positive volume");
    return PhaseSpace(SpaceKind::Box, bounds);
}

PhaseSpace PhaseSpace::circle() {
    return PhaseSpace(SpaceKind::Circle, IntervalBox(Interval{0.0, 1.0}));
}

namespace {

double wrap_unit(double x) {
    double r = x - std::floor(x);
    if (r >= 1.0) r -= 1.0; // floor rounding at tiny negative x
    return r;
}

} // namespace

double PhaseSpace::dist(const Point& x, const Point& y) const {
    if (kind_ == SpaceKind::Circle) {
        const double d = std::fabs(wrap_unit(x[0]) - wrap_unit(y[0]));
        return std::min(d, 1.0 - d);
    }
    double s = 0.0;
    for (int i = 0; i < dim(); ++i) {
        const double d = x[i] - y[i];
        s += d * d;
    }
    return std::sqrt(s);
}

bool PhaseSpace::contains(const Point& p, double slack) const {
    if (kind_ == SpaceKind::Circle) return p.finite();
    if (!p.finite()) return false;
    return bounds_.contains(p, slack);
}

Point PhaseSpace::wrap(const Point& p) const {
    if (kind_ != SpaceKind::Circle) return p;
    Point q = p;
    q[0] = wrap_unit(p[0]);
    return q;
}

double PhaseSpace::extent() const {
    double m = 0.0;
    for (int i = 0; i < dim(); ++i) m = std::max(m, bounds_[i].width());
    return m;
}

double dist(const PhaseSpace& space, const Point& x, const Point& y) {
    return space.dist(x, y);
}

std::vector<Interval> circle_arcs(const Interval& iv) {
    if (!iv.finite() || iv.width() >= 1.0) return {Interval{0.0, 1.0}};
    const double lo = wrap_unit(iv.lo());
    const double hi = lo + iv.width();
    if (hi <= 1.0) return {Interval{lo, hi}};
    return {Interval{lo, 1.0}, Interval{0.0, hi - 1.0}};
}

bool image_overlaps(const PhaseSpace& space, const IntervalBox& image, const IntervalBox& target) {
    if (space.kind() == SpaceKind::Box) return image.overlaps(target);
    for (const Interval& a : circle_arcs(image[0]))
        for (const Interval& b : circle_arcs(target[0]))
            if (a.overlaps(b)) return true;
    return false;
}

Grid::Grid(PhaseSpace space, const std::vector<int>& cells_per_axis) : space_(space) {
    if (static_cast<int>(cells_per_axis.size()) != space_.dim())
        throw std::invalid_argument("need one cell count per axis");
    total_ = 1;
    for (int i = 0; i < space_.dim(); ++i) {
        const int n = cells_per_axis[static_cast<std::size_t>(i)];
        if (n < 2) throw std::invalid_argument("need at least 2 cells per axis");
        counts_[static_cast<std::size_t>(i)] = n;
        widths_[static_cast<std::size_t>(i)] = space_.bounds()[i].width() / n;
        total_ *= n;
    }
}

double Grid::delta() const {
    double m = 0.0;
    for (int i = 0; i < space_.dim(); ++i) m = std::max(m, widths_[static_cast<std::size_t>(i)]);
    return m;
}

double Grid::center_slack() const {
    double s = 0.0;
    for (int i = 0; i < space_.dim(); ++i) {
        const double h = widths_[static_cast<std::size_t>(i)] / 2;
        s += h * h;
    }
    return std::sqrt(s);
}

CellId Grid::cell_of(const Point& p_in) const {
    const Point p = space_.wrap(p_in);
    const double slack = 1e-9 * std::max(1.0, space_.extent());
    if (!space_.contains(p, slack)) throw DomainError("point outside the phase space");
    CellId c;
    c.dim = space_.dim();
    for (int i = 0; i < space_.dim(); ++i) {
        const double lo = space_.bounds()[i].lo();
        const int n = counts_[static_cast<std::size_t>(i)];
        int k = static_cast<int>(std::floor((p[i] - lo) / widths_[static_cast<std::size_t>(i)]));
        if (space_.kind() == SpaceKind::Circle) {
            k = ((k % n) + n) % n;
        } else {
            k = std::clamp(k, 0, n - 1); // p == hi lands in the closed last cell
        }
        c.ix[static_cast<std::size_t>(i)] = k;
    }
    return c;
}

Point Grid::center_of(const CellId& c) const {
    Point p = Point::zero(space_.dim());
    for (int i = 0; i < space_.dim(); ++i) {
        const double lo = space_.bounds()[i].lo();
        p[i] = lo + (c.ix[static_cast<std::size_t>(i)] + 0.5) * widths_[static_cast<std::size_t>(i)];
    }
    return p;
}

IntervalBox Grid::cell_box(const CellId& c) const {
    IntervalBox b = IntervalBox::zero(space_.dim());
    for (int i = 0; i < space_.dim(); ++i) {
        const double lo = space_.bounds()[i].lo();
        const double w = widths_[static_cast<std::size_t>(i)];
        const int k = c.ix[static_cast<std::size_t>(i)];
        b[i] = Interval{lo + k * w, lo + (k + 1) * w};
    }
    return b;
}

int Grid::flat(const CellId& c) const {
    int idx = 0;
    for (int i = 0; i < space_.dim(); ++i) {
        const int k = c.ix[static_cast<std::size_t>(i)];
        if (k < 0 || k >= counts_[static_cast<std::size_t>(i)])
            throw std::out_of_range("cell index outside the grid");
        idx = idx * counts_[static_cast<std::size_t>(i)] + k;
    }
    return idx;
}

CellId Grid::unflat(int flat_index) const {
    if (flat_index < 0 || flat_index >= total_)
        throw std::out_of_range("flat cell index outside the grid");
    CellId c;
    c.dim = space_.dim();
    for (int i = space_.dim() - 1; i >= 0; --i) {
        const int n = counts_[static_cast<std::size_t>(i)];
        c.ix[static_cast<std::size_t>(i)] = flat_index % n;
        flat_index /= n;
    }
    return c;
}

} // namespace semirec
