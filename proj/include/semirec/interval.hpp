#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace semirec {

inline constexpr int kMaxDim = 2;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Evaluation left the domain of a map (pole, sqrt of a negative, ...).
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A configured enumeration/size cap was exceeded. Never silently truncated.
class BudgetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Directed rounding helpers. Infinite endpoints are already extremal and stay put.
inline double next_down(double x) {
    return std::isinf(x) ? x : std::nextafter(x, -kInf);
}

inline double next_up(double x) {
    return std::isinf(x) ? x : std::nextafter(x, kInf);
}

inline double nudge_down(double x, int steps) {
    for (int i = 0; i < steps; ++i) x = next_down(x);
    return x;
}

inline double nudge_up(double x, int steps) {
    for (int i = 0; i < steps; ++i) x = next_up(x);
    return x;
}

/// A point in R^n, n <= kMaxDim. Cheap value type; unused slots stay zero so
/// default equality works.
class Point {
public:
    Point() = default;
    explicit Point(double x) : dim_(1), c_{x, 0.0} {}
    Point(double x, double y) : dim_(2), c_{x, y} {}

    static Point zero(int dim) {
        Point p;
        p.dim_ = dim;
        return p;
    }

    int dim() const { return dim_; }
    double operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
    double& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }
    std::span<const double> coords() const { return {c_.data(), static_cast<std::size_t>(dim_)}; }

    bool finite() const {
        for (int i = 0; i < dim_; ++i)
            if (!std::isfinite(c_[static_cast<std::size_t>(i)])) return false;
        return true;
    }

    bool operator==(const Point&) const = default;

private:
    int dim_ = 1;
    std::array<double, kMaxDim> c_{0.0, 0.0};
};

/// Closed interval [lo, hi]. Endpoints may be -inf/+inf (tails), never NaN,
/// never empty. lo == +inf and hi == -inf are rejected so tails always have
/// one finite side or are the whole line.
class Interval {
public:
    Interval() = default;
    Interval(double lo, double hi) : lo_(lo), hi_(hi) {
        if (std::isnan(lo) || std::isnan(hi) || lo > hi || lo == kInf || hi == -kInf)
            throw std::invalid_argument("invalid interval endpoints");
    }

    static Interval point(double v) { return {v, v}; }
    static Interval whole() { return {-kInf, kInf}; }

    double lo() const { return lo_; }
    double hi() const { return hi_; }
    double width() const { return hi_ - lo_; }
    double mid() const { return 0.5 * (lo_ + hi_); }
    bool finite() const { return std::isfinite(lo_) && std::isfinite(hi_); }

    bool contains(double v) const { return lo_ <= v && v <= hi_; }
    bool contains(const Interval& o) const { return lo_ <= o.lo_ && o.hi_ <= hi_; }
    bool overlaps(const Interval& o) const { return lo_ <= o.hi_ && o.lo_ <= hi_; }

    /// Lower bound on the distance between this interval and a value.
    double gap_to(double v) const {
        if (contains(v)) return 0.0;
        return v < lo_ ? lo_ - v : v - hi_;
    }

    bool operator==(const Interval&) const = default;

private:
    double lo_ = 0.0;
    double hi_ = 0.0;
};

inline Interval iadd(const Interval& a, const Interval& b) {
    return {next_down(a.lo() + b.lo()), next_up(a.hi() + b.hi())};
}

inline Interval ineg(const Interval& a) { return {-a.hi(), -a.lo()}; }

inline Interval isub(const Interval& a, const Interval& b) { return iadd(a, ineg(b)); }

// Endpoint product with the limit convention 0 * inf = 0, so that e.g.
// [0,0] * [a, inf] stays {0} instead of becoming NaN.
inline double mul_ep(double x, double y) {
    if (x == 0.0 || y == 0.0) return 0.0;
    return x * y;
}

inline Interval imul(const Interval& a, const Interval& b) {
    const double p1 = mul_ep(a.lo(), b.lo());
    const double p2 = mul_ep(a.lo(), b.hi());
    const double p3 = mul_ep(a.hi(), b.lo());
    const double p4 = mul_ep(a.hi(), b.hi());
    return {next_down(std::min({p1, p2, p3, p4})), next_up(std::max({p1, p2, p3, p4}))};
}

inline Interval idiv(const Interval& a, const Interval& b) {
    if (b.contains(0.0)) throw DomainError("interval division by an interval containing zero");
    const Interval inv{next_down(1.0 / b.hi()), next_up(1.0 / b.lo())};
    return imul(a, inv);
}

// |x|^n with the running product nudged outward after every multiply, so the
// result bounds both the exact power and any same-order floating evaluation.
inline double pow_mag(double m, int n, bool round_up) {
    if (n == 0) return 1.0;
    if (std::isinf(m)) return m;
    double r = 1.0;
    for (int i = 0; i < n; ++i) {
        r *= m;
        r = round_up ? next_up(r) : std::max(0.0, next_down(r));
    }
    return r;
}

inline Interval ipow(const Interval& a, int n) {
    if (n < 0) throw std::invalid_argument("negative exponent");
    if (n == 0) return Interval::point(1.0);
    if (n % 2 == 1) {
        auto signed_pow = [n](double x, bool up) {
            const double m = pow_mag(std::fabs(x), n, up == (x >= 0.0));
            return x >= 0.0 ? m : -m;
        };
        return {signed_pow(a.lo(), false), signed_pow(a.hi(), true)};
    }
    if (a.lo() >= 0.0) return {pow_mag(a.lo(), n, false), pow_mag(a.hi(), n, true)};
    if (a.hi() <= 0.0) return {pow_mag(std::fabs(a.hi()), n, false), pow_mag(std::fabs(a.lo()), n, true)};
    return {0.0, pow_mag(std::max(std::fabs(a.lo()), std::fabs(a.hi())), n, true)};
}

inline Interval iabs(const Interval& a) {
    if (a.lo() >= 0.0) return a;
    if (a.hi() <= 0.0) return ineg(a);
    return {0.0, std::max(std::fabs(a.lo()), a.hi())};
}

// Range of sin over a finite interval: endpoint values plus a scan for the
// stationary points pi/2 + 2k*pi and -pi/2 + 2k*pi. The scan errs toward
// inclusion, which only widens the result.
inline Interval isin(const Interval& a) {
    if (!a.finite()) throw DomainError("sin/cos over an unbounded interval");
    constexpr double pi = std::numbers::pi;
    if (a.width() >= 2.0 * pi) return {-1.0, 1.0};
    const double s1 = std::sin(a.lo());
    const double s2 = std::sin(a.hi());
    double lo = std::min(s1, s2);
    double hi = std::max(s1, s2);
    const double slack = 1e-9 * (1.0 + std::max(std::fabs(a.lo()), std::fabs(a.hi())));
    const double kmax = std::ceil((a.lo() - pi / 2) / (2 * pi) - 1e-9);
    if (kmax * 2 * pi + pi / 2 <= a.hi() + slack) hi = 1.0;
    const double kmin = std::ceil((a.lo() + pi / 2) / (2 * pi) - 1e-9);
    if (kmin * 2 * pi - pi / 2 <= a.hi() + slack) lo = -1.0;
    return {std::max(-1.0, nudge_down(lo, 4)), std::min(1.0, nudge_up(hi, 4))};
}

inline Interval icos(const Interval& a) {
    if (!a.finite()) throw DomainError("sin/cos over an unbounded interval");
    constexpr double half_pi = std::numbers::pi / 2;
    return isin(iadd(a, Interval{next_down(half_pi), next_up(half_pi)}));
}

// Tiny negative inputs (rounding noise from expressions like sin^2) are
// clamped; anything further below zero is a genuine domain error.
inline constexpr double kSqrtAsinSlack = 1e-12;

inline Interval isqrt(const Interval& a) {
    if (!a.finite()) throw DomainError("sqrt over an unbounded interval");
    if (a.hi() < -kSqrtAsinSlack) throw DomainError("sqrt of a negative interval");
    const double lo_in = std::max(0.0, a.lo());
    const double hi_in = std::max(0.0, a.hi());
    return {std::max(0.0, nudge_down(std::sqrt(lo_in), 4)), nudge_up(std::sqrt(hi_in), 4)};
}

inline Interval iasin(const Interval& a) {
    if (!a.finite()) throw DomainError("asin over an unbounded interval");
    if (a.hi() < -1.0 - kSqrtAsinSlack || a.lo() > 1.0 + kSqrtAsinSlack)
        throw DomainError("asin outside [-1, 1]");
    const double lo_in = std::clamp(a.lo(), -1.0, 1.0);
    const double hi_in = std::clamp(a.hi(), -1.0, 1.0);
    return {nudge_down(std::asin(lo_in), 4), nudge_up(std::asin(hi_in), 4)};
}

/// Axis-aligned box of intervals, one per coordinate.
class IntervalBox {
public:
    IntervalBox() = default;
    explicit IntervalBox(Interval x) : dim_(1), iv_{x, Interval{}} {}
    IntervalBox(Interval x, Interval y) : dim_(2), iv_{x, y} {}

    static IntervalBox around(const Point& p, double r) {
        IntervalBox b = zero(p.dim());
        for (int i = 0; i < p.dim(); ++i) b.iv_[static_cast<std::size_t>(i)] = {p[i] - r, p[i] + r};
        return b;
    }

    static IntervalBox whole(int dim) {
        IntervalBox b = zero(dim);
        for (int i = 0; i < dim; ++i) b.iv_[static_cast<std::size_t>(i)] = Interval::whole();
        return b;
    }

    static IntervalBox zero(int dim) {
        if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("box dimension out of range");
        IntervalBox b;
        b.dim_ = dim;
        return b;
    }

    int dim() const { return dim_; }
    const Interval& operator[](int i) const { return iv_[static_cast<std::size_t>(i)]; }
    Interval& operator[](int i) { return iv_[static_cast<std::size_t>(i)]; }

    bool contains(const Point& p, double slack = 0.0) const {
        for (int i = 0; i < dim_; ++i)
            if (p[i] < iv_[static_cast<std::size_t>(i)].lo() - slack ||
                p[i] > iv_[static_cast<std::size_t>(i)].hi() + slack)
                return false;
        return true;
    }

    bool contains(const IntervalBox& o) const {
        for (int i = 0; i < dim_; ++i)
            if (!iv_[static_cast<std::size_t>(i)].contains(o[i])) return false;
        return true;
    }

    bool overlaps(const IntervalBox& o) const {
        for (int i = 0; i < dim_; ++i)
            if (!iv_[static_cast<std::size_t>(i)].overlaps(o[i])) return false;
        return true;
    }

    bool finite() const {
        for (int i = 0; i < dim_; ++i)
            if (!iv_[static_cast<std::size_t>(i)].finite()) return false;
        return true;
    }

    Point center() const {
        Point p = Point::zero(dim_);
        for (int i = 0; i < dim_; ++i) p[i] = iv_[static_cast<std::size_t>(i)].mid();
        return p;
    }

    bool operator==(const IntervalBox&) const = default;

private:
    int dim_ = 1;
    std::array<Interval, kMaxDim> iv_{};
};

inline Interval hull(const Interval& a, const Interval& b) {
    return {std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi())};
}

inline IntervalBox hull(const IntervalBox& a, const IntervalBox& b) {
    IntervalBox r = IntervalBox::zero(a.dim());
    for (int i = 0; i < a.dim(); ++i) r[i] = hull(a[i], b[i]);
    return r;
}

} // namespace semirec
