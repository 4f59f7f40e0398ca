#pragma once

// Dimension-generic vectors, lines r = y + lambda * theta, and exact
// line/primitive intersection kernels.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "crofton/error.hpp"
#include "crofton/rng.hpp"

namespace crofton {

using Vec = std::vector<double>;
using ConstVecView = std::span<const double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline double dot(ConstVecView a, ConstVecView b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm(ConstVecView a) { return std::sqrt(dot(a, a)); }

inline double distance_sq(ConstVecView a, ConstVecView b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double t = a[i] - b[i];
        s += t * t;
    }
    return s;
}

inline double distance(ConstVecView a, ConstVecView b) { return std::sqrt(distance_sq(a, b)); }

/// Unit vector on the closed upper half-sphere (last coordinate >= 0).
class Direction {
public:
    explicit Direction(Vec theta) : theta_(std::move(theta)) {
        if (theta_.size() < 2) throw usage_error("direction needs dimension >= 2");
        const double n = norm(theta_);
        if (!(std::abs(n - 1.0) <= 1e-12)) throw usage_error("direction is not a unit vector");
        if (theta_.back() < 0.0) throw usage_error("direction must lie on the upper half-sphere");
    }

    const Vec& vec() const noexcept { return theta_; }
    int dim() const noexcept { return static_cast<int>(theta_.size()); }
    double operator[](std::size_t i) const { return theta_[i]; }

private:
    Vec theta_;
};

/// Uniform draw on the half-sphere: normalized Gaussian vector, reflected
/// into the upper half.
inline Direction sample_direction(Rng& rng, int d) {
    if (d < 2) throw usage_error("invalid dimension " + std::to_string(d) + " (need d >= 2)");
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vec v(static_cast<std::size_t>(d));
    double n = 0.0;
    do {
        for (auto& x : v) x = gauss(rng);
        n = norm(v);
    } while (n < 1e-300);
    for (auto& x : v) x /= n;
    if (v.back() < 0.0)
        for (auto& x : v) x = -x;
    // A zero last coordinate after the sign flip can be -0.0; normalize it.
    if (v.back() == 0.0) v.back() = 0.0;
    return Direction(std::move(v));
}

/// Orthonormal basis of theta's orthogonal complement. Gram-Schmidt (applied
/// twice) over the standard basis, skipping the axis where |theta| is largest,
/// so the result is a deterministic function of theta.
inline std::vector<Vec> orthonormal_basis(const Direction& theta) {
    const std::size_t d = theta.vec().size();
    std::size_t skip = 0;
    for (std::size_t i = 1; i < d; ++i)
        if (std::abs(theta[i]) > std::abs(theta[skip])) skip = i;

    std::vector<Vec> basis;
    basis.reserve(d - 1);
    for (std::size_t axis = 0; axis < d; ++axis) {
        if (axis == skip) continue;
        Vec v(d, 0.0);
        v[axis] = 1.0;
        for (int pass = 0; pass < 2; ++pass) {
            const double t = dot(v, theta.vec());
            for (std::size_t i = 0; i < d; ++i) v[i] -= t * theta[i];
            for (const auto& b : basis) {
                const double s = dot(v, b);
                for (std::size_t i = 0; i < d; ++i) v[i] -= s * b[i];
            }
        }
        const double n = norm(v);
        for (auto& x : v) x /= n;
        basis.push_back(std::move(v));
    }
    return basis;
}

/// The line { sum_j offset_j * basis_j + lambda * theta }.
class Line {
public:
    Line(Direction theta, std::vector<Vec> basis, Vec offset)
        : theta_(std::move(theta)), basis_(std::move(basis)), offset_(std::move(offset)) {
        const std::size_t d = theta_.vec().size();
        if (basis_.size() != d - 1 || offset_.size() != d - 1)
            throw usage_error("line basis/offset must have d-1 entries");
        origin_.assign(d, 0.0);
        for (std::size_t j = 0; j + 1 < d; ++j)
            for (std::size_t i = 0; i < d; ++i) origin_[i] += offset_[j] * basis_[j][i];
    }

    Line(Direction theta, Vec offset) : Line(theta, orthonormal_basis(theta), std::move(offset)) {}

    int dim() const noexcept { return theta_.dim(); }
    const Direction& direction() const noexcept { return theta_; }
    const Vec& theta() const noexcept { return theta_.vec(); }
    const std::vector<Vec>& basis() const noexcept { return basis_; }
    const Vec& offset() const noexcept { return offset_; }
    /// The point at lambda = 0 (lies in theta's orthogonal complement).
    const Vec& origin() const noexcept { return origin_; }

    Vec point_at(double lambda) const {
        Vec p = origin_;
        for (std::size_t i = 0; i < p.size(); ++i) p[i] += lambda * theta()[i];
        return p;
    }

    /// Parameter of the orthogonal projection of x onto the line.
    double foot(ConstVecView x) const {
        double s = 0.0;
        for (std::size_t i = 0; i < origin_.size(); ++i) s += (x[i] - origin_[i]) * theta()[i];
        return s;
    }

    double distance_sq_to(ConstVecView x) const {
        double w2 = 0.0, b = 0.0;
        for (std::size_t i = 0; i < origin_.size(); ++i) {
            const double w = x[i] - origin_[i];
            w2 += w * w;
            b += w * theta()[i];
        }
        return std::max(0.0, w2 - b * b);
    }

private:
    Direction theta_;
    std::vector<Vec> basis_;
    Vec offset_;
    Vec origin_;
};

struct Interval {
    double lo;
    double hi;

    double length() const { return hi - lo; }
    bool contains(double x) const { return lo <= x && x <= hi; }
    friend bool operator==(const Interval&, const Interval&) = default;
};

using IntervalSet = std::vector<Interval>;

struct Ball {
    Vec center;
    double radius;
};

/// { x : <normal, x> <= offset }
struct HalfSpace {
    Vec normal;
    double offset;

    bool contains(ConstVecView x) const { return dot(normal, x) <= offset; }
};

inline constexpr double kTangencyRelTol = 1e-12;

/// Parameter range where the line is inside the closed ball. Tangent lines
/// (discriminant within 1e-12 r^2 of zero) are reported as misses.
inline std::optional<Interval> intersect_ball(const Line& line, ConstVecView center, double radius) {
    const auto& o = line.origin();
    const auto& t = line.theta();
    double b = 0.0, w2 = 0.0;
    for (std::size_t i = 0; i < o.size(); ++i) {
        const double w = o[i] - center[i];
        b += w * t[i];
        w2 += w * w;
    }
    const double r2 = radius * radius;
    const double disc = b * b - (w2 - r2);
    if (disc <= kTangencyRelTol * r2) return std::nullopt;
    const double s = std::sqrt(disc);
    return Interval{-b - s, -b + s};
}

inline std::optional<Interval> intersect_ball(const Line& line, const Ball& ball) {
    return intersect_ball(line, ball.center, ball.radius);
}

/// {lambda : <n, y + lambda theta> <= c}: a ray, the full line, or empty.
inline std::optional<Interval> intersect_halfspace(const Line& line, const HalfSpace& hs) {
    const double nt = dot(hs.normal, line.theta());
    const double ny = dot(hs.normal, line.origin());
    if (std::abs(nt) <= 1e-12) {
        if (ny <= hs.offset) return Interval{-kInf, kInf};
        return std::nullopt;
    }
    const double root = (hs.offset - ny) / nt;
    if (nt > 0.0) return Interval{-kInf, root};
    return Interval{root, kInf};
}

/// Minimal sorted disjoint cover of the union; touching intervals merge.
inline IntervalSet union_intervals(std::vector<Interval> items) {
    std::sort(items.begin(), items.end(), [](const Interval& a, const Interval& b) {
        return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
    });
    IntervalSet out;
    for (const auto& it : items) {
        if (!out.empty() && it.lo <= out.back().hi)
            out.back().hi = std::max(out.back().hi, it.hi);
        else
            out.push_back(it);
    }
    return out;
}

}  // namespace crofton
