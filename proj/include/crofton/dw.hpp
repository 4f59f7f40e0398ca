#pragma once

// Line counter built on the union of closed eps-balls around the sample
// (Devroye-Wise support estimator). The count is twice the number of groups
// of eps-components left after merging neighbours whose separating gap is
// entirely within 4 eps of the sample.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "crofton/delaunay.hpp"
#include "crofton/error.hpp"
#include "crofton/geom.hpp"
#include "crofton/grid.hpp"
#include "crofton/point_cloud.hpp"

namespace crofton {

/// Data-driven radius: twice the largest nearest-neighbour distance.
inline double auto_epsilon(const PointCloud& points) {
    const std::size_t n = points.size();
    if (n < 2) throw usage_error("auto epsilon needs at least 2 points");
    const std::size_t d = static_cast<std::size_t>(points.dim());
    Vec lo(points[0].begin(), points[0].end()), hi = lo;
    for (std::size_t i = 1; i < n; ++i)
        for (std::size_t a = 0; a < d; ++a) {
            lo[a] = std::min(lo[a], points[i][a]);
            hi[a] = std::max(hi[a], points[i][a]);
        }
    double volume = 1.0, extent = 0.0;
    for (std::size_t a = 0; a < d; ++a) extent = std::max(extent, hi[a] - lo[a]);
    if (extent <= 0.0) return 0.0;  // all points coincide
    for (std::size_t a = 0; a < d; ++a) volume *= std::max(hi[a] - lo[a], extent * 1e-6);
    const double cell = std::pow(volume / static_cast<double>(n), 1.0 / static_cast<double>(d));
    const UniformGrid grid(points, cell);
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, grid.nearest_distance_sq(points[i], i));
    return 2.0 * std::sqrt(worst);
}

struct BoundaryCenters {
    std::vector<std::size_t> indices;
    bool pruned = false;  // false: every point is kept (no planar Delaunay available)
};

/// Points whose Voronoi cell is unbounded or reaches distance >= eps, read
/// off a Delaunay triangulation: hull vertices, plus vertices of a triangle
/// with circumradius >= eps.
inline BoundaryCenters boundary_centers(const Triangulation2& tri, double eps) {
    const std::size_t n = tri.vertices.size();
    std::vector<char> keep(tri.on_hull.begin(), tri.on_hull.end());
    for (std::size_t t = 0; t < tri.triangles.size(); ++t)
        if (tri.circumradii[t] >= eps)
            for (int v : tri.triangles[t]) keep[static_cast<std::size_t>(v)] = 1;
    for (std::size_t i = 0; i < n; ++i)
        if (tri.duplicate_of[i] >= 0) keep[i] = 1;
    BoundaryCenters out;
    out.pruned = true;
    for (std::size_t i = 0; i < n; ++i)
        if (keep[i]) out.indices.push_back(i);
    return out;
}

inline BoundaryCenters all_centers(std::size_t n) {
    BoundaryCenters out;
    out.indices.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.indices[i] = i;
    return out;
}

/// Planar input goes through the Delaunay route; other dimensions, and
/// degenerate planar input, keep every point.
inline BoundaryCenters boundary_centers(const PointCloud& points, double eps) {
    if (!(eps > 0.0)) throw usage_error("epsilon must be positive");
    if (points.dim() != 2 || points.size() < 3) return all_centers(points.size());
    try {
        return boundary_centers(delaunay2(points), eps);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::data) throw;
        return all_centers(points.size());
    }
}

class DwIndex {
public:
    DwIndex(PointCloud points, double epsilon)
        : DwIndex(points, epsilon, boundary_centers(points, epsilon)) {}

    DwIndex(PointCloud points, double epsilon, BoundaryCenters centers)
        : points_(std::move(points)), eps_(epsilon), centers_(std::move(centers)) {
        if (!(eps_ > 0.0) || !std::isfinite(eps_)) throw usage_error("epsilon must be positive");
        if (points_.empty()) throw usage_error("empty point cloud");
        grid_ = UniformGrid(points_, eps_);
        if (centers_.pruned) center_grid_ = UniformGrid(points_, centers_.indices, eps_);
    }

    const PointCloud& points() const noexcept { return points_; }
    double epsilon() const noexcept { return eps_; }
    const std::vector<std::size_t>& centers() const noexcept { return centers_.indices; }
    bool centers_pruned() const noexcept { return centers_.pruned; }
    const UniformGrid& point_grid() const noexcept { return grid_; }
    /// Grid over the boundary centers (over all points when not pruned).
    const UniformGrid& center_grid() const noexcept { return centers_.pruned ? center_grid_ : grid_; }

private:
    PointCloud points_;
    double eps_;
    BoundaryCenters centers_;
    UniformGrid grid_;
    UniformGrid center_grid_;
};

namespace detail {

inline IntervalSet brute_components(const Line& line, const UniformGrid& grid, double radius) {
    std::vector<Interval> parts;
    grid.for_each_near_line(line, radius, [&](std::size_t, ConstVecView p) {
        if (auto iv = intersect_ball(line, p, radius)) parts.push_back(*iv);
    });
    return union_intervals(std::move(parts));
}

}  // namespace detail

/// Connected components of the line inside the union of radius-balls around
/// the sample. With pruned centers only boundary balls are intersected; an
/// endpoint is kept when no other sample lies strictly closer than `radius`.
inline IntervalSet line_components(const Line& line, const DwIndex& index, double radius) {
    if (!index.centers_pruned()) return detail::brute_components(line, index.point_grid(), radius);
    if (radius < index.epsilon() * (1 - 1e-12))
        throw usage_error("line_components: radius below epsilon with pruned centers");

    struct End {
        double lam;
        bool start;
    };
    thread_local std::vector<End> ends;
    ends.clear();
    const double shrink = radius * (1.0 - 1e-12);
    Vec z(static_cast<std::size_t>(line.dim()));
    index.center_grid().for_each_near_line(line, radius, [&](std::size_t id, ConstVecView p) {
        const auto iv = intersect_ball(line, p, radius);
        if (!iv) return;
        for (const bool start : {true, false}) {
            const double lam = start ? iv->lo : iv->hi;
            for (std::size_t a = 0; a < z.size(); ++a) z[a] = line.origin()[a] + lam * line.theta()[a];
            if (!index.point_grid().any_within(z, shrink, id)) ends.push_back({lam, start});
        }
    });
    std::sort(ends.begin(), ends.end(), [](const End& a, const End& b) {
        return a.lam < b.lam || (a.lam == b.lam && a.start && !b.start);
    });

    IntervalSet out;
    bool open = false;
    double lo = 0.0, last = -kInf;
    bool last_start = false;
    const double dup = 1e-12 * radius;
    for (const auto& e : ends) {
        const bool duplicate = e.start == last_start && std::abs(e.lam - last) <= dup;
        last = e.lam;
        last_start = e.start;
        if (duplicate) continue;
        if (e.start == open) return detail::brute_components(line, index.point_grid(), radius);
        if (e.start) {
            lo = e.lam;
        } else {
            out.push_back({lo, e.lam});
        }
        open = e.start;
    }
    if (open) return detail::brute_components(line, index.point_grid(), radius);
    return out;
}

/// True iff every point of the line with parameter in [a, b] lies within
/// `radius` of the sample.
inline bool gap_covered(const Line& line, const DwIndex& index, double a, double b, double radius) {
    thread_local std::vector<Interval> parts;
    parts.clear();
    index.center_grid().for_each_near_line(
        line, radius,
        [&](std::size_t, ConstVecView p) {
            if (auto iv = intersect_ball(line, p, radius))
                if (iv->hi >= a && iv->lo <= b) parts.push_back(*iv);
        },
        a, b);
    for (const auto& iv : union_intervals(parts))
        if (iv.lo <= a && iv.hi >= b) return true;
    return false;
}

/// Devroye-Wise line count: 2 x (eps-components after merging those whose
/// gaps are covered at 4 eps).
inline int hat_n(const Line& line, const DwIndex& index) {
    const double eps = index.epsilon();
    const IntervalSet comps = line_components(line, index, eps);
    if (comps.empty()) return 0;
    int groups = static_cast<int>(comps.size());
    for (std::size_t i = 0; i + 1 < comps.size(); ++i)
        if (gap_covered(line, index, comps[i].hi, comps[i + 1].lo, 4.0 * eps)) --groups;
    return 2 * groups;
}

inline int hat_n_capped(const Line& line, const DwIndex& index, int n0) {
    if (n0 < 2) throw usage_error("cap N0 must be >= 2");
    return std::min(hat_n(line, index), n0);
}

}  // namespace crofton
