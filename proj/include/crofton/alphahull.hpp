#pragma once

// Planar alpha-convex hull C_alpha(X): the intersection of the complements of
// all open radius-alpha disks that miss the sample. Equivalently z lies outside
// C_alpha iff it is closer than alpha to F = {c : d(c, X) >= alpha}. The
// complement is kept as a finite list of open elements:
//   - radius-alpha disks through the two endpoints of a Delaunay edge that
//     contain no sample point (centred at the corners of the boundary of F),
//   - sectors {X_i + r u : 0 < r < 2 alpha, u in A} for every arc A of the
//     circle of radius alpha around X_i that bounds F,
//   - the open outer half-planes of the convex hull edges,
//   - the interior of F itself.
// The line counter collects element boundary crossings that are not interior
// to any other element.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <vector>

#include "crofton/delaunay.hpp"
#include "crofton/dw.hpp"
#include "crofton/error.hpp"
#include "crofton/geom.hpp"
#include "crofton/grid.hpp"
#include "crofton/point_cloud.hpp"

namespace crofton {

/// Convex hull vertices in counter-clockwise order (monotone chain; collinear
/// points dropped). Throws a data error for collinear input.
inline std::vector<std::size_t> convex_hull_vertices(const PointCloud& points) {
    if (points.dim() != 2) throw usage_error("convex_hull2 needs planar points");
    const std::size_t n = points.size();
    if (n < 3) throw data_error("convex hull needs at least 3 points");
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return points[a][0] < points[b][0] || (points[a][0] == points[b][0] && points[a][1] < points[b][1]);
    });
    const auto cross = [&](std::size_t o, std::size_t a, std::size_t b) {
        return (points[a][0] - points[o][0]) * (points[b][1] - points[o][1]) -
               (points[a][1] - points[o][1]) * (points[b][0] - points[o][0]);
    };
    std::vector<std::size_t> hull(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], idx[i]) <= 0) --k;
        hull[k++] = idx[i];
    }
    for (std::size_t i = n - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(hull[k - 2], hull[k - 1], idx[i]) <= 0) --k;
        hull[k++] = idx[i];
    }
    hull.resize(k - 1);
    if (hull.size() < 3) throw data_error("convex hull of collinear points is degenerate");
    return hull;
}

/// One half-plane {x : <n, x> <= c} per hull edge, n the outward unit normal.
/// The hull is their intersection.
inline std::vector<HalfSpace> convex_hull2(const PointCloud& points) {
    const auto hull = convex_hull_vertices(points);
    std::vector<HalfSpace> out;
    out.reserve(hull.size());
    for (std::size_t i = 0; i < hull.size(); ++i) {
        const auto a = points[hull[i]];
        const auto b = points[hull[(i + 1) % hull.size()]];
        const double dx = b[0] - a[0], dy = b[1] - a[1];
        const double len = std::hypot(dx, dy);
        Vec nrm{dy / len, -dx / len};
        const double c = dot(nrm, a);
        out.push_back({std::move(nrm), c});
    }
    return out;
}

/// Open region {apex + r (cos phi, sin phi) : 0 < r < 2 alpha, start < phi < start + sweep}.
struct Sector {
    Vec apex;
    double start = 0.0;
    double sweep = 0.0;
};

struct ComplementElements {
    std::vector<Ball> balls;            // radius alpha each
    std::vector<Sector> sectors;
    std::vector<HalfSpace> halfspaces;  // element = this closed half-plane; interior = strict side
    double alpha = 0.0;
    std::optional<DwIndex> free_space;  // sample balls of radius alpha; elements are the gaps between them
    UniformGrid ball_grid;              // over ball centers
    UniformGrid sector_grid;            // over sector apexes, ids are sector indices
};

namespace detail {

inline HalfSpace opposite(const HalfSpace& h) {
    Vec n = h.normal;
    for (auto& x : n) x = -x;
    return {std::move(n), -h.offset};
}

constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Arcs of the circle of radius alpha around point i not covered by the open
/// alpha-disks of the other points.
inline void boundary_arcs(const PointCloud& points, const UniformGrid& grid, std::size_t i, double alpha,
                          std::vector<Sector>& out) {
    const auto p = points[i];
    std::vector<Interval> covered;
    bool whole = false;
    grid.for_each_in_ball(p, 2.0 * alpha, [&](std::size_t j, ConstVecView q) {
        if (j == i || whole) return;
        const double d = distance(p, q);
        if (d == 0.0) {
            // Coincident points share their arcs; the lower index keeps them.
            if (j < i) whole = true;
            return;
        }
        if (d >= 2.0 * alpha) return;
        const double mid = std::atan2(q[1] - p[1], q[0] - p[0]);
        const double half = std::acos(d / (2.0 * alpha));
        double lo = mid - half;
        lo -= kTwoPi * std::floor(lo / kTwoPi);
        const double hi = lo + 2.0 * half;
        covered.push_back({lo, hi});
        if (hi > kTwoPi) covered.push_back({lo - kTwoPi, hi - kTwoPi});
    });
    if (whole) return;
    const Vec apex(p.begin(), p.end());
    if (covered.empty()) {
        out.push_back({apex, 0.0, kTwoPi});
        return;
    }
    const IntervalSet merged = union_intervals(std::move(covered));
    // Free arcs are the gaps of `merged` within [0, 2 pi), joined across 2 pi.
    std::vector<Interval> gaps;
    double prev = 0.0;
    for (const auto& iv : merged) {
        if (iv.lo > prev) gaps.push_back({prev, iv.lo});
        prev = std::max(prev, iv.hi);
    }
    if (prev < kTwoPi) gaps.push_back({prev, kTwoPi});
    if (gaps.size() >= 2 && gaps.front().lo <= 0.0 && gaps.back().hi >= kTwoPi) {
        gaps.front().lo = gaps.back().lo - kTwoPi;
        gaps.pop_back();
    }
    for (const auto& g : gaps)
        if (g.hi - g.lo > 1e-12) out.push_back({apex, g.lo, std::min(kTwoPi, g.hi - g.lo)});
}

/// {lam : a + b lam > 0} as an interval (possibly empty or the whole line).
inline std::optional<Interval> open_halfline(double a, double b) {
    if (std::abs(b) < 1e-15) {
        if (a > 0.0) return Interval{-kInf, kInf};
        return std::nullopt;
    }
    if (b > 0.0) return Interval{-a / b, kInf};
    return Interval{-kInf, -a / b};
}

inline std::optional<Interval> intersect(const Interval& x, const Interval& y) {
    const Interval r{std::max(x.lo, y.lo), std::min(x.hi, y.hi)};
    if (!(r.lo < r.hi)) return std::nullopt;
    return r;
}

/// Up to two parameter intervals where the line runs through the sector.
template <class Out>
void intersect_sector(const Line& line, const Sector& s, double alpha, Out&& out) {
    const auto chord = intersect_ball(line, s.apex, 2.0 * alpha);
    if (!chord) return;
    if (s.sweep >= kTwoPi) {
        out(*chord);
        return;
    }
    const auto& o = line.origin();
    const auto& t = line.theta();
    const double wx = o[0] - s.apex[0], wy = o[1] - s.apex[1];
    const double u0x = std::cos(s.start), u0y = std::sin(s.start);
    const double u1x = std::cos(s.start + s.sweep), u1y = std::sin(s.start + s.sweep);
    // Left of the start ray and right of the end ray.
    const auto left = open_halfline(u0x * wy - u0y * wx, u0x * t[1] - u0y * t[0]);
    const auto right = open_halfline(wx * u1y - wy * u1x, t[0] * u1y - t[1] * u1x);
    if (s.sweep <= std::numbers::pi) {
        if (!left || !right) return;
        if (auto w = intersect(*left, *right))
            if (auto r = intersect(*w, *chord)) out(*r);
        return;
    }
    std::vector<Interval> parts;
    for (const auto& h : {left, right})
        if (h)
            if (auto r = intersect(*h, *chord)) parts.push_back(*r);
    for (const auto& r : union_intervals(std::move(parts))) out(r);
}

}  // namespace detail

inline ComplementElements alpha_complement2(const PointCloud& points, double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw usage_error("alpha must be positive");
    if (points.dim() != 2) throw usage_error("alpha-hull counting is only available for d = 2");
    const std::size_t n = points.size();
    if (n < 2) throw usage_error("alpha-hull needs at least 2 points");

    ComplementElements comp;
    comp.alpha = alpha;
    std::vector<std::pair<int, int>> edges;
    std::optional<Triangulation2> tri;
    try {
        tri = delaunay2(points);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::data) throw;
    }

    if (tri) {
        edges = tri->edges();
        for (const auto& h : convex_hull2(points)) comp.halfspaces.push_back(detail::opposite(h));
        comp.free_space.emplace(points, alpha, boundary_centers(*tri, alpha));
    } else {
        // Collinear (or coincident) sample: neighbours along the line are the
        // only pairs, and the hull complement is two side half-planes plus
        // two end caps.
        std::size_t far = 0;
        for (std::size_t i = 1; i < n; ++i)
            if (distance_sq(points[i], points[0]) > distance_sq(points[far], points[0])) far = i;
        Vec u{points[far][0] - points[0][0], points[far][1] - points[0][1]};
        const double ul = norm(u);
        if (ul == 0.0) u = {1.0, 0.0};
        else
            for (auto& x : u) x /= ul;
        std::vector<std::size_t> order(n);
        for (std::size_t i = 0; i < n; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return dot(u, points[a]) < dot(u, points[b]); });
        for (std::size_t i = 0; i + 1 < n; ++i) edges.emplace_back(static_cast<int>(order[i]), static_cast<int>(order[i + 1]));
        const Vec side{-u[1], u[0]};
        const double c = dot(side, points[0]);
        comp.halfspaces.push_back({side, c});
        comp.halfspaces.push_back({Vec{-side[0], -side[1]}, -c});
        comp.halfspaces.push_back({u, dot(u, points[order.front()])});
        comp.halfspaces.push_back({Vec{-u[0], -u[1]}, -dot(u, points[order.back()])});
        comp.free_space.emplace(points, alpha, all_centers(n));
    }

    const UniformGrid& grid = comp.free_space->point_grid();
    const double strict = alpha * (1.0 - 1e-9);
    PointCloud centers(2);
    for (const auto& [i, j] : edges) {
        const auto p = points[static_cast<std::size_t>(i)];
        const auto q = points[static_cast<std::size_t>(j)];
        const double dx = q[0] - p[0], dy = q[1] - p[1];
        const double len = std::hypot(dx, dy);
        if (len == 0.0 || len > 2.0 * alpha) continue;
        const double h = std::sqrt(std::max(0.0, alpha * alpha - 0.25 * len * len));
        const double mx = 0.5 * (p[0] + q[0]), my = 0.5 * (p[1] + q[1]);
        for (const double sgn : {1.0, -1.0}) {
            const Vec c{mx - sgn * h * dy / len, my + sgn * h * dx / len};
            if (grid.any_within(c, strict)) continue;
            comp.balls.push_back({c, alpha});
            centers.push_back(c);
        }
    }
    comp.ball_grid = UniformGrid(centers, alpha);

    PointCloud apexes(2);
    for (const std::size_t i : comp.free_space->centers()) detail::boundary_arcs(points, grid, i, alpha, comp.sectors);
    for (const auto& sec : comp.sectors) apexes.push_back(sec.apex);
    comp.sector_grid = UniformGrid(apexes, 2.0 * alpha);
    return comp;
}

/// Number of points where the line meets the boundary of C_alpha(X).
inline int check_n(const Line& line, const ComplementElements& comp) {
    if (line.dim() != 2) throw usage_error("check_n needs a planar line");
    thread_local std::vector<Interval> items;
    items.clear();
    comp.ball_grid.for_each_near_line(line, comp.alpha, [&](std::size_t, ConstVecView c) {
        if (auto iv = intersect_ball(line, c, comp.alpha)) items.push_back(*iv);
    });
    comp.sector_grid.for_each_near_line(line, 2.0 * comp.alpha, [&](std::size_t id, ConstVecView) {
        detail::intersect_sector(line, comp.sectors[id], comp.alpha, [&](const Interval& iv) { items.push_back(iv); });
    });
    for (const auto& h : comp.halfspaces)
        if (auto iv = intersect_halfspace(line, h)) items.push_back(*iv);
    if (comp.free_space) {
        const IntervalSet covered = line_components(line, *comp.free_space, comp.alpha);
        double prev = -kInf;
        for (const auto& c : covered) {
            items.push_back({prev, c.lo});
            prev = c.hi;
        }
        items.push_back({prev, kInf});
    }

    thread_local std::vector<double> cands;
    cands.clear();
    for (const auto& iv : items) {
        if (std::isfinite(iv.lo)) cands.push_back(iv.lo);
        if (std::isfinite(iv.hi)) cands.push_back(iv.hi);
    }
    std::sort(cands.begin(), cands.end());
    std::sort(items.begin(), items.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });

    const double tol = 1e-9 * comp.alpha;
    int count = 0;
    double reach = -kInf;  // max hi over items with lo < lam - tol
    double last_kept = -kInf;
    std::size_t next = 0;
    for (const double lam : cands) {
        while (next < items.size() && items[next].lo < lam - tol) reach = std::max(reach, items[next++].hi);
        if (reach > lam + tol) continue;  // strictly inside another element
        if (lam - last_kept <= tol) continue;
        last_kept = lam;
        ++count;
    }
    return count;
}

/// z lies in C_alpha(X) iff it is interior to no complement element.
inline bool alpha_hull_contains(const ComplementElements& comp, ConstVecView z) {
    const double tol = 1e-9 * comp.alpha;
    for (const auto& h : comp.halfspaces)
        if (dot(h.normal, z) < h.offset - tol) return false;
    bool inside_ball = false;
    comp.ball_grid.for_each_in_ball(z, comp.alpha - tol, [&](std::size_t, ConstVecView) { inside_ball = true; });
    if (inside_ball) return false;
    bool inside_sector = false;
    comp.sector_grid.for_each_in_ball(z, 2.0 * comp.alpha - tol, [&](std::size_t id, ConstVecView apex) {
        const double r = distance(z, apex);
        if (inside_sector || r <= tol) return;
        const Sector& sec = comp.sectors[id];
        double rel = std::atan2(z[1] - apex[1], z[0] - apex[0]) - sec.start;
        rel -= detail::kTwoPi * std::floor(rel / detail::kTwoPi);
        if (sec.sweep >= detail::kTwoPi || (rel > 1e-12 && rel < sec.sweep - 1e-12)) inside_sector = true;
    });
    if (inside_sector) return false;
    if (comp.free_space && !comp.free_space->point_grid().any_within(z, comp.alpha + tol)) return false;
    return true;
}

}  // namespace crofton
