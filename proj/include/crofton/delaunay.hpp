#pragma once

// Incremental Bowyer-Watson Delaunay triangulation of planar points.
//
// The bounding super-triangle is symbolic: hull edges are closed off by
// "ghost" triangles sharing one vertex at infinity, whose circumcircle test
// degenerates to an orientation test. Points are inserted in Hilbert-curve
// order and located by a visibility walk. Co-circular ties are resolved at
// the end: each such quad takes the diagonal incident to its lowest vertex index.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "crofton/error.hpp"
#include "crofton/point_cloud.hpp"

namespace crofton {

struct Triangulation2 {
    PointCloud vertices;
    std::vector<std::array<int, 3>> triangles;  // CCW, indices into vertices
    std::vector<std::array<int, 3>> neighbors;  // neighbors[t][i] is across the edge opposite vertex i; -1 on the hull
    std::vector<std::array<double, 2>> circumcenters;
    std::vector<double> circumradii;
    std::vector<char> on_hull;           // per vertex
    std::vector<int> duplicate_of;       // per vertex: -1, or an inserted vertex with identical coordinates

    /// Unique undirected edges (i < j), sorted.
    std::vector<std::pair<int, int>> edges() const {
        std::vector<std::pair<int, int>> out;
        out.reserve(triangles.size() * 3);
        for (std::size_t t = 0; t < triangles.size(); ++t)
            for (int i = 0; i < 3; ++i) {
                const int a = triangles[t][(i + 1) % 3], b = triangles[t][(i + 2) % 3];
                const int nb = neighbors[t][i];
                if (nb < 0 || static_cast<std::size_t>(nb) > t) out.emplace_back(std::min(a, b), std::max(a, b));
            }
        std::sort(out.begin(), out.end());
        return out;
    }
};

namespace predicates {

using P2 = std::array<double, 2>;

// Exact sign evaluation with floating-point expansions (sums of
// non-overlapping doubles in increasing magnitude). A cheap filter decides
// most calls; the exact path only runs for near-degenerate input.
namespace expansion {

using Expansion = std::vector<double>;

inline void two_sum(double a, double b, double& x, double& y) {
    x = a + b;
    const double bv = x - a, av = x - bv;
    y = (a - av) + (b - bv);
}

inline void fast_two_sum(double a, double b, double& x, double& y) {
    x = a + b;
    y = b - (x - a);
}

inline void two_prod(double a, double b, double& x, double& y) {
    x = a * b;
    y = std::fma(a, b, -x);
}

inline Expansion diff(double a, double b) {
    double x, y;
    two_sum(a, -b, x, y);
    if (y == 0.0) return {x};
    return {y, x};
}

inline Expansion compress(const Expansion& e) {
    if (e.empty()) return {0.0};
    Expansion h(e.size());
    std::ptrdiff_t bottom = static_cast<std::ptrdiff_t>(e.size()) - 1;
    double q = e.back();
    for (std::ptrdiff_t i = bottom - 1; i >= 0; --i) {
        double qnew, small;
        fast_two_sum(q, e[static_cast<std::size_t>(i)], qnew, small);
        if (small != 0.0) {
            h[static_cast<std::size_t>(bottom--)] = qnew;
            q = small;
        } else {
            q = qnew;
        }
    }
    std::size_t top = 0;
    for (std::size_t i = static_cast<std::size_t>(bottom) + 1; i < e.size(); ++i) {
        double qnew, small;
        fast_two_sum(h[i], q, qnew, small);
        if (small != 0.0) h[top++] = small;
        q = qnew;
    }
    h[top++] = q;
    h.resize(top);
    return h;
}

inline Expansion grow(const Expansion& e, double b) {
    Expansion h;
    h.reserve(e.size() + 1);
    double q = b;
    for (const double ei : e) {
        double x, y;
        two_sum(q, ei, x, y);
        if (y != 0.0) h.push_back(y);
        q = x;
    }
    if (q != 0.0 || h.empty()) h.push_back(q);
    return h;
}

inline Expansion sum(Expansion e, const Expansion& f) {
    for (const double fi : f) e = grow(e, fi);
    return compress(e);
}

inline Expansion scale(const Expansion& e, double b) {
    Expansion h;
    double q, small;
    two_prod(e[0], b, q, small);
    if (small != 0.0) h.push_back(small);
    for (std::size_t i = 1; i < e.size(); ++i) {
        double p1, p0, s;
        two_prod(e[i], b, p1, p0);
        two_sum(q, p0, s, small);
        if (small != 0.0) h.push_back(small);
        fast_two_sum(p1, s, q, small);
        if (small != 0.0) h.push_back(small);
    }
    if (q != 0.0 || h.empty()) h.push_back(q);
    return h;
}

inline Expansion product(const Expansion& e, const Expansion& f) {
    Expansion out{0.0};
    for (const double fi : f) out = sum(std::move(out), scale(e, fi));
    return out;
}

inline Expansion negate(Expansion e) {
    for (auto& v : e) v = -v;
    return e;
}

inline double sign_of(const Expansion& e) {
    for (auto it = e.rbegin(); it != e.rend(); ++it)
        if (*it != 0.0) return *it;
    return 0.0;
}

}  // namespace expansion

/// Positive iff (a, b, c) turns counter-clockwise; the sign is exact.
inline double orient(const P2& a, const P2& b, const P2& c) {
    const double left = (b[0] - a[0]) * (c[1] - a[1]);
    const double right = (b[1] - a[1]) * (c[0] - a[0]);
    const double det = left - right;
    const double bound = 3.3306690738754716e-16 * (std::abs(left) + std::abs(right));
    if (det > bound || -det > bound) return det;
    using namespace expansion;
    const auto l = product(diff(b[0], a[0]), diff(c[1], a[1]));
    const auto r = product(diff(b[1], a[1]), diff(c[0], a[0]));
    return sign_of(sum(l, negate(r)));
}

/// Positive iff d lies strictly inside the circumcircle of the CCW triangle
/// (a, b, c), zero when co-circular; the sign is exact.
inline double incircle(const P2& a, const P2& b, const P2& c, const P2& d) {
    const double adx = a[0] - d[0], ady = a[1] - d[1];
    const double bdx = b[0] - d[0], bdy = b[1] - d[1];
    const double cdx = c[0] - d[0], cdy = c[1] - d[1];
    const double al = adx * adx + ady * ady, bl = bdx * bdx + bdy * bdy, cl = cdx * cdx + cdy * cdy;
    const double det = al * (bdx * cdy - cdx * bdy) + bl * (cdx * ady - adx * cdy) + cl * (adx * bdy - bdx * ady);
    const double perm = al * (std::abs(bdx * cdy) + std::abs(cdx * bdy)) + bl * (std::abs(cdx * ady) + std::abs(adx * cdy)) +
                        cl * (std::abs(adx * bdy) + std::abs(bdx * ady));
    const double bound = 1.1102230246251577e-15 * perm;
    if (det > bound || -det > bound) return det;
    using namespace expansion;
    const auto ax = diff(a[0], d[0]), ay = diff(a[1], d[1]);
    const auto bx = diff(b[0], d[0]), by = diff(b[1], d[1]);
    const auto cx = diff(c[0], d[0]), cy = diff(c[1], d[1]);
    const auto lift = [](const Expansion& x, const Expansion& y) { return sum(product(x, x), product(y, y)); };
    const auto cross = [](const Expansion& x1, const Expansion& y1, const Expansion& x2, const Expansion& y2) {
        return sum(product(x1, y2), negate(product(x2, y1)));
    };
    auto total = product(lift(ax, ay), cross(bx, by, cx, cy));
    total = sum(std::move(total), product(lift(bx, by), cross(cx, cy, ax, ay)));
    total = sum(std::move(total), product(lift(cx, cy), cross(ax, ay, bx, by)));
    return sign_of(total);
}

}  // namespace predicates

namespace detail {

inline std::uint64_t hilbert_index(std::uint32_t x, std::uint32_t y, int order) {
    std::uint64_t d = 0;
    for (std::uint32_t s = 1u << (order - 1); s > 0; s >>= 1) {
        const std::uint32_t rx = (x & s) ? 1 : 0;
        const std::uint32_t ry = (y & s) ? 1 : 0;
        d += static_cast<std::uint64_t>(s) * s * ((3 * rx) ^ ry);
        if (ry == 0) {
            if (rx == 1) {
                x = s - 1 - x;
                y = s - 1 - y;
            }
            std::swap(x, y);
        }
    }
    return d;
}

class BowyerWatson {
public:
    static constexpr int kGhost = -1;

    explicit BowyerWatson(const PointCloud& pts) : pts_(pts), duplicate_of_(pts.size(), -1) {
        const std::size_t n = pts.size();
        if (pts.dim() != 2) throw usage_error("delaunay2 needs planar points");
        if (n < 3) throw data_error("delaunay2 needs at least 3 points");
        xy_.resize(n);
        for (std::size_t i = 0; i < n; ++i) xy_[i] = {pts[i][0], pts[i][1]};
    }

    void run() {
        const auto order = insertion_order();
        // Seed triangle: first two points of the order plus the first point
        // not collinear with them.
        const int a = order[0];
        int b = -1;
        std::size_t bi = 1;
        for (; bi < order.size(); ++bi)
            if (xy_[order[bi]] != xy_[a]) {
                b = order[bi];
                break;
            }
        if (b < 0) throw data_error("delaunay2: all points coincide");
        int c = -1;
        std::size_t ci = bi + 1;
        for (; ci < order.size(); ++ci) {
            const auto& pa = xy_[a];
            const auto& pb = xy_[b];
            const auto& pc = xy_[order[ci]];
            const double o = predicates::orient(pa, pb, pc);
            const double scale = std::abs((pb[0] - pa[0]) * (pc[1] - pa[1])) + std::abs((pb[1] - pa[1]) * (pc[0] - pa[0]));
            if (std::abs(o) > 1e-12 * scale) {
                c = order[ci];
                break;
            }
        }
        if (c < 0) throw data_error("delaunay2: input points are collinear");
        if (predicates::orient(xy_[a], xy_[b], xy_[c]) < 0) std::swap(b, c);
        seed(a, b, c);
        for (std::size_t k = 1; k < order.size(); ++k) {
            const int p = order[k];
            if (p == b || p == c) continue;
            insert(p);
        }
        resolve_cocircular();
    }

    Triangulation2 result() const {
        Triangulation2 out;
        out.vertices = pts_;
        std::vector<int> remap(tris_.size(), -1);
        for (std::size_t t = 0; t < tris_.size(); ++t)
            if (tris_[t].alive && !is_ghost(static_cast<int>(t))) {
                remap[t] = static_cast<int>(out.triangles.size());
                out.triangles.push_back(tris_[t].v);
            }
        out.neighbors.resize(out.triangles.size());
        out.on_hull.assign(pts_.size(), 0);
        for (std::size_t t = 0; t < tris_.size(); ++t) {
            if (!tris_[t].alive) continue;
            if (is_ghost(static_cast<int>(t))) {
                out.on_hull[static_cast<std::size_t>(tris_[t].v[0])] = 1;
                out.on_hull[static_cast<std::size_t>(tris_[t].v[1])] = 1;
                continue;
            }
            for (int i = 0; i < 3; ++i) {
                const int nb = tris_[t].nb[i];
                out.neighbors[static_cast<std::size_t>(remap[t])][i] = is_ghost(nb) ? -1 : remap[static_cast<std::size_t>(nb)];
            }
        }
        out.circumcenters.reserve(out.triangles.size());
        out.circumradii.reserve(out.triangles.size());
        for (const auto& tri : out.triangles) {
            const auto& A = xy_[tri[0]];
            const auto& B = xy_[tri[1]];
            const auto& C = xy_[tri[2]];
            const double bx = B[0] - A[0], by = B[1] - A[1], cx = C[0] - A[0], cy = C[1] - A[1];
            const double den = 2.0 * (bx * cy - by * cx);
            const double b2 = bx * bx + by * by, c2 = cx * cx + cy * cy;
            const double ux = (cy * b2 - by * c2) / den, uy = (bx * c2 - cx * b2) / den;
            out.circumcenters.push_back({A[0] + ux, A[1] + uy});
            out.circumradii.push_back(std::hypot(ux, uy));
        }
        out.duplicate_of = duplicate_of_;
        return out;
    }

private:
    struct CavityEdge {
        int u, w, outer;  // directed as in the cavity triangle; `outer` lies across it
    };

    struct Tri {
        std::array<int, 3> v;   // ghost vertex, if any, sits at index 2
        std::array<int, 3> nb;  // nb[i] across the edge opposite v[i]
        bool alive = true;
    };

    std::vector<int> insertion_order() const {
        double lo[2] = {xy_[0][0], xy_[0][1]}, hi[2] = {xy_[0][0], xy_[0][1]};
        for (const auto& p : xy_)
            for (int a = 0; a < 2; ++a) {
                lo[a] = std::min(lo[a], p[static_cast<std::size_t>(a)]);
                hi[a] = std::max(hi[a], p[static_cast<std::size_t>(a)]);
            }
        const double span = std::max({hi[0] - lo[0], hi[1] - lo[1], 1e-300});
        constexpr int kOrder = 16;
        constexpr double kMax = (1u << kOrder) - 1;
        std::vector<std::pair<std::uint64_t, int>> keyed(xy_.size());
        for (std::size_t i = 0; i < xy_.size(); ++i) {
            const auto x = static_cast<std::uint32_t>((xy_[i][0] - lo[0]) / span * kMax);
            const auto y = static_cast<std::uint32_t>((xy_[i][1] - lo[1]) / span * kMax);
            keyed[i] = {hilbert_index(x, y, kOrder), static_cast<int>(i)};
        }
        std::sort(keyed.begin(), keyed.end());
        std::vector<int> order(xy_.size());
        for (std::size_t i = 0; i < xy_.size(); ++i) order[i] = keyed[i].second;
        return order;
    }

    bool is_ghost(int t) const { return tris_[static_cast<std::size_t>(t)].v[2] == kGhost; }

    int new_tri(std::array<int, 3> v) {
        Tri tri{v, {-1, -1, -1}, true};
        if (!free_.empty()) {
            const int t = free_.back();
            free_.pop_back();
            tris_[static_cast<std::size_t>(t)] = tri;
            return t;
        }
        tris_.push_back(tri);
        return static_cast<int>(tris_.size()) - 1;
    }

    static std::array<int, 3> ghost_last(int u, int w, int p) {
        if (u == kGhost) return {w, p, kGhost};
        if (w == kGhost) return {p, u, kGhost};
        return {u, w, p};
    }

    void seed(int a, int b, int c) {
        const int t = new_tri({a, b, c});
        const int g0 = new_tri({c, b, kGhost});  // across edge b-c
        const int g1 = new_tri({a, c, kGhost});  // across edge c-a
        const int g2 = new_tri({b, a, kGhost});  // across edge a-b
        tris_[static_cast<std::size_t>(t)].nb = {g0, g1, g2};
        // Ghost (x, y, inf): nb[2] is the real triangle; nb[0] across (y, inf), nb[1] across (inf, x).
        tris_[static_cast<std::size_t>(g0)].nb = {g2, g1, t};
        tris_[static_cast<std::size_t>(g1)].nb = {g0, g2, t};
        tris_[static_cast<std::size_t>(g2)].nb = {g1, g0, t};
        last_ = t;
    }

    bool in_circle(int t, int p) const {
        const auto& tri = tris_[static_cast<std::size_t>(t)];
        const auto& P = xy_[p];
        if (tri.v[2] == kGhost) {
            const auto& A = xy_[tri.v[0]];
            const auto& B = xy_[tri.v[1]];
            const double o = predicates::orient(A, B, P);
            if (o > 0.0) return true;
            if (o < 0.0) return false;
            const double s = (P[0] - A[0]) * (B[0] - A[0]) + (P[1] - A[1]) * (B[1] - A[1]);
            const double l = (B[0] - A[0]) * (B[0] - A[0]) + (B[1] - A[1]) * (B[1] - A[1]);
            return s > 0.0 && s < l;
        }
        return predicates::incircle(xy_[tri.v[0]], xy_[tri.v[1]], xy_[tri.v[2]], P) > 0.0;
    }

    int locate(int p) {
        int t = last_;
        if (is_ghost(t)) t = tris_[static_cast<std::size_t>(t)].nb[2];
        const auto& P = xy_[p];
        const std::size_t max_steps = 4 * tris_.size() + 16;
        unsigned rot = 0;
        for (std::size_t step = 0; step < max_steps; ++step) {
            if (is_ghost(t)) return t;
            const auto& tri = tris_[static_cast<std::size_t>(t)];
            int next = -1;
            for (int k = 0; k < 3; ++k) {
                const int i = static_cast<int>((static_cast<unsigned>(k) + rot) % 3);
                const auto& A = xy_[tri.v[static_cast<std::size_t>((i + 1) % 3)]];
                const auto& B = xy_[tri.v[static_cast<std::size_t>((i + 2) % 3)]];
                if (predicates::orient(A, B, P) < 0.0) {
                    next = tri.nb[static_cast<std::size_t>(i)];
                    break;
                }
            }
            if (next < 0) return t;
            t = next;
            ++rot;
        }
        // Walk did not terminate (numerical cycling): fall back to a scan.
        for (std::size_t k = 0; k < tris_.size(); ++k)
            if (tris_[k].alive && in_circle(static_cast<int>(k), p)) return static_cast<int>(k);
        throw numerical_error("delaunay2: point location failed");
    }

    void insert(int p) {
        const int t0 = locate(p);
        for (int v : tris_[static_cast<std::size_t>(t0)].v)
            if (v != kGhost && xy_[v] == xy_[p]) {
                duplicate_of_[static_cast<std::size_t>(p)] = v;
                return;
            }

        cavity_.clear();
        ++stamp_;
        if (mark_.size() < tris_.size()) mark_.resize(tris_.size() * 2, 0);
        auto add = [&](int t) {
            mark_[static_cast<std::size_t>(t)] = stamp_;
            cavity_.push_back(t);
        };
        add(t0);
        for (std::size_t k = 0; k < cavity_.size(); ++k) {
            const int t = cavity_[k];
            for (int nb : tris_[static_cast<std::size_t>(t)].nb)
                if (mark_[static_cast<std::size_t>(nb)] != stamp_ && in_circle(nb, p)) add(nb);
        }

        // Boundary of the cavity; enlarge until it is star-shaped from p.
        std::vector<CavityEdge>& boundary = boundary_;
        for (bool grown = true; grown;) {
            grown = false;
            boundary.clear();
            for (int t : cavity_) {
                const auto& tri = tris_[static_cast<std::size_t>(t)];
                for (int i = 0; i < 3; ++i) {
                    const int nb = tri.nb[static_cast<std::size_t>(i)];
                    if (mark_[static_cast<std::size_t>(nb)] == stamp_) continue;
                    const int u = tri.v[static_cast<std::size_t>((i + 1) % 3)];
                    const int w = tri.v[static_cast<std::size_t>((i + 2) % 3)];
                    if (u != kGhost && w != kGhost && predicates::orient(xy_[u], xy_[w], xy_[p]) <= 0.0) {
                        add(nb);
                        grown = true;
                        break;
                    }
                    boundary.push_back({u, w, nb});
                }
                if (grown) break;
            }
        }

        // Fan of new triangles around p.
        std::vector<std::pair<int, int>>& by_start = by_start_;
        std::vector<std::pair<int, int>>& by_end = by_end_;
        by_start.clear();
        by_end.clear();
        std::vector<int>& created = created_;
        created.clear();
        for (const auto& e : boundary) {
            const int t = new_tri(ghost_last(e.u, e.w, p));
            created.push_back(t);
            by_start.emplace_back(e.u, t);
            by_end.emplace_back(e.w, t);
        }
        if (mark_.size() < tris_.size()) mark_.resize(tris_.size() * 2, 0);
        const auto find = [](const std::vector<std::pair<int, int>>& m, int key) {
            for (const auto& [k, t] : m)
                if (k == key) return t;
            return -1;
        };
        for (std::size_t k = 0; k < boundary.size(); ++k) {
            const auto& e = boundary[k];
            const int t = created[k];
            auto& tri = tris_[static_cast<std::size_t>(t)];
            const auto slot = [&](int v) {
                for (int i = 0; i < 3; ++i)
                    if (tri.v[static_cast<std::size_t>(i)] == v) return static_cast<std::size_t>(i);
                return std::size_t{3};
            };
            tri.nb[slot(p)] = e.outer;
            tri.nb[slot(e.u)] = find(by_start, e.w);
            tri.nb[slot(e.w)] = find(by_end, e.u);
            auto& out = tris_[static_cast<std::size_t>(e.outer)];
            for (int i = 0; i < 3; ++i) {
                const int v = out.v[static_cast<std::size_t>(i)];
                if (v != e.u && v != e.w) out.nb[static_cast<std::size_t>(i)] = t;
            }
        }
        for (int t : cavity_) {
            tris_[static_cast<std::size_t>(t)].alive = false;
            free_.push_back(t);
        }
        last_ = created.front();
    }

    void resolve_cocircular() {
        for (int pass = 0; pass < 64; ++pass) {
            bool flipped = false;
            for (std::size_t ti = 0; ti < tris_.size(); ++ti) {
                const int t = static_cast<int>(ti);
                if (!tris_[ti].alive || is_ghost(t)) continue;
                for (int i = 0; i < 3; ++i) {
                    const int n = tris_[ti].nb[static_cast<std::size_t>(i)];
                    if (is_ghost(n) || n < t) continue;
                    const auto tv = tris_[ti].v;
                    const int a = tv[static_cast<std::size_t>(i)];
                    const int b = tv[static_cast<std::size_t>((i + 1) % 3)];
                    const int c = tv[static_cast<std::size_t>((i + 2) % 3)];
                    const auto& nt = tris_[static_cast<std::size_t>(n)];
                    int j = 0;
                    while (nt.v[static_cast<std::size_t>(j)] == b || nt.v[static_cast<std::size_t>(j)] == c) ++j;
                    const int d = nt.v[static_cast<std::size_t>(j)];
                    if (predicates::incircle(xy_[a], xy_[b], xy_[c], xy_[d]) != 0.0) continue;
                    const int lowest = std::min({a, b, c, d});
                    if (lowest == b || lowest == c) continue;
                    flip(t, i, n);
                    flipped = true;
                    break;
                }
            }
            if (!flipped) return;
        }
    }

    // Replace triangles t = (a, b, c) and n = (d, c, b) sharing edge b-c with
    // (a, b, d) and (a, d, c).
    void flip(int t, int i, int n) {
        auto& T = tris_[static_cast<std::size_t>(t)];
        auto& N = tris_[static_cast<std::size_t>(n)];
        const int a = T.v[static_cast<std::size_t>(i)];
        const int b = T.v[static_cast<std::size_t>((i + 1) % 3)];
        const int c = T.v[static_cast<std::size_t>((i + 2) % 3)];
        const int n_ca = T.nb[static_cast<std::size_t>((i + 1) % 3)];
        const int n_ab = T.nb[static_cast<std::size_t>((i + 2) % 3)];
        int j = 0;
        while (N.v[static_cast<std::size_t>(j)] == b || N.v[static_cast<std::size_t>(j)] == c) ++j;
        const int d = N.v[static_cast<std::size_t>(j)];
        int n_bd = -1, n_dc = -1;
        for (int k = 0; k < 3; ++k) {
            const int v = N.v[static_cast<std::size_t>(k)];
            if (v == c) n_bd = N.nb[static_cast<std::size_t>(k)];
            if (v == b) n_dc = N.nb[static_cast<std::size_t>(k)];
        }
        T.v = {a, b, d};
        T.nb = {n_bd, n, n_ab};
        N.v = {a, d, c};
        N.nb = {n_dc, n_ca, t};
        relink(n_bd, n, t);
        relink(n_ca, t, n);
    }

    void relink(int tri, int from, int to) {
        for (auto& nb : tris_[static_cast<std::size_t>(tri)].nb)
            if (nb == from) nb = to;
    }

    const PointCloud& pts_;
    std::vector<std::array<double, 2>> xy_;
    std::vector<Tri> tris_;
    std::vector<int> free_;
    std::vector<int> duplicate_of_;
    int last_ = 0;
    std::vector<int> cavity_, created_;
    std::vector<unsigned> mark_;
    unsigned stamp_ = 0;
    std::vector<CavityEdge> boundary_;
    std::vector<std::pair<int, int>> by_start_, by_end_;
};

}  // namespace detail

/// Delaunay triangulation of planar points. Throws a data error when fewer
/// than three distinct points are given or all points are collinear.
inline Triangulation2 delaunay2(const PointCloud& points) {
    detail::BowyerWatson bw(points);
    bw.run();
    return bw.result();
}

}  // namespace crofton
