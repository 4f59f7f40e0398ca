#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "crofton/delaunay.hpp"
#include "crofton/rng.hpp"
#include "crofton/shapes.hpp"

using namespace crofton;

namespace {

PointCloud cloud(std::initializer_list<std::array<double, 2>> pts) {
    PointCloud c(2);
    for (const auto& p : pts) c.push_back(Vec{p[0], p[1]});
    return c;
}

PointCloud random_cloud(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::uniform_real_distribution<double> u(-1, 1);
    PointCloud c(2);
    for (std::size_t i = 0; i < n; ++i) c.push_back(Vec{u(rng), u(rng)});
    return c;
}

double orient(ConstVecView a, ConstVecView b, ConstVecView c) {
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
}

// Every vertex lies outside or on every circumcircle (1e-9 relative), every
// triangle is CCW, and the triangles tile the convex hull.
void check_delaunay(const PointCloud& pts, const Triangulation2& tri) {
    double area = 0.0;
    for (std::size_t t = 0; t < tri.triangles.size(); ++t) {
        const auto& v = tri.triangles[t];
        const auto a = pts[v[0]], b = pts[v[1]], c = pts[v[2]];
        ASSERT_GT(orient(a, b, c), 0.0);
        area += 0.5 * orient(a, b, c);
        const Vec cc{tri.circumcenters[t][0], tri.circumcenters[t][1]};
        const double r = tri.circumradii[t];
        EXPECT_NEAR(distance(cc, a), r, 1e-9 * (1 + r));
        for (std::size_t i = 0; i < pts.size(); ++i)
            ASSERT_GE(distance(cc, pts[i]), r * (1 - 1e-9)) << "vertex " << i << " inside circumcircle of triangle " << t;
    }
    // Hull area by shoelace over the hull vertices in angular order.
    std::vector<std::size_t> hull;
    for (std::size_t i = 0; i < pts.size(); ++i)
        if (tri.on_hull[i]) hull.push_back(i);
    double cx = 0, cy = 0;
    for (auto i : hull) {
        cx += pts[i][0] / hull.size();
        cy += pts[i][1] / hull.size();
    }
    std::sort(hull.begin(), hull.end(), [&](std::size_t a, std::size_t b) {
        return std::atan2(pts[a][1] - cy, pts[a][0] - cx) < std::atan2(pts[b][1] - cy, pts[b][0] - cx);
    });
    double hull_area = 0.0;
    for (std::size_t k = 0; k < hull.size(); ++k) {
        const auto p = pts[hull[k]], q = pts[hull[(k + 1) % hull.size()]];
        hull_area += 0.5 * (p[0] * q[1] - q[0] * p[1]);
    }
    EXPECT_NEAR(area, hull_area, 1e-9);
}

}  // namespace

TEST(Delaunay, SingleTriangle) {
    const auto pts = cloud({{0, 0}, {1, 0}, {0, 1}});
    const auto tri = delaunay2(pts);
    ASSERT_EQ(tri.triangles.size(), 1u);
    check_delaunay(pts, tri);
    EXPECT_NEAR(tri.circumradii[0], std::sqrt(0.5), 1e-12);
}

TEST(Delaunay, CocircularSquareTieBreak) {
    const auto pts = cloud({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    const auto tri = delaunay2(pts);
    ASSERT_EQ(tri.triangles.size(), 2u);
    // The diagonal is the one through vertex 0, i.e. (0, 2).
    const auto edges = tri.edges();
    EXPECT_TRUE(std::find(edges.begin(), edges.end(), std::pair<int, int>{0, 2}) != edges.end());
    EXPECT_TRUE(std::find(edges.begin(), edges.end(), std::pair<int, int>{1, 3}) == edges.end());

    // Same square with a different labelling: vertex 0 is (1, 0) now.
    const auto rot = cloud({{1, 0}, {1, 1}, {0, 1}, {0, 0}});
    const auto e2 = delaunay2(rot).edges();
    EXPECT_TRUE(std::find(e2.begin(), e2.end(), std::pair<int, int>{0, 2}) != e2.end());
}

TEST(Delaunay, CollinearRejected) {
    EXPECT_THROW(delaunay2(cloud({{0, 0}, {1, 1}, {2, 2}, {3, 3}})), Error);
    EXPECT_THROW(delaunay2(cloud({{0, 0}, {1, 1}})), Error);
}

TEST(Delaunay, DuplicatesTracked) {
    const auto pts = cloud({{0, 0}, {1, 0}, {0, 1}, {1, 0}, {0.3, 0.3}});
    const auto tri = delaunay2(pts);
    EXPECT_EQ(tri.duplicate_of[3], 1);
    for (const auto& t : tri.triangles)
        for (int v : t) EXPECT_NE(v, 3);
    check_delaunay(pts, tri);
}

TEST(Delaunay, RandomCloudsEmptyCircumcircle) {
    for (std::uint64_t s = 0; s < 50; ++s) {
        const auto pts = random_cloud(200, s);
        const auto tri = delaunay2(pts);
        EXPECT_EQ(tri.triangles.size(), 2 * 200 - 2 - std::count(tri.on_hull.begin(), tri.on_hull.end(), 1));
        check_delaunay(pts, tri);
    }
}

TEST(Delaunay, GridInputIsDegenerateButValid) {
    PointCloud pts(2);
    for (int i = 0; i < 15; ++i)
        for (int j = 0; j < 15; ++j) pts.push_back(Vec{0.1 * i, 0.1 * j});
    const auto tri = delaunay2(pts);
    check_delaunay(pts, tri);
    EXPECT_EQ(tri.triangles.size(), 2u * 14 * 14);
}

TEST(Delaunay, RoundedGridHasNoInteriorSlivers) {
    // Coordinates -1 + i h are not exactly representable, so most grid quads
    // are only nearly co-circular.
    const double h = 2.0 / 199;
    PointCloud pts(2);
    for (int i = 0; i < 200; ++i)
        for (int j = 0; j < 200; ++j) {
            const Vec p{-1 + i * h, -1 + j * h};
            if (norm(p) <= 1.0) pts.push_back(p);
        }
    const auto tri = delaunay2(pts);
    for (std::size_t t = 0; t < tri.triangles.size(); ++t) {
        bool deep = true;
        for (int v : tri.triangles[t]) deep = deep && norm(pts[static_cast<std::size_t>(v)]) < 0.9;
        if (deep) {
            ASSERT_LT(tri.circumradii[t], h * (1 + 1e-6)) << t;
        }
    }
}

TEST(Predicates, ExactOnNearDegenerateInput) {
    using predicates::P2;
    // Collinear in exact arithmetic, rounding makes the naive formula nonzero.
    const P2 a{0.1, 0.1}, b{0.2, 0.2}, c{0.30000000000000004, 0.30000000000000004};
    EXPECT_EQ(predicates::orient(a, b, c), 0.0);
    const P2 d{0.5 + 1e-17, 0.5}, e{12.0, 12.0}, f{24.0, 24.0};
    EXPECT_EQ(predicates::orient(d, e, f), 0.0);
    EXPECT_GT(predicates::orient(P2{0.5, 0.5 + 0x1p-53}, e, f), 0.0);
    EXPECT_LT(predicates::orient(P2{0.5, 0.5 - 0x1p-54}, e, f), 0.0);
    // Unit square corners are exactly co-circular; a nudge decides the sign.
    const P2 p{0, 0}, q{1, 0}, r{1, 1};
    EXPECT_EQ(predicates::incircle(p, q, r, P2{0, 1}), 0.0);
    EXPECT_GT(predicates::incircle(p, q, r, P2{0x1p-60, 1}), 0.0);
    EXPECT_LT(predicates::incircle(p, q, r, P2{-0x1p-60, 1}), 0.0);
}

TEST(Delaunay, NeighborsSymmetric) {
    const auto pts = random_cloud(500, 77);
    const auto tri = delaunay2(pts);
    for (std::size_t t = 0; t < tri.triangles.size(); ++t)
        for (int i = 0; i < 3; ++i) {
            const int nb = tri.neighbors[t][i];
            if (nb < 0) continue;
            const auto& other = tri.neighbors[static_cast<std::size_t>(nb)];
            EXPECT_TRUE(std::find(other.begin(), other.end(), static_cast<int>(t)) != other.end());
        }
}

TEST(Delaunay, LargeDiskSample) {
    const auto pts = sample_iid(Shape::disk(1), 20000, 5);
    const auto tri = delaunay2(pts);
    const auto hull_n = std::count(tri.on_hull.begin(), tri.on_hull.end(), 1);
    EXPECT_EQ(tri.triangles.size(), static_cast<std::size_t>(2 * 20000 - 2 - hull_n));
}
