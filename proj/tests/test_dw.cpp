#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "crofton/dw.hpp"
#include "crofton/shapes.hpp"

using namespace crofton;

namespace {

PointCloud cloud(std::initializer_list<std::array<double, 2>> pts) {
    PointCloud c(2);
    for (const auto& p : pts) c.push_back(Vec{p[0], p[1]});
    return c;
}

Line random_line(Rng& rng, int d, double half_width) {
    std::uniform_real_distribution<double> u(-half_width, half_width);
    const Direction t = sample_direction(rng, d);
    Vec y(static_cast<std::size_t>(d - 1));
    for (auto& v : y) v = u(rng);
    return Line(t, y);
}

Line horizontal(double height) {
    const Direction t(Vec{1.0, 0.0});
    const auto basis = orthonormal_basis(t);
    return Line(t, basis, Vec{height / basis[0][1]});
}

double brute_auto_epsilon(const PointCloud& pts) {
    double worst = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        double best = kInf;
        for (std::size_t j = 0; j < pts.size(); ++j)
            if (j != i) best = std::min(best, distance_sq(pts[i], pts[j]));
        worst = std::max(worst, best);
    }
    return 2.0 * std::sqrt(worst);
}

IntervalSet brute_union(const Line& line, const PointCloud& pts, double radius) {
    std::vector<Interval> parts;
    for (std::size_t i = 0; i < pts.size(); ++i)
        if (auto iv = intersect_ball(line, pts[i], radius)) parts.push_back(*iv);
    return union_intervals(parts);
}

void expect_same(const IntervalSet& a, const IntervalSet& b) {
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_NEAR(a[i].lo, b[i].lo, 1e-12);
        EXPECT_NEAR(a[i].hi, b[i].hi, 1e-12);
    }
}

}  // namespace

TEST(AutoEpsilon, HandExamples) {
    EXPECT_DOUBLE_EQ(auto_epsilon(cloud({{0, 0}, {1, 0}, {2, 0}})), 2.0);
    EXPECT_DOUBLE_EQ(auto_epsilon(cloud({{0, 0}, {0.1, 0}, {0.5, 0}})), 0.8);
    EXPECT_THROW(auto_epsilon(cloud({{0, 0}})), Error);
}

TEST(AutoEpsilon, MatchesBruteForce) {
    const auto pts = sample_iid(Shape::disk(1), 1000, 3);
    EXPECT_EQ(auto_epsilon(pts), brute_auto_epsilon(pts));
    const auto pts3 = sample_iid(Shape::torus(2, 0.5), 1000, 4);
    EXPECT_EQ(auto_epsilon(pts3), brute_auto_epsilon(pts3));
}

TEST(BoundaryCenters, SquareCornersAllKept) {
    const auto bc = boundary_centers(cloud({{0, 0}, {1, 0}, {1, 1}, {0, 1}}), 0.1);
    EXPECT_TRUE(bc.pruned);
    EXPECT_EQ(bc.indices.size(), 4u);
}

TEST(BoundaryCenters, ThreeDimensionalFallback) {
    const auto pts = sample_iid(Shape::ball3(1), 300, 1);
    const auto bc = boundary_centers(pts, 0.2);
    EXPECT_FALSE(bc.pruned);
    EXPECT_EQ(bc.indices.size(), pts.size());
    EXPECT_FALSE(DwIndex(pts, 0.2).centers_pruned());
}

TEST(BoundaryCenters, GridOnDiskPrunesInteriorWithoutChangingCounts) {
    const double h = 2.0 / 199;
    PointCloud pts(2);
    for (int i = 0; i < 200; ++i)
        for (int j = 0; j < 200; ++j) {
            const Vec p{-1 + i * h, -1 + j * h};
            if (norm(p) <= 1.0) pts.push_back(p);
        }
    const double eps = 4 * h;
    const DwIndex pruned(pts, eps);
    const DwIndex full(pts, eps, all_centers(pts.size()));
    ASSERT_TRUE(pruned.centers_pruned());
    EXPECT_LT(pruned.centers().size(), pts.size() / 4);
    for (const auto i : pruned.centers()) EXPECT_GT(norm(pts[i]), 1.0 - 3 * eps);
    Rng rng(2);
    for (int k = 0; k < 1000; ++k) {
        const Line line = random_line(rng, 2, 1.2);
        ASSERT_EQ(hat_n(line, pruned), hat_n(line, full));
        expect_same(line_components(line, pruned, eps), line_components(line, full, eps));
    }
}

TEST(LineComponents, SinglePointAndTwoApart) {
    const double eps = 0.1;
    const DwIndex one(cloud({{0, 0}, {5, 5}, {-5, 5}}), eps);
    const auto c = line_components(horizontal(0.0), one, eps);
    ASSERT_EQ(c.size(), 1u);
    EXPECT_NEAR(c[0].hi - c[0].lo, 2 * eps, 1e-15);

    const DwIndex two(cloud({{0, 0}, {0.3, 0}, {5, 5}}), eps);
    EXPECT_EQ(line_components(horizontal(0.0), two, eps).size(), 2u);
}

TEST(LineComponents, RandomInstancesMatchBruteForce) {
    Rng rng(17);
    for (int rep = 0; rep < 10; ++rep) {
        const auto pts = sample_iid(rep % 2 ? Shape::annulus(1, 2) : Shape::peanut2d(), 1000, 100 + rep);
        const double eps = 0.08;
        const DwIndex index(pts, eps);
        for (int k = 0; k < 100; ++k) {
            const Line line = random_line(rng, 2, 2.2);
            expect_same(line_components(line, index, eps), brute_union(line, pts, eps));
            expect_same(line_components(line, index, 4 * eps), brute_union(line, pts, 4 * eps));
        }
    }
    const auto pts3 = sample_iid(Shape::shell3(1, 2), 1000, 5);
    const DwIndex index3(pts3, 0.2);
    for (int k = 0; k < 100; ++k) {
        const Line line = random_line(rng, 3, 2.2);
        expect_same(line_components(line, index3, 0.2), brute_union(line, pts3, 0.2));
    }
}

TEST(HatN, MissingLineIsZero) {
    const DwIndex index(sample_iid(Shape::disk(1), 500, 1), 0.1);
    EXPECT_EQ(hat_n(horizontal(5.0), index), 0);
}

TEST(HatN, DenseDiskAndAnnulus) {
    const auto disk = sample_iid(Shape::disk(1), 20000, 2);
    const DwIndex di(disk, auto_epsilon(disk));
    EXPECT_EQ(hat_n(horizontal(0.3), di), 2);

    const auto ann = sample_iid(Shape::annulus(1, 2), 40000, 3);
    const DwIndex ai(ann, auto_epsilon(ann));
    EXPECT_EQ(hat_n(horizontal(0.0), ai), 4);
}

TEST(HatN, MergesGapsCoveredAtFourEpsilon) {
    // Points 3 eps apart: separate eps-components but one group.
    const double eps = 0.1;
    const DwIndex index(cloud({{0, 0}, {0.3, 0}, {0.6, 0}, {3, 0}, {0, 3}}), eps);
    EXPECT_EQ(line_components(horizontal(0.0), index, eps).size(), 4u);
    EXPECT_EQ(hat_n(horizontal(0.0), index), 4);  // {0, 0.3, 0.6} merged, {3} alone
}

TEST(HatN, EvenAndBoundedByComponents) {
    const auto pts = sample_iid(Shape::peanut2d(), 3000, 8);
    const double eps = auto_epsilon(pts);
    const DwIndex index(pts, eps);
    Rng rng(9);
    for (int k = 0; k < 2000; ++k) {
        const Line line = random_line(rng, 2, 2.0);
        const int c = hat_n(line, index);
        EXPECT_EQ(c % 2, 0);
        EXPECT_LE(c, 2 * static_cast<int>(line_components(line, index, eps).size()));
    }
}

TEST(HatNCapped, Examples) {
    // Six components far apart: hat_n = 6.
    const double eps = 0.1;
    const DwIndex index(cloud({{0, 0}, {1, 0}, {2, 0}, {0, 5}}), eps);
    EXPECT_EQ(hat_n(horizontal(0.0), index), 6);
    EXPECT_EQ(hat_n_capped(horizontal(0.0), index, 4), 4);
    const DwIndex single(cloud({{0, 0}, {0, 5}, {5, 5}}), eps);
    EXPECT_EQ(hat_n_capped(horizontal(0.0), single, 4), 2);
    EXPECT_THROW(hat_n_capped(horizontal(0.0), single, 1), Error);
}

TEST(HatNCapped, AnnulusRarelyCapped) {
    const auto pts = sample_iid(Shape::annulus(1, 2), 20000, 4);
    const DwIndex index(pts, auto_epsilon(pts));
    Rng rng(5);
    int same = 0;
    for (int k = 0; k < 1000; ++k) {
        const Line line = random_line(rng, 2, 2.0);
        same += hat_n(line, index) == hat_n_capped(line, index, 4);
    }
    EXPECT_GE(same, 990);
}

TEST(HatN, AddingDisjointBallNeverLosesCount) {
    // A ball whose interval is far from every existing interval adds a group.
    Rng rng(6);
    for (int rep = 0; rep < 200; ++rep) {
        auto pts = sample_iid(Shape::disk(1), 200, 200 + rep);
        const double eps = 0.15;
        const Line line = random_line(rng, 2, 0.8);
        const int before = hat_n(line, DwIndex(pts, eps));
        pts.push_back(line.point_at(10.0));
        EXPECT_EQ(hat_n(line, DwIndex(pts, eps)), before + 2);
    }
}
