#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "crofton/crofton.hpp"
#include "crofton/estimate.hpp"
#include "crofton/shapes.hpp"

using namespace crofton;

namespace {

LinePlan plan_for(int d, int k, int l, double L, std::uint64_t seed) {
    LinePlan p;
    p.d = d;
    p.k = k;
    p.l = l;
    p.L = L;
    p.seed = seed;
    return p;
}

PointCloud scaled(const PointCloud& pts, double s) {
    PointCloud out(pts.dim());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        Vec p(pts[i].begin(), pts[i].end());
        for (auto& v : p) v *= s;
        out.push_back(p);
    }
    return out;
}

}  // namespace

TEST(Beta, ClosedForms) {
    EXPECT_NEAR(beta(2), 2.0 / M_PI, 1e-15);
    EXPECT_NEAR(beta(3), 0.5, 1e-15);
    EXPECT_NEAR(beta(4), 4.0 / (3.0 * M_PI), 1e-15);
    EXPECT_THROW(beta(1), Error);
}

TEST(LinePlan, Validation) {
    EXPECT_THROW(plan_for(2, 0, 10, 1, 0).validate(), Error);
    EXPECT_THROW(plan_for(2, 10, 0, 1, 0).validate(), Error);
    EXPECT_THROW(plan_for(2, 10, 10, 0, 0).validate(), Error);
    EXPECT_THROW(plan_for(1, 10, 10, 1, 0).validate(), Error);
    EXPECT_NO_THROW(plan_for(3, 1, 1, 1, 0).validate());
}

TEST(SampleLines, CountsWindowAndDeterminism) {
    const auto plan = plan_for(3, 7, 11, 2.5, 99);
    const auto lines = sample_lines(plan);
    ASSERT_EQ(lines.size(), 77u);
    std::set<int> dirs;
    for (const auto& il : lines) {
        dirs.insert(il.direction);
        for (const double y : il.line.offset()) {
            EXPECT_GE(y, -2.5);
            EXPECT_LE(y, 2.5);
        }
    }
    EXPECT_EQ(dirs.size(), 7u);
    const auto again = sample_lines(plan);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        EXPECT_EQ(lines[i].line.theta(), again[i].line.theta());
        EXPECT_EQ(lines[i].line.offset(), again[i].line.offset());
    }
    // Direction i does not depend on k.
    const auto more = lines_for_direction(plan_for(3, 50, 11, 2.5, 99), 3);
    EXPECT_EQ(more[0].theta(), lines[3 * 11].line.theta());
}

TEST(McEstimate, ZeroCounter) {
    const auto est = mc_estimate([](const Line&) { return 0; }, plan_for(2, 10, 10, 1, 0), 1);
    EXPECT_EQ(est.value, 0.0);
    EXPECT_EQ(est.std_error, 0.0);
}

TEST(McEstimate, SingleDirectionHasZeroStderr) {
    const Shape s = Shape::annulus(1, 2);
    const auto est = mc_estimate([&](const Line& line) { return s.true_line_count(line); }, plan_for(2, 1, 500, 2, 3), 1);
    EXPECT_GT(est.value, 0.0);
    EXPECT_EQ(est.std_error, 0.0);
}

TEST(McEstimate, UnitDiskIsExact) {
    const Shape s = Shape::disk(1);
    const auto est = mc_estimate([&](const Line& line) { return s.true_line_count(line); }, plan_for(2, 50, 200, 1, 1));
    EXPECT_NEAR(est.value, 2 * M_PI, 1e-12);
    EXPECT_NEAR(est.std_error, 0.0, 1e-12);
}

TEST(McEstimate, BallSurfaceWithinThreeStderr) {
    const Shape s = Shape::ball3(1);
    const auto est = mc_estimate([&](const Line& line) { return s.true_line_count(line); }, plan_for(3, 200, 200, 1, 2));
    EXPECT_GT(est.std_error, 0.0);
    EXPECT_NEAR(est.value, 4 * M_PI, 3 * est.std_error);
}

TEST(McEstimate, TrueCountsUnbiasedOnEveryShape) {
    for (const Shape& s : {Shape::annulus(1, 2), Shape::rounded_square(1, 0.25), Shape::peanut2d(), Shape::shell3(1, 2),
                           Shape::torus(2, 0.5)}) {
        const auto est = mc_estimate([&](const Line& line) { return s.true_line_count(line); },
                                     plan_for(s.dim(), 200, 200, s.bounding_radius(), 4));
        EXPECT_NEAR(est.value, s.boundary_measure(), 4 * est.std_error) << s.name();
    }
}

TEST(McEstimate, StderrShrinksWithDirections) {
    const Shape s = Shape::peanut2d();
    const auto counter = [&](const Line& line) { return s.true_line_count(line); };
    double ratio_sum = 0.0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto small = mc_estimate(counter, plan_for(2, 100, 100, 1.5, seed));
        const auto big = mc_estimate(counter, plan_for(2, 400, 100, 1.5, seed + 100));
        ratio_sum += big.std_error / small.std_error;
    }
    EXPECT_NEAR(ratio_sum / 5, 0.5, 0.08);
}

TEST(McEstimate, CounterErrorsCarryLineDiagnostics) {
    const auto plan = plan_for(2, 20, 10, 1, 5);
    try {
        mc_estimate([](const Line& line) -> int {
            if (line.offset()[0] > 0.9) throw numerical_error("boom");
            return 2;
        }, plan, 4);
        FAIL() << "expected an error";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::numerical);
        const std::string msg = e.what();
        EXPECT_NE(msg.find("boom"), std::string::npos);
        EXPECT_NE(msg.find("direction"), std::string::npos);
        EXPECT_NE(msg.find("seed 5"), std::string::npos);
    }
    EXPECT_THROW(mc_estimate([](const Line&) { return -1; }, plan, 1), Error);
}

TEST(RunEstimate, ThreadCountDoesNotChangeResult) {
    const auto pts = sample_iid(Shape::peanut2d(), 3000, 6);
    for (const Method m : {Method::dw, Method::alpha}) {
        EstimateConfig cfg;
        cfg.method = m;
        cfg.alpha = 0.3;
        cfg.k = 16;
        cfg.l = 50;
        cfg.seed = 7;
        cfg.threads = 1;
        const auto one = run_estimate(pts, cfg);
        for (const unsigned t : {4u, 8u}) {
            cfg.threads = t;
            const auto many = run_estimate(pts, cfg);
            EXPECT_EQ(one.value, many.value);
            EXPECT_EQ(one.std_error, many.std_error);
        }
    }
}

TEST(RunEstimate, ScaleEquivariance) {
    const auto pts = sample_iid(Shape::annulus(1, 2), 4000, 8);
    const double s = 3.0;
    const auto big = scaled(pts, s);
    for (const Method m : {Method::dw, Method::alpha}) {
        EstimateConfig cfg;
        cfg.method = m;
        cfg.k = 20;
        cfg.l = 100;
        cfg.seed = 9;
        cfg.alpha = 0.3;
        const auto a = run_estimate(pts, cfg);
        cfg.alpha = 0.3 * s;
        const auto b = run_estimate(big, cfg);
        EXPECT_NEAR(b.value, s * a.value, 1e-9 * s * a.value) << to_string(m);
    }
}

TEST(RunEstimate, ParameterChecks) {
    const auto pts2 = sample_iid(Shape::disk(1), 200, 1);
    const auto pts3 = sample_iid(Shape::ball3(1), 200, 1);
    EstimateConfig cfg;
    cfg.k = 2;
    cfg.l = 2;
    cfg.method = Method::alpha;
    cfg.alpha = 0.5;
    EXPECT_THROW(run_estimate(pts3, cfg), Error);
    cfg.alpha = 0.0;
    EXPECT_THROW(run_estimate(pts2, cfg), Error);
    cfg.method = Method::dw_capped;
    cfg.cap = 1;
    EXPECT_THROW(run_estimate(pts2, cfg), Error);
    cfg.method = Method::dw;
    cfg.epsilon = -1.0;
    EXPECT_THROW(run_estimate(pts2, cfg), Error);

    PointCloud origin(2);
    origin.push_back(Vec{0, 0});
    origin.push_back(Vec{0, 0});
    cfg.epsilon.reset();
    try {
        run_estimate(origin, cfg);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::data);
    }
}

TEST(RunEstimate, ReportsMetadata) {
    const auto pts = sample_iid(Shape::disk(1), 2000, 2);
    EstimateConfig cfg;
    cfg.k = 10;
    cfg.l = 20;
    cfg.seed = 3;
    const auto est = run_estimate(pts, cfg);
    EXPECT_EQ(est.counter_kind, "dw");
    EXPECT_EQ(est.n_points, 2000u);
    EXPECT_DOUBLE_EQ(est.plan.L, pts.max_norm());
    EXPECT_EQ(est.parameter, auto_epsilon(pts));
    EXPECT_TRUE(est.centers_pruned);
    EXPECT_EQ(parse_method("dw-capped"), Method::dw_capped);
    EXPECT_THROW(parse_method("nope"), Error);
}
