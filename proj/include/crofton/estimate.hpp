#pragma once

// Point cloud -> surface estimate, for each of the three counters.

#include <chrono>
#include <optional>
#include <string>

#include "crofton/alphahull.hpp"
#include "crofton/crofton.hpp"
#include "crofton/dw.hpp"
#include "crofton/error.hpp"
#include "crofton/point_cloud.hpp"

namespace crofton {

enum class Method { dw, dw_capped, alpha };

inline std::string to_string(Method m) {
    switch (m) {
        case Method::dw: return "dw";
        case Method::dw_capped: return "dw-capped";
        case Method::alpha: return "alpha";
    }
    return "?";
}

inline Method parse_method(const std::string& s) {
    if (s == "dw") return Method::dw;
    if (s == "dw-capped") return Method::dw_capped;
    if (s == "alpha") return Method::alpha;
    throw usage_error("unknown method '" + s + "' (expected dw, dw-capped or alpha)");
}

struct EstimateConfig {
    Method method = Method::dw;
    std::optional<double> epsilon;  // empty: auto_epsilon
    double alpha = 0.0;             // required for Method::alpha
    int cap = 0;                    // required for Method::dw_capped
    int k = 50;
    int l = 200;
    std::uint64_t seed = 0;
    unsigned threads = default_threads();
};

inline Estimate run_estimate(const PointCloud& points, const EstimateConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    if (points.size() < 2) throw usage_error("need at least 2 points");
    LinePlan plan;
    plan.k = cfg.k;
    plan.l = cfg.l;
    plan.seed = cfg.seed;
    plan.d = points.dim();
    plan.L = points.max_norm();
    if (!(plan.L > 0.0)) throw data_error("all points lie at the origin; the line window is empty");
    plan.validate();

    Estimate est;
    if (cfg.method == Method::alpha) {
        if (points.dim() != 2) throw usage_error("method alpha is unsupported for d = " + std::to_string(points.dim()) + " (only d = 2)");
        if (!(cfg.alpha > 0.0)) throw usage_error("alpha must be positive");
        const ComplementElements comp = alpha_complement2(points, cfg.alpha);
        est = mc_estimate([&](const Line& line) { return check_n(line, comp); }, plan, cfg.threads);
        est.parameter = cfg.alpha;
        est.centers_pruned = comp.free_space && comp.free_space->centers_pruned();
    } else {
        if (cfg.epsilon && !(*cfg.epsilon > 0.0)) throw usage_error("epsilon must be positive");
        if (cfg.method == Method::dw_capped && cfg.cap < 2) throw usage_error("dw-capped needs --cap N0 >= 2");
        const double eps = cfg.epsilon ? *cfg.epsilon : auto_epsilon(points);
        if (!(eps > 0.0)) throw data_error("auto epsilon is zero (all points coincide)");
        const DwIndex index(points, eps);
        if (cfg.method == Method::dw)
            est = mc_estimate([&](const Line& line) { return hat_n(line, index); }, plan, cfg.threads);
        else
            est = mc_estimate([&](const Line& line) { return hat_n_capped(line, index, cfg.cap); }, plan, cfg.threads);
        est.parameter = eps;
        est.centers_pruned = index.centers_pruned();
    }
    est.counter_kind = to_string(cfg.method);
    est.n_points = points.size();
    est.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return est;
}

}  // namespace crofton
