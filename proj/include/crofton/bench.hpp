#pragma once

// Sample-size sweeps against shapes with known boundary measure.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "crofton/estimate.hpp"
#include "crofton/io.hpp"
#include "crofton/rng.hpp"
#include "crofton/shapes.hpp"

namespace crofton {

struct BenchConfig {
    Shape shape = Shape::disk(1.0);
    std::vector<std::size_t> ns;
    int reps = 5;
    std::vector<Method> methods{Method::dw};
    std::optional<double> epsilon;  // empty: auto
    double alpha = 0.5;
    int cap = 0;
    int k = 50;
    int l = 200;
    std::uint64_t seed = 0;
    unsigned threads = default_threads();
};

/// Seed of replicate `rep` at sample size `n`; shared by every method so the
/// methods see the same cloud and the same lines.
inline std::uint64_t run_seed(std::uint64_t seed, std::size_t n, int rep) {
    return splitmix64(splitmix64(seed) ^ splitmix64(static_cast<std::uint64_t>(n)) ^
                      splitmix64(0x9e37ULL + static_cast<std::uint64_t>(rep)));
}

inline std::string format_params(const Shape& shape) {
    std::string s;
    for (const auto& [key, v] : shape.params()) {
        if (!s.empty()) s += ';';
        s += key + "=" + format_double(v);
    }
    return s;
}

/// One record per (n, rep, method), in that nesting order.
template <class Sink>
void run_bench(const BenchConfig& cfg, Sink&& sink) {
    if (cfg.reps < 1) throw usage_error("bench needs reps >= 1");
    const double truth = cfg.shape.boundary_measure();
    for (const std::size_t n : cfg.ns) {
        if (n < 2) throw usage_error("bench sample sizes must be >= 2");
        for (int rep = 0; rep < cfg.reps; ++rep) {
            const std::uint64_t seed = run_seed(cfg.seed, n, rep);
            const PointCloud cloud = sample_iid(cfg.shape, n, seed);
            for (const Method m : cfg.methods) {
                EstimateConfig ec;
                ec.method = m;
                ec.epsilon = cfg.epsilon;
                ec.alpha = cfg.alpha;
                ec.cap = cfg.cap;
                ec.k = cfg.k;
                ec.l = cfg.l;
                ec.seed = seed;
                ec.threads = cfg.threads;
                const Estimate est = run_estimate(cloud, ec);
                RunRecord r;
                r.shape = cfg.shape.name();
                r.shape_params = format_params(cfg.shape);
                r.method = to_string(m);
                r.n = n;
                r.rep = rep;
                r.seed = seed;
                r.k = cfg.k;
                r.l = cfg.l;
                r.parameter = est.parameter;
                r.cap = m == Method::dw_capped ? cfg.cap : 0;
                r.value = est.value;
                r.std_error = est.std_error;
                r.truth = truth;
                r.abs_error = std::abs(est.value - truth);
                r.rel_error = r.abs_error / truth;
                r.runtime_ms = est.runtime_ms;
                sink(r);
            }
        }
    }
}

inline std::vector<RunRecord> run_bench(const BenchConfig& cfg) {
    std::vector<RunRecord> out;
    run_bench(cfg, [&](const RunRecord& r) { out.push_back(r); });
    return out;
}

inline double median(std::vector<double> v) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace crofton
