#pragma once

// Euler scheme for reflected Brownian motion inside a Shape. Proposals that
// leave the domain are mirrored across the boundary at their nearest point.

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>

#include "crofton/error.hpp"
#include "crofton/geom.hpp"
#include "crofton/point_cloud.hpp"
#include "crofton/rng.hpp"
#include "crofton/shapes.hpp"

namespace crofton {

struct RbmConfig {
    explicit RbmConfig(Shape s) : shape(std::move(s)) {}

    Shape shape;
    std::optional<Vec> x0;  // defaults to shape.interior_point()
    double dt = 1e-3;
    double t_end = 1.0;
    std::uint64_t seed = 0;
    // Drift g(x); empty means driftless motion.
    std::function<Vec(ConstVecView)> drift;

    void validate() const {
        if (!(dt > 0.0) || !(t_end > 0.0)) throw usage_error("rbm needs dt > 0 and t_end > 0");
        const double alpha = shape.rolling_radius();
        if (dt > alpha * alpha / 100.0)
            throw usage_error("rbm step too large: need dt <= alpha^2/100 = " + std::to_string(alpha * alpha / 100.0));
        const Vec start = x0.value_or(shape.interior_point());
        if (static_cast<int>(start.size()) != shape.dim()) throw usage_error("rbm start point has wrong dimension");
        if (!shape.contains(start)) throw data_error("rbm start point lies outside the shape");
    }
};

/// floor(t_end / dt) positions of the discretized trajectory (the start point excluded).
inline PointCloud simulate_rbm(const RbmConfig& cfg) {
    cfg.validate();
    const int d = cfg.shape.dim();
    const auto steps = static_cast<std::size_t>(std::floor(cfg.t_end / cfg.dt + 1e-9));
    PointCloud out(d, Provenance::rbm);
    out.reserve(steps);

    Rng rng(splitmix64(cfg.seed ^ 0x5bd1e995ULL));
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double sdt = std::sqrt(cfg.dt);
    Vec x = cfg.x0.value_or(cfg.shape.interior_point());
    Vec prop(static_cast<std::size_t>(d));
    for (std::size_t s = 0; s < steps; ++s) {
        for (int i = 0; i < d; ++i) prop[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)] + sdt * gauss(rng);
        if (cfg.drift) {
            const Vec g = cfg.drift(x);
            for (int i = 0; i < d; ++i) prop[static_cast<std::size_t>(i)] += g[static_cast<std::size_t>(i)] * cfg.dt;
        }
        if (!cfg.shape.contains(prop)) {
            const Vec p = cfg.shape.project_to_boundary(prop);
            for (int i = 0; i < d; ++i) {
                const auto k = static_cast<std::size_t>(i);
                prop[k] = 2.0 * p[k] - prop[k];
            }
            if (!cfg.shape.contains(prop)) {
                // Mirror image still outside (sharp curvature): land just inside.
                const Vec q = cfg.shape.project_to_boundary(prop);
                for (int i = 0; i < d; ++i) {
                    const auto k = static_cast<std::size_t>(i);
                    prop[k] = q[k] + 1e-9 * (q[k] - prop[k]) / std::max(1e-300, distance(q, prop));
                }
                if (!cfg.shape.contains(prop)) prop = x;
            }
        }
        x = prop;
        out.push_back(x);
    }
    return out;
}

}  // namespace crofton
