#pragma once

// Monte Carlo Crofton estimate: average a line-intersection counter over k
// random directions and l random offsets per direction, then scale by
// (2L)^{d-1} / beta(d).

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "crofton/error.hpp"
#include "crofton/geom.hpp"
#include "crofton/rng.hpp"

namespace crofton {

/// Gamma(d/2) / Gamma((d+1)/2) / sqrt(pi).
inline double beta(int d) {
    if (d < 2) throw usage_error("beta(d) needs d >= 2");
    const double x = static_cast<double>(d);
    return std::exp(std::lgamma(0.5 * x) - std::lgamma(0.5 * (x + 1.0))) / std::sqrt(M_PI);
}

struct LinePlan {
    int k = 50;         // directions
    int l = 200;        // offsets per direction
    double L = 1.0;     // offsets are uniform on [-L, L]^{d-1}
    std::uint64_t seed = 0;
    int d = 2;

    void validate() const {
        if (k < 1 || l < 1) throw usage_error("line plan needs k >= 1 and l >= 1");
        if (!(L > 0.0) || !std::isfinite(L)) throw usage_error("line plan needs a positive finite window L");
        if (d < 2) throw usage_error("line plan needs d >= 2");
    }
};

/// The l lines of direction block `i`. Depends only on (seed, i).
inline std::vector<Line> lines_for_direction(const LinePlan& plan, int i) {
    Rng rng = substream(plan.seed, static_cast<std::uint64_t>(i));
    const Direction theta = sample_direction(rng, plan.d);
    const std::vector<Vec> basis = orthonormal_basis(theta);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::vector<Line> out;
    out.reserve(static_cast<std::size_t>(plan.l));
    for (int j = 0; j < plan.l; ++j) {
        Vec y(static_cast<std::size_t>(plan.d - 1));
        for (auto& v : y) v = plan.L * unit(rng);
        out.emplace_back(theta, basis, std::move(y));
    }
    return out;
}

struct IndexedLine {
    int direction;
    Line line;
};

inline std::vector<IndexedLine> sample_lines(const LinePlan& plan) {
    plan.validate();
    std::vector<IndexedLine> out;
    out.reserve(static_cast<std::size_t>(plan.k) * static_cast<std::size_t>(plan.l));
    for (int i = 0; i < plan.k; ++i)
        for (auto& line : lines_for_direction(plan, i)) out.push_back({i, std::move(line)});
    return out;
}

struct Estimate {
    double value = 0.0;
    double std_error = 0.0;  // over direction-block means
    std::string counter_kind;
    LinePlan plan;
    double parameter = 0.0;  // epsilon (dw) or alpha
    std::size_t n_points = 0;
    double runtime_ms = 0.0;
    bool centers_pruned = false;
};

namespace detail {

inline std::string describe_line(const LinePlan& plan, int i, int j, const Line& line) {
    std::ostringstream os;
    os.precision(17);
    os << "direction " << i << ", offset " << j << " (seed " << plan.seed << "): theta=(";
    for (std::size_t a = 0; a < line.theta().size(); ++a) os << (a ? "," : "") << line.theta()[a];
    os << ") y=(";
    for (std::size_t a = 0; a < line.offset().size(); ++a) os << (a ? "," : "") << line.offset()[a];
    os << ")";
    return os.str();
}

}  // namespace detail

inline unsigned default_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

/// Crofton estimate with `counter` (Line -> int). Counts are summed per
/// direction as integers, so the result does not depend on `threads`.
template <class Counter>
Estimate mc_estimate(Counter&& counter, const LinePlan& plan, unsigned threads = default_threads()) {
    plan.validate();
    const auto t0 = std::chrono::steady_clock::now();
    const int k = plan.k;
    std::vector<std::int64_t> sums(static_cast<std::size_t>(k), 0);

    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::mutex err_mu;
    int err_dir = k;
    std::exception_ptr err_ptr;
    ErrorKind err_kind = ErrorKind::numerical;
    std::string err_msg;

    auto work = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= k || failed.load()) return;
            const auto lines = lines_for_direction(plan, i);
            std::int64_t s = 0;
            for (int j = 0; j < plan.l; ++j) {
                const Line& line = lines[static_cast<std::size_t>(j)];
                try {
                    const int c = counter(line);
                    if (c < 0) throw numerical_error("counter returned a negative count");
                    s += c;
                } catch (const Error& e) {
                    std::lock_guard lock(err_mu);
                    if (i < err_dir) {
                        err_dir = i;
                        err_kind = e.kind();
                        err_msg = std::string(e.what()) + " at " + detail::describe_line(plan, i, j, line);
                        err_ptr = nullptr;
                    }
                    failed = true;
                    return;
                } catch (...) {
                    std::lock_guard lock(err_mu);
                    if (i < err_dir) {
                        err_dir = i;
                        err_ptr = std::current_exception();
                    }
                    failed = true;
                    return;
                }
            }
            sums[static_cast<std::size_t>(i)] = s;
        }
    };

    const unsigned nthreads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(k)));
    if (nthreads == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    if (failed) {
        if (err_ptr) std::rethrow_exception(err_ptr);
        throw Error(err_kind, err_msg);
    }

    const double prefactor = std::pow(2.0 * plan.L, plan.d - 1) / beta(plan.d);
    std::vector<double> means(static_cast<std::size_t>(k));
    double total = 0.0;
    for (int i = 0; i < k; ++i) {
        means[static_cast<std::size_t>(i)] = static_cast<double>(sums[static_cast<std::size_t>(i)]) / plan.l;
        total += means[static_cast<std::size_t>(i)];
    }
    const double mean = total / k;
    double ss = 0.0;
    for (const double m : means) ss += (m - mean) * (m - mean);
    const double sd = k > 1 ? std::sqrt(ss / (k - 1)) : 0.0;

    Estimate est;
    est.value = prefactor * mean;
    est.std_error = prefactor * sd / std::sqrt(static_cast<double>(k));
    est.plan = plan;
    est.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return est;
}

}  // namespace crofton
