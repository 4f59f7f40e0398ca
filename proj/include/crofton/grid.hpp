#pragma once

// Dense uniform grid over the bounding box of a point set, stored CSR-style
// (points reordered by cell). Answers the three queries the counters need:
// points near a line, emptiness of an open ball, and nearest-neighbour distance.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "crofton/geom.hpp"
#include "crofton/point_cloud.hpp"

namespace crofton {

class UniformGrid {
public:
    static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

    UniformGrid() = default;

    /// Grid over all points of `cloud`.
    UniformGrid(const PointCloud& cloud, double cell_size, std::size_t max_cells = std::size_t{1} << 22)
        : UniformGrid(cloud, all_indices(cloud.size()), cell_size, max_cells) {}

    /// Grid over the subset `ids` of `cloud`; queries report original indices.
    UniformGrid(const PointCloud& cloud, std::span<const std::size_t> ids, double cell_size,
                std::size_t max_cells = std::size_t{1} << 22)
        : dim_(cloud.dim()) {
        if (!(cell_size > 0.0) || !std::isfinite(cell_size)) throw usage_error("grid cell size must be positive");
        const std::size_t d = static_cast<std::size_t>(dim_);
        lo_.assign(d, 0.0);
        Vec hi(d, 0.0);
        if (!ids.empty()) {
            for (std::size_t a = 0; a < d; ++a) lo_[a] = hi[a] = cloud[ids[0]][a];
            for (auto id : ids)
                for (std::size_t a = 0; a < d; ++a) {
                    lo_[a] = std::min(lo_[a], cloud[id][a]);
                    hi[a] = std::max(hi[a], cloud[id][a]);
                }
        }
        cell_ = cell_size;
        for (;;) {
            dims_.assign(d, 1);
            double total = 1.0;
            for (std::size_t a = 0; a < d; ++a) {
                dims_[a] = static_cast<std::int64_t>(std::floor((hi[a] - lo_[a]) / cell_)) + 1;
                total *= static_cast<double>(dims_[a]);
            }
            if (total <= static_cast<double>(max_cells)) break;
            cell_ *= 1.5;
        }
        std::size_t ncells = 1;
        for (auto n : dims_) ncells *= static_cast<std::size_t>(n);

        std::vector<std::size_t> cell_of(ids.size());
        start_.assign(ncells + 1, 0);
        for (std::size_t k = 0; k < ids.size(); ++k) {
            cell_of[k] = linear_cell(cloud[ids[k]]);
            ++start_[cell_of[k] + 1];
        }
        for (std::size_t c = 0; c < ncells; ++c) start_[c + 1] += start_[c];
        std::vector<std::size_t> fill(start_.begin(), start_.end() - 1);
        ids_.resize(ids.size());
        coords_.resize(ids.size() * d);
        for (std::size_t k = 0; k < ids.size(); ++k) {
            const std::size_t slot = fill[cell_of[k]]++;
            ids_[slot] = ids[k];
            const auto p = cloud[ids[k]];
            std::copy(p.begin(), p.end(), coords_.begin() + static_cast<std::ptrdiff_t>(slot * d));
        }
    }

    int dim() const noexcept { return dim_; }
    double cell_size() const noexcept { return cell_; }
    std::size_t size() const noexcept { return ids_.size(); }

    /// Calls f(id, coords) for every point whose distance to the line is at
    /// most `radius`, considering only the part of the line with parameter in
    /// [lam0, lam1] (padded by `radius`). Not reentrant from inside f.
    template <class F>
    void for_each_near_line(const Line& line, double radius, F&& f, double lam0 = -kInf, double lam1 = kInf) const {
        if (ids_.empty()) return;
        const std::size_t d = static_cast<std::size_t>(dim_);
        const auto& o = line.origin();
        const auto& t = line.theta();
        const double pad = radius + 0.5 * cell_;
        // Clip the parameter range to the padded bounding box (slab test).
        double a = lam0 - radius, b = lam1 + radius;
        for (std::size_t ax = 0; ax < d; ++ax) {
            const double blo = lo_[ax] - pad;
            const double bhi = lo_[ax] + static_cast<double>(dims_[ax]) * cell_ + pad;
            if (std::abs(t[ax]) < 1e-300) {
                if (o[ax] < blo || o[ax] > bhi) return;
                continue;
            }
            double s0 = (blo - o[ax]) / t[ax], s1 = (bhi - o[ax]) / t[ax];
            if (s0 > s1) std::swap(s0, s1);
            a = std::max(a, s0);
            b = std::min(b, s1);
        }
        if (!(a <= b)) return;

        thread_local std::vector<std::size_t> cells;
        cells.clear();
        std::vector<std::int64_t> clo(d), chi(d), idx(d);
        const double step = cell_;
        const auto nsteps = static_cast<std::int64_t>(std::ceil((b - a) / step));
        for (std::int64_t s = 0; s <= nsteps; ++s) {
            const double lam = std::min(a + static_cast<double>(s) * step, b);
            bool empty_box = false;
            for (std::size_t ax = 0; ax < d; ++ax) {
                const double x = o[ax] + lam * t[ax];
                clo[ax] = std::max<std::int64_t>(0, cell_coord(x - pad, ax));
                chi[ax] = std::min<std::int64_t>(dims_[ax] - 1, cell_coord(x + pad, ax));
                if (clo[ax] > chi[ax]) empty_box = true;
            }
            if (empty_box) continue;
            idx = clo;
            for (;;) {
                std::size_t lin = 0;
                for (std::size_t ax = d; ax-- > 0;) lin = lin * static_cast<std::size_t>(dims_[ax]) + static_cast<std::size_t>(idx[ax]);
                cells.push_back(lin);
                std::size_t ax = 0;
                while (ax < d && ++idx[ax] > chi[ax]) {
                    idx[ax] = clo[ax];
                    ++ax;
                }
                if (ax == d) break;
            }
        }
        std::sort(cells.begin(), cells.end());
        cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
        const double r2 = radius * radius;
        for (auto c : cells)
            for (std::size_t k = start_[c]; k < start_[c + 1]; ++k) {
                const std::span<const double> p(coords_.data() + k * d, d);
                if (line.distance_sq_to(p) <= r2) f(ids_[k], p);
            }
    }

    /// True iff some indexed point other than `exclude` lies at distance
    /// strictly less than `radius` from z.
    bool any_within(ConstVecView z, double radius, std::size_t exclude = kNone) const {
        bool found = false;
        const double r2 = radius * radius;
        visit_box(z, radius, [&](std::size_t k) {
            if (ids_[k] != exclude && distance_sq(point(k), z) < r2) {
                found = true;
                return false;
            }
            return true;
        });
        return found;
    }

    /// Calls f(id, coords) for every point with distance <= radius from z.
    template <class F>
    void for_each_in_ball(ConstVecView z, double radius, F&& f) const {
        const double r2 = radius * radius;
        visit_box(z, radius, [&](std::size_t k) {
            if (distance_sq(point(k), z) <= r2) f(ids_[k], point(k));
            return true;
        });
    }

    /// Squared distance from z to the nearest indexed point other than
    /// `exclude` (infinity when there is none). Exact: expands rings of cells
    /// until no unvisited cell can hold a closer point.
    double nearest_distance_sq(ConstVecView z, std::size_t exclude = kNone) const {
        const std::size_t d = static_cast<std::size_t>(dim_);
        double best = kInf;
        if (ids_.empty()) return best;
        std::vector<std::int64_t> home(d), idx(d), clo(d), chi(d);
        std::int64_t max_ring = 0;
        for (std::size_t ax = 0; ax < d; ++ax) {
            home[ax] = std::clamp<std::int64_t>(cell_coord(z[ax], ax), 0, dims_[ax] - 1);
            max_ring = std::max({max_ring, home[ax], dims_[ax] - 1 - home[ax]});
        }
        for (std::int64_t ring = 0; ring <= max_ring; ++ring) {
            for (std::size_t ax = 0; ax < d; ++ax) {
                clo[ax] = std::max<std::int64_t>(0, home[ax] - ring);
                chi[ax] = std::min<std::int64_t>(dims_[ax] - 1, home[ax] + ring);
            }
            idx = clo;
            for (;;) {
                std::int64_t cheb = 0;
                for (std::size_t ax = 0; ax < d; ++ax) cheb = std::max(cheb, std::abs(idx[ax] - home[ax]));
                if (cheb == ring) {
                    const std::size_t c = linear(idx);
                    for (std::size_t k = start_[c]; k < start_[c + 1]; ++k) {
                        if (ids_[k] == exclude) continue;
                        best = std::min(best, distance_sq(point(k), z));
                    }
                }
                std::size_t ax = 0;
                while (ax < d && ++idx[ax] > chi[ax]) {
                    idx[ax] = clo[ax];
                    ++ax;
                }
                if (ax == d) break;
            }
            // Every cell beyond this ring is at least ring * cell_ away.
            const double reach = static_cast<double>(ring) * cell_;
            if (best <= reach * reach) break;
        }
        return best;
    }

private:
    static std::vector<std::size_t> all_indices(std::size_t n) {
        std::vector<std::size_t> v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = i;
        return v;
    }

    std::span<const double> point(std::size_t k) const {
        const std::size_t d = static_cast<std::size_t>(dim_);
        return {coords_.data() + k * d, d};
    }

    std::int64_t cell_coord(double x, std::size_t ax) const {
        const double c = std::floor((x - lo_[ax]) / cell_);
        if (c < -1e15) return -1;
        if (c > 1e15) return dims_[ax];
        return static_cast<std::int64_t>(c);
    }

    std::size_t linear(const std::vector<std::int64_t>& idx) const {
        std::size_t lin = 0;
        for (std::size_t ax = idx.size(); ax-- > 0;) lin = lin * static_cast<std::size_t>(dims_[ax]) + static_cast<std::size_t>(idx[ax]);
        return lin;
    }

    std::size_t linear_cell(ConstVecView p) const {
        std::vector<std::int64_t> idx(p.size());
        for (std::size_t ax = 0; ax < p.size(); ++ax)
            idx[ax] = std::clamp<std::int64_t>(cell_coord(p[ax], ax), 0, dims_[ax] - 1);
        return linear(idx);
    }

    // Visits slots of all cells overlapping the box [z - r, z + r], the cell
    // containing z first. Stops early when f returns false.
    template <class F>
    void visit_box(ConstVecView z, double r, F&& f) const {
        if (ids_.empty()) return;
        const std::size_t d = static_cast<std::size_t>(dim_);
        std::vector<std::int64_t> clo(d), chi(d), idx(d), home(d);
        bool home_valid = true;
        for (std::size_t ax = 0; ax < d; ++ax) {
            clo[ax] = std::max<std::int64_t>(0, cell_coord(z[ax] - r, ax));
            chi[ax] = std::min<std::int64_t>(dims_[ax] - 1, cell_coord(z[ax] + r, ax));
            if (clo[ax] > chi[ax]) return;
            home[ax] = cell_coord(z[ax], ax);
            if (home[ax] < 0 || home[ax] >= dims_[ax]) home_valid = false;
        }
        std::size_t home_lin = kNone;
        if (home_valid) {
            home_lin = linear(home);
            for (std::size_t k = start_[home_lin]; k < start_[home_lin + 1]; ++k)
                if (!f(k)) return;
        }
        idx = clo;
        for (;;) {
            const std::size_t c = linear(idx);
            if (c != home_lin)
                for (std::size_t k = start_[c]; k < start_[c + 1]; ++k)
                    if (!f(k)) return;
            std::size_t ax = 0;
            while (ax < d && ++idx[ax] > chi[ax]) {
                idx[ax] = clo[ax];
                ++ax;
            }
            if (ax == d) break;
        }
    }

    int dim_ = 0;
    double cell_ = 1.0;
    Vec lo_;
    std::vector<std::int64_t> dims_;
    std::vector<std::size_t> start_{0};
    std::vector<std::size_t> ids_;
    std::vector<double> coords_;
};

}  // namespace crofton
