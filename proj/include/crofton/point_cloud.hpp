#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "crofton/error.hpp"
#include "crofton/geom.hpp"

namespace crofton {

enum class Provenance { iid, rbm, file };

inline std::string to_string(Provenance p) {
    switch (p) {
        case Provenance::iid: return "iid";
        case Provenance::rbm: return "rbm";
        case Provenance::file: return "file";
    }
    return "unknown";
}

/// Flat row-major storage of n points in R^d.
class PointCloud {
public:
    PointCloud() = default;
    explicit PointCloud(int dim, Provenance provenance = Provenance::file)
        : dim_(dim), provenance_(provenance) {
        if (dim < 2) throw usage_error("point cloud dimension must be >= 2");
    }

    int dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return dim_ == 0 ? 0 : coords_.size() / static_cast<std::size_t>(dim_); }
    bool empty() const noexcept { return coords_.empty(); }
    Provenance provenance() const noexcept { return provenance_; }
    void set_provenance(Provenance p) noexcept { provenance_ = p; }

    std::span<const double> operator[](std::size_t i) const {
        return {coords_.data() + i * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
    }

    void push_back(ConstVecView p) {
        if (static_cast<int>(p.size()) != dim_) throw data_error("point dimension mismatch");
        for (double x : p)
            if (!std::isfinite(x)) throw data_error("non-finite coordinate");
        coords_.insert(coords_.end(), p.begin(), p.end());
    }

    void reserve(std::size_t n) { coords_.reserve(n * static_cast<std::size_t>(dim_)); }
    const std::vector<double>& coords() const noexcept { return coords_; }

    /// Largest Euclidean norm over the points (the Crofton window half-width).
    double max_norm() const {
        double m = 0.0;
        for (std::size_t i = 0; i < size(); ++i) m = std::max(m, norm((*this)[i]));
        return m;
    }

    PointCloud scaled(double s) const {
        PointCloud out = *this;
        for (auto& x : out.coords_) x *= s;
        return out;
    }

    friend bool operator==(const PointCloud& a, const PointCloud& b) {
        return a.dim_ == b.dim_ && a.coords_ == b.coords_;
    }

private:
    int dim_ = 0;
    Provenance provenance_ = Provenance::file;
    std::vector<double> coords_;
};

}  // namespace crofton
