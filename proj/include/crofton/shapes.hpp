#pragma once

// Test bodies with closed-form boundary measure, membership, nearest-boundary
// projection, uniform samplers and exact line/boundary intersection counts.
//
// Planar shapes keep their boundary as a list of circular arcs and segments,
// so counting and projection reduce to per-piece closed forms.

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "crofton/error.hpp"
#include "crofton/geom.hpp"
#include "crofton/point_cloud.hpp"
#include "crofton/rng.hpp"

namespace crofton {

/// Raised when a line passes within tolerance of a tangency or a junction
/// between boundary pieces; callers resample the line.
class TangentLineError : public Error {
public:
    explicit TangentLineError(const std::string& what) : Error(ErrorKind::numerical, what) {}
};

enum class ShapeKind { disk, annulus, rounded_square, peanut2d, ball3, shell3, torus };

namespace detail {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kBoundaryTol = 1e-9;

struct Arc {
    double cx, cy, r;
    double start;  // CCW from `start` over `sweep` radians
    double sweep;

    double length() const { return r * sweep; }
};

struct Segment {
    double ax, ay, bx, by;

    double length() const { return std::hypot(bx - ax, by - ay); }
};

using Piece = std::variant<Arc, Segment>;

inline double wrap_angle(double a) {
    a = std::fmod(a, 2.0 * kPi);
    if (a < 0.0) a += 2.0 * kPi;
    return a;
}

// Roots of a real polynomial (coefficients low to high) inside [lo, hi],
// found by isolating monotone pieces between roots of the derivative.
inline std::vector<double> poly_roots(const std::vector<double>& c, double lo, double hi) {
    const auto eval = [&](double x) {
        double v = 0.0;
        for (std::size_t i = c.size(); i-- > 0;) v = v * x + c[i];
        return v;
    };
    std::size_t deg = c.size();
    while (deg > 0 && c[deg - 1] == 0.0) --deg;
    if (deg <= 1) return {};
    if (deg == 2) {
        const double r = -c[0] / c[1];
        if (r >= lo && r <= hi) return {r};
        return {};
    }
    std::vector<double> dc(deg - 1);
    for (std::size_t i = 1; i < deg; ++i) dc[i - 1] = c[i] * static_cast<double>(i);
    std::vector<double> knots{lo};
    for (double r : poly_roots(dc, lo, hi)) knots.push_back(r);
    knots.push_back(hi);
    std::vector<double> roots;
    for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
        double a = knots[k], b = knots[k + 1];
        double fa = eval(a), fb = eval(b);
        if (fa == 0.0) {
            if (roots.empty() || roots.back() != a) roots.push_back(a);
            continue;
        }
        if ((fa < 0.0) == (fb < 0.0)) continue;
        for (int it = 0; it < 200 && b - a > 1e-15 * (1.0 + std::abs(a)); ++it) {
            const double m = 0.5 * (a + b);
            const double fm = eval(m);
            if ((fm < 0.0) == (fa < 0.0)) {
                a = m;
                fa = fm;
            } else {
                b = m;
            }
        }
        roots.push_back(0.5 * (a + b));
    }
    return roots;
}

}  // namespace detail

class Shape {
public:
    static Shape disk(double r) {
        if (!(r > 0.0)) throw usage_error("disk radius must be positive");
        Shape s(ShapeKind::disk, 2, {{"r", r}});
        s.pieces_.push_back(detail::Arc{0, 0, r, 0, 2 * detail::kPi});
        return s;
    }

    static Shape annulus(double r1, double r2) {
        if (!(r1 > 0.0 && r2 > r1)) throw usage_error("annulus needs 0 < r1 < r2");
        Shape s(ShapeKind::annulus, 2, {{"r1", r1}, {"r2", r2}});
        s.pieces_.push_back(detail::Arc{0, 0, r1, 0, 2 * detail::kPi});
        s.pieces_.push_back(detail::Arc{0, 0, r2, 0, 2 * detail::kPi});
        return s;
    }

    /// Square of side `side` centred at the origin, dilated by a disk of
    /// radius `corner`.
    static Shape rounded_square(double side, double corner) {
        if (!(side > 0.0 && corner > 0.0)) throw usage_error("rounded square needs side > 0 and corner > 0");
        Shape s(ShapeKind::rounded_square, 2, {{"side", side}, {"corner", corner}});
        const double h = side / 2, e = h + corner, pi = detail::kPi;
        s.pieces_.push_back(detail::Segment{e, -h, e, h});
        s.pieces_.push_back(detail::Arc{h, h, corner, 0, pi / 2});
        s.pieces_.push_back(detail::Segment{h, e, -h, e});
        s.pieces_.push_back(detail::Arc{-h, h, corner, pi / 2, pi / 2});
        s.pieces_.push_back(detail::Segment{-e, h, -e, -h});
        s.pieces_.push_back(detail::Arc{-h, -h, corner, pi, pi / 2});
        s.pieces_.push_back(detail::Segment{-h, -e, h, -e});
        s.pieces_.push_back(detail::Arc{h, -h, corner, 3 * pi / 2, pi / 2});
        return s;
    }

    /// Two unit disks centred at (+-c, 0), joined by concave bridging arcs of
    /// radius `bridge` tangent to both disks: four circular arcs in total.
    static Shape peanut2d(double c = 0.8, double bridge = 0.5) {
        if (!(c > 0.0 && bridge > 0.0)) throw usage_error("peanut needs c > 0 and bridge > 0");
        if (!(c < 1.0 + bridge)) throw usage_error("peanut needs c < 1 + bridge");
        const double hb = std::sqrt((1 + bridge) * (1 + bridge) - c * c);
        if (!(hb > bridge)) throw usage_error("peanut bridging arcs overlap (need 1 + 2 bridge > c^2)");
        Shape s(ShapeKind::peanut2d, 2, {{"c", c}, {"bridge", bridge}});
        const double pi = detail::kPi;
        const double gamma = std::atan2(hb, c);  // angle of the tangency point seen from a lobe centre
        s.pieces_.push_back(detail::Arc{c, 0, 1, -(pi - gamma), 2 * (pi - gamma)});
        s.pieces_.push_back(detail::Arc{-c, 0, 1, gamma, 2 * (pi - gamma)});
        s.pieces_.push_back(detail::Arc{0, hb, bridge, -pi + gamma, pi - 2 * gamma});
        s.pieces_.push_back(detail::Arc{0, -hb, bridge, gamma, pi - 2 * gamma});
        s.neck_h_ = hb;
        s.neck_x_ = c * bridge / (1 + bridge);
        return s;
    }

    static Shape ball3(double r) {
        if (!(r > 0.0)) throw usage_error("ball radius must be positive");
        return Shape(ShapeKind::ball3, 3, {{"r", r}});
    }

    static Shape shell3(double r1, double r2) {
        if (!(r1 > 0.0 && r2 > r1)) throw usage_error("shell needs 0 < r1 < r2");
        return Shape(ShapeKind::shell3, 3, {{"r1", r1}, {"r2", r2}});
    }

    /// Torus of revolution about the z axis: tube radius r around a circle of radius R.
    static Shape torus(double R, double r) {
        if (!(r > 0.0 && R > r)) throw usage_error("torus needs R > r > 0");
        return Shape(ShapeKind::torus, 3, {{"R", R}, {"r", r}});
    }

    ShapeKind kind() const noexcept { return kind_; }
    int dim() const noexcept { return dim_; }
    const std::map<std::string, double>& params() const noexcept { return params_; }
    double param(const std::string& key) const { return params_.at(key); }

    std::string name() const {
        switch (kind_) {
            case ShapeKind::disk: return "disk";
            case ShapeKind::annulus: return "annulus";
            case ShapeKind::rounded_square: return "rounded_square";
            case ShapeKind::peanut2d: return "peanut";
            case ShapeKind::ball3: return "ball";
            case ShapeKind::shell3: return "shell";
            case ShapeKind::torus: return "torus";
        }
        return "?";
    }

    bool contains(ConstVecView x) const {
        switch (kind_) {
            case ShapeKind::disk: return norm(x) <= param("r");
            case ShapeKind::annulus: {
                const double n = norm(x);
                return n >= param("r1") && n <= param("r2");
            }
            case ShapeKind::rounded_square: {
                const double h = param("side") / 2;
                const double dx = std::max(0.0, std::abs(x[0]) - h), dy = std::max(0.0, std::abs(x[1]) - h);
                return dx * dx + dy * dy <= param("corner") * param("corner");
            }
            case ShapeKind::peanut2d: {
                const double c = param("c"), b = param("bridge");
                if (std::hypot(x[0] - c, x[1]) <= 1.0 || std::hypot(x[0] + c, x[1]) <= 1.0) return true;
                if (std::abs(x[0]) > neck_x_) return false;
                return std::abs(x[1]) <= neck_h_ - std::sqrt(b * b - x[0] * x[0]);
            }
            case ShapeKind::ball3: return norm(x) <= param("r");
            case ShapeKind::shell3: {
                const double n = norm(x);
                return n >= param("r1") && n <= param("r2");
            }
            case ShapeKind::torus: return torus_signed_distance(x) <= 0.0;
        }
        return false;
    }

    /// Closed-form (d-1)-dimensional measure of the boundary.
    double boundary_measure() const {
        const double pi = detail::kPi;
        switch (kind_) {
            case ShapeKind::ball3: return 4 * pi * param("r") * param("r");
            case ShapeKind::shell3: return 4 * pi * (param("r1") * param("r1") + param("r2") * param("r2"));
            case ShapeKind::torus: return 4 * pi * pi * param("R") * param("r");
            default: {
                double total = 0.0;
                for (const auto& p : pieces_) total += std::visit([](const auto& q) { return q.length(); }, p);
                return total;
            }
        }
    }

    /// Radius of the inside/outside rolling condition.
    double rolling_radius() const {
        switch (kind_) {
            case ShapeKind::disk:
            case ShapeKind::ball3: return param("r");
            case ShapeKind::annulus:
            case ShapeKind::shell3: return std::min(param("r1"), (param("r2") - param("r1")) / 2);
            case ShapeKind::rounded_square: return param("corner");
            case ShapeKind::peanut2d: return std::min({1.0, param("bridge"), neck_h_ - param("bridge")});
            case ShapeKind::torus: return std::min(param("r"), param("R") - param("r"));
        }
        return 0.0;
    }

    /// max ||x|| over the shape.
    double bounding_radius() const {
        switch (kind_) {
            case ShapeKind::disk:
            case ShapeKind::ball3: return param("r");
            case ShapeKind::annulus:
            case ShapeKind::shell3: return param("r2");
            case ShapeKind::rounded_square: return std::sqrt(2.0) * param("side") / 2 + param("corner");
            case ShapeKind::peanut2d: return param("c") + 1.0;
            case ShapeKind::torus: return param("R") + param("r");
        }
        return 0.0;
    }

    /// Largest number of boundary crossings of a generic line.
    int max_crossings() const {
        switch (kind_) {
            case ShapeKind::disk:
            case ShapeKind::rounded_square:
            case ShapeKind::ball3: return 2;
            default: return 4;
        }
    }

    Vec interior_point() const {
        switch (kind_) {
            case ShapeKind::annulus: return {(param("r1") + param("r2")) / 2, 0.0};
            case ShapeKind::shell3: return {(param("r1") + param("r2")) / 2, 0.0, 0.0};
            case ShapeKind::torus: return {param("R"), 0.0, 0.0};
            default: return Vec(static_cast<std::size_t>(dim_), 0.0);
        }
    }

    /// Axis-aligned box containing the shape: {lo, hi}.
    std::pair<Vec, Vec> bounding_box() const {
        const double b = bounding_radius();
        Vec lo(static_cast<std::size_t>(dim_), -b), hi(static_cast<std::size_t>(dim_), b);
        switch (kind_) {
            case ShapeKind::rounded_square:
                lo.assign(2, -(param("side") / 2 + param("corner")));
                hi.assign(2, param("side") / 2 + param("corner"));
                break;
            case ShapeKind::peanut2d:
                lo[1] = -1.0;  // the neck never rises above the lobes
                hi[1] = 1.0;
                break;
            case ShapeKind::torus:
                lo[2] = -param("r");
                hi[2] = param("r");
                break;
            default: break;
        }
        return {lo, hi};
    }

    /// Exact number of points where the line meets the boundary. Throws
    /// TangentLineError when the line is within 1e-9 of a tangency or of a
    /// junction between boundary pieces.
    int true_line_count(const Line& line) const {
        if (line.dim() != dim_) throw usage_error("line dimension does not match shape");
        switch (kind_) {
            case ShapeKind::ball3: return sphere_count(line, param("r"));
            case ShapeKind::shell3: return sphere_count(line, param("r1")) + sphere_count(line, param("r2"));
            case ShapeKind::torus: return torus_count(line);
            default: {
                int total = 0;
                for (const auto& p : pieces_)
                    total += std::visit([&](const auto& q) { return piece_count(line, q); }, p);
                return total;
            }
        }
    }

    /// Nearest boundary point. Throws when the nearest point is not unique
    /// (e.g. the centre of a disk).
    Vec project_to_boundary(ConstVecView x) const {
        if (static_cast<int>(x.size()) != dim_) throw usage_error("point dimension does not match shape");
        switch (kind_) {
            case ShapeKind::ball3: return radial(x, param("r"));
            case ShapeKind::shell3: {
                const double n = norm(x), mid = (param("r1") + param("r2")) / 2;
                if (std::abs(n - mid) < 1e-12) throw numerical_error("projection onto shell is not unique");
                return radial(x, n < mid ? param("r1") : param("r2"));
            }
            case ShapeKind::torus: return torus_project(x);
            default: return planar_project(x);
        }
    }

    /// Signed distance to the torus surface (negative inside).
    double torus_signed_distance(ConstVecView x) const {
        const double rho = std::hypot(x[0], x[1]);
        return std::hypot(rho - param("R"), x[2]) - param("r");
    }

private:
    Shape(ShapeKind kind, int dim, std::map<std::string, double> params)
        : kind_(kind), dim_(dim), params_(std::move(params)) {}

    static Vec radial(ConstVecView x, double radius) {
        const double n = norm(x);
        if (n < 1e-12) throw numerical_error("projection from the centre is not unique");
        Vec p(x.begin(), x.end());
        for (auto& v : p) v *= radius / n;
        return p;
    }

    static int sphere_count(const Line& line, double radius) {
        const double dist = std::sqrt(line.distance_sq_to(Vec(static_cast<std::size_t>(line.dim()), 0.0)));
        if (std::abs(dist - radius) < detail::kBoundaryTol) throw TangentLineError("line tangent to sphere");
        return dist < radius ? 2 : 0;
    }

    static int piece_count(const Line& line, const detail::Arc& a) {
        const auto& o = line.origin();
        const auto& t = line.theta();
        const double wx = a.cx - o[0], wy = a.cy - o[1];
        const double along = wx * t[0] + wy * t[1];
        const double dist = std::abs(wx * t[1] - wy * t[0]);
        if (std::abs(dist - a.r) < detail::kBoundaryTol) throw TangentLineError("line tangent to boundary arc");
        if (dist > a.r) return 0;
        const double half = std::sqrt(a.r * a.r - dist * dist);
        int count = 0;
        for (double lam : {along - half, along + half}) {
            const double px = o[0] + lam * t[0] - a.cx, py = o[1] + lam * t[1] - a.cy;
            if (a.sweep >= 2 * detail::kPi) {
                ++count;
                continue;
            }
            const double rel = detail::wrap_angle(std::atan2(py, px) - a.start);
            const double gap = std::min({rel, std::abs(rel - a.sweep), 2 * detail::kPi - rel});
            if (gap * a.r < detail::kBoundaryTol) throw TangentLineError("line through a boundary junction");
            if (rel <= a.sweep) ++count;
        }
        return count;
    }

    static int piece_count(const Line& line, const detail::Segment& s) {
        const auto& o = line.origin();
        const auto& t = line.theta();
        const double sa = (s.ax - o[0]) * t[1] - (s.ay - o[1]) * t[0];
        const double sb = (s.bx - o[0]) * t[1] - (s.by - o[1]) * t[0];
        if (std::abs(sa) < detail::kBoundaryTol || std::abs(sb) < detail::kBoundaryTol)
            throw TangentLineError("line through a boundary junction");
        return (sa < 0.0) != (sb < 0.0) ? 1 : 0;
    }

    int torus_count(const Line& line) const {
        const auto& o = line.origin();
        const auto& t = line.theta();
        const double R = param("R"), r = param("r");
        const double b = 2 * dot(o, t);
        const double c = dot(o, o) + R * R - r * r;
        const double qa = t[0] * t[0] + t[1] * t[1];
        const double qb = 2 * (o[0] * t[0] + o[1] * t[1]);
        const double qc = o[0] * o[0] + o[1] * o[1];
        const double k = 4 * R * R;
        // ((|p|^2 + R^2 - r^2)^2 - 4 R^2 (x^2 + y^2)) along the line, low to high.
        const std::vector<double> coef{c * c - k * qc, 2 * b * c - k * qb, b * b + 2 * c - k * qa, 2 * b, 1.0};
        const double span = R + r + 1.0 + std::abs(dot(o, t));
        const std::vector<double> dcoef{coef[1], 2 * coef[2], 3 * coef[3], 4 * coef[4]};
        for (double lam : detail::poly_roots(dcoef, -span, span)) {
            const Vec p = line.point_at(lam);
            if (std::abs(torus_signed_distance(p)) < detail::kBoundaryTol)
                throw TangentLineError("line tangent to torus");
        }
        return static_cast<int>(detail::poly_roots(coef, -span, span).size());
    }

    Vec torus_project(ConstVecView x) const {
        const double R = param("R"), r = param("r");
        const double rho = std::hypot(x[0], x[1]);
        if (rho < 1e-12) throw numerical_error("projection from the torus axis is not unique");
        const double cx = R * x[0] / rho, cy = R * x[1] / rho;
        const double wx = x[0] - cx, wy = x[1] - cy, wz = x[2];
        const double wn = std::sqrt(wx * wx + wy * wy + wz * wz);
        if (wn < 1e-12) throw numerical_error("projection from the torus core circle is not unique");
        return {cx + r * wx / wn, cy + r * wy / wn, r * wz / wn};
    }

    static std::array<double, 2> nearest_on(const detail::Arc& a, double x, double y) {
        const double wx = x - a.cx, wy = y - a.cy;
        const double n = std::hypot(wx, wy);
        if (n < 1e-12) throw numerical_error("projection from an arc centre is not unique");
        const double rel = detail::wrap_angle(std::atan2(wy, wx) - a.start);
        if (a.sweep >= 2 * detail::kPi || rel <= a.sweep) return {a.cx + a.r * wx / n, a.cy + a.r * wy / n};
        const double e0 = a.start, e1 = a.start + a.sweep;
        const std::array<double, 2> p0{a.cx + a.r * std::cos(e0), a.cy + a.r * std::sin(e0)};
        const std::array<double, 2> p1{a.cx + a.r * std::cos(e1), a.cy + a.r * std::sin(e1)};
        return std::hypot(p0[0] - x, p0[1] - y) <= std::hypot(p1[0] - x, p1[1] - y) ? p0 : p1;
    }

    static std::array<double, 2> nearest_on(const detail::Segment& s, double x, double y) {
        const double dx = s.bx - s.ax, dy = s.by - s.ay;
        const double u = std::clamp(((x - s.ax) * dx + (y - s.ay) * dy) / (dx * dx + dy * dy), 0.0, 1.0);
        return {s.ax + u * dx, s.ay + u * dy};
    }

    Vec planar_project(ConstVecView x) const {
        std::array<double, 2> best{};
        double best_d = kInf;
        std::vector<std::pair<double, std::array<double, 2>>> cands;
        for (const auto& p : pieces_) {
            const auto q = std::visit([&](const auto& piece) { return nearest_on(piece, x[0], x[1]); }, p);
            const double dd = std::hypot(q[0] - x[0], q[1] - x[1]);
            cands.emplace_back(dd, q);
            if (dd < best_d) {
                best_d = dd;
                best = q;
            }
        }
        for (const auto& [dd, q] : cands)
            if (dd <= best_d + 1e-12 && std::hypot(q[0] - best[0], q[1] - best[1]) > 1e-9)
                throw numerical_error("nearest boundary point is not unique");
        return {best[0], best[1]};
    }

    ShapeKind kind_;
    int dim_;
    std::map<std::string, double> params_;
    std::vector<detail::Piece> pieces_;
    double neck_h_ = 0.0;
    double neck_x_ = 0.0;
};

/// n independent uniform points on the shape by rejection from its bounding box.
inline PointCloud sample_iid(const Shape& shape, std::size_t n, std::uint64_t seed) {
    if (n < 1) throw usage_error("sample size must be >= 1");
    PointCloud cloud(shape.dim(), Provenance::iid);
    cloud.reserve(n);
    Rng rng(splitmix64(seed));
    const auto [lo, hi] = shape.bounding_box();
    std::vector<std::uniform_real_distribution<double>> axes;
    for (std::size_t a = 0; a < lo.size(); ++a) axes.emplace_back(lo[a], hi[a]);
    Vec p(lo.size());
    std::size_t misses = 0;
    while (cloud.size() < n) {
        for (std::size_t a = 0; a < p.size(); ++a) p[a] = axes[a](rng);
        if (shape.contains(p)) {
            cloud.push_back(p);
            misses = 0;
        } else if (++misses > 1'000'000) {
            throw data_error("rejection sampler failed: shape has (near) zero volume");
        }
    }
    return cloud;
}

/// Shape from its CLI name; missing parameters take the listed defaults.
inline Shape make_shape(const std::string& name, const std::map<std::string, double>& given) {
    const auto get = [&](const char* key, double fallback) {
        const auto it = given.find(key);
        return it == given.end() ? fallback : it->second;
    };
    if (name == "disk") return Shape::disk(get("r", 1.0));
    if (name == "annulus") return Shape::annulus(get("r1", 1.0), get("r2", 2.0));
    if (name == "rounded_square") return Shape::rounded_square(get("side", 1.0), get("corner", 0.25));
    if (name == "peanut") return Shape::peanut2d(get("c", 0.8), get("bridge", 0.5));
    if (name == "ball") return Shape::ball3(get("r", 1.0));
    if (name == "shell") return Shape::shell3(get("r1", 1.0), get("r2", 2.0));
    if (name == "torus") return Shape::torus(get("R", 2.0), get("r", 0.5));
    throw usage_error("unknown shape '" + name + "' (disk, annulus, rounded_square, peanut, ball, shell, torus)");
}

}  // namespace crofton
