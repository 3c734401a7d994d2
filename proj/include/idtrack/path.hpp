#pragma once

// Piecewise cubic Bezier camera paths, traversed at constant speed with an
// evaluation stop every `stop_interval` frames.

#include <algorithm>
#include <cmath>
#include <vector>

#include "idtrack/geometry.hpp"
#include "idtrack/scene.hpp"

namespace idtrack {

struct CubicSegment {
    Vec2 p0, p1, p2, p3;

    Vec2 point(double t) const {
        const double s = 1.0 - t;
        return s * s * s * p0 + 3.0 * s * s * t * p1 + 3.0 * s * t * t * p2 + t * t * t * p3;
    }
    Vec2 derivative(double t) const {
        const double s = 1.0 - t;
        return 3.0 * s * s * (p1 - p0) + 6.0 * s * t * (p2 - p1) + 3.0 * t * t * (p3 - p2);
    }
    Vec2 second_derivative(double t) const {
        return 6.0 * (1.0 - t) * (p2 - 2.0 * p1 + p0) + 6.0 * t * (p3 - 2.0 * p2 + p1);
    }

    friend bool operator==(const CubicSegment&, const CubicSegment&) = default;
};

struct CameraPath {
    std::vector<CubicSegment> segments;
    double speed = 1.0;                ///< meters per second
    std::uint32_t stop_interval = 100;  ///< frames between evaluation stops

    friend bool operator==(const CameraPath&, const CameraPath&) = default;
};

inline constexpr double kDefaultFrameRate = 60.0;

inline void validate(const CameraPath& p) {
    detail::require(!p.segments.empty(), "path must have at least one segment");
    detail::require(std::isfinite(p.speed) && p.speed > 0.0, "path speed must be > 0");
    detail::require(p.stop_interval >= 1, "path stop_interval must be >= 1");
}

namespace detail {

inline double simpson(double fa, double fm, double fb, double h) { return h / 6.0 * (fa + 4.0 * fm + fb); }

template <typename F>
double adaptive_simpson(const F& f, double a, double b, double fa, double fm, double fb, double whole, double eps,
                        int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(fa, flm, fm, m - a);
    const double right = simpson(fm, frm, fb, b - m);
    const double diff = left + right - whole;
    if (depth <= 0 || std::abs(diff) <= 15.0 * eps) return left + right + diff / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, eps / 2.0, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, eps / 2.0, depth - 1);
}

}  // namespace detail

/// Arc length of `seg` between parameters t0 and t1.
inline double arc_length(const CubicSegment& seg, double t0 = 0.0, double t1 = 1.0) {
    if (t1 <= t0) return 0.0;
    auto speed = [&](double t) { return norm(seg.derivative(t)); };
    const double fa = speed(t0), fm = speed(0.5 * (t0 + t1)), fb = speed(t1);
    const double whole = detail::simpson(fa, fm, fb, t1 - t0);
    return detail::adaptive_simpson(speed, t0, t1, fa, fm, fb, whole, 1e-12, 40);
}

inline double path_length(const CameraPath& path) {
    double total = 0.0;
    for (const auto& s : path.segments) total += arc_length(s);
    return total;
}

/// Parameter t on `seg` whose arc length from 0 equals `s` (clamped to the
/// segment), by Newton steps kept inside a bisection bracket.
inline double parameter_at_length(const CubicSegment& seg, double s, double seg_length) {
    if (s <= 0.0) return 0.0;
    if (s >= seg_length) return 1.0;
    double lo = 0.0, hi = 1.0, t = s / seg_length;
    for (int it = 0; it < 100; ++it) {
        const double f = arc_length(seg, 0.0, t) - s;
        if (std::abs(f) < 1e-10) break;
        if (f > 0.0) hi = t; else lo = t;
        const double d = norm(seg.derivative(t));
        double next = d > 0.0 ? t - f / d : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        t = next;
        if (hi - lo < 1e-15) break;
    }
    return t;
}

/// Direction of travel at t; falls back to the curvature direction and then
/// to the chord where the first derivative vanishes.
inline Vec2 tangent(const CubicSegment& seg, double t) {
    Vec2 d = seg.derivative(t);
    if (norm(d) > 1e-12) return d;
    d = seg.second_derivative(t);
    if (norm(d) > 1e-12) return d;
    return seg.p3 - seg.p0;
}

/// Camera field of view and range applied at every stop.
struct CameraOptics {
    double fov = 60.0;
    double range = 10.0;
};

/// Stops at arc-length spacing speed * stop_interval / frame_rate, starting
/// at the path start and always including the path end. Each camera faces
/// along the path tangent (yaw 0 = +z, yaw 90 = +x).
inline std::vector<CameraState> camera_stops(const CameraPath& path, double frame_rate = kDefaultFrameRate,
                                             CameraOptics optics = {}) {
    validate(path);
    detail::require(frame_rate > 0.0, "frame rate must be > 0");

    std::vector<double> seg_len;
    seg_len.reserve(path.segments.size());
    double total = 0.0;
    for (const auto& s : path.segments) {
        seg_len.push_back(arc_length(s));
        total += seg_len.back();
    }

    const double spacing = path.speed * static_cast<double>(path.stop_interval) / frame_rate;
    std::vector<double> stations;
    for (std::size_t k = 0;; ++k) {
        const double s = static_cast<double>(k) * spacing;
        if (s >= total - 1e-9) break;
        stations.push_back(s);
    }
    stations.push_back(total);

    auto camera_at = [&](double s) {
        std::size_t k = 0;
        double before = 0.0;
        while (k + 1 < path.segments.size() && s > before + seg_len[k]) {
            before += seg_len[k];
            ++k;
        }
        const CubicSegment& seg = path.segments[k];
        const double t = parameter_at_length(seg, s - before, seg_len[k]);
        CameraState c;
        c.position = seg.point(t);
        c.yaw = heading_degrees(tangent(seg, t));
        c.fov = optics.fov;
        c.range = optics.range;
        return c;
    };

    std::vector<CameraState> out;
    out.reserve(stations.size());
    for (double s : stations) out.push_back(camera_at(s));
    return out;
}

/// Closed Catmull-Rom loop through `waypoints`, as cubic Bezier segments.
inline std::vector<CubicSegment> closed_catmull_rom(const std::vector<Vec2>& waypoints) {
    const std::size_t n = waypoints.size();
    std::vector<CubicSegment> out;
    if (n < 2) return out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 prev = waypoints[(i + n - 1) % n];
        const Vec2 a = waypoints[i];
        const Vec2 b = waypoints[(i + 1) % n];
        const Vec2 next = waypoints[(i + 2) % n];
        out.push_back({a, a + (b - prev) * (1.0 / 6.0), b - (next - a) * (1.0 / 6.0), b});
    }
    return out;
}

/// Wandering loop through every site center, visited in angular order
/// around the site centroid. Scenes with fewer than three sites get extra
/// waypoints so the loop encloses some area.
inline CameraPath default_path(const SceneLayout& layout) {
    std::vector<VoronoiSite> sites = layout.sites;
    Vec2 centroid{};
    for (const auto& s : sites) centroid = centroid + s.center;
    centroid = centroid * (1.0 / static_cast<double>(sites.size()));

    std::vector<Vec2> pts;
    const double r = 0.25 * std::min(layout.bounds.width, layout.bounds.depth);
    if (sites.size() == 1) {
        for (int k = 0; k < 4; ++k) pts.push_back(centroid + heading_vector(90.0 * k) * r);
    } else if (sites.size() == 2) {
        std::sort(sites.begin(), sites.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
        const Vec2 a = sites[0].center, b = sites[1].center;
        const Vec2 axis = b - a;
        const double len = norm(axis);
        const Vec2 perp = len > 0.0 ? Vec2{-axis.z / len, axis.x / len} : Vec2{1.0, 0.0};
        pts = {a, centroid + perp * r, b, centroid - perp * r};
    } else {
        std::sort(sites.begin(), sites.end(), [&](const auto& a, const auto& b) {
            const double ha = heading_degrees(a.center - centroid), hb = heading_degrees(b.center - centroid);
            if (ha != hb) return ha < hb;
            return a.id < b.id;
        });
        for (const auto& s : sites) pts.push_back(s.center);
    }
    for (auto& p : pts) p = layout.bounds.clamp(p);

    CameraPath path;
    path.segments = closed_catmull_rom(pts);
    return path;
}

}  // namespace idtrack
