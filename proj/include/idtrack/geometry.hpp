#pragma once

#include <cmath>
#include <numbers>

namespace idtrack {

/// Point or vector on the horizontal xz-plane, in meters.
struct Vec2 {
    double x = 0.0;
    double z = 0.0;

    friend bool operator==(const Vec2&, const Vec2&) = default;

    Vec2 operator+(Vec2 o) const { return {x + o.x, z + o.z}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, z - o.z}; }
    Vec2 operator*(double s) const { return {x * s, z * s}; }
    friend Vec2 operator*(double s, Vec2 v) { return v * s; }
};

inline double norm(Vec2 v) { return std::hypot(v.x, v.z); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }

inline constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

/// Wraps an angle in degrees into [0, 360).
inline double normalize_degrees(double deg) {
    double r = std::fmod(deg, 360.0);
    if (r < 0.0) r += 360.0;
    // fmod of a tiny negative can round back up to exactly 360
    if (r >= 360.0) r = 0.0;
    return r;
}

/// Shortest angular distance between two headings, in [0, 180].
inline double angular_offset(double a_deg, double b_deg) {
    double d = normalize_degrees(a_deg - b_deg);
    return d > 180.0 ? 360.0 - d : d;
}

/// Heading of direction `v`. Yaw 0 faces +z and yaw 90 faces +x.
inline double heading_degrees(Vec2 v) { return normalize_degrees(rad_to_deg(std::atan2(v.x, v.z))); }

/// Unit vector for a heading, same convention as heading_degrees.
inline Vec2 heading_vector(double yaw_deg) {
    const double r = deg_to_rad(yaw_deg);
    return {std::sin(r), std::cos(r)};
}

}  // namespace idtrack
