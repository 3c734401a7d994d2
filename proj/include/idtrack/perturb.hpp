#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "idtrack/random.hpp"
#include "idtrack/scene.hpp"

namespace idtrack {

/// Gaussian manipulation model: translation noise applied independently to
/// x and z, rotation noise about the vertical axis.
struct NoiseModel {
    double t_mean = 0.0;
    double t_sd = 0.0;
    double r_mean = 0.0;
    double r_sd = 0.0;
};

inline void validate(const NoiseModel& n) {
    detail::require(n.t_sd >= 0.0 && n.r_sd >= 0.0, "noise standard deviations must be >= 0");
}

inline constexpr double kMaxRotationNoise = 360.0;

/// Moves every object by a Gaussian draw. Positions are clamped into the
/// scene rectangle componentwise; rotation draws are clamped to [-360, 360]
/// before the yaw is re-wrapped. Draws are taken object by object in label
/// order (x, z, then yaw), so the result depends only on the seed.
inline SceneLayout perturb_layout(const SceneLayout& layout, const NoiseModel& noise, RandomSeed seed) {
    validate(noise);
    SceneLayout out = layout;
    std::vector<std::size_t> order(out.objects.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return out.objects[a].label < out.objects[b].label; });

    Rng rng(seed);
    for (std::size_t k : order) {
        ObjectInstance& o = out.objects[k];
        const double dx = rng.normal(noise.t_mean, noise.t_sd);
        const double dz = rng.normal(noise.t_mean, noise.t_sd);
        const double dr = std::clamp(rng.normal(noise.r_mean, noise.r_sd), -kMaxRotationNoise, kMaxRotationNoise);
        const Vec2 p = out.bounds.clamp({o.pose.x + dx, o.pose.z + dz});
        o.pose = make_pose(p.x, p.z, o.pose.yaw + dr);
    }
    return out;
}

}  // namespace idtrack
