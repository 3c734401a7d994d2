#pragma once

// Shared fixtures for the unit tests.

#include <string>
#include <vector>

#include "idtrack/idtrack.hpp"

namespace idtrack::testing {

inline ObjectInstance object(std::string label, double x, double z, double yaw = 0.0, BoxDims dims = {0.5, 0.9, 0.5},
                             std::string type = "chair") {
    return {std::move(label), std::move(type), make_pose(x, z, yaw), dims};
}

inline Detection detection_of(const ObjectInstance& o) { return {o.object_type, o.pose, o.dims}; }

/// 10 x 10 scene with two sites and four chairs.
inline SceneLayout small_scene() {
    SceneLayout s;
    s.name = "small";
    s.bounds = {10.0, 10.0};
    s.sites = {{"A", {2.5, 5.0}}, {"B", {7.5, 5.0}}};
    s.objects = {object("c1", 1.0, 4.0, 0.0), object("c2", 3.0, 6.0, 90.0), object("c3", 6.0, 4.0, 180.0),
                 object("c4", 9.0, 6.0, 270.0)};
    return s;
}

/// Random valid layout for property tests.
inline SceneLayout random_layout(Rng& rng) {
    SceneLayout s;
    s.name = "rand" + std::to_string(rng.below(1000));
    s.bounds = {rng.uniform(1.0, 20.0), rng.uniform(1.0, 20.0)};
    const std::size_t sites = 1 + rng.below(6);
    for (std::size_t k = 0; k < sites; ++k)
        s.sites.push_back({"S" + std::to_string(k), {rng.uniform(0.0, s.bounds.width), rng.uniform(0.0, s.bounds.depth)}});
    const std::size_t objects = rng.below(12);
    for (std::size_t k = 0; k < objects; ++k) {
        s.objects.push_back({"o" + std::to_string(k), k % 2 ? "desk" : "chair",
                             make_pose(rng.uniform(0.0, s.bounds.width), rng.uniform(0.0, s.bounds.depth),
                                       rng.uniform(-720.0, 720.0)),
                             {rng.uniform(0.1, 2.0), rng.uniform(0.1, 2.0), rng.uniform(0.1, 2.0)}});
    }
    return s;
}

}  // namespace idtrack::testing
