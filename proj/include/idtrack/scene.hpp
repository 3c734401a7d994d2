#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "idtrack/errors.hpp"
#include "idtrack/geometry.hpp"

namespace idtrack {

/// Position on the floor plane plus heading about the vertical axis.
/// `yaw` is kept in [0, 360); build poses with make_pose() to get that for free.
struct PlanarPose {
    double x = 0.0;
    double z = 0.0;
    double yaw = 0.0;

    Vec2 position() const { return {x, z}; }
    friend bool operator==(const PlanarPose&, const PlanarPose&) = default;
};

inline PlanarPose make_pose(double x, double z, double yaw_deg) {
    return {x, z, normalize_degrees(yaw_deg)};
}

/// Bounding-box extents in meters: width, height, depth.
struct BoxDims {
    double w = 1.0;
    double h = 1.0;
    double d = 1.0;

    friend bool operator==(const BoxDims&, const BoxDims&) = default;
};

struct ObjectInstance {
    std::string label;
    std::string object_type;
    PlanarPose pose;
    BoxDims dims;

    friend bool operator==(const ObjectInstance&, const ObjectInstance&) = default;
};

/// Rectangular floor with one corner at the origin: x in [0, width], z in [0, depth].
struct SceneBounds {
    double width = 1.0;
    double depth = 1.0;

    double diagonal() const { return std::hypot(width, depth); }
    double area() const { return width * depth; }
    bool contains(Vec2 p) const { return p.x >= 0.0 && p.x <= width && p.z >= 0.0 && p.z <= depth; }
    Vec2 clamp(Vec2 p) const { return {std::clamp(p.x, 0.0, width), std::clamp(p.z, 0.0, depth)}; }

    friend bool operator==(const SceneBounds&, const SceneBounds&) = default;
};

/// A Voronoi generator point. Cells are implicit: a point belongs to the
/// site with the nearest center.
struct VoronoiSite {
    std::string id;
    Vec2 center;

    friend bool operator==(const VoronoiSite&, const VoronoiSite&) = default;
};

struct SceneLayout {
    std::string name;
    SceneBounds bounds;
    std::vector<VoronoiSite> sites;
    std::vector<ObjectInstance> objects;

    friend bool operator==(const SceneLayout&, const SceneLayout&) = default;
};

struct CameraState {
    Vec2 position;
    double yaw = 0.0;
    double fov = 60.0;    ///< full horizontal angle, degrees
    double range = 10.0;  ///< meters

    friend bool operator==(const CameraState&, const CameraState&) = default;
};

/// An unlabeled object seen by the camera.
struct Detection {
    std::optional<std::string> object_type;
    PlanarPose pose;
    BoxDims dims;

    friend bool operator==(const Detection&, const Detection&) = default;
};

struct Observation {
    CameraState camera;
    std::vector<Detection> detections;

    friend bool operator==(const Observation&, const Observation&) = default;
};

// ---------------------------------------------------------------------------
// Validation

namespace detail {

inline void require(bool ok, const std::string& rule) {
    if (!ok) throw ValidationError("invariant violated: " + rule);
}

inline void validate_pose(const PlanarPose& p, const std::string& where) {
    require(std::isfinite(p.x) && std::isfinite(p.z), where + ".pose: x and z must be finite");
    require(std::isfinite(p.yaw) && p.yaw >= 0.0 && p.yaw < 360.0, where + ".pose: yaw must lie in [0, 360)");
}

inline void validate_dims(const BoxDims& d, const std::string& where) {
    require(std::isfinite(d.w) && std::isfinite(d.h) && std::isfinite(d.d) && d.w > 0.0 && d.h > 0.0 &&
                d.d > 0.0,
            where + ".dims: w, h, d must be > 0");
}

}  // namespace detail

inline void validate(const SceneBounds& b) {
    detail::require(std::isfinite(b.width) && b.width > 0.0, "bounds.width must be > 0");
    detail::require(std::isfinite(b.depth) && b.depth > 0.0, "bounds.depth must be > 0");
}

inline void validate(const CameraState& c) {
    detail::require(std::isfinite(c.position.x) && std::isfinite(c.position.z), "camera.position must be finite");
    detail::require(std::isfinite(c.yaw), "camera.yaw must be finite");
    detail::require(c.fov > 0.0 && c.fov < 360.0, "camera.fov must satisfy 0 < fov < 360");
    detail::require(c.range > 0.0, "camera.range must be > 0");
}

inline void validate(const Detection& d, const std::string& where = "detection") {
    detail::validate_pose(d.pose, where);
    detail::validate_dims(d.dims, where);
}

inline void validate(const Observation& obs) {
    validate(obs.camera);
    for (std::size_t i = 0; i < obs.detections.size(); ++i)
        validate(obs.detections[i], "detections[" + std::to_string(i) + "]");
}

inline void validate(const SceneLayout& layout) {
    validate(layout.bounds);
    detail::require(!layout.sites.empty(), "scene must have at least one site");

    std::set<std::string> ids;
    for (const auto& s : layout.sites) {
        detail::require(ids.insert(s.id).second, "site id '" + s.id + "' must be unique");
        detail::require(layout.bounds.contains(s.center), "site '" + s.id + "' center must lie within bounds");
    }

    std::set<std::string> labels;
    for (const auto& o : layout.objects) {
        const std::string where = "object '" + o.label + "'";
        detail::require(labels.insert(o.label).second, "object label '" + o.label + "' must be unique");
        detail::validate_pose(o.pose, where);
        detail::validate_dims(o.dims, where);
        detail::require(layout.bounds.contains(o.pose.position()),
                        where + " position must lie within [0, width] x [0, depth]");
    }
}

// ---------------------------------------------------------------------------
// Visibility

/// True when `pose` lies within the camera's range and inside its horizontal
/// field-of-view wedge. Only the object's center point is tested.
inline bool is_visible(const CameraState& camera, const PlanarPose& pose) {
    const Vec2 offset = pose.position() - camera.position;
    const double dist = norm(offset);
    if (dist > camera.range) return false;
    if (dist == 0.0) return true;
    return angular_offset(heading_degrees(offset), camera.yaw) <= camera.fov / 2.0;
}

/// Observation together with the label of the object behind each detection.
struct LabeledObservation {
    Observation observation;
    std::vector<std::string> truth_labels;  ///< parallel to observation.detections
};

/// Detections for every visible object, ordered by label.
inline LabeledObservation synthesize_labeled_observation(const SceneLayout& layout, const CameraState& camera) {
    std::vector<const ObjectInstance*> visible;
    for (const auto& o : layout.objects)
        if (is_visible(camera, o.pose)) visible.push_back(&o);
    std::sort(visible.begin(), visible.end(), [](auto* a, auto* b) { return a->label < b->label; });

    LabeledObservation out;
    out.observation.camera = camera;
    out.observation.detections.reserve(visible.size());
    out.truth_labels.reserve(visible.size());
    for (const auto* o : visible) {
        out.observation.detections.push_back(Detection{o->object_type, o->pose, o->dims});
        out.truth_labels.push_back(o->label);
    }
    return out;
}

inline Observation synthesize_observation(const SceneLayout& layout, const CameraState& camera) {
    return synthesize_labeled_observation(layout, camera).observation;
}

inline const ObjectInstance* find_object(const SceneLayout& layout, const std::string& label) {
    for (const auto& o : layout.objects)
        if (o.label == label) return &o;
    return nullptr;
}

}  // namespace idtrack
