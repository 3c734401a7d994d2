#pragma once

// JSON documents for scenes, observations and camera paths.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "idtrack/errors.hpp"
#include "idtrack/path.hpp"
#include "idtrack/scene.hpp"

namespace idtrack::io {

using json = nlohmann::json;

namespace detail {

inline std::string join(const std::string& where, const std::string& key) {
    return where.empty() ? key : where + "." + key;
}

inline const json& field(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.is_object()) throw ParseError((where.empty() ? "document" : where) + ": expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(join(where, key) + ": missing required field \"" + key + "\"");
    return *it;
}

inline double number(const json& obj, const std::string& key, const std::string& where) {
    const json& v = field(obj, key, where);
    if (!v.is_number()) throw ParseError(join(where, key) + ": expected a number");
    return v.get<double>();
}

inline std::string text(const json& obj, const std::string& key, const std::string& where) {
    const json& v = field(obj, key, where);
    if (!v.is_string()) throw ParseError(join(where, key) + ": expected a string");
    return v.get<std::string>();
}

inline const json& array(const json& obj, const std::string& key, const std::string& where) {
    const json& v = field(obj, key, where);
    if (!v.is_array()) throw ParseError(join(where, key) + ": expected an array");
    return v;
}

inline Vec2 point(const json& obj, const std::string& key, const std::string& where) {
    const json& v = field(obj, key, where);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        throw ParseError(join(where, key) + ": expected [x, z]");
    return {v[0].get<double>(), v[1].get<double>()};
}

inline std::string item(const std::string& where, std::size_t i) { return where + "[" + std::to_string(i) + "]"; }

inline PlanarPose pose(const json& obj, const std::string& where) {
    const std::string w = join(where, "pose");
    const json& p = field(obj, "pose", where);
    return make_pose(number(p, "x", w), number(p, "z", w), number(p, "yaw", w));
}

inline BoxDims dims(const json& obj, const std::string& where) {
    const std::string w = join(where, "dims");
    const json& d = field(obj, "dims", where);
    return {number(d, "w", w), number(d, "h", w), number(d, "d", w)};
}

inline json to_json(Vec2 p) { return json::array({p.x, p.z}); }
inline json to_json(const PlanarPose& p) { return {{"x", p.x}, {"z", p.z}, {"yaw", p.yaw}}; }
inline json to_json(const BoxDims& d) { return {{"w", d.w}, {"h", d.h}, {"d", d.d}}; }

}  // namespace detail

/// Parses `text`, reporting syntax errors with line and column.
inline json parse_document(const std::string& text, const std::string& source = "input") {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1, col = 1;
        const std::size_t upto = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        for (std::size_t k = 0; k < upto; ++k) {
            if (text[k] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ParseError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON (" +
                         e.what() + ")");
    }
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path.string() + ": cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& contents) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
    out << contents;
    if (!out) throw std::runtime_error(path.string() + ": write failed");
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// Scene

inline json scene_to_json(const SceneLayout& layout) {
    json sites = json::array();
    for (const auto& s : layout.sites) sites.push_back({{"id", s.id}, {"center", detail::to_json(s.center)}});
    json objects = json::array();
    for (const auto& o : layout.objects)
        objects.push_back({{"label", o.label},
                           {"type", o.object_type},
                           {"pose", detail::to_json(o.pose)},
                           {"dims", detail::to_json(o.dims)}});
    return {{"name", layout.name},
            {"bounds", {{"width", layout.bounds.width}, {"depth", layout.bounds.depth}}},
            {"sites", std::move(sites)},
            {"objects", std::move(objects)}};
}

/// Builds and validates a layout; schema problems raise ParseError, broken
/// invariants raise ValidationError.
inline SceneLayout scene_from_json(const json& j) {
    SceneLayout layout;
    layout.name = detail::text(j, "name", "");
    const json& b = detail::field(j, "bounds", "");
    layout.bounds = {detail::number(b, "width", "bounds"), detail::number(b, "depth", "bounds")};

    const json& sites = detail::array(j, "sites", "");
    for (std::size_t i = 0; i < sites.size(); ++i) {
        const std::string w = detail::item("sites", i);
        layout.sites.push_back({detail::text(sites[i], "id", w), detail::point(sites[i], "center", w)});
    }
    const json& objects = detail::array(j, "objects", "");
    for (std::size_t i = 0; i < objects.size(); ++i) {
        const std::string w = detail::item("objects", i);
        const json& o = objects[i];
        layout.objects.push_back(
            {detail::text(o, "label", w), detail::text(o, "type", w), detail::pose(o, w), detail::dims(o, w)});
    }
    validate(layout);
    return layout;
}

inline void save_scene(const SceneLayout& layout, const std::filesystem::path& path) {
    write_file(path, dump(scene_to_json(layout)));
}

inline SceneLayout load_scene(const std::filesystem::path& path) {
    return scene_from_json(parse_document(read_file(path), path.string()));
}

// ---------------------------------------------------------------------------
// Observation

inline json camera_to_json(const CameraState& c) {
    return {{"position", detail::to_json(c.position)}, {"yaw", c.yaw}, {"fov", c.fov}, {"range", c.range}};
}

inline json observation_to_json(const Observation& obs) {
    json dets = json::array();
    for (const auto& d : obs.detections) {
        json e = {{"pose", detail::to_json(d.pose)}, {"dims", detail::to_json(d.dims)}};
        if (d.object_type) e["type"] = *d.object_type;
        dets.push_back(std::move(e));
    }
    return {{"camera", camera_to_json(obs.camera)}, {"detections", std::move(dets)}};
}

inline Observation observation_from_json(const json& j) {
    Observation obs;
    const json& c = detail::field(j, "camera", "");
    obs.camera.position = detail::point(c, "position", "camera");
    obs.camera.yaw = detail::number(c, "yaw", "camera");
    if (c.contains("fov")) obs.camera.fov = detail::number(c, "fov", "camera");
    if (c.contains("range")) obs.camera.range = detail::number(c, "range", "camera");

    const json& dets = detail::array(j, "detections", "");
    for (std::size_t i = 0; i < dets.size(); ++i) {
        const std::string w = detail::item("detections", i);
        Detection d;
        if (dets[i].contains("type") && !dets[i]["type"].is_null()) d.object_type = detail::text(dets[i], "type", w);
        d.pose = detail::pose(dets[i], w);
        d.dims = detail::dims(dets[i], w);
        obs.detections.push_back(std::move(d));
    }
    validate(obs);
    return obs;
}

inline void save_observation(const Observation& obs, const std::filesystem::path& path) {
    write_file(path, dump(observation_to_json(obs)));
}

inline Observation load_observation(const std::filesystem::path& path) {
    return observation_from_json(parse_document(read_file(path), path.string()));
}

// ---------------------------------------------------------------------------
// Camera path

inline json path_to_json(const CameraPath& p) {
    json segs = json::array();
    for (const auto& s : p.segments)
        segs.push_back({{"p0", detail::to_json(s.p0)},
                        {"p1", detail::to_json(s.p1)},
                        {"p2", detail::to_json(s.p2)},
                        {"p3", detail::to_json(s.p3)}});
    return {{"segments", std::move(segs)}, {"speed", p.speed}, {"stop_interval", p.stop_interval}};
}

/// Accepts either {segments, speed, stop_interval} or a bare segment list.
inline CameraPath path_from_json(const json& j) {
    CameraPath p;
    const json* segs = &j;
    if (j.is_object()) {
        segs = &detail::array(j, "segments", "");
        if (j.contains("speed")) p.speed = detail::number(j, "speed", "");
        if (j.contains("stop_interval")) {
            const json& si = j["stop_interval"];
            if (!si.is_number_integer() || si.get<long long>() < 1)
                throw ParseError("stop_interval: expected a positive integer");
            p.stop_interval = si.get<std::uint32_t>();
        }
    } else if (!j.is_array()) {
        throw ParseError("document: expected an object or an array of segments");
    }
    for (std::size_t i = 0; i < segs->size(); ++i) {
        const std::string w = detail::item("segments", i);
        const json& s = (*segs)[i];
        p.segments.push_back({detail::point(s, "p0", w), detail::point(s, "p1", w), detail::point(s, "p2", w),
                              detail::point(s, "p3", w)});
    }
    validate(p);
    return p;
}

inline void save_path(const CameraPath& p, const std::filesystem::path& path) { write_file(path, dump(path_to_json(p))); }

inline CameraPath load_path(const std::filesystem::path& path) {
    return path_from_json(parse_document(read_file(path), path.string()));
}

}  // namespace idtrack::io
