#pragma once

// Synthetic scene archetypes. Restaurant-style scenes pack identical
// objects in tight rings around each site; office-style scenes spread them
// over a jittered grid.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "idtrack/errors.hpp"
#include "idtrack/random.hpp"
#include "idtrack/scene.hpp"

namespace idtrack {

enum class LayoutStyle { restaurant, office };

struct SceneArchetype {
    std::string_view name;
    std::size_t sites = 1;
    std::size_t object_types = 1;
    std::size_t objects = 0;
    double scene_size = 1.0;  ///< floor area, m^2
    LayoutStyle style = LayoutStyle::office;
};

inline constexpr std::array<SceneArchetype, 6> kArchetypes{{
    {"L1", 2, 1, 16, 25.0, LayoutStyle::restaurant},
    {"L2", 4, 1, 8, 64.0, LayoutStyle::office},
    {"M1", 5, 3, 35, 64.0, LayoutStyle::office},
    {"M2", 6, 2, 30, 25.0, LayoutStyle::restaurant},
    {"H1", 10, 5, 52, 49.0, LayoutStyle::restaurant},
    {"H2", 14, 11, 48, 225.0, LayoutStyle::office},
}};

inline std::optional<SceneArchetype> find_archetype(std::string_view name) {
    for (const auto& a : kArchetypes)
        if (a.name == name) return a;
    return std::nullopt;
}

inline std::string archetype_names() {
    std::string out;
    for (const auto& a : kArchetypes) {
        if (!out.empty()) out += ", ";
        out += a.name;
    }
    return out;
}

struct ObjectTypeSpec {
    std::string_view name;
    BoxDims dims;
};

inline constexpr std::array<ObjectTypeSpec, 11> kObjectTypes{{
    {"chair", {0.45, 0.90, 0.50}},
    {"table", {1.20, 0.75, 0.80}},
    {"desk", {1.40, 0.75, 0.70}},
    {"sofa", {1.80, 0.85, 0.90}},
    {"cabinet", {0.60, 1.20, 0.45}},
    {"shelf", {0.90, 1.80, 0.35}},
    {"lamp", {0.30, 1.60, 0.30}},
    {"plant", {0.40, 1.00, 0.40}},
    {"stool", {0.35, 0.65, 0.35}},
    {"bench", {1.50, 0.45, 0.40}},
    {"printer", {0.50, 0.40, 0.45}},
}};

namespace detail {

/// One object per type, the rest split by weights 1, 1/2, 1/3, ... with
/// largest-remainder rounding.
inline std::vector<std::size_t> type_counts(std::size_t types, std::size_t objects) {
    std::vector<std::size_t> counts(types, 1);
    const std::size_t extra = objects - types;
    double wsum = 0.0;
    for (std::size_t t = 0; t < types; ++t) wsum += 1.0 / static_cast<double>(t + 1);
    std::vector<std::pair<double, std::size_t>> rem;
    std::size_t given = 0;
    for (std::size_t t = 0; t < types; ++t) {
        const double share = static_cast<double>(extra) * (1.0 / static_cast<double>(t + 1)) / wsum;
        const auto whole = static_cast<std::size_t>(std::floor(share));
        counts[t] += whole;
        given += whole;
        rem.push_back({share - static_cast<double>(whole), t});
    }
    std::stable_sort(rem.begin(), rem.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t k = 0; given < extra; ++k, ++given) ++counts[rem[k % rem.size()].second];
    return counts;
}

inline std::vector<Vec2> blue_noise_sites(std::size_t n, double side, Rng& rng) {
    const double margin = 0.1 * side;
    double radius = 0.8 * side / std::sqrt(static_cast<double>(n));
    for (;;) {
        std::vector<Vec2> pts;
        for (int attempt = 0; attempt < 5000 && pts.size() < n; ++attempt) {
            const Vec2 p{rng.uniform(margin, side - margin), rng.uniform(margin, side - margin)};
            const bool clear = std::all_of(pts.begin(), pts.end(), [&](Vec2 q) { return distance(p, q) >= radius; });
            if (clear) pts.push_back(p);
        }
        if (pts.size() == n) return pts;
        radius *= 0.9;
    }
}

}  // namespace detail

/// Square scene with the archetype's site, type and object counts.
/// Deterministic in `seed`.
inline SceneLayout generate_scene(const SceneArchetype& arch, RandomSeed seed) {
    detail::require(arch.sites >= 1 && arch.object_types >= 1 && arch.object_types <= kObjectTypes.size() &&
                        arch.objects >= arch.object_types && arch.scene_size > 0.0,
                    "archetype counts out of range");
    Rng rng(seed);
    const double side = std::sqrt(arch.scene_size);

    SceneLayout layout;
    layout.name = std::string(arch.name);
    layout.bounds = {side, side};

    const std::vector<Vec2> centers = detail::blue_noise_sites(arch.sites, side, rng);
    for (std::size_t k = 0; k < centers.size(); ++k)
        layout.sites.push_back({"S" + std::to_string(k + 1), centers[k]});

    // Type per object slot, shuffled.
    std::vector<std::size_t> slot_type;
    const auto counts = detail::type_counts(arch.object_types, arch.objects);
    for (std::size_t t = 0; t < counts.size(); ++t) slot_type.insert(slot_type.end(), counts[t], t);
    for (std::size_t k = slot_type.size(); k > 1; --k) std::swap(slot_type[k - 1], slot_type[rng.below(k)]);

    std::vector<PlanarPose> poses(arch.objects);
    if (arch.style == LayoutStyle::restaurant) {
        double min_gap = side;
        for (std::size_t a = 0; a < centers.size(); ++a)
            for (std::size_t b = a + 1; b < centers.size(); ++b) min_gap = std::min(min_gap, distance(centers[a], centers[b]));
        const double ring = std::min(0.8, 0.45 * min_gap);

        std::vector<std::size_t> per_site(arch.sites, 0);
        for (std::size_t k = 0; k < arch.objects; ++k) ++per_site[k % arch.sites];
        std::vector<double> phase(arch.sites);
        for (auto& p : phase) p = rng.uniform(0.0, 360.0);

        std::vector<std::size_t> seen(arch.sites, 0);
        for (std::size_t k = 0; k < arch.objects; ++k) {
            const std::size_t s = k % arch.sites;
            const double angle = phase[s] + 360.0 * static_cast<double>(seen[s]++) / static_cast<double>(per_site[s]) +
                                 rng.uniform(-5.0, 5.0);
            const double r = ring * rng.uniform(0.9, 1.1);
            const Vec2 p = layout.bounds.clamp(centers[s] + heading_vector(angle) * r);
            // Seats face the side of their table nearest to them.
            const double facing = 90.0 * std::round(heading_degrees(centers[s] - p) / 90.0);
            poses[k] = make_pose(p.x, p.z, facing + rng.uniform(-5.0, 5.0));
        }
    } else {
        const auto cols = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(arch.objects))));
        const std::size_t rows = (arch.objects + cols - 1) / cols;
        const double cw = side / static_cast<double>(cols);
        const double ch = side / static_cast<double>(rows);
        std::vector<std::size_t> cells(cols * rows);
        for (std::size_t c = 0; c < cells.size(); ++c) cells[c] = c;
        for (std::size_t k = cells.size(); k > 1; --k) std::swap(cells[k - 1], cells[rng.below(k)]);
        cells.resize(arch.objects);
        std::sort(cells.begin(), cells.end());
        for (std::size_t k = 0; k < arch.objects; ++k) {
            const double cx = (static_cast<double>(cells[k] % cols) + 0.5) * cw;
            const double cz = (static_cast<double>(cells[k] / cols) + 0.5) * ch;
            const Vec2 p = layout.bounds.clamp({cx + rng.uniform(-0.2, 0.2) * cw, cz + rng.uniform(-0.2, 0.2) * ch});
            const double yaw = 90.0 * static_cast<double>(rng.below(4)) + rng.uniform(-5.0, 5.0);
            poses[k] = make_pose(p.x, p.z, yaw);
        }
    }

    std::vector<std::size_t> numbering(arch.object_types, 0);
    for (std::size_t k = 0; k < arch.objects; ++k) {
        const ObjectTypeSpec& spec = kObjectTypes[slot_type[k]];
        char idx[8];
        std::snprintf(idx, sizeof idx, "%02zu", ++numbering[slot_type[k]]);
        layout.objects.push_back({std::string(spec.name) + "_" + idx, std::string(spec.name), poses[k], spec.dims});
    }
    validate(layout);
    return layout;
}

}  // namespace idtrack
