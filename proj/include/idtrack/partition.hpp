#pragma once

// Voronoi-site membership and camera-conditioned pruning of the candidate
// label space. Cells are never built explicitly; everything reduces to
// nearest-center comparisons.

#include <algorithm>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "idtrack/errors.hpp"
#include "idtrack/scene.hpp"

namespace idtrack {

struct SiteDistance {
    std::string site_id;
    double distance = 0.0;
};

struct SiteProbability {
    std::string site_id;
    double distance = 0.0;
    double probability = 0.0;
    double cumulative = 0.0;
};

/// Consideration probabilities for one camera position. The containing site
/// has probability 1 and is kept out of `entries`; the remaining sites are
/// sorted by probability descending with running cumulative sums.
struct SiteProbabilities {
    std::string containing_site;
    double containing_distance = 0.0;
    std::vector<SiteProbability> entries;

    std::size_t site_count() const { return entries.size() + 1; }
};

/// Cumulative-probability cutoff in [0, 1].
class PruneThreshold {
public:
    constexpr PruneThreshold() = default;
    explicit PruneThreshold(double t) : t_(t) {
        if (!(t >= 0.0 && t <= 1.0)) throw ValidationError("invariant violated: threshold must lie in [0, 1]");
    }
    constexpr double value() const { return t_; }

private:
    double t_ = 1.0;
};

inline std::vector<SiteDistance> site_distances(Vec2 camera_position, const std::vector<VoronoiSite>& sites) {
    std::vector<SiteDistance> out;
    out.reserve(sites.size());
    for (const auto& s : sites) out.push_back({s.id, distance(camera_position, s.center)});
    return out;
}

inline std::vector<SiteDistance> site_distances(const CameraState& camera, const std::vector<VoronoiSite>& sites) {
    return site_distances(camera.position, sites);
}

namespace detail {

// Index of the nearest site; ties go to the lexicographically smallest id.
inline std::size_t nearest_site_index(Vec2 p, const std::vector<VoronoiSite>& sites) {
    if (sites.empty()) throw ValidationError("invariant violated: scene must have at least one site");
    std::size_t best = 0;
    double best_d = distance(p, sites[0].center);
    for (std::size_t k = 1; k < sites.size(); ++k) {
        const double d = distance(p, sites[k].center);
        if (d < best_d || (d == best_d && sites[k].id < sites[best].id)) {
            best = k;
            best_d = d;
        }
    }
    return best;
}

}  // namespace detail

inline std::string containing_site(Vec2 position, const std::vector<VoronoiSite>& sites) {
    return sites[detail::nearest_site_index(position, sites)].id;
}

inline std::string containing_site(const CameraState& camera, const std::vector<VoronoiSite>& sites) {
    return containing_site(camera.position, sites);
}

/// Inverse-distance weights over the non-containing sites, normalized to sum
/// to one. A non-containing site at zero distance takes the whole mass
/// (shared equally if there are several).
inline SiteProbabilities site_probabilities(Vec2 position, const std::vector<VoronoiSite>& sites) {
    const std::size_t home = detail::nearest_site_index(position, sites);
    SiteProbabilities out;
    out.containing_site = sites[home].id;
    out.containing_distance = distance(position, sites[home].center);

    std::vector<SiteProbability> rest;
    rest.reserve(sites.size() - 1);
    std::size_t zero_count = 0;
    for (std::size_t k = 0; k < sites.size(); ++k) {
        if (k == home) continue;
        const double d = distance(position, sites[k].center);
        if (d == 0.0) ++zero_count;
        rest.push_back({sites[k].id, d, 0.0, 0.0});
    }

    if (zero_count > 0) {
        for (auto& e : rest) e.probability = e.distance == 0.0 ? 1.0 / static_cast<double>(zero_count) : 0.0;
    } else {
        double inv_sum = 0.0;
        for (const auto& e : rest) inv_sum += 1.0 / e.distance;
        for (auto& e : rest) e.probability = (1.0 / e.distance) / inv_sum;
    }

    std::stable_sort(rest.begin(), rest.end(), [](const SiteProbability& a, const SiteProbability& b) {
        if (a.probability != b.probability) return a.probability > b.probability;
        return a.site_id < b.site_id;
    });
    double running = 0.0;
    for (auto& e : rest) {
        running += e.probability;
        e.cumulative = running;
    }
    out.entries = std::move(rest);
    return out;
}

inline SiteProbabilities site_probabilities(const CameraState& camera, const std::vector<VoronoiSite>& sites) {
    return site_probabilities(camera.position, sites);
}

/// Number of leading `entries` kept at threshold `t`: none for t = 0,
/// otherwise everything up to and including the first entry whose
/// cumulative probability reaches t.
inline std::size_t pruned_entry_count(const SiteProbabilities& probs, PruneThreshold threshold) {
    const double t = threshold.value();
    if (t <= 0.0) return 0;
    for (std::size_t k = 0; k < probs.entries.size(); ++k)
        if (probs.entries[k].cumulative >= t) return k + 1;
    return probs.entries.size();
}

/// Site ids selected by the first `entry_count` entries plus the containing site.
inline std::set<std::string> selected_sites(const SiteProbabilities& probs, std::size_t entry_count) {
    std::set<std::string> out{probs.containing_site};
    entry_count = std::min(entry_count, probs.entries.size());
    for (std::size_t k = 0; k < entry_count; ++k) out.insert(probs.entries[k].site_id);
    return out;
}

inline std::set<std::string> prune_sites(const SiteProbabilities& probs, PruneThreshold threshold) {
    return selected_sites(probs, pruned_entry_count(probs, threshold));
}

/// Site id of each object's initial position, parallel to layout.objects.
inline std::vector<std::string> object_sites(const SceneLayout& layout) {
    std::vector<std::string> out;
    out.reserve(layout.objects.size());
    for (const auto& o : layout.objects) out.push_back(containing_site(o.pose.position(), layout.sites));
    return out;
}

/// Initial-layout objects whose nearest site is selected, ordered by label.
inline std::vector<ObjectInstance> candidate_labels(const SceneLayout& layout,
                                                    const std::set<std::string>& selected) {
    std::vector<ObjectInstance> out;
    for (const auto& o : layout.objects)
        if (selected.contains(containing_site(o.pose.position(), layout.sites))) out.push_back(o);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.label < b.label; });
    return out;
}

}  // namespace idtrack
