#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "idtrack/cost.hpp"
#include "idtrack/partition.hpp"
#include "idtrack/scene.hpp"
#include "idtrack/solver.hpp"

namespace idtrack {

/// Everything resolve_identities decides before handing off to the solver.
struct PreparedProblem {
    AssignmentProblem problem;
    SiteProbabilities probabilities;
    std::set<std::string> sites;
    std::vector<ObjectInstance> candidates;  ///< surviving objects, by label
    std::size_t candidate_count = 0;
    double threshold = 1.0;
    double effective_threshold = 1.0;
};

namespace detail {

inline bool feasible(const std::vector<Detection>& detections, const std::vector<ObjectInstance>& candidates,
                     bool category_separated) {
    if (!category_separated) return detections.size() <= candidates.size();
    std::map<std::string, long> balance;
    for (const auto& c : candidates) ++balance[c.object_type];
    for (const auto& d : detections)
        if (--balance[*d.object_type] < 0) return false;
    return true;
}

inline std::vector<ObjectInstance> candidates_in(const SceneLayout& layout, const std::vector<std::string>& object_site,
                                                 const std::set<std::string>& selected) {
    std::vector<ObjectInstance> out;
    for (std::size_t k = 0; k < layout.objects.size(); ++k)
        if (selected.contains(object_site[k])) out.push_back(layout.objects[k]);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.label < b.label; });
    return out;
}

// Throws the error the solver would raise for the unprunable candidate set.
[[noreturn]] inline void throw_infeasible(const std::vector<Detection>& detections,
                                          const std::vector<ObjectInstance>& candidates, bool category_separated) {
    if (!category_separated) throw InfeasibleError(detections.size(), candidates.size());
    std::map<std::string, std::size_t> have, need;
    for (const auto& c : candidates) ++have[c.object_type];
    for (const auto& d : detections) ++need[*d.object_type];
    for (const auto& [type, n] : need)
        if (n > have[type]) throw InfeasibleError(n, have[type], type);
    throw InfeasibleError(detections.size(), candidates.size());
}

}  // namespace detail

/// Site probabilities from the camera, pruning at `threshold`, and the cost
/// matrix over the surviving candidates. If pruning leaves too few
/// candidates, further sites are admitted in probability order and the
/// threshold is raised to the cumulative value of the last one admitted.
inline PreparedProblem prepare_problem(const SceneLayout& layout, const Observation& observation,
                                       PruneThreshold threshold, const CostWeights& weights,
                                       bool category_separated) {
    validate(weights);
    if (category_separated) {
        for (std::size_t i = 0; i < observation.detections.size(); ++i)
            if (!observation.detections[i].object_type)
                throw ValidationError("invariant violated: detections[" + std::to_string(i) +
                                      "] needs a type when solving per category");
    }

    PreparedProblem out;
    out.threshold = threshold.value();
    out.effective_threshold = threshold.value();
    out.probabilities = site_probabilities(observation.camera, layout.sites);

    const std::vector<std::string> object_site = object_sites(layout);
    std::size_t kept = pruned_entry_count(out.probabilities, threshold);
    std::set<std::string> chosen = selected_sites(out.probabilities, kept);
    std::vector<ObjectInstance> candidates = detail::candidates_in(layout, object_site, chosen);

    while (!detail::feasible(observation.detections, candidates, category_separated)) {
        if (kept >= out.probabilities.entries.size())
            detail::throw_infeasible(observation.detections, candidates, category_separated);
        ++kept;
        out.effective_threshold = out.probabilities.entries[kept - 1].cumulative;
        chosen = selected_sites(out.probabilities, kept);
        candidates = detail::candidates_in(layout, object_site, chosen);
    }

    out.sites = std::move(chosen);
    out.candidate_count = candidates.size();
    out.problem.matrix = build_cost_matrix(observation.detections, candidates, layout.bounds, weights);
    out.problem.category_separated = category_separated;
    out.candidates = std::move(candidates);
    return out;
}

inline AssignmentResult solve_prepared(const PreparedProblem& prepared) {
    AssignmentResult r = solve(prepared.problem);
    r.pruned_site_count = prepared.sites.size();
    r.candidate_count = prepared.candidate_count;
    r.threshold = prepared.threshold;
    r.effective_threshold = prepared.effective_threshold;
    return r;
}

/// Labels for every detection in `observation`, chosen among the
/// initial-layout objects of the sites that survive pruning.
inline AssignmentResult resolve_identities(const SceneLayout& layout, const Observation& observation,
                                           PruneThreshold threshold, const CostWeights& weights,
                                           bool category_separated = false) {
    return solve_prepared(prepare_problem(layout, observation, threshold, weights, category_separated));
}

}  // namespace idtrack
