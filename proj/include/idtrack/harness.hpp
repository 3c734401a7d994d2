#pragma once

// Monte-Carlo noise sweeps and the pruning-threshold experiment over
// synthetic scenes, plus CSV emission and aggregation.

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "idtrack/archetypes.hpp"
#include "idtrack/path.hpp"
#include "idtrack/perturb.hpp"
#include "idtrack/random.hpp"
#include "idtrack/resolve.hpp"

namespace idtrack {

enum class RowStatus { ok, empty, infeasible };

inline const char* to_string(RowStatus s) {
    switch (s) {
        case RowStatus::ok: return "ok";
        case RowStatus::empty: return "empty";
        case RowStatus::infeasible: return "infeasible";
    }
    return "?";
}

/// One camera stop of one sweep cell.
struct SweepRow {
    std::string scene;
    double a = 0.0;  ///< translation SD, m
    double b = 0.0;  ///< rotation SD, degrees
    std::size_t stop = 0;
    std::size_t n = 0;
    std::size_t m = 0;
    std::size_t correct = 0;
    double accuracy = 0.0;  ///< correct / n; meaningful only when status is ok
    double solve_ms = 0.0;
    double threshold = 1.0;
    double effective_threshold = 1.0;
    std::size_t replicate = 0;
    RowStatus status = RowStatus::ok;

    bool scored() const { return status == RowStatus::ok; }
};

using SweepResult = std::vector<SweepRow>;

/// 0.1, 0.2, ..., 1.0, then whole meters up to sqrt(scene_size), ending at
/// sqrt(scene_size) itself when that is not a whole number.
inline std::vector<double> default_t_list(double scene_size) {
    std::vector<double> out;
    for (int k = 1; k <= 9; ++k) out.push_back(k / 10.0);
    const double top = std::sqrt(scene_size);
    for (int k = 1; k <= static_cast<int>(std::floor(top + 1e-9)); ++k) out.push_back(static_cast<double>(k));
    if (std::abs(top - std::round(top)) > 1e-9 && top > 1.0) out.push_back(top);
    return out;
}

/// 0, 5, ..., 120 degrees.
inline std::vector<double> default_r_list() {
    std::vector<double> out;
    for (int b = 0; b <= 120; b += 5) out.push_back(static_cast<double>(b));
    return out;
}

/// Threshold grid 0, 0.05, ..., 1.
inline std::vector<double> threshold_grid() {
    std::vector<double> out;
    for (int k = 0; k <= 20; ++k) out.push_back(k / 20.0);
    return out;
}

struct SweepConfig {
    std::vector<double> t_list;             ///< empty: default_t_list(scene area)
    std::vector<double> r_list;             ///< empty: default_r_list()
    std::size_t seeds = 1;                  ///< replicates per cell
    RandomSeed base_seed{1};
    PruneThreshold threshold{1.0};
    std::optional<CostWeights> weights;     ///< empty: default_weights(bounds)
    bool category_separated = false;
    double frame_rate = kDefaultFrameRate;
    CameraOptics optics;
    std::size_t jobs = 1;
};

namespace detail {

inline double elapsed_ms(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

/// Identities at one stop, scored against the labels the detections were
/// synthesized from. `repeats` > 1 times the solver that many times.
inline SweepRow evaluate_stop(const SceneLayout& initial, const SceneLayout& moved, const CameraState& camera,
                              PruneThreshold threshold, const CostWeights& weights, bool category_separated,
                              std::size_t repeats) {
    SweepRow row;
    row.threshold = threshold.value();
    row.effective_threshold = threshold.value();
    const LabeledObservation seen = synthesize_labeled_observation(moved, camera);
    row.n = seen.observation.detections.size();
    try {
        const PreparedProblem prepared = prepare_problem(initial, seen.observation, threshold, weights, category_separated);
        row.m = prepared.candidate_count;
        row.effective_threshold = prepared.effective_threshold;

        // One timed run formulates the program over the surviving candidates
        // (the cost matrix) and solves it.
        AssignmentResult result;
        const auto t0 = std::chrono::steady_clock::now();
        for (std::size_t r = 0; r < std::max<std::size_t>(repeats, 1); ++r) {
            AssignmentProblem problem{build_cost_matrix(seen.observation.detections, prepared.candidates,
                                                        initial.bounds, weights),
                                      category_separated};
            result = solve(problem);
        }
        row.solve_ms = elapsed_ms(t0) / static_cast<double>(std::max<std::size_t>(repeats, 1));

        for (const auto& p : result.pairs)
            if (p.label == seen.truth_labels[p.detection]) ++row.correct;
        if (row.n == 0) {
            row.status = RowStatus::empty;
        } else {
            row.accuracy = static_cast<double>(row.correct) / static_cast<double>(row.n);
        }
    } catch (const InfeasibleError& e) {
        row.status = RowStatus::infeasible;
        row.m = e.candidates();
    }
    return row;
}

/// Runs `task(k)` for k in [0, count) on up to `jobs` threads.
template <typename Task>
void parallel_for(std::size_t count, std::size_t jobs, Task&& task) {
    jobs = std::max<std::size_t>(1, std::min(jobs, count));
    if (jobs == 1) {
        for (std::size_t k = 0; k < count; ++k) task(k);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < jobs; ++t)
        pool.emplace_back([&] {
            for (std::size_t k = next++; k < count; k = next++) task(k);
        });
    for (auto& th : pool) th.join();
}

}  // namespace detail

/// Noise sweep over every (a, b) cell for one replicate. The perturbation
/// seed depends on the replicate only, so all cells share the same standard
/// normal draws scaled by their own (a, b).
inline SweepResult run_noise_sweep(const SceneLayout& layout, const CameraPath& path, const SweepConfig& config,
                                   std::size_t replicate = 0) {
    validate(layout);
    const std::vector<double> t_list = config.t_list.empty() ? default_t_list(layout.bounds.area()) : config.t_list;
    const std::vector<double> r_list = config.r_list.empty() ? default_r_list() : config.r_list;
    const CostWeights weights = config.weights.value_or(default_weights(layout.bounds));
    const std::vector<CameraState> stops = camera_stops(path, config.frame_rate, config.optics);
    const RandomSeed noise_seed = derive_seed(config.base_seed, {replicate, 1});

    std::vector<SweepResult> cells(t_list.size() * r_list.size());
    detail::parallel_for(cells.size(), config.jobs, [&](std::size_t cell) {
        const double a = t_list[cell / r_list.size()];
        const double b = r_list[cell % r_list.size()];
        const SceneLayout moved = perturb_layout(layout, NoiseModel{0.0, a, 0.0, b}, noise_seed);
        for (std::size_t s = 0; s < stops.size(); ++s) {
            SweepRow row = detail::evaluate_stop(layout, moved, stops[s], config.threshold, weights,
                                                 config.category_separated, 1);
            row.scene = layout.name;
            row.a = a;
            row.b = b;
            row.stop = s;
            row.replicate = replicate;
            cells[cell].push_back(std::move(row));
        }
    });

    SweepResult out;
    for (auto& c : cells) out.insert(out.end(), c.begin(), c.end());
    return out;
}

inline constexpr double kThresholdTranslationSd = 0.1;
inline constexpr double kThresholdRotationSd = 15.0;
inline constexpr std::size_t kThresholdTimingRepeats = 100;

/// Pruning-threshold experiment: one perturbation with T(0, 0.1) and
/// R(0, 15), a single pass along the path, and at every stop each threshold
/// of threshold_grid() with the solver timed over 100 repeats. Runs on the
/// calling thread only.
inline SweepResult run_threshold_sweep(const SceneLayout& layout, const CameraPath& path, RandomSeed seed,
                                       const SweepConfig& config = {}, std::size_t replicate = 0) {
    validate(layout);
    const CostWeights weights = config.weights.value_or(default_weights(layout.bounds));
    const std::vector<CameraState> stops = camera_stops(path, config.frame_rate, config.optics);
    const SceneLayout moved =
        perturb_layout(layout, NoiseModel{0.0, kThresholdTranslationSd, 0.0, kThresholdRotationSd}, seed);

    SweepResult out;
    for (std::size_t s = 0; s < stops.size(); ++s) {
        for (double t : threshold_grid()) {
            SweepRow row = detail::evaluate_stop(layout, moved, stops[s], PruneThreshold(t), weights,
                                                 config.category_separated, kThresholdTimingRepeats);
            row.scene = layout.name;
            row.a = kThresholdTranslationSd;
            row.b = kThresholdRotationSd;
            row.stop = s;
            row.replicate = replicate;
            out.push_back(std::move(row));
        }
    }
    return out;
}

/// Scene (and its default path) for replicate `k` of an archetype sweep.
inline SceneLayout replicate_scene(const SceneArchetype& arch, RandomSeed base, std::size_t k) {
    return generate_scene(arch, derive_seed(base, {k, 0}));
}

inline SweepResult run_archetype_noise_sweep(const SceneArchetype& arch, const SweepConfig& config) {
    SweepResult out;
    for (std::size_t k = 0; k < config.seeds; ++k) {
        const SceneLayout layout = replicate_scene(arch, config.base_seed, k);
        SweepResult part = run_noise_sweep(layout, default_path(layout), config, k);
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

inline SweepResult run_archetype_threshold_sweep(const SceneArchetype& arch, const SweepConfig& config) {
    SweepResult out;
    for (std::size_t k = 0; k < config.seeds; ++k) {
        const SceneLayout layout = replicate_scene(arch, config.base_seed, k);
        SweepResult part =
            run_threshold_sweep(layout, default_path(layout), derive_seed(config.base_seed, {k, 1}), config, k);
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

// ---------------------------------------------------------------------------
// Aggregation

/// Mean accuracy over scored rows, or nullopt when there are none.
inline std::optional<double> mean_accuracy(const SweepResult& rows) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& r : rows)
        if (r.scored()) {
            sum += r.accuracy;
            ++n;
        }
    if (n == 0) return std::nullopt;
    return sum / static_cast<double>(n);
}

inline SweepResult select_rows(const SweepResult& rows, double a, double b) {
    SweepResult out;
    for (const auto& r : rows)
        if (r.a == a && r.b == b) out.push_back(r);
    return out;
}

enum class NoiseBand { low, high };

inline const char* to_string(NoiseBand b) { return b == NoiseBand::low ? "low" : "high"; }

/// Low band covers T(0, 0.1) through T(0, 1.0) inclusive.
inline NoiseBand translation_band(double a) { return a <= 1.0 + 1e-9 ? NoiseBand::low : NoiseBand::high; }

struct CellSummary {
    std::string scene;
    double a = 0.0;
    double b = 0.0;
    double accuracy = 0.0;
    std::size_t scored_stops = 0;
};

struct BandSummary {
    std::string scene;
    NoiseBand band = NoiseBand::low;
    double b = 0.0;
    double accuracy = 0.0;  ///< mean of cell accuracies over a in the band
    std::size_t cells = 0;
};

struct TranslationSummary {
    std::string scene;
    double a = 0.0;
    double accuracy = 0.0;  ///< mean of cell accuracies over every b
    std::size_t cells = 0;
};

struct ThresholdSummary {
    std::string scene;
    double threshold = 0.0;
    double accuracy = 0.0;
    double solve_ms = 0.0;
    double candidates = 0.0;
    double effective_threshold = 0.0;
    std::size_t scored_stops = 0;
};

/// Per (scene, a, b) mean accuracy over scored stops of every replicate.
/// Cells with no scored stop are omitted.
inline std::vector<CellSummary> aggregate_cells(const SweepResult& rows) {
    std::map<std::tuple<std::string, double, double>, std::pair<double, std::size_t>> acc;
    for (const auto& r : rows) {
        if (!r.scored()) continue;
        auto& slot = acc[{r.scene, r.a, r.b}];
        slot.first += r.accuracy;
        ++slot.second;
    }
    std::vector<CellSummary> out;
    for (const auto& [key, v] : acc)
        out.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), v.first / static_cast<double>(v.second),
                       v.second});
    return out;
}

inline std::vector<BandSummary> aggregate_bands(const SweepResult& rows) {
    std::map<std::tuple<std::string, int, double>, std::pair<double, std::size_t>> acc;
    for (const auto& c : aggregate_cells(rows)) {
        auto& slot = acc[{c.scene, static_cast<int>(translation_band(c.a)), c.b}];
        slot.first += c.accuracy;
        ++slot.second;
    }
    std::vector<BandSummary> out;
    for (const auto& [key, v] : acc)
        out.push_back({std::get<0>(key), static_cast<NoiseBand>(std::get<1>(key)), std::get<2>(key),
                       v.first / static_cast<double>(v.second), v.second});
    return out;
}

inline std::vector<TranslationSummary> aggregate_translation(const SweepResult& rows) {
    std::map<std::pair<std::string, double>, std::pair<double, std::size_t>> acc;
    for (const auto& c : aggregate_cells(rows)) {
        auto& slot = acc[{c.scene, c.a}];
        slot.first += c.accuracy;
        ++slot.second;
    }
    std::vector<TranslationSummary> out;
    for (const auto& [key, v] : acc)
        out.push_back({key.first, key.second, v.first / static_cast<double>(v.second), v.second});
    return out;
}

/// Average accuracy and average solve time per threshold. Time and
/// candidate means run over every stop that produced a problem.
inline std::vector<ThresholdSummary> aggregate_thresholds(const SweepResult& rows) {
    struct Acc {
        double acc = 0.0, ms = 0.0, m = 0.0, eff = 0.0;
        std::size_t scored = 0, timed = 0;
    };
    std::map<std::pair<std::string, double>, Acc> acc;
    for (const auto& r : rows) {
        if (r.status == RowStatus::infeasible) continue;
        Acc& slot = acc[{r.scene, r.threshold}];
        slot.ms += r.solve_ms;
        slot.m += static_cast<double>(r.m);
        slot.eff += r.effective_threshold;
        ++slot.timed;
        if (r.scored()) {
            slot.acc += r.accuracy;
            ++slot.scored;
        }
    }
    std::vector<ThresholdSummary> out;
    for (const auto& [key, v] : acc) {
        if (v.scored == 0) continue;
        const auto timed = static_cast<double>(v.timed);
        out.push_back({key.first, key.second, v.acc / static_cast<double>(v.scored), v.ms / timed, v.m / timed,
                       v.eff / timed, v.scored});
    }
    return out;
}

// ---------------------------------------------------------------------------
// CSV

/// Shortest decimal text that reads back to the same double.
inline std::string format_number(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline std::string format_fixed(double v, int digits) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, digits);
    return std::string(buf, res.ptr);
}

inline constexpr const char* kRowHeader =
    "scene,a,b,stop,n,m,correct,accuracy,solve_ms,threshold,effective_threshold,replicate,status";

/// Column index of solve_ms, the only non-deterministic column.
inline constexpr std::size_t kTimingColumn = 8;

inline std::string rows_to_csv(const SweepResult& rows) {
    std::ostringstream os;
    os << kRowHeader << '\n';
    for (const auto& r : rows) {
        os << r.scene << ',' << format_number(r.a) << ',' << format_number(r.b) << ',' << r.stop << ',' << r.n << ','
           << r.m << ',';
        if (r.status == RowStatus::infeasible) {
            os << ",infeasible,";
        } else {
            os << r.correct << ',' << (r.status == RowStatus::ok ? format_number(r.accuracy) : std::string{}) << ',';
        }
        os << format_fixed(r.solve_ms, 6) << ',' << format_number(r.threshold) << ','
           << format_number(r.effective_threshold) << ',' << r.replicate << ',' << to_string(r.status) << '\n';
    }
    return os.str();
}

inline std::string bands_to_csv(const std::vector<BandSummary>& rows) {
    std::ostringstream os;
    os << "scene,band,b,mean_accuracy,cells\n";
    for (const auto& r : rows)
        os << r.scene << ',' << to_string(r.band) << ',' << format_number(r.b) << ',' << format_number(r.accuracy)
           << ',' << r.cells << '\n';
    return os.str();
}

inline std::string translation_to_csv(const std::vector<TranslationSummary>& rows) {
    std::ostringstream os;
    os << "scene,a,mean_accuracy,cells\n";
    for (const auto& r : rows)
        os << r.scene << ',' << format_number(r.a) << ',' << format_number(r.accuracy) << ',' << r.cells << '\n';
    return os.str();
}

inline std::string cells_to_csv(const std::vector<CellSummary>& rows) {
    std::ostringstream os;
    os << "scene,a,b,mean_accuracy,scored_stops\n";
    for (const auto& r : rows)
        os << r.scene << ',' << format_number(r.a) << ',' << format_number(r.b) << ',' << format_number(r.accuracy)
           << ',' << r.scored_stops << '\n';
    return os.str();
}

inline std::string thresholds_to_csv(const std::vector<ThresholdSummary>& rows) {
    std::ostringstream os;
    os << "scene,threshold,mean_accuracy,mean_solve_ms,mean_candidates,mean_effective_threshold,scored_stops\n";
    for (const auto& r : rows)
        os << r.scene << ',' << format_number(r.threshold) << ',' << format_number(r.accuracy) << ','
           << format_fixed(r.solve_ms, 6) << ',' << format_number(r.candidates) << ','
           << format_number(r.effective_threshold) << ',' << r.scored_stops << '\n';
    return os.str();
}

/// Drops one comma-separated column from every line.
inline std::string strip_csv_column(const std::string& csv, std::size_t column) {
    std::istringstream in(csv);
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> fields;
        std::size_t start = 0;
        for (std::size_t k = 0; k <= line.size(); ++k) {
            if (k == line.size() || line[k] == ',') {
                fields.push_back(line.substr(start, k - start));
                start = k + 1;
            }
        }
        if (column < fields.size()) fields.erase(fields.begin() + static_cast<std::ptrdiff_t>(column));
        for (std::size_t k = 0; k < fields.size(); ++k) out << (k ? "," : "") << fields[k];
        out << '\n';
    }
    return out.str();
}

}  // namespace idtrack
