#pragma once

// idtrack command-line front end: generate, observe, assign, sweep.
//
// Exit codes: 0 success, 2 usage, 3 input validation, 4 infeasible, 1 other.

#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "idtrack/idtrack.hpp"

namespace idtrack::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

enum ExitCode : int { kOk = 0, kFailure = 1, kUsage = 2, kInvalidInput = 3, kInfeasible = 4 };

inline constexpr const char* kOutDirEnv = "IDTRACK_OUT_DIR";

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline fs::path default_out_dir(const std::string& fallback) {
    if (const char* env = std::getenv(kOutDirEnv); env && *env) return env;
    return fallback;
}

inline std::vector<double> parse_list(const std::string& text, const std::string& flag) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError(flag + ": '" + item + "' is not a number");
        }
    }
    if (out.empty()) throw UsageError(flag + ": expected a comma-separated list of numbers");
    return out;
}

inline CostWeights parse_weights(const std::string& text) {
    const auto v = parse_list(text, "--weights");
    if (v.size() != 2) throw UsageError("--weights: expected wt,wr");
    return {v[0], v[1]};
}

inline json manifest(const std::string& command, json inputs, std::uint64_t seed, json config, json outputs) {
    return {{"command", command},
            {"tool_version", kVersion},
            {"seed", seed},
            {"inputs", std::move(inputs)},
            {"config", std::move(config)},
            {"outputs", std::move(outputs)}};
}

// ---------------------------------------------------------------------------
// generate

struct GenerateOptions {
    std::string archetype;
    std::uint64_t seed = 1;
    std::string out;
    std::string path_out;
};

inline int cmd_generate(const GenerateOptions& o, std::ostream& out) {
    const auto arch = find_archetype(o.archetype);
    if (!arch) throw UsageError("unknown archetype '" + o.archetype + "'; valid names: " + archetype_names());
    const SceneLayout layout = generate_scene(*arch, RandomSeed{o.seed});
    io::save_scene(layout, o.out);
    json outputs = json::array({o.out});
    if (!o.path_out.empty()) {
        io::save_path(default_path(layout), o.path_out);
        outputs.push_back(o.path_out);
    }
    io::write_file(o.out + ".manifest.json",
                   io::dump(manifest("generate", json::object(), o.seed,
                                     {{"archetype", o.archetype}, {"path_out", o.path_out}}, outputs)));
    out << "wrote " << o.out << " (" << layout.objects.size() << " objects, " << layout.sites.size() << " sites)\n";
    return kOk;
}

// ---------------------------------------------------------------------------
// observe

struct ObserveOptions {
    std::string scene;
    std::vector<double> camera{0.0, 0.0};
    double yaw = 0.0;
    double fov = 60.0;
    double range = 10.0;
    double t_sd = 0.0;
    double r_sd = 0.0;
    std::uint64_t seed = 1;
    std::string out;
    std::string truth_out;
};

/// Synthesizes an observation of the (optionally perturbed) scene.
inline int cmd_observe(const ObserveOptions& o, std::ostream& out) {
    if (o.camera.size() != 2) throw UsageError("--camera: expected x,z");
    const SceneLayout layout = io::load_scene(o.scene);
    const SceneLayout moved = perturb_layout(layout, NoiseModel{0.0, o.t_sd, 0.0, o.r_sd}, RandomSeed{o.seed});
    CameraState cam{{o.camera[0], o.camera[1]}, o.yaw, o.fov, o.range};
    validate(cam);
    const LabeledObservation seen = synthesize_labeled_observation(moved, cam);
    io::save_observation(seen.observation, o.out);
    json outputs = json::array({o.out});
    if (!o.truth_out.empty()) {
        io::write_file(o.truth_out, io::dump(json(seen.truth_labels)));
        outputs.push_back(o.truth_out);
    }
    io::write_file(o.out + ".manifest.json",
                   io::dump(manifest("observe", {{"scene", o.scene}}, o.seed,
                                     {{"camera", o.camera},
                                      {"yaw", o.yaw},
                                      {"fov", o.fov},
                                      {"range", o.range},
                                      {"t_sd", o.t_sd},
                                      {"r_sd", o.r_sd}},
                                     outputs)));
    out << "wrote " << o.out << " (" << seen.observation.detections.size() << " detections)\n";
    return kOk;
}

// ---------------------------------------------------------------------------
// assign

struct AssignOptions {
    std::string scene;
    std::string observation;
    double threshold = 1.0;
    std::string weights;
    bool category_separated = false;
    bool as_json = false;
    std::string report;
    std::string out_dir;
};

inline json result_to_json(const AssignmentResult& r, std::size_t n) {
    json pairs = json::array();
    for (const auto& p : r.pairs)
        pairs.push_back({{"detection", p.detection},
                         {"label", p.label},
                         {"c_t", p.cost.translation},
                         {"c_r", p.cost.rotation},
                         {"c_d", p.cost.dimension},
                         {"total", p.cost.total}});
    return {{"pairs", std::move(pairs)},
            {"total_cost", r.total_cost},
            {"n", n},
            {"m", r.candidate_count},
            {"pruned_site_count", r.pruned_site_count},
            {"threshold", r.threshold},
            {"effective_threshold", r.effective_threshold}};
}

inline std::string result_to_table(const AssignmentResult& r, std::size_t n) {
    std::ostringstream os;
    os << std::left << std::setw(10) << "detection" << std::setw(16) << "label" << std::right << std::setw(12)
       << "c_t" << std::setw(12) << "c_r" << std::setw(12) << "c_d" << std::setw(12) << "total" << '\n';
    os << std::fixed << std::setprecision(6);
    for (const auto& p : r.pairs)
        os << std::left << std::setw(10) << p.detection << std::setw(16) << p.label << std::right << std::setw(12)
           << p.cost.translation << std::setw(12) << p.cost.rotation << std::setw(12) << p.cost.dimension
           << std::setw(12) << p.cost.total << '\n';
    os << "total_cost " << r.total_cost << "  N " << n << "  M " << r.candidate_count << "  sites "
       << r.pruned_site_count << "  threshold " << format_number(r.threshold) << "  effective_threshold "
       << format_number(r.effective_threshold) << '\n';
    return os.str();
}

inline int cmd_assign(const AssignOptions& o, std::ostream& out) {
    const SceneLayout layout = io::load_scene(o.scene);
    const Observation obs = io::load_observation(o.observation);
    const CostWeights weights = o.weights.empty() ? default_weights(layout.bounds) : parse_weights(o.weights);
    const AssignmentResult r =
        resolve_identities(layout, obs, PruneThreshold(o.threshold), weights, o.category_separated);

    const std::string text = o.as_json ? io::dump(result_to_json(r, obs.detections.size()))
                                       : result_to_table(r, obs.detections.size());
    out << text;

    json outputs = json::array();
    fs::path manifest_path;
    if (!o.report.empty()) {
        io::write_file(o.report, text);
        outputs.push_back(o.report);
        manifest_path = o.report + ".manifest.json";
    } else {
        manifest_path = (o.out_dir.empty() ? default_out_dir(".") : fs::path(o.out_dir)) / "assign.manifest.json";
    }
    io::write_file(manifest_path,
                   io::dump(manifest("assign", {{"scene", o.scene}, {"observation", o.observation}}, 0,
                                     {{"threshold", o.threshold},
                                      {"weights", {weights.translation, weights.rotation}},
                                      {"category_separated", o.category_separated},
                                      {"json", o.as_json}},
                                     outputs)));
    return kOk;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepOptions {
    std::string mode = "noise";
    std::string archetype;
    std::string scene;
    std::string path;
    std::size_t seeds = 1;
    std::uint64_t seed = 1;
    double threshold = 1.0;
    std::string weights;
    std::string t_list;
    std::string r_list;
    std::string noise;
    double fov = 60.0;
    double range = 10.0;
    double frame_rate = kDefaultFrameRate;
    bool category_separated = false;
    bool plots = false;
    std::size_t jobs = 1;
    std::string out_dir;
    std::string from_manifest;
};

inline json sweep_config_json(const SweepOptions& o) {
    return {{"mode", o.mode},         {"archetype", o.archetype},   {"scene", o.scene},
            {"path", o.path},         {"seeds", o.seeds},           {"seed", o.seed},
            {"threshold", o.threshold}, {"weights", o.weights},     {"t_list", o.t_list},
            {"r_list", o.r_list},     {"noise", o.noise},           {"fov", o.fov},
            {"range", o.range},       {"frame_rate", o.frame_rate}, {"category_separated", o.category_separated},
            {"plots", o.plots}};
}

/// Reloads every option recorded in a sweep manifest; out_dir and jobs are
/// taken from the current invocation.
inline SweepOptions sweep_options_from_manifest(const fs::path& path, const SweepOptions& current) {
    const json m = io::parse_document(io::read_file(path), path.string());
    if (m.value("command", "") != "sweep") throw ParseError(path.string() + ": not a sweep manifest");
    const json& c = m.at("config");
    SweepOptions o;
    o.mode = c.at("mode").get<std::string>();
    o.archetype = c.at("archetype").get<std::string>();
    o.scene = c.at("scene").get<std::string>();
    o.path = c.at("path").get<std::string>();
    o.seeds = c.at("seeds").get<std::size_t>();
    o.seed = c.at("seed").get<std::uint64_t>();
    o.threshold = c.at("threshold").get<double>();
    o.weights = c.at("weights").get<std::string>();
    o.t_list = c.at("t_list").get<std::string>();
    o.r_list = c.at("r_list").get<std::string>();
    o.noise = c.at("noise").get<std::string>();
    o.fov = c.at("fov").get<double>();
    o.range = c.at("range").get<double>();
    o.frame_rate = c.at("frame_rate").get<double>();
    o.category_separated = c.at("category_separated").get<bool>();
    o.plots = c.at("plots").get<bool>();
    o.out_dir = current.out_dir;
    o.jobs = current.jobs;
    return o;
}

inline int cmd_sweep(SweepOptions o, std::ostream& out) {
    if (!o.from_manifest.empty()) o = sweep_options_from_manifest(o.from_manifest, o);
    if (o.mode != "noise" && o.mode != "threshold") throw UsageError("--mode must be noise or threshold");
    if (o.archetype.empty() == o.scene.empty()) throw UsageError("give exactly one of --archetype or --scene");
    if (o.seeds == 0) throw UsageError("--seeds must be >= 1");

    std::optional<SceneArchetype> arch;
    std::optional<SceneLayout> fixed_scene;
    if (!o.archetype.empty()) {
        arch = find_archetype(o.archetype);
        if (!arch) throw UsageError("unknown archetype '" + o.archetype + "'; valid names: " + archetype_names());
    } else {
        fixed_scene = io::load_scene(o.scene);
    }
    std::optional<CameraPath> fixed_path;
    if (!o.path.empty()) fixed_path = io::load_path(o.path);

    SweepConfig cfg;
    cfg.seeds = o.seeds;
    cfg.base_seed = RandomSeed{o.seed};
    cfg.threshold = PruneThreshold(o.threshold);
    if (!o.weights.empty()) cfg.weights = parse_weights(o.weights);
    if (!o.t_list.empty()) cfg.t_list = parse_list(o.t_list, "--t-list");
    if (!o.r_list.empty()) cfg.r_list = parse_list(o.r_list, "--r-list");
    if (!o.noise.empty()) {
        const auto v = parse_list(o.noise, "--noise");
        if (v.size() > 2) throw UsageError("--noise: expected A or A,B");
        cfg.t_list = {v[0]};
        cfg.r_list = {v.size() == 2 ? v[1] : v[0]};
    }
    for (double a : cfg.t_list)
        if (a < 0.0) throw UsageError("translation SDs must be >= 0");
    for (double b : cfg.r_list)
        if (b < 0.0) throw UsageError("rotation SDs must be >= 0");
    cfg.category_separated = o.category_separated;
    cfg.frame_rate = o.frame_rate;
    cfg.optics = {o.fov, o.range};
    cfg.jobs = o.jobs;
    validate(CameraState{{}, 0.0, o.fov, o.range});

    SweepResult rows;
    for (std::size_t k = 0; k < cfg.seeds; ++k) {
        const SceneLayout layout = arch ? replicate_scene(*arch, cfg.base_seed, k) : *fixed_scene;
        const CameraPath path = fixed_path ? *fixed_path : default_path(layout);
        SweepResult part = o.mode == "noise"
                               ? run_noise_sweep(layout, path, cfg, k)
                               : run_threshold_sweep(layout, path, derive_seed(cfg.base_seed, {k, 1}), cfg, k);
        rows.insert(rows.end(), part.begin(), part.end());
    }

    const fs::path dir = o.out_dir.empty() ? default_out_dir("idtrack_out") : fs::path(o.out_dir);
    json outputs = json::array();
    auto emit = [&](const std::string& name, const std::string& body) {
        io::write_file(dir / name, body);
        outputs.push_back((dir / name).string());
    };
    emit("rows.csv", rows_to_csv(rows));
    if (o.mode == "noise") {
        emit("cells.csv", cells_to_csv(aggregate_cells(rows)));
        emit("bands.csv", bands_to_csv(aggregate_bands(rows)));
        emit("translation.csv", translation_to_csv(aggregate_translation(rows)));
        if (o.plots) {
            emit("accuracy_vs_rotation.svg", svg::render(svg::rotation_chart(aggregate_bands(rows))));
            emit("accuracy_vs_translation.svg", svg::render(svg::translation_chart(aggregate_translation(rows))));
        }
    } else {
        const auto summary = aggregate_thresholds(rows);
        emit("thresholds.csv", thresholds_to_csv(summary));
        if (o.plots) emit("threshold.svg", svg::render(svg::threshold_chart(summary)));
    }

    json inputs = json::object();
    if (!o.scene.empty()) inputs["scene"] = o.scene;
    if (!o.path.empty()) inputs["path"] = o.path;
    io::write_file(dir / "manifest.json", io::dump(manifest("sweep", inputs, o.seed, sweep_config_json(o), outputs)));

    std::size_t scored = 0, infeasible = 0;
    for (const auto& r : rows) {
        scored += r.scored();
        infeasible += r.status == RowStatus::infeasible;
    }
    out << "wrote " << rows.size() << " rows (" << scored << " scored, " << infeasible << " infeasible) to "
        << dir.string() << '\n';
    return kOk;
}

// ---------------------------------------------------------------------------

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Resolve identities of visually identical objects after a layout change"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    GenerateOptions gen;
    auto* g = app.add_subcommand("generate", "Generate a synthetic scene from a named archetype");
    g->add_option("--archetype,-a", gen.archetype, "Archetype name (" + archetype_names() + ")")->required();
    g->add_option("--seed", gen.seed, "Random seed");
    g->add_option("--out,-o", gen.out, "Scene file to write")->required();
    g->add_option("--path-out", gen.path_out, "Also write the default camera path here");

    ObserveOptions obs;
    auto* ob = app.add_subcommand("observe", "Synthesize an observation file from a scene");
    ob->add_option("--scene", obs.scene, "Scene file")->required();
    ob->add_option("--camera", obs.camera, "Camera position x,z")->delimiter(',')->expected(2);
    ob->add_option("--yaw", obs.yaw, "Camera heading in degrees (0 = +z, 90 = +x)");
    ob->add_option("--fov", obs.fov, "Horizontal field of view in degrees");
    ob->add_option("--range", obs.range, "Detection range in meters");
    ob->add_option("--t-sd", obs.t_sd, "Translation noise SD applied before observing");
    ob->add_option("--r-sd", obs.r_sd, "Rotation noise SD applied before observing");
    ob->add_option("--seed", obs.seed, "Noise seed");
    ob->add_option("--out,-o", obs.out, "Observation file to write")->required();
    ob->add_option("--truth-out", obs.truth_out, "Write the true label of each detection here");

    AssignOptions as;
    auto* a = app.add_subcommand("assign", "Assign labels to the detections of an observation");
    a->add_option("--scene", as.scene, "Initial scene file")->required();
    a->add_option("--observation", as.observation, "Observation file")->required();
    a->add_option("--threshold", as.threshold, "Pruning threshold in [0, 1]");
    a->add_option("--weights", as.weights, "Cost weights wt,wr (default 0.36*sqrt(area),1)");
    a->add_flag("--category-separated", as.category_separated, "Solve each object type separately");
    a->add_flag("--json", as.as_json, "Print JSON instead of a table");
    a->add_option("--report", as.report, "Also write the report to this file");
    a->add_option("--out-dir", as.out_dir, std::string("Manifest directory (default $") + kOutDirEnv + " or .)");

    SweepOptions sw;
    auto* s = app.add_subcommand("sweep", "Run a noise or threshold sweep");
    s->add_option("--mode", sw.mode, "noise or threshold");
    s->add_option("--archetype", sw.archetype, "Generate a scene per replicate from this archetype");
    s->add_option("--scene", sw.scene, "Use this scene file for every replicate");
    s->add_option("--path", sw.path, "Camera path file (default: loop through the sites)");
    s->add_option("--seeds", sw.seeds, "Number of replicates");
    s->add_option("--seed", sw.seed, "Base seed");
    s->add_option("--threshold", sw.threshold, "Pruning threshold for noise sweeps");
    s->add_option("--weights", sw.weights, "Cost weights wt,wr");
    s->add_option("--t-list", sw.t_list, "Translation SDs, comma-separated");
    s->add_option("--r-list", sw.r_list, "Rotation SDs, comma-separated");
    s->add_option("--noise", sw.noise, "Single cell A[,B]: translation SD A, rotation SD B (default A)");
    s->add_option("--fov", sw.fov, "Camera field of view in degrees");
    s->add_option("--range", sw.range, "Camera range in meters");
    s->add_option("--frame-rate", sw.frame_rate, "Frames per second used to space stops");
    s->add_flag("--category-separated", sw.category_separated, "Solve each object type separately");
    s->add_flag("--plots", sw.plots, "Also write SVG charts");
    s->add_option("--jobs", sw.jobs, "Worker threads for noise sweeps");
    s->add_option("--out-dir", sw.out_dir, std::string("Output directory (default $") + kOutDirEnv + " or idtrack_out)");
    s->add_option("--manifest", sw.from_manifest, "Re-run the sweep recorded in this manifest");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*g) return cmd_generate(gen, out);
        if (*ob) return cmd_observe(obs, out);
        if (*a) return cmd_assign(as, out);
        if (*s) return cmd_sweep(sw, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const InfeasibleError& e) {
        err << "error: " << e.what()
            << ". Raise --threshold, check detection types, or remove spurious detections.\n";
        return kInfeasible;
    } catch (const ParseError& e) {
        err << "input error: " << e.what() << '\n';
        return kInvalidInput;
    } catch (const ValidationError& e) {
        err << "input error: " << e.what() << '\n';
        return kInvalidInput;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kFailure;
    }
    return kUsage;
}

}  // namespace idtrack::cli
