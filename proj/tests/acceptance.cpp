// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <string>

#include "idtrack/idtrack.hpp"

using namespace idtrack;

namespace {

struct Verdict {
    bool pass = true;
    std::string detail;
};

std::string fmt(double v, int digits = 4) { return format_fixed(v, digits); }

// ---------------------------------------------------------------------------

Verdict ten_site_pruning() {
    SiteProbabilities p;
    p.containing_site = "S5";
    const std::pair<const char*, double> rows[] = {{"S6", 0.214}, {"S3", 0.150}, {"S10", 0.129},
                                                   {"S9", 0.110}, {"S2", 0.109}, {"S4", 0.080},
                                                   {"S7", 0.076}, {"S1", 0.067}, {"S8", 0.065}};
    const double cumulative[] = {0.214, 0.364, 0.494, 0.604, 0.713, 0.793, 0.868, 0.935, 1.000};
    for (std::size_t k = 0; k < 9; ++k) p.entries.push_back({rows[k].first, 0.0, rows[k].second, cumulative[k]});

    Verdict v;
    const std::set<std::string> expected{"S3", "S5", "S6", "S9", "S10"};
    if (prune_sites(p, PruneThreshold(0.0)) != std::set<std::string>{"S5"}) {
        v.pass = false;
        v.detail += "t=0 mismatch; ";
    }
    for (double t : {0.50, 0.55, 0.60})
        if (prune_sites(p, PruneThreshold(t)) != expected) {
            v.pass = false;
            v.detail += "t=" + format_number(t) + " mismatch; ";
        }
    if (v.pass) v.detail = "t=0 -> {S5}; t=0.50/0.55/0.60 -> {S3,S5,S6,S9,S10}";
    return v;
}

Verdict cost_formulas() {
    constexpr double tol = 1e-9;
    Verdict v;
    auto check = [&](bool ok, const std::string& what) {
        if (!ok) {
            v.pass = false;
            v.detail += what + "; ";
        }
    };
    check(std::abs(rotation_cost(0, 180) - 1.0) <= tol, "rotation cost at 180");
    check(std::abs(rotation_cost(0, 90) - rotation_cost(0, 270)) <= tol, "rotation cost 90 vs 270");
    check(std::abs(rotation_cost(37, 127) - rotation_cost(127, 37)) <= tol, "rotation symmetry");
    const SceneBounds b{5, 5};
    check(std::abs(translation_cost(make_pose(0, 0, 0), make_pose(5, 5, 0), b) - 1.0) <= tol, "translation diagonal");
    check(std::abs(dimension_cost({1, 2, 3}, {3, 1, 2}) - 1.0) <= tol, "dimension permutation match");
    Rng rng(RandomSeed{2024});
    for (int k = 0; k < 10000; ++k) {
        const BoxDims x{rng.uniform(0.05, 4), rng.uniform(0.05, 4), rng.uniform(0.05, 4)};
        const BoxDims y{rng.uniform(0.05, 4), rng.uniform(0.05, 4), rng.uniform(0.05, 4)};
        if (dimension_cost(x, y) < 1.0 - tol) {
            check(false, "dimension cost below 1");
            break;
        }
    }
    check(std::abs(default_weights({7, 7}).translation - 2.52) <= tol, "w_t at 49 m^2");
    check(default_weights({7, 7}).rotation == 1.0, "w_r");
    if (v.pass) v.detail = "rotation, translation, dimension, default weights within 1e-9";
    return v;
}

Verdict solver_oracle() {
    Rng rng(RandomSeed{31337});
    const int instances = 2000;
    for (int k = 0; k < instances; ++k) {
        const std::size_t n = 1 + rng.below(7);
        const std::size_t m = n + rng.below(10 - n);
        std::vector<std::vector<double>> a(n, std::vector<double>(m));
        const bool integer = k % 2 == 1;
        for (auto& row : a)
            for (double& c : row) c = integer ? static_cast<double>(rng.below(5)) : rng.uniform(0, 10);
        const AssignmentProblem p{CostMatrix::from_totals(a), false};
        const AssignmentResult fast = solve(p);
        const AssignmentResult slow = brute_force_solve(p);
        for (const AssignmentResult* r : {&fast, &slow}) {
            std::set<std::string> labels;
            std::set<std::size_t> rows;
            for (const auto& pr : r->pairs) {
                labels.insert(pr.label);
                rows.insert(pr.detection);
            }
            if (r->pairs.size() != n || rows.size() != n || labels.size() != n)
                return {false, "constraint violated on instance " + std::to_string(k)};
        }
        if (fast.total_cost != slow.total_cost)
            return {false, "instance " + std::to_string(k) + ": solve " + format_number(fast.total_cost) +
                               " vs brute force " + format_number(slow.total_cost)};
    }
    return {true, std::to_string(instances) + " instances (N<=7, M<=9), exact total-cost equality"};
}

Verdict zero_noise() {
    SweepConfig c;
    c.t_list = {0.0};
    c.r_list = {0.0};
    c.seeds = 5;
    c.base_seed = RandomSeed{4};
    std::size_t scored = 0;
    for (const auto& arch : kArchetypes) {
        for (const auto& r : run_archetype_noise_sweep(arch, c)) {
            if (r.status == RowStatus::infeasible) return {false, std::string(arch.name) + ": infeasible stop"};
            if (!r.scored()) continue;
            ++scored;
            if (r.correct != r.n)
                return {false, std::string(arch.name) + " replicate " + std::to_string(r.replicate) + " stop " +
                                   std::to_string(r.stop) + ": accuracy " + fmt(r.accuracy)};
        }
    }
    return {true, "accuracy 1.0 on all " + std::to_string(scored) + " scored stops, six archetypes x 5 seeds"};
}

Verdict noise_monotonicity() {
    Verdict v;
    std::ostringstream detail;
    for (const auto& arch : kArchetypes) {
        const std::vector<double> t_default = default_t_list(arch.scene_size);
        const double hi = t_default.back();
        const double hi_prev = t_default[t_default.size() - 2];
        SweepConfig c;
        c.t_list = {0.1, hi_prev, hi};
        c.r_list = {0.0};
        c.seeds = 100;
        c.base_seed = RandomSeed{1};
        const SweepResult rows = run_archetype_noise_sweep(arch, c);
        const double low = mean_accuracy(select_rows(rows, 0.1, 0.0)).value_or(0.0);
        const double high = mean_accuracy(select_rows(rows, hi, 0.0)).value_or(0.0);
        const double prev = mean_accuracy(select_rows(rows, hi_prev, 0.0)).value_or(0.0);
        const bool drop_ok = low - high >= 0.2;
        const bool plateau_ok = std::abs(high - prev) <= 0.05;
        v.pass = v.pass && drop_ok && plateau_ok;
        detail << arch.name << " " << fmt(low, 3) << "->" << fmt(high, 3) << " (|" << format_number(hi_prev) << " vs "
               << fmt(hi, 2) << "|=" << fmt(std::abs(high - prev), 3) << ")" << (drop_ok && plateau_ok ? "" : " !")
               << "; ";
    }
    v.detail = detail.str() + "100 seeds each";
    return v;
}

Verdict sparse_beats_clustered() {
    SweepConfig c;
    c.t_list = {0.3};
    c.r_list = {15.0};
    c.seeds = 50;
    c.base_seed = RandomSeed{1};
    const double l1 = mean_accuracy(run_archetype_noise_sweep(*find_archetype("L1"), c)).value_or(0.0);
    const double l2 = mean_accuracy(run_archetype_noise_sweep(*find_archetype("L2"), c)).value_or(0.0);
    return {l2 >= l1, "L2 " + fmt(l2) + " vs L1 " + fmt(l1) + " at T(0,0.3)/R(0,15), 50 seeds"};
}

Verdict threshold_tradeoff() {
    SweepConfig c;
    c.seeds = 3;
    c.base_seed = RandomSeed{8};
    c.weights = CostWeights{2.52, 1.0};
    const SweepResult rows = run_archetype_threshold_sweep(*find_archetype("H1"), c);

    const std::size_t per_stop = threshold_grid().size();
    for (std::size_t k = 0; k + per_stop <= rows.size(); k += per_stop)
        for (std::size_t t = 1; t < per_stop; ++t)
            if (rows[k + t].m < rows[k + t - 1].m)
                return {false, "candidate count decreased at replicate " + std::to_string(rows[k].replicate) +
                                   " stop " + std::to_string(rows[k].stop)};

    double time_full = 0, time_quarter = 0, acc_full = 0, acc_low = 0;
    for (const auto& s : aggregate_thresholds(rows)) {
        if (std::abs(s.threshold - 1.0) < 1e-9) time_full = s.solve_ms, acc_full = s.accuracy;
        if (std::abs(s.threshold - 0.25) < 1e-9) time_quarter = s.solve_ms;
        if (std::abs(s.threshold - 0.05) < 1e-9) acc_low = s.accuracy;
    }
    const bool ok = time_full > time_quarter && acc_full >= acc_low;
    return {ok, "candidates monotone; time t=1.0 " + fmt(time_full, 4) + " ms vs t=0.25 " + fmt(time_quarter, 4) +
                    " ms; accuracy t=1.0 " + fmt(acc_full) + " vs t=0.05 " + fmt(acc_low) + "; H1, 3 seeds"};
}

Verdict determinism() {
    SweepConfig c;
    c.t_list = {0.1, 0.5, 2.0};
    c.r_list = {0.0, 30.0};
    c.seeds = 3;
    c.base_seed = RandomSeed{99};
    auto noise_csvs = [&] {
        const SweepResult rows = run_archetype_noise_sweep(*find_archetype("M1"), c);
        return strip_csv_column(rows_to_csv(rows), kTimingColumn) + cells_to_csv(aggregate_cells(rows)) +
               bands_to_csv(aggregate_bands(rows)) + translation_to_csv(aggregate_translation(rows));
    };
    SweepConfig t = c;
    t.seeds = 1;
    auto threshold_csvs = [&] {
        const SweepResult rows = run_archetype_threshold_sweep(*find_archetype("L2"), t);
        return strip_csv_column(rows_to_csv(rows), kTimingColumn) +
               strip_csv_column(thresholds_to_csv(aggregate_thresholds(rows)), 3);
    };
    const bool noise_ok = noise_csvs() == noise_csvs();
    const bool threshold_ok = threshold_csvs() == threshold_csvs();
    return {noise_ok && threshold_ok, std::string("noise sweep CSVs ") + (noise_ok ? "identical" : "differ") +
                                          ", threshold sweep CSVs " + (threshold_ok ? "identical" : "differ") +
                                          " (timing columns excluded)"};
}

}  // namespace

int main() {
    const std::pair<const char*, std::function<Verdict()>> criteria[] = {
        {"ten-site pruning example", ten_site_pruning},
        {"cost formula suite", cost_formulas},
        {"solver oracle equivalence", solver_oracle},
        {"zero-noise correctness", zero_noise},
        {"noise monotonicity and plateau", noise_monotonicity},
        {"sparse office beats clustered restaurant", sparse_beats_clustered},
        {"threshold trade-off", threshold_tradeoff},
        {"sweep determinism", determinism},
    };
    int failures = 0;
    int index = 0;
    for (const auto& [name, check] : criteria) {
        ++index;
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = check();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s %d %s: %s [%.1f s]\n", v.pass ? "PASS" : "FAIL", index, name, v.detail.c_str(), secs);
        std::fflush(stdout);
        failures += v.pass ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}
