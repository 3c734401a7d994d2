#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "idtrack/errors.hpp"
#include "idtrack/scene.hpp"

namespace idtrack {

/// Relative weights of the translation and rotation terms.
struct CostWeights {
    double translation = 1.0;
    double rotation = 1.0;

    friend bool operator==(const CostWeights&, const CostWeights&) = default;
};

inline void validate(const CostWeights& w) {
    detail::require(std::isfinite(w.translation) && std::isfinite(w.rotation) && w.translation >= 0.0 &&
                        w.rotation >= 0.0 && w.translation + w.rotation > 0.0,
                    "weights must satisfy w_t >= 0, w_r >= 0, w_t + w_r > 0");
}

/// Translation weight 0.36 * sqrt(floor area), rotation weight 1.
inline CostWeights default_weights(const SceneBounds& bounds) {
    return {0.36 * std::sqrt(bounds.area()), 1.0};
}

/// Planar displacement normalized by the scene diagonal. Not clamped: a
/// detection outside the original bounds may cost more than 1.
inline double translation_cost(const PlanarPose& possible, const PlanarPose& detected, const SceneBounds& bounds) {
    return std::hypot(possible.x - detected.x, possible.z - detected.z) / bounds.diagonal();
}

/// sin(|yaw_a - yaw_b| * pi / 360) on yaws wrapped into [0, 360). The sine
/// is symmetric about 180 degrees, so no shortest-arc folding is needed.
inline double rotation_cost(double yaw_possible, double yaw_detected) {
    const double delta = std::abs(normalize_degrees(yaw_possible) - normalize_degrees(yaw_detected));
    return std::sin(delta * std::numbers::pi / 360.0);
}

/// Product of per-axis max/min ratios, minimized over the six ways of
/// matching the detected box's axes to the possible box's axes.
inline double dimension_cost(const BoxDims& possible, const BoxDims& detected) {
    const std::array<double, 3> a{possible.w, possible.h, possible.d};
    std::array<double, 3> b{detected.w, detected.h, detected.d};
    std::sort(b.begin(), b.end());
    double best = std::numeric_limits<double>::infinity();
    do {
        double c = 1.0;
        for (std::size_t k = 0; k < 3; ++k) c *= std::max(a[k], b[k]) / std::min(a[k], b[k]);
        best = std::min(best, c);
    } while (std::next_permutation(b.begin(), b.end()));
    return best;
}

inline double total_cost(double c_t, double c_r, double c_d, const CostWeights& w) {
    return c_d * (w.translation * c_t + w.rotation * c_r);
}

struct CostBreakdown {
    double translation = 0.0;
    double rotation = 0.0;
    double dimension = 1.0;
    double total = 0.0;
};

inline CostBreakdown pair_cost(const ObjectInstance& possible, const Detection& detected, const SceneBounds& bounds,
                               const CostWeights& w) {
    CostBreakdown c;
    c.translation = translation_cost(possible.pose, detected.pose, bounds);
    c.rotation = rotation_cost(possible.pose.yaw, detected.pose.yaw);
    c.dimension = dimension_cost(possible.dims, detected.dims);
    c.total = total_cost(c.translation, c.rotation, c.dimension, w);
    return c;
}

/// Dense N x M matrix of pair costs: rows are detections, columns candidate labels.
/// Row and column categories drive per-type solving.
class CostMatrix {
public:
    CostMatrix() = default;

    CostMatrix(std::vector<std::size_t> detection_indices, std::vector<std::string> candidate_labels,
               std::vector<CostBreakdown> cells)
        : rows_(std::move(detection_indices)), cols_(std::move(candidate_labels)), cells_(std::move(cells)) {
        if (cells_.size() != rows_.size() * cols_.size())
            throw ValidationError("invariant violated: cost matrix cell count must equal N * M");
        for (const auto& c : cells_)
            if (!std::isfinite(c.total)) throw ValidationError("invariant violated: cost matrix cells must be finite");
        row_categories_.assign(rows_.size(), std::string{});
        col_categories_.assign(cols_.size(), std::string{});
    }

    /// Matrix holding only totals, convenient for solver tests.
    static CostMatrix from_totals(const std::vector<std::vector<double>>& totals) {
        const std::size_t n = totals.size();
        const std::size_t m = n == 0 ? 0 : totals.front().size();
        std::vector<std::size_t> rows(n);
        std::vector<std::string> cols(m);
        std::vector<CostBreakdown> cells;
        cells.reserve(n * m);
        for (std::size_t i = 0; i < n; ++i) {
            rows[i] = i;
            if (totals[i].size() != m) throw ValidationError("invariant violated: cost matrix rows must have equal length");
            for (double t : totals[i]) cells.push_back({0.0, 0.0, 1.0, t});
        }
        for (std::size_t j = 0; j < m; ++j) cols[j] = "c" + std::to_string(j);
        return CostMatrix(std::move(rows), std::move(cols), std::move(cells));
    }

    std::size_t rows() const { return rows_.size(); }
    std::size_t cols() const { return cols_.size(); }

    const CostBreakdown& cell(std::size_t i, std::size_t j) const { return cells_[i * cols_.size() + j]; }
    double total(std::size_t i, std::size_t j) const { return cell(i, j).total; }

    std::size_t detection_index(std::size_t i) const { return rows_[i]; }
    const std::string& candidate_label(std::size_t j) const { return cols_[j]; }
    const std::vector<std::string>& candidate_labels() const { return cols_; }

    const std::string& row_category(std::size_t i) const { return row_categories_[i]; }
    const std::string& col_category(std::size_t j) const { return col_categories_[j]; }

    void set_categories(std::vector<std::string> row_categories, std::vector<std::string> col_categories) {
        if (row_categories.size() != rows() || col_categories.size() != cols())
            throw ValidationError("invariant violated: category vectors must match matrix shape");
        row_categories_ = std::move(row_categories);
        col_categories_ = std::move(col_categories);
    }

    CostMatrix scaled(double factor) const {
        CostMatrix out = *this;
        for (auto& c : out.cells_) c.total *= factor;
        return out;
    }

private:
    std::vector<std::size_t> rows_;
    std::vector<std::string> cols_;
    std::vector<CostBreakdown> cells_;
    std::vector<std::string> row_categories_;
    std::vector<std::string> col_categories_;
};

/// Rows follow `detections` order, columns follow `candidates` order.
/// Unknown detection types are recorded as an empty category.
inline CostMatrix build_cost_matrix(const std::vector<Detection>& detections,
                                    const std::vector<ObjectInstance>& candidates, const SceneBounds& bounds,
                                    const CostWeights& weights) {
    std::vector<std::size_t> rows(detections.size());
    std::vector<std::string> cols(candidates.size());
    std::vector<std::string> row_cat(detections.size());
    std::vector<std::string> col_cat(candidates.size());
    std::vector<CostBreakdown> cells;
    cells.reserve(detections.size() * candidates.size());
    for (std::size_t i = 0; i < detections.size(); ++i) {
        rows[i] = i;
        row_cat[i] = detections[i].object_type.value_or("");
        for (const auto& c : candidates) cells.push_back(pair_cost(c, detections[i], bounds, weights));
    }
    for (std::size_t j = 0; j < candidates.size(); ++j) {
        cols[j] = candidates[j].label;
        col_cat[j] = candidates[j].object_type;
    }
    CostMatrix m(std::move(rows), std::move(cols), std::move(cells));
    m.set_categories(std::move(row_cat), std::move(col_cat));
    return m;
}

}  // namespace idtrack
