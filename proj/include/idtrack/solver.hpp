#pragma once

// Exact solver for the label-assignment integer program
//
//   min  sum_ij C[i][j] * A[i][j]
//   s.t. sum_j A[i][j] = 1   for every detection i
//        sum_i A[i][j] <= 1  for every candidate j
//
// The constraint matrix is totally unimodular, so a rectangular Hungarian
// method yields an integral optimum. Ties between optimal assignments are
// broken towards the lexicographically smallest column sequence, both here
// and in the exhaustive oracle.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "idtrack/cost.hpp"
#include "idtrack/errors.hpp"

namespace idtrack {

struct AssignmentProblem {
    CostMatrix matrix;
    bool category_separated = false;
};

struct AssignedPair {
    std::size_t detection = 0;  ///< index into the observation's detections
    std::string label;
    CostBreakdown cost;
};

struct AssignmentResult {
    std::vector<AssignedPair> pairs;  ///< sorted by detection index
    double total_cost = 0.0;
    std::size_t pruned_site_count = 0;
    std::size_t candidate_count = 0;
    double threshold = 1.0;            ///< requested pruning threshold
    double effective_threshold = 1.0;  ///< after raising for feasibility

    /// Label assigned to `detection`, or nullptr when absent.
    const std::string* label_for(std::size_t detection) const {
        for (const auto& p : pairs)
            if (p.detection == detection) return &p.label;
        return nullptr;
    }
};

namespace detail {

/// Row-major dense cost block, n <= m.
struct DenseCosts {
    std::size_t n = 0;
    std::size_t m = 0;
    std::vector<double> c;

    double at(std::size_t i, std::size_t j) const { return c[i * m + j]; }
};

inline double tie_tolerance(double optimum) { return 1e-9 * std::max(1.0, std::abs(optimum)); }

inline double assignment_cost(const DenseCosts& a, const std::vector<std::size_t>& cols) {
    double s = 0.0;
    for (std::size_t i = 0; i < cols.size(); ++i) s += a.at(i, cols[i]);
    return s;
}

struct HungarianOutput {
    std::vector<std::size_t> cols;  ///< column per row
    std::vector<double> u;          ///< row duals
    std::vector<double> v;          ///< column duals, <= 0, zero on unmatched columns
};

/// Shortest-augmenting-path Hungarian method for n <= m, O(n^2 m).
inline HungarianOutput hungarian(const DenseCosts& a) {
    const std::size_t n = a.n;
    const std::size_t m = a.m;
    constexpr double inf = std::numeric_limits<double>::infinity();

    // 1-based internally; column 0 is the virtual source.
    std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
    std::vector<std::size_t> owner(m + 1, 0), way(m + 1, 0);
    std::vector<double> minv(m + 1);
    std::vector<char> used(m + 1);

    for (std::size_t i = 1; i <= n; ++i) {
        owner[0] = i;
        std::size_t j0 = 0;
        std::fill(minv.begin(), minv.end(), inf);
        std::fill(used.begin(), used.end(), 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = owner[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= m; ++j) {
                if (used[j]) continue;
                const double cur = a.at(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= m; ++j) {
                if (used[j]) {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (owner[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    HungarianOutput out;
    out.cols.assign(n, 0);
    for (std::size_t j = 1; j <= m; ++j)
        if (owner[j] != 0) out.cols[owner[j] - 1] = j - 1;
    out.u.assign(u.begin() + 1, u.end());
    out.v.assign(v.begin() + 1, v.end());
    return out;
}

/// Optimal assignment, then greedy row-by-row lowering of each row's column
/// to the smallest one that still admits a completion within tolerance of
/// the optimum. Dual feasibility bounds every near-optimal assignment's
/// reduced costs, so only near-tight edges need the exact re-solve.
inline std::vector<std::size_t> solve_dense(const DenseCosts& a) {
    if (a.n == 0) return {};
    HungarianOutput h = hungarian(a);
    std::vector<std::size_t> cols = h.cols;
    const double optimum = assignment_cost(a, cols);
    const double tol = tie_tolerance(optimum);

    double scale = 1.0;
    for (double x : a.c) scale = std::max(scale, std::abs(x));
    const double tight = tol + 1e-9 * scale;

    std::vector<char> fixed_col(a.m, 0);
    for (std::size_t i = 0; i < a.n; ++i) {
        for (std::size_t j = 0; j < cols[i]; ++j) {
            if (fixed_col[j]) continue;
            if (a.at(i, j) - h.u[i] - h.v[j] > tight) continue;

            // Best completion of rows i+1.. over the columns still free.
            std::vector<std::size_t> free_cols;
            for (std::size_t k = 0; k < a.m; ++k)
                if (!fixed_col[k] && k != j) free_cols.push_back(k);
            DenseCosts sub;
            sub.n = a.n - i - 1;
            sub.m = free_cols.size();
            sub.c.reserve(sub.n * sub.m);
            for (std::size_t r = i + 1; r < a.n; ++r)
                for (std::size_t k : free_cols) sub.c.push_back(a.at(r, k));
            const std::vector<std::size_t> sub_cols = sub.n == 0 ? std::vector<std::size_t>{} : hungarian(sub).cols;

            std::vector<std::size_t> trial = cols;
            trial[i] = j;
            for (std::size_t r = 0; r < sub.n; ++r) trial[i + 1 + r] = free_cols[sub_cols[r]];
            if (assignment_cost(a, trial) <= optimum + tol) {
                cols = std::move(trial);
                break;
            }
        }
        fixed_col[cols[i]] = 1;
    }
    return cols;
}

/// Exhaustive search over injective maps in lexicographic order.
inline std::vector<std::size_t> brute_force_dense(const DenseCosts& a) {
    if (a.n == 0) return {};
    std::vector<std::size_t> cur(a.n), best;
    std::vector<char> used(a.m, 0);
    double best_cost = std::numeric_limits<double>::infinity();

    // Pass 1: the minimum. Pass 2: the first assignment within tolerance of it.
    auto enumerate = [&](auto&& self, std::size_t row, auto&& visit) -> bool {
        if (row == a.n) return visit();
        for (std::size_t j = 0; j < a.m; ++j) {
            if (used[j]) continue;
            used[j] = 1;
            cur[row] = j;
            const bool stop = self(self, row + 1, visit);
            used[j] = 0;
            if (stop) return true;
        }
        return false;
    };
    enumerate(enumerate, 0, [&] {
        best_cost = std::min(best_cost, assignment_cost(a, cur));
        return false;
    });
    const double limit = best_cost + tie_tolerance(best_cost);
    enumerate(enumerate, 0, [&] {
        if (assignment_cost(a, cur) <= limit) {
            best = cur;
            return true;
        }
        return false;
    });
    return best;
}

struct Block {
    std::string category;
    std::vector<std::size_t> rows;
    std::vector<std::size_t> cols;
};

inline std::vector<Block> partition_blocks(const AssignmentProblem& p) {
    const CostMatrix& m = p.matrix;
    if (!p.category_separated) {
        Block b;
        for (std::size_t i = 0; i < m.rows(); ++i) b.rows.push_back(i);
        for (std::size_t j = 0; j < m.cols(); ++j) b.cols.push_back(j);
        return {b};
    }
    std::map<std::string, Block> by_cat;
    for (std::size_t i = 0; i < m.rows(); ++i) by_cat[m.row_category(i)].rows.push_back(i);
    for (std::size_t j = 0; j < m.cols(); ++j) {
        auto it = by_cat.find(m.col_category(j));
        if (it != by_cat.end()) it->second.cols.push_back(j);
    }
    std::vector<Block> out;
    for (auto& [cat, b] : by_cat) {
        b.category = cat;
        out.push_back(std::move(b));
    }
    return out;
}

template <typename DenseSolver>
AssignmentResult solve_with(const AssignmentProblem& problem, DenseSolver&& dense_solver) {
    const CostMatrix& m = problem.matrix;
    std::vector<Block> blocks = partition_blocks(problem);
    for (const auto& b : blocks)
        if (b.rows.size() > b.cols.size())
            throw InfeasibleError(b.rows.size(), b.cols.size(), problem.category_separated ? b.category : "");

    std::vector<std::size_t> assigned(m.rows(), 0);
    for (const auto& b : blocks) {
        DenseCosts d;
        d.n = b.rows.size();
        d.m = b.cols.size();
        d.c.reserve(d.n * d.m);
        for (std::size_t r : b.rows)
            for (std::size_t k : b.cols) d.c.push_back(m.total(r, k));
        const std::vector<std::size_t> cols = dense_solver(d);
        for (std::size_t r = 0; r < b.rows.size(); ++r) assigned[b.rows[r]] = b.cols[cols[r]];
    }

    AssignmentResult out;
    out.candidate_count = m.cols();
    out.pairs.reserve(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        out.pairs.push_back({m.detection_index(i), m.candidate_label(assigned[i]), m.cell(i, assigned[i])});
    std::stable_sort(out.pairs.begin(), out.pairs.end(),
                     [](const AssignedPair& x, const AssignedPair& y) { return x.detection < y.detection; });
    for (const auto& p : out.pairs) out.total_cost += p.cost.total;
    return out;
}

}  // namespace detail

/// Globally optimal assignment. Throws InfeasibleError when some block has
/// more detections than candidates.
inline AssignmentResult solve(const AssignmentProblem& problem) {
    return detail::solve_with(problem, [](const detail::DenseCosts& d) { return detail::solve_dense(d); });
}

inline constexpr std::size_t kBruteForceMaxRows = 8;
inline constexpr std::size_t kBruteForceMaxCols = 10;

/// Reference solver by full enumeration; refuses problems beyond 8 x 10.
inline AssignmentResult brute_force_solve(const AssignmentProblem& problem) {
    const CostMatrix& m = problem.matrix;
    if (m.rows() > kBruteForceMaxRows || m.cols() > kBruteForceMaxCols)
        throw SizeLimitError("brute_force_solve supports at most " + std::to_string(kBruteForceMaxRows) + " x " +
                             std::to_string(kBruteForceMaxCols) + " problems, got " + std::to_string(m.rows()) +
                             " x " + std::to_string(m.cols()));
    return detail::solve_with(problem, [](const detail::DenseCosts& d) { return detail::brute_force_dense(d); });
}

}  // namespace idtrack
