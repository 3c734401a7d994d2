#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "support.hpp"

using namespace idtrack;

namespace {

using Matrix = std::vector<std::vector<double>>;

AssignmentProblem problem_of(const Matrix& m) { return {CostMatrix::from_totals(m), false}; }

Matrix random_matrix(Rng& rng, std::size_t n, std::size_t m, bool integer) {
    Matrix a(n, std::vector<double>(m));
    for (auto& row : a)
        for (double& v : row) v = integer ? static_cast<double>(rng.below(4)) : rng.uniform(0, 10);
    return a;
}

std::vector<std::string> labels_of(const AssignmentResult& r) {
    std::vector<std::string> out;
    for (const auto& p : r.pairs) out.push_back(p.label);
    return out;
}

// Column index sequence of the cheapest injective map, ties broken by the
// lexicographically smallest sequence; enumerated with std::next_permutation.
std::pair<double, std::vector<std::size_t>> enumerate_optimum(const Matrix& a) {
    const std::size_t n = a.size(), m = n ? a[0].size() : 0;
    std::vector<std::size_t> cols(m);
    std::iota(cols.begin(), cols.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    std::set<std::vector<std::size_t>> seen;
    std::vector<std::pair<double, std::vector<std::size_t>>> all;
    do {
        std::vector<std::size_t> pick(cols.begin(), cols.begin() + static_cast<long>(n));
        if (!seen.insert(pick).second) continue;
        double c = 0;
        for (std::size_t i = 0; i < n; ++i) c += a[i][pick[i]];
        all.push_back({c, pick});
        best = std::min(best, c);
    } while (std::next_permutation(cols.begin(), cols.end()));
    std::vector<std::size_t> lex;
    for (const auto& [c, pick] : all)
        if (c <= best + 1e-9 * std::max(1.0, std::abs(best)) && (lex.empty() || pick < lex)) lex = pick;
    return {best, lex};
}

void expect_valid(const AssignmentResult& r, const CostMatrix& m) {
    ASSERT_EQ(r.pairs.size(), m.rows());
    std::set<std::string> used;
    double sum = 0;
    for (std::size_t i = 0; i < r.pairs.size(); ++i) {
        EXPECT_EQ(r.pairs[i].detection, i);
        EXPECT_TRUE(used.insert(r.pairs[i].label).second) << "label used twice";
        const auto& labels = m.candidate_labels();
        const auto j = static_cast<std::size_t>(std::find(labels.begin(), labels.end(), r.pairs[i].label) - labels.begin());
        ASSERT_LT(j, m.cols());
        sum += m.total(i, j);
    }
    EXPECT_DOUBLE_EQ(r.total_cost, sum);
}

}  // namespace

TEST(Solve, SingleCell) {
    const auto r = solve(problem_of({{3.5}}));
    ASSERT_EQ(r.pairs.size(), 1u);
    EXPECT_EQ(r.pairs[0].label, "c0");
    EXPECT_DOUBLE_EQ(r.total_cost, 3.5);
    EXPECT_EQ(labels_of(brute_force_solve(problem_of({{3.5}}))), labels_of(r));
}

TEST(Solve, TwoByTwoDiagonal) {
    const auto r = brute_force_solve(problem_of({{0, 1}, {1, 0}}));
    EXPECT_EQ(labels_of(r), (std::vector<std::string>{"c0", "c1"}));
    EXPECT_DOUBLE_EQ(r.total_cost, 0.0);
    EXPECT_EQ(labels_of(solve(problem_of({{0, 1}, {1, 0}}))), labels_of(r));
}

TEST(Solve, ThreeByThreeByHand) {
    // All six permutations:
    // 012: 4+0+2=6, 021: 4+5+2=11, 102: 1+2+2=5, 120: 1+5+3=9, 201: 3+2+2=7, 210: 3+0+3=6
    const Matrix a{{4, 1, 3}, {2, 0, 5}, {3, 2, 2}};
    for (const auto& r : {solve(problem_of(a)), brute_force_solve(problem_of(a))}) {
        EXPECT_EQ(labels_of(r), (std::vector<std::string>{"c1", "c0", "c2"}));
        EXPECT_DOUBLE_EQ(r.total_cost, 5.0);
    }
}

TEST(Solve, EmptyProblem) {
    const auto r = solve(problem_of({}));
    EXPECT_TRUE(r.pairs.empty());
    EXPECT_DOUBLE_EQ(r.total_cost, 0.0);
}

TEST(Solve, IdenticalDetectionsGiveIdentity) {
    const SceneLayout s = generate_scene(*find_archetype("H1"), RandomSeed{4});
    std::vector<Detection> dets;
    for (const auto& o : s.objects) dets.push_back(idtrack::testing::detection_of(o));
    const auto r = solve({build_cost_matrix(dets, s.objects, s.bounds, default_weights(s.bounds)), false});
    for (std::size_t i = 0; i < dets.size(); ++i) EXPECT_EQ(r.pairs[i].label, s.objects[i].label);
    EXPECT_DOUBLE_EQ(r.total_cost, 0.0);
}

TEST(Solve, MatchesEnumerationOnRandomMatrices) {
    Rng rng(RandomSeed{5});
    for (int trial = 0; trial < 1000; ++trial) {
        const Matrix a = random_matrix(rng, 5, 7, false);
        const auto p = problem_of(a);
        const auto r = solve(p);
        const auto b = brute_force_solve(p);
        expect_valid(r, p.matrix);
        ASSERT_NEAR(r.total_cost, b.total_cost, 1e-9) << "trial " << trial;
        const auto [best, lex] = enumerate_optimum(a);
        EXPECT_NEAR(r.total_cost, best, 1e-9);
    }
}

TEST(Solve, TieBreakIsLexicographicOnIntegerMatrices) {
    Rng rng(RandomSeed{6});
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 1 + rng.below(6);
        const std::size_t m = n + rng.below(3);
        const Matrix a = random_matrix(rng, n, m, true);
        const auto [best, lex] = enumerate_optimum(a);
        std::vector<std::string> expected;
        for (std::size_t j : lex) expected.push_back("c" + std::to_string(j));
        const auto p = problem_of(a);
        ASSERT_EQ(labels_of(solve(p)), expected) << "trial " << trial;
        ASSERT_EQ(labels_of(brute_force_solve(p)), expected) << "trial " << trial;
    }
}

TEST(Solve, ScalingLeavesPairsUnchanged) {
    Rng rng(RandomSeed{7});
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 1 + rng.below(7);
        const Matrix a = random_matrix(rng, n, n + rng.below(4), trial % 2 == 0);
        const AssignmentProblem p = problem_of(a);
        const double c = rng.uniform(0.1, 50.0);
        EXPECT_EQ(labels_of(solve(p)), labels_of(solve({p.matrix.scaled(c), false})));
    }
}

TEST(Solve, MoreColumnsNeverHurt) {
    Rng rng(RandomSeed{8});
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 1 + rng.below(6);
        const Matrix full = random_matrix(rng, n, n + 4, false);
        double prev = std::numeric_limits<double>::infinity();
        for (std::size_t m = n; m <= n + 4; ++m) {
            Matrix sub = full;
            for (auto& row : sub) row.resize(m);
            const double c = solve(problem_of(sub)).total_cost;
            EXPECT_LE(c, prev + 1e-9);
            prev = c;
        }
    }
}

TEST(Solve, LargerThanOracleStillValid) {
    Rng rng(RandomSeed{9});
    const Matrix a = random_matrix(rng, 40, 55, false);
    const auto p = problem_of(a);
    expect_valid(solve(p), p.matrix);
    EXPECT_THROW(brute_force_solve(p), SizeLimitError);
    EXPECT_THROW(brute_force_solve(problem_of(random_matrix(rng, 2, 11, false))), SizeLimitError);
    EXPECT_NO_THROW(brute_force_solve(problem_of(random_matrix(rng, 8, 10, false))));
}

TEST(Solve, InfeasibleCarriesCounts) {
    const auto p = problem_of({{1, 2}, {3, 4}, {5, 6}});
    try {
        solve(p);
        FAIL() << "expected InfeasibleError";
    } catch (const InfeasibleError& e) {
        EXPECT_EQ(e.detections(), 3u);
        EXPECT_EQ(e.candidates(), 2u);
        EXPECT_EQ(e.category(), "");
    }
    EXPECT_THROW(brute_force_solve(p), InfeasibleError);
}

TEST(Solve, CategorySeparatedKeepsTypesApart) {
    // Detection 0 is a chair sitting right on the table's cell.
    AssignmentProblem p{CostMatrix::from_totals({{5, 0, 9}, {1, 2, 3}}), true};
    p.matrix.set_categories({"chair", "table"}, {"chair", "table", "chair"});
    const auto r = solve(p);
    EXPECT_EQ(labels_of(r), (std::vector<std::string>{"c0", "c1"}));
    EXPECT_DOUBLE_EQ(r.total_cost, 7.0);
    EXPECT_EQ(labels_of(brute_force_solve(p)), labels_of(r));

    p.category_separated = false;
    EXPECT_DOUBLE_EQ(solve(p).total_cost, 1.0);  // c1 then c0
}

TEST(Solve, CategorySeparatedInfeasibleNamesCategory) {
    AssignmentProblem p{CostMatrix::from_totals({{1, 1, 1}, {1, 1, 1}}), true};
    p.matrix.set_categories({"table", "table"}, {"chair", "table", "chair"});
    try {
        solve(p);
        FAIL() << "expected InfeasibleError";
    } catch (const InfeasibleError& e) {
        EXPECT_EQ(e.category(), "table");
        EXPECT_EQ(e.detections(), 2u);
        EXPECT_EQ(e.candidates(), 1u);
    }
}
