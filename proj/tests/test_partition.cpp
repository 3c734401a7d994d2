#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "support.hpp"

using namespace idtrack;

namespace {

// Ten-site example: the nine non-containing sites around containing site S5.
const std::vector<std::pair<std::string, double>> kTenSiteProbabilities = {
    {"S6", 0.214}, {"S3", 0.150}, {"S10", 0.129}, {"S9", 0.110}, {"S2", 0.109},
    {"S4", 0.080}, {"S7", 0.076}, {"S1", 0.067},  {"S8", 0.065}};
const std::vector<double> kTenSiteCumulative = {0.214, 0.364, 0.494, 0.604, 0.713, 0.793, 0.868, 0.935, 1.000};

SiteProbabilities ten_site_probabilities() {
    SiteProbabilities p;
    p.containing_site = "S5";
    for (std::size_t k = 0; k < kTenSiteProbabilities.size(); ++k)
        p.entries.push_back({kTenSiteProbabilities[k].first, 0.0, kTenSiteProbabilities[k].second, kTenSiteCumulative[k]});
    return p;
}

// Sites whose inverse distances are proportional to the ten-site example
// probabilities, with S5 closest to the camera at the origin.
std::vector<VoronoiSite> ten_site_layout() {
    std::vector<VoronoiSite> sites{{"S5", {0.5, 0.0}}};
    double angle = 0.0;
    for (const auto& [id, p] : kTenSiteProbabilities) {
        angle += 37.0;
        sites.push_back({id, heading_vector(angle) * (1.0 / p)});
    }
    return sites;
}

std::vector<VoronoiSite> random_sites(Rng& rng, std::size_t n) {
    std::vector<VoronoiSite> s;
    for (std::size_t k = 0; k < n; ++k) s.push_back({"S" + std::to_string(k), {rng.uniform(0, 20), rng.uniform(0, 20)}});
    return s;
}

}  // namespace

TEST(SiteDistances, Examples) {
    const std::vector<VoronoiSite> sites{{"A", {3, 4}}, {"B", {1, 0}}, {"C", {2, 0}}};
    const auto d = site_distances(Vec2{0, 0}, sites);
    EXPECT_DOUBLE_EQ(d[0].distance, 5.0);
    EXPECT_DOUBLE_EQ(d[1].distance, 1.0);
    EXPECT_DOUBLE_EQ(d[2].distance, 2.0);
    EXPECT_DOUBLE_EQ(site_distances(Vec2{3, 4}, sites)[0].distance, 0.0);
}

TEST(ContainingSite, Examples) {
    EXPECT_EQ(containing_site(Vec2{100, 100}, {{"only", {0, 0}}}), "only");
    const std::vector<VoronoiSite> sites{{"B", {2, 0}}, {"A", {-2, 0}}, {"C", {0, 5}}};
    EXPECT_EQ(containing_site(Vec2{0, 5}, sites), "C");
    EXPECT_EQ(containing_site(Vec2{0, 0}, sites), "A");  // tie between A and B
}

TEST(SiteProbabilities, EqualDistancesSplitEvenly) {
    const std::vector<VoronoiSite> sites{{"home", {0, 1}}, {"x", {2, 0}}, {"y", {-2, 0}}};
    const auto p = site_probabilities(Vec2{0, 0}, sites);
    EXPECT_EQ(p.containing_site, "home");
    ASSERT_EQ(p.entries.size(), 2u);
    EXPECT_DOUBLE_EQ(p.entries[0].probability, 0.5);
    EXPECT_DOUBLE_EQ(p.entries[1].probability, 0.5);
    EXPECT_EQ(p.entries[0].site_id, "x");  // tie ordered by id
}

TEST(SiteProbabilities, InverseDistanceRatio) {
    // (1/1) / (1/1 + 1/3) = 3/4, (1/3) / (4/3) = 1/4
    const std::vector<VoronoiSite> sites{{"home", {0, 0.5}}, {"near", {1, 0}}, {"far", {0, -3}}};
    const auto p = site_probabilities(Vec2{0, 0}, sites);
    ASSERT_EQ(p.entries.size(), 2u);
    EXPECT_EQ(p.entries[0].site_id, "near");
    EXPECT_NEAR(p.entries[0].probability, 0.75, 1e-12);
    EXPECT_NEAR(p.entries[1].probability, 0.25, 1e-12);
    EXPECT_NEAR(p.entries[1].cumulative, 1.0, 1e-12);
}

TEST(SiteProbabilities, ReproducesTenSiteExampleFromDistances) {
    const auto p = site_probabilities(Vec2{0, 0}, ten_site_layout());
    EXPECT_EQ(p.containing_site, "S5");
    ASSERT_EQ(p.entries.size(), kTenSiteProbabilities.size());
    for (std::size_t k = 0; k < kTenSiteProbabilities.size(); ++k) {
        EXPECT_EQ(p.entries[k].site_id, kTenSiteProbabilities[k].first);
        EXPECT_NEAR(p.entries[k].probability, kTenSiteProbabilities[k].second, 5e-4);
        EXPECT_NEAR(p.entries[k].cumulative, kTenSiteCumulative[k], 1.5e-3);
    }
}

TEST(SiteProbabilities, SingleSiteHasNoEntries) {
    const auto p = site_probabilities(Vec2{1, 1}, {{"only", {0, 0}}});
    EXPECT_EQ(p.containing_site, "only");
    EXPECT_TRUE(p.entries.empty());
    EXPECT_EQ(prune_sites(p, PruneThreshold(0.0)), std::set<std::string>{"only"});
    EXPECT_EQ(prune_sites(p, PruneThreshold(1.0)), std::set<std::string>{"only"});
}

TEST(SiteProbabilities, ZeroDistanceNonContainingTakesAllMass) {
    // Two sites share a center; "a" wins the tie, "b" sits at distance 0.
    const std::vector<VoronoiSite> sites{{"b", {1, 1}}, {"a", {1, 1}}, {"c", {5, 5}}};
    const auto p = site_probabilities(Vec2{1, 1}, sites);
    EXPECT_EQ(p.containing_site, "a");
    EXPECT_EQ(p.entries[0].site_id, "b");
    EXPECT_DOUBLE_EQ(p.entries[0].probability, 1.0);
    EXPECT_DOUBLE_EQ(p.entries[1].probability, 0.0);
}

TEST(SiteProbabilities, SumToOneAndScaleInvariant) {
    Rng rng(RandomSeed{7});
    for (int trial = 0; trial < 500; ++trial) {
        const auto sites = random_sites(rng, 2 + rng.below(12));
        const Vec2 cam{rng.uniform(0, 20), rng.uniform(0, 20)};
        const auto p = site_probabilities(cam, sites);
        double sum = 0.0;
        for (std::size_t k = 0; k < p.entries.size(); ++k) {
            sum += p.entries[k].probability;
            if (k > 0) EXPECT_GE(p.entries[k - 1].probability, p.entries[k].probability);
        }
        EXPECT_NEAR(sum, 1.0, 1e-9);
        EXPECT_NEAR(p.entries.back().cumulative, 1.0, 1e-9);

        const double c = rng.uniform(0.01, 100.0);
        std::vector<VoronoiSite> scaled = sites;
        for (auto& s : scaled) s.center = s.center * c;
        const auto q = site_probabilities(cam * c, scaled);
        ASSERT_EQ(q.containing_site, p.containing_site);
        std::map<std::string, double> by_id;
        for (const auto& e : p.entries) by_id[e.site_id] = e.probability;
        for (const auto& e : q.entries) EXPECT_NEAR(e.probability, by_id[e.site_id], 1e-12);
    }
}

TEST(PruneSites, TenSiteExampleThresholds) {
    const auto p = ten_site_probabilities();
    EXPECT_EQ(prune_sites(p, PruneThreshold(0.0)), std::set<std::string>{"S5"});
    const std::set<std::string> five{"S5", "S6", "S3", "S10", "S9"};
    EXPECT_EQ(prune_sites(p, PruneThreshold(0.50)), five);
    EXPECT_EQ(prune_sites(p, PruneThreshold(0.55)), five);
    EXPECT_EQ(prune_sites(p, PruneThreshold(0.60)), five);
    EXPECT_EQ(prune_sites(p, PruneThreshold(1.0)).size(), 10u);
}

TEST(PruneSites, MonotoneInThreshold) {
    Rng rng(RandomSeed{8});
    for (int trial = 0; trial < 300; ++trial) {
        const auto sites = random_sites(rng, 2 + rng.below(10));
        const auto p = site_probabilities(Vec2{rng.uniform(0, 20), rng.uniform(0, 20)}, sites);
        EXPECT_EQ(prune_sites(p, PruneThreshold(0.0)).size(), 1u);
        EXPECT_EQ(prune_sites(p, PruneThreshold(1.0)).size(), sites.size());
        std::set<std::string> prev;
        for (int k = 0; k <= 20; ++k) {
            const auto cur = prune_sites(p, PruneThreshold(k / 20.0));
            EXPECT_TRUE(std::includes(cur.begin(), cur.end(), prev.begin(), prev.end()));
            prev = cur;
        }
    }
}

TEST(PruneThresholdType, RejectsOutOfRange) {
    EXPECT_THROW(PruneThreshold(-0.1), ValidationError);
    EXPECT_THROW(PruneThreshold(1.5), ValidationError);
    EXPECT_THROW(PruneThreshold(std::nan("")), ValidationError);
}

TEST(CandidateLabels, Examples) {
    SceneLayout s;
    s.bounds = {10, 10};
    s.sites = {{"first", {0, 0}}, {"second", {10, 0}}};
    s.objects = {idtrack::testing::object("b", 9, 0), idtrack::testing::object("a", 1, 0)};

    const auto first = candidate_labels(s, {"first"});
    ASSERT_EQ(first.size(), 1u);
    EXPECT_EQ(first[0].label, "a");

    const auto all = candidate_labels(s, {"first", "second"});
    ASSERT_EQ(all.size(), 2u);
    EXPECT_EQ(all[0].label, "a");  // ordered by label
    EXPECT_EQ(all[1].label, "b");

    SceneLayout one = s;
    one.sites = {{"only", {5, 5}}};
    EXPECT_EQ(candidate_labels(one, {"only"}).size(), 2u);
}
