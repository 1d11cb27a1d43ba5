#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "hyperconn/harness.hpp"
#include "oracles.hpp"

using namespace hyperconn;
using namespace hyperconn::harness;

namespace {

ExperimentConfig small_config() {
    ExperimentConfig cfg;
    cfg.trials = 400;
    cfg.master_seed = 17;
    cfg.grid = {
        {"custom", ModelSpec{RegularShotgun{60, 70, 3}}, std::nullopt},
        {"custom", ModelSpec{GivenSizes{SizeCounts{10, {{2, 8}, {3, 3}}}}}, std::nullopt},
        {"custom", ModelSpec{IntersectionGraph{SizeDistribution::from_pairs(30, {{2, 0.6}, {5, 0.4}}), 25}}, 1.5},
        {"custom", ModelSpec{RegularHypergraph{12, 20, 2}}, std::nullopt},
    };
    return cfg;
}

double exact_rate(std::uint32_t n, std::uint32_t x, std::uint32_t k) {
    const auto cls = oracle::uniform_class(n, x, k);
    std::size_t connected = 0;
    for (const auto& h : cls) connected += oracle::partition_connected(n, h);
    return static_cast<double>(connected) / static_cast<double>(cls.size());
}

}  // namespace

TEST(Wilson, Edges) {
    EXPECT_EQ(wilson_ci(0, 40).first, 0.0);
    EXPECT_EQ(wilson_ci(40, 40).second, 1.0);
    EXPECT_GT(wilson_ci(0, 40).second, 0.0);
    EXPECT_LT(wilson_ci(40, 40).first, 1.0);
}

TEST(Wilson, HalfOfHundred) {
    // computed independently at 20 significant digits
    const auto [low, high] = wilson_ci(50, 100, 0.95);
    EXPECT_NEAR(low, 0.40383153036599562708, 1e-12);
    EXPECT_NEAR(high, 0.59616846963400437292, 1e-12);
    EXPECT_NEAR(0.5 - low, high - 0.5, 1e-14);
}

TEST(Wilson, BracketsEstimate) {
    for (std::uint64_t n : {1U, 7U, 100U}) {
        for (std::uint64_t k = 0; k <= n; ++k) {
            const auto [low, high] = wilson_ci(k, n, 0.99);
            const double p = static_cast<double>(k) / static_cast<double>(n);
            EXPECT_LE(0.0, low);
            EXPECT_LE(low, p);
            EXPECT_LE(p, high);
            EXPECT_LE(high, 1.0);
        }
    }
}

TEST(RunningStats, MatchesTwoPass) {
    RunningStats s;
    const std::vector<double> xs{3, 1, 4, 1, 5, 9, 2, 6};
    for (double x : xs) s.add(x);
    EXPECT_DOUBLE_EQ(s.mean(), 31.0 / 8.0);
    double ss = 0.0;
    for (double x : xs) ss += (x - 31.0 / 8.0) * (x - 31.0 / 8.0);
    EXPECT_NEAR(s.variance(), ss / 7.0, 1e-12);
}

TEST(Run, SameResultsForAnyWorkerCount) {
    auto cfg = small_config();
    const auto base = to_csv(run(cfg));
    for (unsigned w : {2U, 3U, 8U}) {
        cfg.workers = w;
        EXPECT_EQ(to_csv(run(cfg)), base);
    }
    cfg.workers = 1;
    EXPECT_EQ(to_csv(run(cfg)), base);
}

TEST(Run, SummaryInvariants) {
    for (const auto& s : run(small_config())) {
        EXPECT_FALSE(s.error.has_value());
        EXPECT_LE(s.connected_count, s.trials);
        EXPECT_LE(s.ci_low, s.connected_rate());
        EXPECT_GE(s.ci_high, s.connected_rate());
        EXPECT_GE(s.ci_low, 0.0);
        EXPECT_LE(s.ci_high, 1.0);
        EXPECT_GE(s.sampling_attempts, s.trials);
    }
}

TEST(Run, FullEdgeAlwaysConnected) {
    ExperimentConfig cfg;
    cfg.trials = 200;
    cfg.grid = {{"custom", ModelSpec{RegularShotgun{9, 1, 9}}, std::nullopt}};
    const auto r = run(cfg).at(0);
    EXPECT_EQ(r.connected_count, r.trials);
    EXPECT_EQ(r.no_isolated_count, r.trials);
    EXPECT_EQ(r.isolated_mean, 0.0);
}

TEST(Run, GivenSizesRateMatchesEnumeration) {
    for (std::uint64_t k : {2U, 3U}) {
        ExperimentConfig cfg;
        cfg.trials = 100000;
        cfg.master_seed = 5;
        cfg.grid = {{"custom", ModelSpec{GivenSizes{SizeCounts{4, {{2, k}}}}}, std::nullopt}};
        const auto r = run(cfg).at(0);
        const double p = exact_rate(4, 2, static_cast<std::uint32_t>(k));
        const double sigma = std::sqrt(p * (1 - p) / static_cast<double>(cfg.trials));
        EXPECT_NEAR(r.connected_rate(), p, 3 * sigma + 1e-12) << "k=" << k;
    }
    EXPECT_DOUBLE_EQ(exact_rate(4, 2, 2), 0.0);
    EXPECT_DOUBLE_EQ(exact_rate(4, 2, 3), 0.8);
}

TEST(Run, RetryFailureMarksPointOnly) {
    ExperimentConfig cfg;
    cfg.trials = 20;
    cfg.max_attempts = 1;
    cfg.grid = {
        {"custom", ModelSpec{GivenSizes{SizeCounts{4, {{2, 6}}}}}, std::nullopt},
        {"custom", ModelSpec{RegularShotgun{20, 30, 3}}, std::nullopt},
    };
    const auto r = run(cfg);
    ASSERT_EQ(r.size(), 2U);
    EXPECT_TRUE(r[0].error.has_value());
    EXPECT_FALSE(r[1].error.has_value());
}

TEST(Scenario, RegularThresholdExpansion) {
    ScenarioOverrides o;
    o.c_grid = std::vector<double>{0.0};
    const auto cfg = scenario("regular-threshold", o);
    ASSERT_EQ(cfg.grid.size(), default_n_grid.size());
    for (const auto& g : cfg.grid) {
        const auto& s = std::get<RegularShotgun>(g.spec.variant);
        EXPECT_EQ(s.d, 3U);
        EXPECT_EQ(s.m, static_cast<std::uint64_t>(std::ceil(s.n * std::log(double(s.n)) / 3.0)));
        EXPECT_EQ(g.c_offset, 0.0);
    }
    o.uniform_hypergraph = true;
    EXPECT_TRUE(std::holds_alternative<RegularHypergraph>(scenario("regular-threshold", o).grid.at(0).spec.variant));
    EXPECT_EQ(scenario("regular-threshold").grid.size(), default_n_grid.size() * default_c_grid.size());
}

TEST(Scenario, LargeHyperedgesDiverge) {
    const auto cfg = scenario("large-hyperedges");
    ASSERT_GE(cfg.grid.size(), 3U);
    double prev_lambda = 0.0, prev_mu = 0.0;
    for (std::size_t i = 0; i < cfg.grid.size(); ++i) {
        const auto rep = theory_columns(cfg.grid[i].spec).report;
        if (i > 0) {
            EXPECT_LT(rep.lambda, prev_lambda);
            EXPECT_GT(rep.mu, prev_mu);
        }
        prev_lambda = rep.lambda;
        prev_mu = rep.mu;
    }
    const auto first = theory_columns(cfg.grid.front().spec).report;
    EXPECT_GT(prev_mu - prev_lambda, first.mu - first.lambda);
}

TEST(Scenario, SmallAndFullMatchesExample) {
    ScenarioOverrides o;
    o.m = 1000;
    const auto cfg = scenario("small-and-full", o);
    ASSERT_EQ(cfg.grid.size(), 1U);
    const auto& s = std::get<IidSizes>(std::get<Shotgun>(cfg.grid[0].spec.variant).sizes);
    EXPECT_EQ(s.m, 1000U);
    const double p = 1.0 - std::pow(1e4, -1.0 / 2000.0);
    EXPECT_NEAR(s.dist[10000], p, 1e-15);
    EXPECT_NEAR(s.dist[2], 1 - p, 1e-15);
    EXPECT_GT(theory_columns(cfg.grid[0].spec).report.expected_isolated, 10.0);
}

TEST(Scenario, RigThreshold) {
    ScenarioOverrides o;
    o.n_grid = std::vector<std::uint32_t>{100};
    o.c_grid = std::vector<double>{1.0};
    const auto cfg = scenario("rig-threshold", o);
    const auto& ig = std::get<IntersectionGraph>(cfg.grid.at(0).spec.variant);
    EXPECT_EQ(ig.m, static_cast<std::uint64_t>(std::ceil(100 * (std::log(100.0) + 1.0) / 3.0)));
    EXPECT_THROW(scenario("nope"), validation_error);
}

TEST(TheoryColumns, VariantSpecific) {
    const auto shotgun = theory_columns(ModelSpec{RegularShotgun{1000, 4000, 3}});
    EXPECT_TRUE(shotgun.disconnect_bound.has_value());
    EXPECT_TRUE(shotgun.sandwich.has_value());
    const auto ig = theory_columns(ModelSpec{IntersectionGraph{SizeDistribution::dirac(100, 3), 50}});
    EXPECT_FALSE(ig.disconnect_bound.has_value());
    const auto uniform = theory_columns(ModelSpec{RegularHypergraph{1000, 4000, 3}});
    ASSERT_TRUE(uniform.distinct_probability.has_value());
    EXPECT_GE(*uniform.disconnect_bound, *shotgun.disconnect_bound);
}

TEST(Csv, HeaderOrder) {
    const std::string header =
        "scenario,variant,n,m,d_or_dist,c_offset,trials,connected_rate,ci_low,ci_high,isolated_mean,"
        "no_isolated_rate,lambda,mu,expected_isolated,disconnect_bound,seed";
    const auto text = to_csv({});
    EXPECT_EQ(text, header + "\n");
    EXPECT_EQ(to_csv({}, {"seed", "n"}), "n,seed\n");
}

TEST(Config, JsonRoundTrip) {
    auto cfg = scenario("regular-threshold");
    cfg.trials = 77;
    cfg.master_seed = 3;
    cfg.workers = 2;
    const auto j = config_to_json(cfg);
    EXPECT_EQ(config_to_json(config_from_json(j)), j);
}

TEST(Config, RejectsBadInput) {
    EXPECT_THROW(config_from_json(io::json::parse(R"({"specs": [], "trials": 10})")), validation_error);
    EXPECT_THROW(config_from_json(io::json::parse(
                     R"({"specs": [{"variant": "RegularShotgun", "n": 10, "m": 5, "d": 3}], "trials": 0})")),
                 validation_error);
    EXPECT_THROW(config_from_json(io::json::parse(
                     R"({"specs": [{"variant": "GivenSizes", "n": 4, "counts": {"2": 7}}]})")),
                 validation_error);
}

TEST(Output, JsonCarriesMetadata) {
    auto cfg = small_config();
    cfg.trials = 10;
    const auto j = io::json::parse(to_json_text(cfg, run(cfg)));
    EXPECT_EQ(j.at("metadata").at("rng").get<std::string>(), std::string(RngStream::algorithm));
    EXPECT_EQ(j.at("results").size(), cfg.grid.size());
}
